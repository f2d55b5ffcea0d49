/* Copyright 2026 The tacklerisk Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tacklerisk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or mistyped field. `path()` is a JSON-path style locator such as
/// `$.frames[3].balls[0].confidence`.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Well-typed data that violates a domain invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Reasons a segment cannot be evaluated. Each one is a first-class outcome
/// counted as a failure by the metrics.
enum class FailureReason { NoTackleFrame, NoTackler, NoCarrierHead, Divergence };

inline std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::NoTackleFrame: return "NoTackleFrame";
    case FailureReason::NoTackler: return "NoTackler";
    case FailureReason::NoCarrierHead: return "NoCarrierHead";
    case FailureReason::Divergence: return "DivergenceError";
  }
  return "Unknown";
}

class PipelineError : public Error {
 public:
  PipelineError(FailureReason reason, const std::string& what)
      : Error(what), reason_(reason) {}
  FailureReason reason() const noexcept { return reason_; }

 private:
  FailureReason reason_;
};

/// Raised when a covariance diagonal blows past the divergence limit.
class DivergenceError : public PipelineError {
 public:
  explicit DivergenceError(const std::string& what)
      : PipelineError(FailureReason::Divergence, what) {}
};

class MetricsError : public Error {
 public:
  enum class Kind { MissingLabel, ZeroTotal, EmptyEvaluation, InvalidArgument };
  MetricsError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class GeneratorError : public Error {
 public:
  enum class Kind { Geometry, DuplicateId, InvalidSpec, Io };
  GeneratorError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace tacklerisk
