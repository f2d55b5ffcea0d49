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

// Confusion accounting for high-risk detection and the agreement statistics
// reported per high-risk region: accuracy, recall, precision, F1 and Cohen's
// kappa.
//
// Terminology: CHD = correct high-risk detections, HLL = high-risk labelled
// low, LLH = low-risk labelled high, CLD = correct low-risk detections.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacklerisk/detection.hpp"
#include "tacklerisk/errors.hpp"
#include "tacklerisk/risk.hpp"

namespace tacklerisk {

struct ConfusionCounts {
  std::size_t chd = 0;
  std::size_t hll = 0;
  std::size_t llh = 0;
  std::size_t cld = 0;
  std::size_t failed = 0;

  std::size_t evaluated() const { return chd + hll + llh + cld; }
  std::size_t correct() const { return chd + cld; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Counts (truth, predicted) pairs at one region size. Failures need no label.
inline ConfusionCounts tally(std::span<const SegmentOutcome> outcomes, std::span<const GroundTruthLabel> truth,
                             double pct) {
  std::unordered_map<std::string, RiskLabel> by_id;
  for (const auto& g : truth) by_id[g.segment_id] = g.label;

  ConfusionCounts c;
  for (const SegmentOutcome& o : outcomes) {
    const auto* a = std::get_if<TackleAssessment>(&o);
    if (!a) {
      ++c.failed;
      continue;
    }
    auto it = by_id.find(a->segment_id);
    if (it == by_id.end()) throw MetricsError(MetricsError::Kind::MissingLabel, "no truth label for segment " + a->segment_id);
    const auto predicted = a->label_at(pct);
    if (!predicted) throw MetricsError(MetricsError::Kind::InvalidArgument, "assessment lacks region " + std::to_string(pct));
    const bool truth_high = it->second == RiskLabel::High;
    const bool pred_high = *predicted == RiskLabel::High;
    if (truth_high && pred_high) ++c.chd;
    else if (truth_high) ++c.hll;
    else if (pred_high) ++c.llh;
    else ++c.cld;
  }
  return c;
}

/// Correct detections over `total` tackles (which may include failures).
inline double accuracy(const ConfusionCounts& c, std::size_t total) {
  if (total == 0) throw MetricsError(MetricsError::Kind::ZeroTotal, "accuracy over zero tackles");
  if (total < c.evaluated()) throw MetricsError(MetricsError::Kind::InvalidArgument, "total below evaluated count");
  return static_cast<double>(c.correct()) / static_cast<double>(total);
}

namespace detail {
inline double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }
}  // namespace detail

// Zero denominators yield 0; report() flags them.
inline double recall(const ConfusionCounts& c) { return detail::ratio_or_zero(c.chd, double(c.chd + c.hll)); }
inline double precision(const ConfusionCounts& c) { return detail::ratio_or_zero(c.chd, double(c.chd + c.llh)); }
inline double f1(const ConfusionCounts& c) {
  return detail::ratio_or_zero(c.chd, c.chd + 0.5 * double(c.hll + c.llh));
}

struct KappaStats {
  double p0 = 0.0;    // observed agreement
  double p_hr = 0.0;  // chance agreement on high-risk
  double p_lr = 0.0;  // chance agreement on low-risk
  double p_e = 0.0;   // p_hr + p_lr
  double kappa = 0.0;
};

/// Two-rater Cohen's kappa, system output vs. truth.
inline KappaStats cohens_kappa(const ConfusionCounts& c) {
  const double n = static_cast<double>(c.evaluated());
  if (n == 0.0) throw MetricsError(MetricsError::Kind::EmptyEvaluation, "kappa over zero evaluated tackles");
  KappaStats k;
  k.p0 = (c.chd + c.cld) / n;
  k.p_hr = ((c.chd + c.llh) / n) * ((c.chd + c.hll) / n);
  k.p_lr = ((c.hll + c.cld) / n) * ((c.llh + c.cld) / n);
  k.p_e = k.p_hr + k.p_lr;
  // p_e == 1 only when both raters put everything in the same class.
  k.kappa = k.p_e >= 1.0 ? 1.0 : (k.p0 - k.p_e) / (1.0 - k.p_e);
  return k;
}

struct RegionMetrics {
  double pct = 0.0;
  ConfusionCounts counts;
  double accuracy_evaluated = 0.0;
  double accuracy_total = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  KappaStats kappa;
  std::vector<std::string> flags;  // e.g. EmptyEvaluation, ZeroRecallDenominator
};

struct MetricsReport {
  std::size_t n_total = 0;
  std::size_t n_evaluated = 0;
  std::vector<RegionMetrics> regions;
};

inline RegionMetrics region_metrics(double pct, const ConfusionCounts& c, std::size_t n_total) {
  RegionMetrics m;
  m.pct = pct;
  m.counts = c;
  m.accuracy_total = accuracy(c, n_total);
  if (c.evaluated() == 0) {
    m.flags.emplace_back("EmptyEvaluation");
    return m;
  }
  m.accuracy_evaluated = accuracy(c, c.evaluated());
  m.recall = recall(c);
  m.precision = precision(c);
  m.f1 = f1(c);
  if (c.chd + c.hll == 0) m.flags.emplace_back("ZeroRecallDenominator");
  if (c.chd + c.llh == 0) m.flags.emplace_back("ZeroPrecisionDenominator");
  if (c.chd + c.hll + c.llh == 0) m.flags.emplace_back("ZeroF1Denominator");
  m.kappa = cohens_kappa(c);
  return m;
}

/// Full table over every configured region size.
inline MetricsReport report(std::span<const SegmentOutcome> outcomes, std::span<const GroundTruthLabel> truth,
                            const RiskConfig& cfg, std::size_t n_total) {
  if (n_total == 0) throw MetricsError(MetricsError::Kind::ZeroTotal, "report over zero tackles");
  MetricsReport r;
  r.n_total = n_total;
  for (const auto& o : outcomes) {
    if (std::holds_alternative<TackleAssessment>(o)) ++r.n_evaluated;
  }
  for (double pct : cfg.region_pcts) r.regions.push_back(region_metrics(pct, tally(outcomes, truth, pct), n_total));
  return r;
}

namespace detail {
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}
}  // namespace detail

inline constexpr const char* kMetricsCsvHeader =
    "pct,chd,hll,llh,cld,failed,acc_eval,acc_total,recall,precision,f1,p0,p_e,kappa";

inline std::string report_to_csv(const MetricsReport& r) {
  using detail::fmt_num;
  std::string out = std::string(kMetricsCsvHeader) + "\n";
  for (const auto& m : r.regions) {
    const auto& c = m.counts;
    out += fmt_num(m.pct) + "," + std::to_string(c.chd) + "," + std::to_string(c.hll) + "," + std::to_string(c.llh) +
           "," + std::to_string(c.cld) + "," + std::to_string(c.failed) + "," + fmt_num(m.accuracy_evaluated) + "," +
           fmt_num(m.accuracy_total) + "," + fmt_num(m.recall) + "," + fmt_num(m.precision) + "," + fmt_num(m.f1) +
           "," + fmt_num(m.kappa.p0) + "," + fmt_num(m.kappa.p_e) + "," + fmt_num(m.kappa.kappa) + "\n";
  }
  return out;
}

inline nlohmann::json report_to_json(const MetricsReport& r) {
  using nlohmann::json;
  json regions = json::array();
  for (const auto& m : r.regions) {
    const auto& c = m.counts;
    regions.push_back({{"pct", m.pct},
                       {"counts", {{"chd", c.chd}, {"hll", c.hll}, {"llh", c.llh}, {"cld", c.cld}, {"failed", c.failed}}},
                       {"accuracy_evaluated", m.accuracy_evaluated},
                       {"accuracy_total", m.accuracy_total},
                       {"recall", m.recall},
                       {"precision", m.precision},
                       {"f1", m.f1},
                       {"p0", m.kappa.p0},
                       {"p_hr", m.kappa.p_hr},
                       {"p_lr", m.kappa.p_lr},
                       {"p_e", m.kappa.p_e},
                       {"kappa", m.kappa.kappa},
                       {"flags", m.flags}});
  }
  return {{"n_total", r.n_total}, {"n_evaluated", r.n_evaluated}, {"regions", std::move(regions)}};
}

}  // namespace tacklerisk
