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

// Constant-acceleration Kalman filter over an image point, with
// confidence-adaptive measurement noise, per-axis innovation gating and a
// Rauch-Tung-Striebel fixed-interval smoother.
//
// State layout: (x, x', x'', y, y', y'') in pixels, pixels/s, pixels/s^2.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tacklerisk/detection.hpp"
#include "tacklerisk/errors.hpp"

namespace tacklerisk {

using StateVector = Eigen::Matrix<double, 6, 1>;
using StateMatrix = Eigen::Matrix<double, 6, 6>;
using MeasVector = Eigen::Vector2d;
using MeasMatrix = Eigen::Matrix2d;

inline constexpr int kPosX = 0;
inline constexpr int kPosY = 3;

/// Any covariance diagonal above this (pixels^2 or derived units) is treated
/// as filter blow-up.
inline constexpr double kDivergenceLimit = 1e12;

struct TrackerConfig {
  double meas_std_x = 31.0;        // px
  double meas_std_y = 15.0;        // px
  double max_daccel_x = 6000.0;    // px/s^2 per step
  double max_daccel_y = 7000.0;    // px/s^2 per step
  double gate_sigma = 5.0;
  double conf_floor = 0.1;
  double degraded_daccel = 50.0;   // px/s^2, used after a low-confidence frame
  double init_pos_var = 50.0;      // px^2
  double init_vel_var = 10.0;      // (px/s)^2
  double init_acc_var = 1.0;       // (px/s^2)^2

  void validate() const {
    const double v[] = {meas_std_x,   meas_std_y,      max_daccel_x, max_daccel_y, gate_sigma,
                        conf_floor,   degraded_daccel, init_pos_var, init_vel_var, init_acc_var};
    for (double x : v) {
      if (!(std::isfinite(x) && x > 0.0)) throw InvariantError("tracker config values must be positive");
    }
    if (conf_floor >= 1.0) throw InvariantError("conf_floor must lie in (0, 1)");
  }
};

struct TrackerState {
  StateVector mean = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Zero();

  Point2 position() const { return {mean(kPosX), mean(kPosY)}; }
};

enum class RejectionReason { None, LowConfidence, GateExceeded, NoMeasurement };

inline std::string_view to_string(RejectionReason r) {
  switch (r) {
    case RejectionReason::None: return "None";
    case RejectionReason::LowConfidence: return "LowConfidence";
    case RejectionReason::GateExceeded: return "GateExceeded";
    case RejectionReason::NoMeasurement: return "NoMeasurement";
  }
  return "Unknown";
}

struct StepDiagnostics {
  std::int64_t frame_index = 0;
  MeasVector innovation = MeasVector::Zero();  // raw measured - predicted
  MeasMatrix innovation_cov = MeasMatrix::Zero();
  bool accepted = false;
  RejectionReason reason = RejectionReason::NoMeasurement;
};

struct Measurement {
  Point2 pos;
  double confidence = 1.0;
};

inline void symmetrize(StateMatrix& p) { p = 0.5 * (p + p.transpose()).eval(); }

inline TrackerState init_state_at(Point2 pos, double pos_var, const TrackerConfig& cfg) {
  TrackerState s;
  s.mean << pos.x, 0.0, 0.0, pos.y, 0.0, 0.0;
  s.covariance.diagonal() << pos_var, cfg.init_vel_var, cfg.init_acc_var, pos_var, cfg.init_vel_var,
      cfg.init_acc_var;
  return s;
}

/// Image-centre start with zero velocity and acceleration.
inline TrackerState init_state(double width, double height, const TrackerConfig& cfg) {
  return init_state_at({width / 2.0, height / 2.0}, cfg.init_pos_var, cfg);
}

inline StateMatrix transition(double dt) {
  Eigen::Matrix3d axis;
  axis << 1.0, dt, 0.5 * dt * dt, 0.0, 1.0, dt, 0.0, 0.0, 1.0;
  StateMatrix f = StateMatrix::Zero();
  f.block<3, 3>(0, 0) = axis;
  f.block<3, 3>(3, 3) = axis;
  return f;
}

/// Discrete white-jerk noise: per axis G * sigma^2 * G^T with
/// G = (dt^2/2, dt, 1) and sigma the largest acceleration change per step.
inline StateMatrix process_noise(double dt, double daccel_x, double daccel_y) {
  const Eigen::Vector3d g(0.5 * dt * dt, dt, 1.0);
  const Eigen::Matrix3d ggt = g * g.transpose();
  StateMatrix q = StateMatrix::Zero();
  q.block<3, 3>(0, 0) = ggt * (daccel_x * daccel_x);
  q.block<3, 3>(3, 3) = ggt * (daccel_y * daccel_y);
  return q;
}

inline TrackerState predict(const TrackerState& s, double dt, const TrackerConfig& cfg, bool degraded) {
  const StateMatrix f = transition(dt);
  const double ax = degraded ? cfg.degraded_daccel : cfg.max_daccel_x;
  const double ay = degraded ? cfg.degraded_daccel : cfg.max_daccel_y;
  TrackerState out;
  out.mean = f * s.mean;
  out.covariance = f * s.covariance * f.transpose() + process_noise(dt, ax, ay);
  symmetrize(out.covariance);
  return out;
}

inline Eigen::Matrix<double, 2, 6> measurement_matrix() {
  Eigen::Matrix<double, 2, 6> h = Eigen::Matrix<double, 2, 6>::Zero();
  h(0, kPosX) = 1.0;
  h(1, kPosY) = 1.0;
  return h;
}

struct GateResult {
  bool accepted = false;
  RejectionReason reason = RejectionReason::None;
};

/// Low confidence wins over the innovation test. Otherwise each axis is held
/// to |innovation_i| <= gate_sigma * sqrt(S_ii).
inline GateResult gate(const MeasVector& innovation, const MeasMatrix& s, double confidence,
                       const TrackerConfig& cfg) {
  if (confidence < cfg.conf_floor) return {false, RejectionReason::LowConfidence};
  for (int i = 0; i < 2; ++i) {
    if (std::abs(innovation(i)) > cfg.gate_sigma * std::sqrt(s(i, i)))
      return {false, RejectionReason::GateExceeded};
  }
  return {true, RejectionReason::None};
}

struct UpdateResult {
  TrackerState state;
  StepDiagnostics diag;
};

/// One measurement update. `frame_width`/`frame_height` size the distrustful R
/// used for low-confidence detections. Rejected measurements contribute a zero
/// innovation: a low-confidence one still shrinks the covariance through the
/// inflated R, a gated or missing one leaves the state untouched.
inline UpdateResult update(const TrackerState& s, const std::optional<Measurement>& m, const TrackerConfig& cfg,
                           double frame_width, double frame_height) {
  const auto h = measurement_matrix();
  const MeasMatrix r_nominal =
      MeasVector(cfg.meas_std_x * cfg.meas_std_x, cfg.meas_std_y * cfg.meas_std_y).asDiagonal();
  const MeasMatrix hph = h * s.covariance * h.transpose();

  UpdateResult out{s, {}};
  if (!m) {
    out.diag.innovation_cov = hph + r_nominal;
    out.diag.accepted = false;
    out.diag.reason = RejectionReason::NoMeasurement;
    return out;
  }

  const MeasVector innovation(m->pos.x - s.mean(kPosX), m->pos.y - s.mean(kPosY));
  const bool low_conf = m->confidence < cfg.conf_floor;
  const MeasMatrix r = low_conf ? MeasMatrix(MeasVector(frame_width * frame_width, frame_height * frame_height).asDiagonal())
                                : r_nominal;
  const MeasMatrix s_mat = hph + r;
  const GateResult g = gate(innovation, s_mat, m->confidence, cfg);

  out.diag.innovation = innovation;
  out.diag.innovation_cov = s_mat;
  out.diag.accepted = g.accepted;
  out.diag.reason = g.reason;

  if (g.reason == RejectionReason::GateExceeded) return out;

  const Eigen::Matrix<double, 6, 2> k = s.covariance * h.transpose() * s_mat.inverse();
  if (g.accepted) out.state.mean = s.mean + k * innovation;
  // Joseph form keeps the covariance symmetric positive semidefinite.
  const StateMatrix ikh = StateMatrix::Identity() - k * h;
  out.state.covariance = ikh * s.covariance * ikh.transpose() + k * r * k.transpose();
  symmetrize(out.state.covariance);
  return out;
}

/// Prior/posterior pair of one filter step and the transition that produced
/// the prior from the previous posterior.
struct FilterStep {
  TrackerState prior;
  TrackerState posterior;
  StateMatrix transition = StateMatrix::Identity();
};

/// Rauch-Tung-Striebel backward pass. The last smoothed state is the last
/// posterior, bit for bit.
inline std::vector<TrackerState> smooth(std::span<const FilterStep> steps) {
  std::vector<TrackerState> out(steps.size());
  if (steps.empty()) return out;
  out.back() = steps.back().posterior;
  for (std::size_t i = steps.size() - 1; i-- > 0;) {
    const FilterStep& cur = steps[i];
    const FilterStep& next = steps[i + 1];
    // C = P f^T (P_pred)^-1, computed as a solve against the symmetric prior.
    const StateMatrix ct = next.prior.covariance.ldlt().solve(next.transition * cur.posterior.covariance);
    const StateMatrix c = ct.transpose();
    out[i].mean = cur.posterior.mean + c * (out[i + 1].mean - next.prior.mean);
    out[i].covariance = cur.posterior.covariance + c * (out[i + 1].covariance - next.prior.covariance) * c.transpose();
    symmetrize(out[i].covariance);
  }
  return out;
}

inline void check_divergence(const TrackerState& s, std::int64_t frame_index) {
  for (int i = 0; i < 6; ++i) {
    const double d = s.covariance(i, i);
    if (!std::isfinite(d) || d > kDivergenceLimit)
      throw DivergenceError("covariance diverged at frame " + std::to_string(frame_index));
  }
}

/// Input for one frame of a filter run. A zero `dt` skips the predict step
/// (used for the frame the filter is initialised on).
struct FilterInput {
  std::int64_t frame_index = 0;
  double dt = 0.0;
  std::optional<Measurement> measurement;
};

struct FilterRun {
  std::vector<FilterStep> steps;
  std::vector<StepDiagnostics> diagnostics;
  std::vector<TrackerState> smoothed;
};

/// Forward filter plus smoother over a frame sequence. `select` may be used
/// to pick the measurement given the predicted state; when absent the
/// pre-set measurement in each input is used.
template <typename Selector>
FilterRun run_filter(const TrackerState& initial, std::span<const FilterInput> inputs, const TrackerConfig& cfg,
                     double frame_width, double frame_height, Selector&& select) {
  FilterRun run;
  run.steps.reserve(inputs.size());
  run.diagnostics.reserve(inputs.size());
  TrackerState state = initial;
  bool degraded = false;
  for (const FilterInput& in : inputs) {
    FilterStep step;
    if (in.dt > 0.0) {
      step.transition = transition(in.dt);
      step.prior = predict(state, in.dt, cfg, degraded);
    } else {
      step.prior = state;
    }
    check_divergence(step.prior, in.frame_index);
    const std::optional<Measurement> m = select(in, step.prior);
    UpdateResult u = update(step.prior, m, cfg, frame_width, frame_height);
    u.diag.frame_index = in.frame_index;
    degraded = u.diag.reason == RejectionReason::LowConfidence;
    step.posterior = u.state;
    check_divergence(step.posterior, in.frame_index);
    state = step.posterior;
    run.steps.push_back(std::move(step));
    run.diagnostics.push_back(u.diag);
  }
  run.smoothed = smooth(run.steps);
  return run;
}

inline FilterRun run_filter(const TrackerState& initial, std::span<const FilterInput> inputs, const TrackerConfig& cfg,
                            double frame_width, double frame_height) {
  return run_filter(initial, inputs, cfg, frame_width, frame_height,
                    [](const FilterInput& in, const TrackerState&) { return in.measurement; });
}

}  // namespace tacklerisk
