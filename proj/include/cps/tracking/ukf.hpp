/*
 * Copyright 2026 The CPS V2V Simulator Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <optional>

#include <Eigen/Dense>

#include "cps/common/ids.hpp"
#include "cps/mobility/idm.hpp"

namespace cps::tracking {

/// State layout: along-track position, speed, gap to lead, desired speed,
/// desired time gap.
inline constexpr int kStateDim = 5;
using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;

enum StateIndex { kPos = 0, kSpeed = 1, kGap = 2, kDesiredSpeed = 3, kTimeGap = 4 };

struct UkfParams {
  double alpha = 0.1;
  double kappa = 0.0;
  double beta = 2.0;
  double pos_noise = 0.05;        // m / sqrt(s)
  double accel_noise = 0.6;       // m/s^2 per sqrt(s), on speed
  double gap_noise = 0.3;         // m / sqrt(s)
  double v0_walk = 0.05;          // m/s per sqrt(s)
  double time_gap_walk = 0.01;    // s per sqrt(s)
  double meas_sigma = 4.0;        // m, position measurement
  double outlier_sigma = 6.0;
  int max_rejections = 3;         // consecutive rejections before reset

  // Prior spreads used when a track is (re)created.
  double prior_speed_sigma = 5.0;
  double prior_gap_sigma = 20.0;
  double prior_v0_sigma = 3.0;
  double prior_time_gap_sigma = 0.3;

  void validate() const;
};

struct TrackState {
  StateVector mean = StateVector::Zero();
  StateMatrix cov = StateMatrix::Zero();
  Slot last_update = 0;
  SegmentId segment = 0;
  int lane = 0;
  mobility::IdmParams idm;  // fixed parameters; v0 and T_gap come from the state
  int consecutive_rejections = 0;
  std::optional<VehicleId> lead;  // vehicle the gap state refers to
};

/// Lead vehicle as seen by the process model.
struct LeadInfo {
  bool present = false;
  double v_lead = 0.0;
  double a_lead = 0.0;
};

/// Sigma points of N(mean, cov) with the scaled unscented transform.
struct SigmaPoints {
  Eigen::Matrix<double, kStateDim, 2 * kStateDim + 1> points;
  Eigen::Matrix<double, 2 * kStateDim + 1, 1> wm;
  Eigen::Matrix<double, 2 * kStateDim + 1, 1> wc;
};

SigmaPoints sigma_points(const StateVector& mean, const StateMatrix& cov, const UkfParams& p);

/// PSD square root S with S S^T = cov, via pivoted LDL^T. Negative pivots are
/// clamped to zero.
StateMatrix psd_sqrt(const StateMatrix& cov);

/// Deterministic IDM step of one state for `dt` seconds.
StateVector process_model(const StateVector& x, double dt, const mobility::IdmParams& base,
                          const LeadInfo& lead);

/// Process noise accumulated over `dt`.
StateMatrix process_noise(double dt, const UkfParams& p);

TrackState ukf_predict(const TrackState& track, double dt, const UkfParams& p,
                       const LeadInfo& lead = {});

struct UpdateResult {
  TrackState track;
  bool accepted = true;
  bool reset = false;
};

/// Position measurement, optionally with a measured gap to the lead (noise
/// of a difference of two positions).
UpdateResult ukf_update(const TrackState& track, double measured_pos, const UkfParams& p,
                        std::optional<double> measured_gap = std::nullopt);

/// Re-seeds the gap state at `gap` with variance `variance` and drops its
/// correlation with the rest of the state. Used when the lead changes.
void reset_gap(TrackState& track, double gap, double variance);

/// Fresh track centered on a measurement with the configured prior spreads.
TrackState make_track(double measured_pos, double speed_guess, double gap_guess,
                      const mobility::IdmParams& idm, SegmentId segment, int lane, Slot now,
                      const UkfParams& p);

/// Re-centers position on `measured_pos` and resets covariance to the prior
/// after a lane change or turn. Speed and parameter means are kept.
TrackState reset_to_measurement(const TrackState& track, double measured_pos, SegmentId segment,
                                int lane, Slot now, const UkfParams& p);

bool is_symmetric_psd(const StateMatrix& m, double tol = 1e-9);

/// Position-only dead reckoning from the last two measurements.
class ConstantVelocityExtrapolator {
 public:
  void observe(double t, double pos);
  double predict(double t) const;
  bool ready() const { return count_ > 0; }

 private:
  double t_last_ = 0.0;
  double pos_last_ = 0.0;
  double speed_ = 0.0;
  int count_ = 0;
};

}  // namespace cps::tracking
