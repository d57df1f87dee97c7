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

#include <functional>

#include "cps/common/ids.hpp"

namespace cps::gprk {

/// Per-link state of the gPRK model and its reliability controller.
struct LinkModel {
  LinkId link;
  double t_rel = 0.9;    // reliability target, in (0, 1)
  double K = 0.0;        // gPRK parameter, >= 0
  double c_ewma = 0.0;   // smoothing coefficient in [0, 1)
  double y_ewma = 0.0;   // y(t)
  double y_prev = 0.0;   // y(t-1)
  double last_Y = 0.0;   // most recent measured reliability
  int samples = 0;       // number of reliability samples seen
  int consecutive_at_target = 0;
  bool converged = false;
};

/// y(t) = c y(t-1) + (1 - c) Y(t). The first sample seeds both y terms.
/// Also maintains the converged flag: two consecutive samples >= t_rel.
LinkModel update_ewma(LinkModel link, double measured_Y);

struct InterferenceBudget {
  double delta_I = 0.0;  // mW; < 0 expand, > 0 shrink
  double mu_U = 0.0;     // mW
  double a_t = 0.0;      // linearization slope, finite and > 0
};

/// Reliability -> abscissa of the linearized radio model. Must be strictly
/// increasing on (0, 1).
using InverseRadioModel = std::function<double(double)>;

inline constexpr double kReliabilityClamp = 1e-4;
inline constexpr double kSingularityTolerance = 1e-6;

/// Tolerable-interference form of the controller: for a link with signal
/// power `signal_mw`, maps reliability p to -signal_mw / f_inv(p), so that
/// differences of the abscissa are differences of tolerable interference
/// in mW.
template <typename Radio>
InverseRadioModel interference_axis(const Radio& radio, double signal_mw) {
  return [radio, signal_mw](double p) { return -signal_mw / radio.f_inv(p); };
}

/// Change in tolerable interference at the receiver:
///   ((1+c) y(t) - c y(t-1) - T) / ((1-c) a(t)) - mu_U
/// with a(t) = (T - Y) / (inv(T) - inv(Y)). Y is clamped to
/// [1e-4, 1 - 1e-4] before entering `inverse`. When |T - Y| < 1e-6 the
/// secant is replaced by the tangent, taken as a central difference of
/// `inverse` at T.
InterferenceBudget compute_delta_I(const LinkModel& link, const InverseRadioModel& inverse,
                                   double mu_U);

/// Receiver-side estimate of the mean change in out-of-ER interference,
/// an EWMA of window-to-window differences. Zero until two windows have
/// been observed.
class MuUEstimator {
 public:
  explicit MuUEstimator(double weight = 0.1) : weight_(weight) {}
  void observe(double mean_out_of_er_interference_mw);
  double value() const { return value_; }

 private:
  double weight_;
  double value_ = 0.0;
  double last_ = 0.0;
  bool has_last_ = false;
};

}  // namespace cps::gprk
