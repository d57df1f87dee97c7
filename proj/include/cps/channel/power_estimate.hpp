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
#include <span>

namespace cps::channel {

inline constexpr double kPowerEwmaCoefficient = 0.1;

/// Receiver-side estimate of one source: smoothed received power P(C,R,t)
/// from overheard control packets and the source's data transmit
/// probability beta_C(t).
struct PowerEstimate {
  double power_mw = 0.0;
  double beta = 0.0;
  bool has_power = false;
  bool has_beta = false;
};

/// EWMA update. The first power sample initializes the estimate. Each entry
/// of `did_transmit` is one observed slot; beta moves toward the observed
/// activity fraction. An empty span leaves beta unchanged.
PowerEstimate update_power_estimate(PowerEstimate est, std::optional<double> observed_power_mw,
                                    std::span<const bool> did_transmit,
                                    double weight = kPowerEwmaCoefficient);

/// Same as above with a pre-aggregated activity fraction in [0, 1].
PowerEstimate update_beta(PowerEstimate est, double activity_fraction,
                          double weight = kPowerEwmaCoefficient);

}  // namespace cps::channel
