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
#include "cps/channel/power_estimate.hpp"

#include <algorithm>

namespace cps::channel {

PowerEstimate update_beta(PowerEstimate est, double activity_fraction, double weight) {
  activity_fraction = std::clamp(activity_fraction, 0.0, 1.0);
  if (!est.has_beta) {
    est.beta = activity_fraction;
    est.has_beta = true;
  } else {
    est.beta = (1.0 - weight) * est.beta + weight * activity_fraction;
  }
  est.beta = std::clamp(est.beta, 0.0, 1.0);
  return est;
}

PowerEstimate update_power_estimate(PowerEstimate est, std::optional<double> observed_power_mw,
                                    std::span<const bool> did_transmit, double weight) {
  if (observed_power_mw && *observed_power_mw >= 0.0) {
    if (!est.has_power) {
      est.power_mw = *observed_power_mw;
      est.has_power = true;
    } else {
      est.power_mw = (1.0 - weight) * est.power_mw + weight * *observed_power_mw;
    }
  }
  if (!did_transmit.empty()) {
    const auto on = std::count(did_transmit.begin(), did_transmit.end(), true);
    est = update_beta(est, static_cast<double>(on) / static_cast<double>(did_transmit.size()), weight);
  }
  return est;
}

}  // namespace cps::channel
