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

#include "cps/common/rng.hpp"

namespace cps::channel {

/// Maps SINR to packet delivery probability with a logistic curve in dB:
///   f(x) = 1 / (1 + exp(-slope * (10 log10 x - midpoint_db)))
struct RadioModel {
  int packet_bytes = 1500;
  double bit_rate_bps = 6e6;
  double midpoint_db = 4.0;
  double slope_per_db = 1.0;

  void validate() const;

  /// Delivery probability at linear SINR `sinr`.
  double f(double sinr) const;

  /// Linear SINR giving delivery probability `p`. Throws DomainError unless
  /// 0 < p < 1.
  double f_inv(double p) const;

  /// SINR threshold in dB for reliability `p`.
  double f_inv_db(double p) const;

  /// Airtime of one packet in seconds.
  double airtime_s() const { return packet_bytes * 8.0 / bit_rate_bps; }
};

/// One Bernoulli draw with success probability f(sinr).
template <typename Engine>
bool bernoulli_delivery(double sinr, const RadioModel& radio, BasicRng<Engine>& rng) {
  return rng.uniform() < radio.f(sinr);
}

}  // namespace cps::channel
