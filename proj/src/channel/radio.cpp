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
#include "cps/channel/radio.hpp"

#include <cmath>
#include <string>

#include "cps/common/error.hpp"

namespace cps::channel {

void RadioModel::validate() const {
  if (packet_bytes <= 0) throw ConfigError("radio.packet_bytes", "must be > 0");
  if (!(bit_rate_bps > 0.0)) throw ConfigError("radio.bit_rate_bps", "must be > 0");
  if (!(slope_per_db > 0.0)) throw ConfigError("radio.slope_per_db", "must be > 0");
  if (!std::isfinite(midpoint_db)) throw ConfigError("radio.midpoint_db", "must be finite");
}

double RadioModel::f(double sinr) const {
  if (!(sinr > 0.0)) return 0.0;
  if (std::isinf(sinr)) return 1.0;
  const double x = 10.0 * std::log10(sinr) - midpoint_db;
  return 1.0 / (1.0 + std::exp(-slope_per_db * x));
}

double RadioModel::f_inv_db(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("f_inv: reliability " + std::to_string(p) + " outside (0, 1)");
  }
  return midpoint_db + (std::log(p) - std::log1p(-p)) / slope_per_db;
}

double RadioModel::f_inv(double p) const { return std::pow(10.0, f_inv_db(p) / 10.0); }

}  // namespace cps::channel
