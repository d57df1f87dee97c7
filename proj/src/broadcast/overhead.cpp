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
#include "cps/broadcast/overhead.hpp"

#include <numeric>

#include "cps/common/error.hpp"

namespace cps::broadcast {

OverheadReport overhead_report(std::uint64_t n, double t0_s) {
  if (n < 1) throw DomainError("N must be at least 1");
  if (!(t0_s > 0.0)) throw DomainError("t0 must be positive");
  OverheadReport r;
  r.n = n;
  r.t0_s = t0_s;
  r.signal_map_bits = 8 * n * (6 + 8 * (n - 1));
  r.signal_map_bps = static_cast<double>(r.signal_map_bits) / t0_s;
  r.gprk_bytes = 13 * n;
  const std::uint64_t num = 48 + 64 * (n - 1);
  const std::uint64_t g = std::gcd(num, std::uint64_t{13});
  r.reduction = Rational{num / g, 13 / g};
  return r;
}

}  // namespace cps::broadcast
