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

#include <cstdint>

namespace cps::broadcast {

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

/// Control overhead of exchanging signal maps versus gPRK locations among
/// N vehicles per period t0.
struct OverheadReport {
  std::uint64_t n = 0;
  double t0_s = 1.0;
  std::uint64_t signal_map_bits = 0;  // per period: 8N(6 + 8(N-1))
  double signal_map_bps = 0.0;
  std::uint64_t gprk_bytes = 0;       // 13N
  Rational reduction;                 // (48 + 64(N-1)) / 13, reduced
};

/// Throws DomainError unless n >= 1 and t0 > 0.
OverheadReport overhead_report(std::uint64_t n, double t0_s);

}  // namespace cps::broadcast
