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

#include <compare>
#include <cstdint>
#include <functional>

namespace cps {

/// 48-bit vehicle identifier (fits the 6-byte MAC-style id of the wire format).
using VehicleId = std::uint64_t;
inline constexpr VehicleId kMaxVehicleId = (VehicleId{1} << 48) - 1;

using SegmentId = std::uint32_t;
using Slot = std::int64_t;

/// Directed sender -> receiver pair.
struct LinkId {
  VehicleId sender = 0;
  VehicleId receiver = 0;
  auto operator<=>(const LinkId&) const = default;
};

struct LinkIdHash {
  std::size_t operator()(const LinkId& l) const noexcept {
    return std::hash<std::uint64_t>{}((l.sender << 24) ^ (l.receiver * 0x9e3779b97f4a7c15ULL));
  }
};

}  // namespace cps
