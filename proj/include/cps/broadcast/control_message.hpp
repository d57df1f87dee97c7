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
#include <span>
#include <vector>

#include "cps/common/geometry.hpp"
#include "cps/common/ids.hpp"

namespace cps::broadcast {

/// Local tangent-plane frame used to express simulator coordinates as
/// latitude/longitude on the wire.
struct LocalFrame {
  double origin_lat_deg = 42.33;
  double origin_lon_deg = -83.05;

  /// Integer location in 1e-5 degree units.
  struct Fixed {
    std::int32_t lat = 0;
    std::int32_t lon = 0;
    bool operator==(const Fixed&) const = default;
  };

  Fixed to_fixed(Vec2 p) const;
  Vec2 from_fixed(Fixed f) const;
  /// Worst-case per-axis error of a round trip, m.
  double quantization_step_m() const;
};

inline constexpr double kKStep = 1.0 / 64.0;
inline constexpr double kKMax = 65535.0 * kKStep;

/// Smallest wire-representable K that is >= `K` (clamped to the wire range).
/// Idempotent on grid values.
double k_on_wire_grid(double K);

struct ErDescriptor {
  Vec2 receiver_location;  // absolute, local frame
  double K = 0.0;
};

struct LocationEntry {
  VehicleId id = 0;
  Vec2 location;
};

struct ControlMessage {
  VehicleId sender = 0;
  Vec2 location;
  std::vector<ErDescriptor> descriptors;
  std::vector<LocationEntry> locations;
};

inline constexpr std::size_t kHeaderBytes = 15;
inline constexpr std::size_t kDescriptorBytes = 9;
inline constexpr std::size_t kLocationEntryBytes = 13;

constexpr std::size_t encoded_size(std::size_t descriptors, std::size_t locations) {
  return kHeaderBytes + kDescriptorBytes * descriptors + kLocationEntryBytes * locations;
}

/// Throws DomainError when a field is outside its encodable range.
std::vector<std::uint8_t> encode_control_message(const ControlMessage& m, const LocalFrame& frame);

/// Throws DecodeError on a malformed buffer.
ControlMessage decode_control_message(std::span<const std::uint8_t> buf, const LocalFrame& frame);

}  // namespace cps::broadcast
