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
#include "cps/broadcast/control_message.hpp"

#include <cmath>
#include <numbers>

#include "cps/common/error.hpp"

namespace cps::broadcast {

namespace {

constexpr double kEarthRadiusM = 6371000.0;
constexpr double kUnitsPerDegree = 1e5;
constexpr std::int64_t kCoordMax = (std::int64_t{1} << 27) - 1;
constexpr std::int64_t kCoordMin = -(std::int64_t{1} << 27);

double metres_per_degree() { return kEarthRadiusM * std::numbers::pi / 180.0; }

std::int32_t to_units(double deg) {
  const double u = std::round(deg * kUnitsPerDegree);
  if (!(u >= static_cast<double>(kCoordMin) && u <= static_cast<double>(kCoordMax))) {
    throw DomainError("coordinate outside the 28-bit wire range");
  }
  return static_cast<std::int32_t>(u);
}

class Writer {
 public:
  void put(std::uint64_t v, int bytes) {
    for (int i = bytes - 1; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  // Two signed 28-bit values packed big-endian into 7 bytes.
  void put_pair(std::int32_t a, std::int32_t b) {
    const std::uint64_t ua = static_cast<std::uint64_t>(a) & 0xFFFFFFFULL;
    const std::uint64_t ub = static_cast<std::uint64_t>(b) & 0xFFFFFFFULL;
    put((ua << 28) | ub, 7);
  }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : buf_(b) {}
  std::uint64_t get(int bytes) {
    if (pos_ + static_cast<std::size_t>(bytes) > buf_.size()) throw DecodeError("truncated message");
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v = (v << 8) | buf_[pos_++];
    return v;
  }
  std::pair<std::int32_t, std::int32_t> get_pair() {
    const std::uint64_t v = get(7);
    return {sign28(v >> 28), sign28(v & 0xFFFFFFFULL)};
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  static std::int32_t sign28(std::uint64_t v) {
    v &= 0xFFFFFFFULL;
    return static_cast<std::int32_t>(v & 0x8000000ULL ? static_cast<std::int64_t>(v) - (1LL << 28)
                                                       : static_cast<std::int64_t>(v));
  }
  std::span<const std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

}  // namespace

double k_on_wire_grid(double K) {
  if (!(K >= 0.0)) return 0.0;
  const double steps = std::ceil(K / kKStep - 1e-9);
  return std::min(kKMax, steps * kKStep);
}

LocalFrame::Fixed LocalFrame::to_fixed(Vec2 p) const {
  const double m = metres_per_degree();
  const double lat = origin_lat_deg + p.y / m;
  const double lon = origin_lon_deg + p.x / (m * std::cos(origin_lat_deg * std::numbers::pi / 180.0));
  return Fixed{to_units(lat), to_units(lon)};
}

Vec2 LocalFrame::from_fixed(Fixed f) const {
  const double m = metres_per_degree();
  const double lat = f.lat / kUnitsPerDegree;
  const double lon = f.lon / kUnitsPerDegree;
  return Vec2{(lon - origin_lon_deg) * m * std::cos(origin_lat_deg * std::numbers::pi / 180.0),
              (lat - origin_lat_deg) * m};
}

double LocalFrame::quantization_step_m() const { return metres_per_degree() / kUnitsPerDegree; }

std::vector<std::uint8_t> encode_control_message(const ControlMessage& m, const LocalFrame& frame) {
  if (m.sender > kMaxVehicleId) throw DomainError("sender id exceeds 48 bits");
  if (m.descriptors.size() > 255 || m.locations.size() > 255) {
    throw DomainError("too many entries for one control message");
  }
  Writer w;
  const auto origin = frame.to_fixed(m.location);
  w.put(m.sender, 6);
  w.put_pair(origin.lat, origin.lon);
  w.put(m.descriptors.size(), 1);
  w.put(m.locations.size(), 1);
  for (const auto& d : m.descriptors) {
    const auto f = frame.to_fixed(d.receiver_location);
    const std::int64_t dlat = std::int64_t{f.lat} - origin.lat;
    const std::int64_t dlon = std::int64_t{f.lon} - origin.lon;
    if (dlat < kCoordMin || dlat > kCoordMax || dlon < kCoordMin || dlon > kCoordMax) {
      throw DomainError("relative location outside the wire range");
    }
    if (!(d.K >= 0.0 && d.K <= kKMax)) throw DomainError("K outside the wire range");
    w.put_pair(static_cast<std::int32_t>(dlat), static_cast<std::int32_t>(dlon));
    // Rounded up so the decoded region never loses its boundary member.
    w.put(static_cast<std::uint64_t>(std::llround(k_on_wire_grid(d.K) / kKStep)), 2);
  }
  for (const auto& e : m.locations) {
    if (e.id > kMaxVehicleId) throw DomainError("vehicle id exceeds 48 bits");
    const auto f = frame.to_fixed(e.location);
    w.put(e.id, 6);
    w.put_pair(f.lat, f.lon);
  }
  return w.take();
}

ControlMessage decode_control_message(std::span<const std::uint8_t> buf, const LocalFrame& frame) {
  Reader r(buf);
  ControlMessage m;
  m.sender = r.get(6);
  const auto [lat, lon] = r.get_pair();
  const LocalFrame::Fixed origin{lat, lon};
  m.location = frame.from_fixed(origin);
  const std::size_t n_desc = r.get(1);
  const std::size_t n_loc = r.get(1);
  if (buf.size() != encoded_size(n_desc, n_loc)) throw DecodeError("length does not match counts");
  for (std::size_t i = 0; i < n_desc; ++i) {
    const auto [dlat, dlon] = r.get_pair();
    ErDescriptor d;
    d.receiver_location = frame.from_fixed({origin.lat + dlat, origin.lon + dlon});
    d.K = static_cast<double>(r.get(2)) * kKStep;
    m.descriptors.push_back(d);
  }
  for (std::size_t i = 0; i < n_loc; ++i) {
    LocationEntry e;
    e.id = r.get(6);
    const auto [la, lo] = r.get_pair();
    e.location = frame.from_fixed({la, lo});
    m.locations.push_back(e);
  }
  if (!r.done()) throw DecodeError("trailing bytes");
  return m;
}

}  // namespace cps::broadcast
