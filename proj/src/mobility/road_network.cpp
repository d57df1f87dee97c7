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
#include "cps/mobility/road_network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cps/common/error.hpp"

namespace cps::mobility {

RoadSegment::RoadSegment(SegmentId id, std::vector<Vec2> polyline, int lanes,
                         double speed_limit, double lane_width)
    : id_(id),
      polyline_(std::move(polyline)),
      lanes_(lanes),
      speed_limit_(speed_limit),
      lane_width_(lane_width) {
  const std::string where = "segments[" + std::to_string(id) + "]";
  if (polyline_.size() < 2) throw ConfigError(where + ".polyline", "needs at least 2 points");
  if (lanes_ < 1) throw ConfigError(where + ".lanes", "must be >= 1");
  if (!(speed_limit_ > 0.0)) throw ConfigError(where + ".speed_limit", "must be > 0");
  cumulative_.reserve(polyline_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < polyline_.size(); ++i) {
    const double piece = distance(polyline_[i - 1], polyline_[i]);
    if (!(piece > 0.0)) throw ConfigError(where + ".polyline", "repeated point");
    cumulative_.push_back(cumulative_.back() + piece);
  }
}

std::size_t RoadSegment::piece_at(double s) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  return std::min(i, polyline_.size() - 2);
}

Vec2 RoadSegment::heading(double s) const {
  const std::size_t i = piece_at(std::clamp(s, 0.0, length()));
  const Vec2 d = polyline_[i + 1] - polyline_[i];
  return d * (1.0 / d.norm());
}

Vec2 RoadSegment::position(double s, int lane) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = piece_at(s);
  const Vec2 d = polyline_[i + 1] - polyline_[i];
  const double len = cumulative_[i + 1] - cumulative_[i];
  const Vec2 dir = d * (1.0 / len);
  const Vec2 right{dir.y, -dir.x};
  const double offset = (static_cast<double>(lane) + 0.5) * lane_width_;
  return polyline_[i] + dir * (s - cumulative_[i]) + right * offset;
}

double RoadSegment::project(Vec2 p) const {
  double best_s = 0.0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline_.size(); ++i) {
    const Vec2 a = polyline_[i];
    const Vec2 d = polyline_[i + 1] - a;
    const double len2 = d.squared_norm();
    const double t = std::clamp(((p.x - a.x) * d.x + (p.y - a.y) * d.y) / len2, 0.0, 1.0);
    const Vec2 q = a + d * t;
    const double d2 = squared_distance(p, q);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = cumulative_[i] + t * std::sqrt(len2);
    }
  }
  return best_s;
}

void RoadNetwork::add_segment(RoadSegment segment) {
  if (find(segment.id())) {
    throw ConfigError("segments[" + std::to_string(segment.id()) + "].id", "duplicate segment id");
  }
  segments_.push_back(std::move(segment));
}

const RoadSegment* RoadNetwork::find(SegmentId id) const {
  for (const auto& s : segments_) {
    if (s.id() == id) return &s;
  }
  return nullptr;
}

const RoadSegment& RoadNetwork::segment(SegmentId id) const {
  if (const auto* s = find(id)) return *s;
  throw NotFoundError("unknown segment id " + std::to_string(id));
}

RoadNetwork RoadNetwork::straight(double length, int lanes, double speed_limit) {
  RoadNetwork net;
  net.add_segment(RoadSegment(0, {{0.0, 0.0}, {length, 0.0}}, lanes, speed_limit));
  return net;
}

RoadNetwork RoadNetwork::two_way(double length, int lanes, double speed_limit) {
  RoadNetwork net;
  net.add_segment(RoadSegment(0, {{0.0, 0.0}, {length, 0.0}}, lanes, speed_limit));
  net.add_segment(RoadSegment(1, {{length, 0.0}, {0.0, 0.0}}, lanes, speed_limit));
  return net;
}

RoadNetwork RoadNetwork::ring(double radius, int sides, double speed_limit) {
  if (sides < 3) throw ConfigError("road.sides", "must be >= 3");
  std::vector<Vec2> pts;
  for (int i = 0; i <= sides; ++i) {
    const double a = 2.0 * M_PI * i / sides;
    pts.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  RoadNetwork net;
  net.add_segment(RoadSegment(0, std::move(pts), 1, speed_limit));
  return net;
}

RoadNetwork RoadNetwork::crossing(double length, int lanes_a, double speed_a, int lanes_b,
                                  double speed_b, double turn_probability) {
  const double h = length / 2.0;
  RoadSegment east(0, {{-h, 0.0}, {h, 0.0}}, lanes_a, speed_a);
  RoadSegment west(1, {{h, 0.0}, {-h, 0.0}}, lanes_a, speed_a);
  RoadSegment north(2, {{0.0, -h}, {0.0, h}}, lanes_b, speed_b);
  RoadSegment south(3, {{0.0, h}, {0.0, -h}}, lanes_b, speed_b);
  if (turn_probability > 0.0) {
    // Right turns at the crossing (driving on the right).
    east.turns.push_back({h, 3, h, turn_probability});
    west.turns.push_back({h, 2, h, turn_probability});
    north.turns.push_back({h, 0, h, turn_probability});
    south.turns.push_back({h, 1, h, turn_probability});
  }
  RoadNetwork net;
  net.add_segment(std::move(east));
  net.add_segment(std::move(west));
  net.add_segment(std::move(north));
  net.add_segment(std::move(south));
  return net;
}

}  // namespace cps::mobility
