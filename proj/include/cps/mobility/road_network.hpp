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
#include <vector>

#include "cps/common/geometry.hpp"
#include "cps/common/ids.hpp"

namespace cps::mobility {

/// A point on a segment where vehicles may turn onto another segment.
struct TurnOption {
  double at_s = 0.0;           // along-track position on the source segment
  SegmentId to_segment = 0;
  double to_s = 0.0;           // entry position on the target segment
  double probability = 0.0;
};

/// Directed road segment. Lanes are offset to the right of the travel
/// direction, lane 0 innermost.
class RoadSegment {
 public:
  RoadSegment(SegmentId id, std::vector<Vec2> polyline, int lanes, double speed_limit,
              double lane_width = 3.5);

  SegmentId id() const { return id_; }
  int lanes() const { return lanes_; }
  double speed_limit() const { return speed_limit_; }
  double lane_width() const { return lane_width_; }
  double length() const { return cumulative_.back(); }
  const std::vector<Vec2>& polyline() const { return polyline_; }

  /// World position of a point `s` meters along the segment in `lane`.
  /// `s` is clamped to [0, length].
  Vec2 position(double s, int lane) const;

  /// Unit travel direction at `s`.
  Vec2 heading(double s) const;

  /// Along-track coordinate of the point of the centerline closest to `p`.
  double project(Vec2 p) const;

  std::vector<TurnOption> turns;

 private:
  std::size_t piece_at(double s) const;

  SegmentId id_;
  std::vector<Vec2> polyline_;
  std::vector<double> cumulative_;
  int lanes_;
  double speed_limit_;
  double lane_width_;
};

class RoadNetwork {
 public:
  /// Validates the segment invariants and throws ConfigError on violation.
  void add_segment(RoadSegment segment);

  const RoadSegment& segment(SegmentId id) const;
  const RoadSegment* find(SegmentId id) const;
  const std::vector<RoadSegment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

  /// One straight road of `length` meters along +x with `lanes` lanes.
  static RoadNetwork straight(double length, int lanes, double speed_limit);

  /// A two-way straight road: segment 0 eastbound, segment 1 westbound.
  static RoadNetwork two_way(double length, int lanes, double speed_limit);

  /// A closed circle of `radius` meters approximated by `sides` chords,
  /// one lane, for stationary scenarios.
  static RoadNetwork ring(double radius, int sides, double speed_limit);

  /// Two two-way roads crossing at the origin. Road A runs along x
  /// (segments 0 eastbound, 1 westbound); road B along y (segments 2
  /// northbound, 3 southbound). Turn options at the crossing connect
  /// approaches with probability `turn_probability`.
  static RoadNetwork crossing(double length, int lanes_a, double speed_a, int lanes_b,
                              double speed_b, double turn_probability);

 private:
  std::vector<RoadSegment> segments_;
};

}  // namespace cps::mobility
