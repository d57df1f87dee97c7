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

#include <map>
#include <optional>
#include <span>

#include "cps/common/geometry.hpp"
#include "cps/mobility/road_network.hpp"
#include "cps/tracking/ukf.hpp"

namespace cps::tracking {

/// A location report received on the control plane.
struct Observation {
  VehicleId id = 0;
  Vec2 location;  // as decoded from the wire
  SegmentId segment = 0;
  int lane = 0;
};

/// UKF tracks of every known vehicle, kept by the control plane.
class TrackerBank {
 public:
  TrackerBank(const mobility::RoadNetwork& net, UkfParams params,
              mobility::IdmParams model = {}, double vehicle_length = 5.0,
              double lead_horizon = 200.0);

  /// Advances every track by dt. A track's lead is the nearest track ahead
  /// in the same lane within the lead horizon.
  void predict_all(double dt);

  /// Measurement update from a batch of simultaneous reports. Unknown
  /// vehicles get a new track; a report on another segment or lane resets
  /// the track.
  void observe_all(std::span<const Observation> obs, Slot now);

  /// Event-driven refresh: re-centers the track and resets its covariance.
  void reset(const Observation& obs, Slot now);

  void erase(VehicleId id);

  const TrackState* find(VehicleId id) const;
  std::optional<Vec2> position(VehicleId id) const;
  std::size_t size() const { return tracks_.size(); }
  const std::map<VehicleId, TrackState>& tracks() const { return tracks_; }
  std::size_t rejected() const { return rejected_; }

 private:
  double along_track(const Observation& o) const;
  /// Prior driver model of a new track: the segment speed limit as v0.
  mobility::IdmParams model_for(SegmentId segment) const;

  const mobility::RoadNetwork* net_;
  UkfParams params_;
  mobility::IdmParams model_;
  double vehicle_length_;
  double lead_horizon_;
  std::map<VehicleId, TrackState> tracks_;
  std::size_t rejected_ = 0;
};

}  // namespace cps::tracking
