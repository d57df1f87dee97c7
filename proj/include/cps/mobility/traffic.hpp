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
#include <optional>
#include <span>
#include <vector>

#include "cps/common/ids.hpp"
#include "cps/common/rng.hpp"
#include "cps/mobility/idm.hpp"
#include "cps/mobility/road_network.hpp"

namespace cps::mobility {

/// Ground-truth kinematic state of one vehicle.
struct VehicleState {
  VehicleId id = 0;
  SegmentId segment = 0;
  int lane = 0;
  double s_pos = 0.0;   // along-segment position of the front bumper, m
  double v = 0.0;       // m/s
  double accel = 0.0;   // m/s^2, last applied
  double length = 5.0;  // m
  IdmParams idm;
  std::optional<VehicleId> lead;
};

enum class EventKind { LaneChange, Turn, Exit };

struct MobilityEvent {
  VehicleId vehicle = 0;
  EventKind kind = EventKind::LaneChange;
  SegmentId from_segment = 0;
  int from_lane = 0;
  SegmentId to_segment = 0;
  int to_lane = 0;
};

/// Exogenous lane change requested for a given step. `target_lane` < 0 lets
/// the stepper pick an adjacent lane.
struct LaneChangeRequest {
  VehicleId vehicle = 0;
  int target_lane = -1;
};

struct StepParams {
  double dt = 0.0025;
  std::uint64_t seed = 0;
  std::int64_t step_index = 0;
  /// Poisson rate of spontaneous lane changes per vehicle on multi-lane
  /// segments, 1/s.
  double lane_change_rate = 0.0;
};

struct StepOutput {
  std::vector<VehicleState> vehicles;
  std::vector<MobilityEvent> events;
};

/// Bumper-to-bumper gap from `follower` to `lead` on the same lane.
double gap_between(const VehicleState& follower, const VehicleState& lead);

/// Fills `lead` for every vehicle (same segment and lane, closest ahead).
void assign_leads(std::span<VehicleState> vehicles);

/// Advances every vehicle by one semi-implicit Euler step of the ACC model,
/// applies lane changes and crossing turns atomically, and removes vehicles
/// that leave the end of their segment. Throws CollisionError if any gap is
/// nonpositive before or after the step.
StepOutput step_traffic(const RoadNetwork& net, std::span<const VehicleState> vehicles,
                        const StepParams& params,
                        std::span<const LaneChangeRequest> requests = {});

/// Poisson traffic source at the start of one segment lane.
struct FlowSpec {
  SegmentId segment = 0;
  int lane = 0;
  double rate = 0.0;        // vehicles per second
  double start_s = 0.0;     // time window of arrivals, seconds
  double end_s = 1e300;
  IdmParams idm;            // base parameters; v0 of 0 means "speed limit"
  double v0_spread = 0.0;   // relative uniform spread of v0 (e.g. 0.1 = +-10%)
  double t_gap_spread = 0.0;
  std::uint64_t seed = 0;
};

/// Deterministic insertion schedule for one FlowSpec. Arrivals that would
/// violate the minimum gap s0 at the entry are deferred until they fit.
class FlowGenerator {
 public:
  FlowGenerator(const RoadNetwork& net, FlowSpec spec);

  /// Returns vehicles inserted at time `now`. Ids are taken from `next_id`.
  std::vector<VehicleState> poll(double now, std::span<const VehicleState> existing,
                                 VehicleId& next_id);

  /// Arrival times drawn so far (including deferred ones), for inspection.
  const std::vector<double>& arrival_times() const { return arrivals_; }
  std::size_t deferred() const { return pending_.size(); }

 private:
  void draw_until(double now);

  const RoadNetwork* net_;
  FlowSpec spec_;
  Rng rng_;
  double next_arrival_;
  std::vector<double> arrivals_;
  std::vector<double> pending_;
};

}  // namespace cps::mobility
