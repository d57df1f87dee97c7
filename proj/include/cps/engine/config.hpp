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
#include <string>
#include <vector>

#include <json.hpp>

#include "cps/channel/channel.hpp"
#include "cps/channel/radio.hpp"
#include "cps/mobility/road_network.hpp"
#include "cps/mobility/traffic.hpp"
#include "cps/tracking/ukf.hpp"

namespace cps::engine {

enum class Protocol { CPS, OCPS, CSMA, RTDMA };

const char* to_string(Protocol p);
Protocol parse_protocol(const std::string& s);

struct RoadSpec {
  std::string kind = "crossing";  // crossing | straight | two_way
  double length = 1200.0;
  int lanes_a = 2;
  double speed_a = 120.0 / 3.6;
  int lanes_b = 1;
  double speed_b = 40.0 / 3.6;
  double turn_probability = 0.1;

  mobility::RoadNetwork build() const;
};

/// Vehicles present at t = 0, placed explicitly.
struct VehicleSpec {
  SegmentId segment = 0;
  int lane = 0;
  double s = 0.0;
  double v = -1.0;  // < 0: desired speed
};

/// Vehicles spread along a lane at t = 0, with jittered spacing.
struct FillSpec {
  SegmentId segment = 0;
  int lane = 0;
  double spacing = 80.0;
  double jitter = 0.3;  // relative
};

struct FlowConfig {
  SegmentId segment = 0;
  int lane = 0;
  double rate = 0.0;
  double start_s = 0.0;
  double end_s = 1e300;
  double v0_spread = 0.05;
  double t_gap_spread = 0.1;
};

struct RemovalSpec {
  VehicleId vehicle = 0;
  double time_s = 0.0;
};

struct MobilityConfig {
  bool enabled = true;
  double lane_change_rate = 0.0;  // per vehicle per second
  mobility::IdmParams idm;        // v0 <= 0 means the segment speed limit
};

struct CsmaConfig {
  int contention_window = 15;       // backoff drawn from [0, cw] mini-slots
  double sense_threshold_dbm = -92.0;
};

struct RtdmaConfig {
  int frame_slots = 40;
  int failure_burst = 2;  // consecutive failed frames reported by a receiver
};

struct MacConfig {
  double t_rel = 0.9;
  double comm_range = 150.0;
  double slot_s = 0.0025;
  int data_period_slots = 40;
  int control_period_slots = 100;
  int feedback_window_slots = 1000;
  double discovery_burst_s = 2.0;
  double gps_sigma = 4.0;
  double c_ewma = 0.0;
  double d0 = 30.0;
  double estimate_range_factor = 2.0;   // power estimates kept within this x range
  double candidate_range_factor = 4.0;  // ER candidates considered within this x range
  double mu_weight = 0.1;
  bool bc2 = true;
  double retransmit_cap_s = 2.0;
  double warmup_s = 10.0;
  int min_link_attempts = 50;
  double control_loss = 0.0;
  CsmaConfig csma;
  RtdmaConfig rtdma;
};

struct ScenarioConfig {
  std::string name = "custom";
  std::uint64_t seed = 1;
  double duration_s = 60.0;
  Protocol protocol = Protocol::CPS;
  RoadSpec road;
  std::vector<VehicleSpec> vehicles;
  std::vector<FillSpec> fills;
  std::vector<FlowConfig> flows;
  std::vector<RemovalSpec> removals;
  MobilityConfig mobility;
  channel::ChannelParams channel;
  channel::RadioModel radio;
  MacConfig mac;
  tracking::UkfParams ukf;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  std::int64_t total_slots() const;
};

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& c);

/// Transmit power giving `margin_db` over the SINR threshold of `t_rel` at
/// distance `range` without interference.
double calibrated_tx_power_dbm(const channel::ChannelParams& ch, const channel::RadioModel& radio,
                               double range, double t_rel, double margin_db);

std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);
/// Throws NotFoundError for unknown names.
ScenarioConfig preset(const std::string& name);

/// Loads a JSON config file. A "preset" key selects a base preset onto
/// which the remaining keys are merged.
ScenarioConfig load_config(const std::string& path);

}  // namespace cps::engine
