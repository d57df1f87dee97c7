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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cps/common/ids.hpp"
#include "cps/engine/config.hpp"

namespace cps::engine {

/// One link's delivery record for one feedback window.
struct LinkWindowRow {
  Slot window_end = 0;  // first slot after the window
  LinkId link;
  int attempts = 0;
  int successes = 0;
  std::optional<double> K_before;  // absent for links the control plane has not registered
  std::optional<double> K_after;
  std::string rule;  // adaptation rule applied, empty if none
};

struct SlotRow {
  Slot slot = 0;
  int transmitters = 0;
  int attempts = 0;
  int deliveries = 0;
};

struct ControlRow {
  Slot slot = 0;
  int messages = 0;
  std::int64_t signal_bytes = 0;  // identity and location (or power) sharing
  std::int64_t er_bytes = 0;      // exclusion-region descriptors and counts
  std::int64_t event_bytes = 0;   // out-of-cycle messages since the last round
  int cover_receivers = 0;
  int active_links = 0;
};

/// Post-warmup totals of one link.
struct LinkTotalRow {
  LinkId link;
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
  std::string init_method;  // empty when never registered
  std::optional<double> final_K;
};

struct EventRow {
  Slot slot = 0;
  std::string kind;
  VehicleId vehicle = 0;
  VehicleId other = 0;
  std::string detail;
};

struct Summary {
  std::string name;
  std::string protocol;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  std::int64_t slots = 0;
  double warmup_s = 0.0;
  double t_rel = 0.0;
  int max_vehicles = 0;
  int links_total = 0;
  int links_evaluated = 0;  // links with at least min_link_attempts post-warmup
  std::optional<double> mean_pdr;
  std::optional<double> pdr_variance;
  std::optional<double> min_pdr;
  std::optional<double> frac_links_meeting;    // PDR >= t_rel - 0.02
  int window_samples = 0;
  std::optional<double> frac_windows_meeting;  // over post-warmup windows with >= 10 attempts
  std::int64_t attempts = 0;
  std::int64_t deliveries = 0;
  double throughput_pps = 0.0;  // deliveries per second after warmup
  double mean_concurrency = 0.0;
  std::optional<double> delay_mean_ms;
  std::optional<double> delay_p50_ms;
  std::optional<double> delay_p90_ms;
  std::optional<double> delay_p99_ms;
  std::int64_t control_bytes = 0;
  double control_bps = 0.0;
  std::map<std::string, int> init_methods;

  bool operator==(const Summary&) const = default;
};

struct MetricsRecord {
  ScenarioConfig config;
  std::vector<LinkWindowRow> windows;
  std::vector<SlotRow> slots;
  std::vector<ControlRow> control;
  std::vector<LinkTotalRow> links;
  std::vector<EventRow> events;
  std::vector<double> delays_s;  // post-warmup, one per delivered packet-receiver pair
  Summary summary;
};

/// Fills `record.summary` from the rows.
Summary summarize(const MetricsRecord& record);

nlohmann::json summary_to_json(const Summary& s);
Summary summary_from_json(const nlohmann::json& j);

/// Writes pdr.csv, concurrency.csv, control.csv, links.csv, events.csv and
/// summary.json (with the config echo) into `dir`, creating it if needed.
/// Throws cps::IoError when the directory cannot be written.
void export_metrics(const MetricsRecord& record, const std::string& dir);

/// Reads summary.json from a run directory.
Summary read_summary(const std::string& dir);

/// Plain-text comparison table of several runs, one row per run.
std::string comparison_table(const std::vector<std::pair<std::string, Summary>>& runs);

}  // namespace cps::engine
