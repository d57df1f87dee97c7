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
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cps/common/error.hpp"
#include "cps/engine/config.hpp"
#include "cps/engine/metrics.hpp"
#include "cps/engine/simulator.hpp"

using namespace cps;
using namespace cps::engine;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t data_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n == 0 ? 0 : n - 1;  // header
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("cps_engine_test_" + name);
  fs::remove_all(p);
  return p;
}

ScenarioConfig short_line(double duration = 4.0) {
  auto c = preset("static-line");
  c.duration_s = duration;
  c.mac.warmup_s = 1.0;
  return c;
}

ScenarioConfig lone_vehicle(Protocol p) {
  ScenarioConfig c;
  c.name = "lone";
  c.protocol = p;
  c.duration_s = 3.0;
  c.mac.warmup_s = 0.0;
  c.road.kind = "straight";
  c.road.length = 1000.0;
  c.mobility.enabled = false;
  c.vehicles.push_back({0, 0, 100.0, 0.0});
  return c;
}

ScenarioConfig pair_of(Protocol p, double gap) {
  auto c = lone_vehicle(p);
  c.name = "pair";
  c.vehicles.push_back({0, 0, 100.0 + gap, 0.0});
  c.duration_s = 6.0;
  return c;
}

}  // namespace

TEST(Config, PresetsListed) {
  const auto names = preset_names();
  ASSERT_FALSE(names.empty());
  for (const auto& n : names) {
    EXPECT_FALSE(preset_description(n).empty());
    EXPECT_NO_THROW(preset(n).validate()) << n;
  }
  EXPECT_THROW(preset("nope"), NotFoundError);
}

TEST(Config, JsonRoundTrip) {
  for (const auto& n : preset_names()) {
    const auto c = preset(n);
    const auto j = config_to_json(c);
    EXPECT_EQ(config_to_json(config_from_json(j)), j) << n;
  }
}

TEST(Config, UnknownFieldNamed) {
  nlohmann::json j = {{"mac", {{"t_rel", 0.9}, {"bogus", 1}}}};
  try {
    config_from_json(j);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "mac.bogus");
  }
}

TEST(Config, WrongTypeNamed) {
  nlohmann::json j = {{"duration_s", "long"}};
  try {
    config_from_json(j);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "duration_s");
  }
}

TEST(Config, BadProtocol) {
  EXPECT_THROW(parse_protocol("aloha"), ConfigError);
  EXPECT_EQ(parse_protocol("rtdma"), Protocol::RTDMA);
}

TEST(Config, LaneOutOfRange) {
  auto c = lone_vehicle(Protocol::CPS);
  c.vehicles[0].lane = 3;
  try {
    c.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "vehicles[0].lane");
  }
}

TEST(Config, LoadMergesOntoPreset) {
  const auto dir = scratch("load");
  fs::create_directories(dir);
  const auto file = dir / "c.json";
  std::ofstream(file) << R"({"preset": "static-line", "seed": 17, "mac": {"t_rel": 0.8}})";
  const auto c = load_config(file.string());
  EXPECT_EQ(c.seed, 17u);
  EXPECT_DOUBLE_EQ(c.mac.t_rel, 0.8);
  EXPECT_EQ(c.vehicles.size(), preset("static-line").vehicles.size());
  EXPECT_THROW(load_config((dir / "missing.json").string()), ConfigError);
}

TEST(Engine, ZeroDurationIsEmpty) {
  auto c = short_line(0.0);
  const auto r = run(c);
  EXPECT_TRUE(r.slots.empty());
  EXPECT_TRUE(r.windows.empty());
  EXPECT_FALSE(r.summary.mean_pdr.has_value());
}

TEST(Engine, SingleVehicleHasNoPdr) {
  const auto r = run(lone_vehicle(Protocol::CPS));
  EXPECT_FALSE(r.summary.mean_pdr.has_value());
  EXPECT_EQ(r.summary.links_total, 0);
  for (const auto& s : r.slots) EXPECT_LE(s.transmitters, 1);
  bool sent = false;
  for (const auto& s : r.slots) sent |= s.transmitters == 1;
  EXPECT_TRUE(sent);
}

TEST(Engine, CsmaLoneVehicleSendsEveryPeriod) {
  auto c = lone_vehicle(Protocol::CSMA);
  const auto r = run(c);
  int tx = 0;
  for (const auto& s : r.slots) tx += s.transmitters;
  const int periods = static_cast<int>(c.total_slots() / c.mac.data_period_slots);
  EXPECT_NEAR(tx, periods, 1);
}

TEST(Engine, RtdmaLoneVehicleKeepsItsSlot) {
  auto c = lone_vehicle(Protocol::RTDMA);
  const auto r = run(c);
  int reserves = 0;
  for (const auto& e : r.events) reserves += e.kind == "reserve";
  EXPECT_EQ(reserves, 1);
  std::optional<Slot> phase;
  for (const auto& s : r.slots) {
    if (s.transmitters == 0) continue;
    const Slot ph = s.slot % c.mac.rtdma.frame_slots;
    if (!phase) phase = ph;
    EXPECT_EQ(ph, *phase);
  }
}

TEST(Engine, RtdmaPairSettlesOnDistinctSlots) {
  auto c = pair_of(Protocol::RTDMA, 30.0);
  c.mac.rtdma.frame_slots = 2;
  c.mac.data_period_slots = 2;
  const auto r = run(c);
  const auto half = r.slots.size() / 2;
  for (std::size_t i = half; i < r.slots.size(); ++i) EXPECT_LE(r.slots[i].transmitters, 1);
}

TEST(Engine, CsmaPairRarelyOverlaps) {
  const auto r = run(pair_of(Protocol::CSMA, 30.0));
  int both = 0, any = 0;
  for (const auto& s : r.slots) {
    both += s.transmitters == 2;
    any += s.transmitters > 0;
  }
  ASSERT_GT(any, 0);
  // Same-slot starts only when both draw the same backoff.
  EXPECT_LT(static_cast<double>(both) / any, 0.2);
}

TEST(Engine, WindowRowsHaveAttemptsAndAddUp) {
  auto c = short_line(5.0);
  c.mac.warmup_s = 0.0;
  const auto r = run(c);
  ASSERT_FALSE(r.windows.empty());
  std::map<LinkId, std::pair<std::int64_t, std::int64_t>> sum;
  for (const auto& w : r.windows) {
    EXPECT_GT(w.attempts, 0);
    EXPECT_LE(w.successes, w.attempts);
    sum[w.link].first += w.attempts;
    sum[w.link].second += w.successes;
  }
  for (const auto& l : r.links) {
    EXPECT_EQ(sum[l.link].first, l.attempts);
    EXPECT_EQ(sum[l.link].second, l.successes);
  }
}

TEST(Engine, ExportRowCountsAndSummaryRoundTrip) {
  const auto r = run(short_line());
  const auto dir = scratch("export");
  export_metrics(r, dir.string());
  EXPECT_EQ(data_lines(dir / "pdr.csv"), r.windows.size());
  EXPECT_EQ(data_lines(dir / "concurrency.csv"), r.slots.size());
  EXPECT_EQ(data_lines(dir / "control.csv"), r.control.size());
  EXPECT_EQ(data_lines(dir / "links.csv"), r.links.size());
  EXPECT_EQ(data_lines(dir / "events.csv"), r.events.size());
  EXPECT_EQ(read_summary(dir.string()), r.summary);
  EXPECT_EQ(summary_from_json(summary_to_json(r.summary)), r.summary);
}

TEST(Engine, ExportToUnwritablePathThrows) {
  const auto r = run(short_line(0.0));
  const auto dir = scratch("blocker");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(export_metrics(r, (dir / "file" / "sub").string()), IoError);
}

TEST(Engine, DeterministicCsvs) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  auto c = short_line();
  c.protocol = Protocol::CPS;
  export_metrics(run(c), a.string());
  export_metrics(run(c), b.string());
  for (const char* f : {"pdr.csv", "concurrency.csv", "control.csv", "links.csv", "events.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Engine, SeedChangesOutcome) {
  auto c = preset("crossing");
  c.duration_s = 3.0;
  c.mac.warmup_s = 0.0;
  const auto a = run(c);
  c.seed = 2;
  const auto b = run(c);
  EXPECT_NE(a.summary.deliveries, b.summary.deliveries);
}

TEST(Engine, OcpsHasNoLocationSignaling) {
  auto c = short_line();
  c.protocol = Protocol::OCPS;
  const auto r = run(c);
  for (const auto& row : r.control) EXPECT_EQ(row.signal_bytes, 0);
}

// A symmetric ring of stationary vehicles with a deterministic channel:
// distance and received power order interferers identically, so both
// models settle on the same service level. Offered load stays below one
// packet per slot; past that, half-duplex misses dominate.
TEST(Engine, RingOcpsMatchesCps) {
  ScenarioConfig c;
  c.name = "ring";
  c.road.kind = "ring";
  c.road.length = 2.0 * 3.14159265358979 * 120.0;
  c.mobility.enabled = false;
  c.duration_s = 20.0;
  c.mac.warmup_s = 8.0;
  for (int i = 0; i < 24; ++i) c.vehicles.push_back({0, 0, c.road.length * i / 24.0, 0.0});
  c.channel.tx_power_dbm = calibrated_tx_power_dbm(c.channel, c.radio, c.mac.comm_range,
                                                   c.mac.t_rel, 3.0);
  const auto cps = run(c);
  c.protocol = Protocol::OCPS;
  const auto ocps = run(c);
  ASSERT_TRUE(cps.summary.mean_pdr && ocps.summary.mean_pdr);
  EXPECT_GE(*cps.summary.frac_links_meeting, 0.95);
  EXPECT_GE(*ocps.summary.frac_links_meeting, 0.95);
  EXPECT_NEAR(cps.summary.mean_concurrency, ocps.summary.mean_concurrency,
              0.15 * ocps.summary.mean_concurrency);
}

TEST(Metrics, ComparisonTableHasOneRowPerRun) {
  Summary a;
  a.name = "x";
  a.protocol = "cps";
  a.mean_pdr = 0.95;
  const auto t = comparison_table({{"run_a", a}, {"run_b", a}});
  EXPECT_NE(t.find("run_a"), std::string::npos);
  EXPECT_NE(t.find("run_b"), std::string::npos);
}
