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
#include "cps/engine/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "cps/common/error.hpp"

namespace cps::engine {

using nlohmann::json;

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::CPS: return "cps";
    case Protocol::OCPS: return "ocps";
    case Protocol::CSMA: return "csma";
    case Protocol::RTDMA: return "rtdma";
  }
  return "?";
}

Protocol parse_protocol(const std::string& s) {
  if (s == "cps") return Protocol::CPS;
  if (s == "ocps") return Protocol::OCPS;
  if (s == "csma") return Protocol::CSMA;
  if (s == "rtdma") return Protocol::RTDMA;
  throw ConfigError("protocol", "unknown protocol '" + s + "' (cps|ocps|csma|rtdma)");
}

mobility::RoadNetwork RoadSpec::build() const {
  if (kind == "crossing") {
    return mobility::RoadNetwork::crossing(length, lanes_a, speed_a, lanes_b, speed_b,
                                           turn_probability);
  }
  if (kind == "straight") return mobility::RoadNetwork::straight(length, lanes_a, speed_a);
  if (kind == "two_way") return mobility::RoadNetwork::two_way(length, lanes_a, speed_a);
  if (kind == "ring") {
    return mobility::RoadNetwork::ring(length / (2.0 * M_PI), 360, speed_a);
  }
  throw ConfigError("road.kind", "unknown road kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// JSON reading with field-level errors.

namespace {

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(name(key), "wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(name(it.key()), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename T, typename F>
std::vector<T> read_array(const json* arr, const std::string& path, F&& read_one) {
  std::vector<T> out;
  if (!arr) return out;
  if (!arr->is_array()) throw ConfigError(path, "expected an array");
  for (std::size_t i = 0; i < arr->size(); ++i) {
    out.push_back(read_one((*arr)[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void read_idm(const json& j, const std::string& path, mobility::IdmParams& p) {
  ObjectReader r(j, path);
  r.get("v0", p.v0);
  r.get("T_gap", p.T_gap);
  r.get("s0", p.s0);
  r.get("delta", p.delta);
  r.get("a_max", p.a_max);
  r.get("b_comf", p.b_comf);
  r.get("c_acc", p.c_acc);
  r.finish();
}

json idm_json(const mobility::IdmParams& p) {
  return {{"v0", p.v0},         {"T_gap", p.T_gap},   {"s0", p.s0},        {"delta", p.delta},
          {"a_max", p.a_max},   {"b_comf", p.b_comf}, {"c_acc", p.c_acc}};
}

const char* fading_name(channel::FadingKind k) {
  switch (k) {
    case channel::FadingKind::None: return "none";
    case channel::FadingKind::Rayleigh: return "rayleigh";
    case channel::FadingKind::Nakagami: return "nakagami";
  }
  return "none";
}

channel::FadingKind parse_fading(const std::string& s) {
  if (s == "none") return channel::FadingKind::None;
  if (s == "rayleigh") return channel::FadingKind::Rayleigh;
  if (s == "nakagami") return channel::FadingKind::Nakagami;
  throw ConfigError("channel.fading", "unknown fading kind '" + s + "'");
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  ObjectReader r(j, "");
  r.get("name", c.name);
  r.get("seed", c.seed);
  r.get("duration_s", c.duration_s);
  std::string proto = to_string(c.protocol);
  r.get("protocol", proto);
  c.protocol = parse_protocol(proto);

  if (const json* road = r.child("road")) {
    ObjectReader rr(*road, "road");
    rr.get("kind", c.road.kind);
    rr.get("length", c.road.length);
    rr.get("lanes_a", c.road.lanes_a);
    rr.get("speed_a", c.road.speed_a);
    rr.get("lanes_b", c.road.lanes_b);
    rr.get("speed_b", c.road.speed_b);
    rr.get("turn_probability", c.road.turn_probability);
    rr.finish();
  }
  c.vehicles = read_array<VehicleSpec>(r.child("vehicles"), "vehicles",
                                       [](const json& e, const std::string& p) {
                                         VehicleSpec v;
                                         ObjectReader er(e, p);
                                         er.get("segment", v.segment);
                                         er.get("lane", v.lane);
                                         er.get("s", v.s);
                                         er.get("v", v.v);
                                         er.finish();
                                         return v;
                                       });
  c.fills = read_array<FillSpec>(r.child("fills"), "fills", [](const json& e, const std::string& p) {
    FillSpec f;
    ObjectReader er(e, p);
    er.get("segment", f.segment);
    er.get("lane", f.lane);
    er.get("spacing", f.spacing);
    er.get("jitter", f.jitter);
    er.finish();
    return f;
  });
  c.flows = read_array<FlowConfig>(r.child("flows"), "flows", [](const json& e, const std::string& p) {
    FlowConfig f;
    ObjectReader er(e, p);
    er.get("segment", f.segment);
    er.get("lane", f.lane);
    er.get("rate", f.rate);
    er.get("start_s", f.start_s);
    er.get("end_s", f.end_s);
    er.get("v0_spread", f.v0_spread);
    er.get("t_gap_spread", f.t_gap_spread);
    er.finish();
    return f;
  });
  c.removals = read_array<RemovalSpec>(r.child("removals"), "removals",
                                       [](const json& e, const std::string& p) {
                                         RemovalSpec s;
                                         ObjectReader er(e, p);
                                         er.get("vehicle", s.vehicle);
                                         er.get("time_s", s.time_s);
                                         er.finish();
                                         return s;
                                       });
  if (const json* m = r.child("mobility")) {
    ObjectReader mr(*m, "mobility");
    mr.get("enabled", c.mobility.enabled);
    mr.get("lane_change_rate", c.mobility.lane_change_rate);
    if (const json* idm = mr.child("idm")) read_idm(*idm, "mobility.idm", c.mobility.idm);
    mr.finish();
  }
  if (const json* ch = r.child("channel")) {
    ObjectReader cr(*ch, "channel");
    cr.get("tx_power_dbm", c.channel.tx_power_dbm);
    cr.get("d_ref", c.channel.d_ref);
    cr.get("path_loss_ref_db", c.channel.path_loss_ref_db);
    cr.get("exponent", c.channel.exponent);
    cr.get("shadowing_sigma_db", c.channel.shadowing_sigma_db);
    std::string fading = fading_name(c.channel.fading);
    cr.get("fading", fading);
    c.channel.fading = parse_fading(fading);
    cr.get("nakagami_m", c.channel.nakagami_m);
    cr.get("noise_dbm", c.channel.noise_dbm);
    cr.get("coherence_slots", c.channel.coherence_slots);
    cr.finish();
  }
  if (const json* ra = r.child("radio")) {
    ObjectReader rr(*ra, "radio");
    rr.get("packet_bytes", c.radio.packet_bytes);
    rr.get("bit_rate_bps", c.radio.bit_rate_bps);
    rr.get("midpoint_db", c.radio.midpoint_db);
    rr.get("slope_per_db", c.radio.slope_per_db);
    rr.finish();
  }
  if (const json* mac = r.child("mac")) {
    ObjectReader mr(*mac, "mac");
    auto& m = c.mac;
    mr.get("t_rel", m.t_rel);
    mr.get("comm_range", m.comm_range);
    mr.get("slot_s", m.slot_s);
    mr.get("data_period_slots", m.data_period_slots);
    mr.get("control_period_slots", m.control_period_slots);
    mr.get("feedback_window_slots", m.feedback_window_slots);
    mr.get("discovery_burst_s", m.discovery_burst_s);
    mr.get("gps_sigma", m.gps_sigma);
    mr.get("c_ewma", m.c_ewma);
    mr.get("d0", m.d0);
    mr.get("estimate_range_factor", m.estimate_range_factor);
    mr.get("candidate_range_factor", m.candidate_range_factor);
    mr.get("mu_weight", m.mu_weight);
    mr.get("bc2", m.bc2);
    mr.get("retransmit_cap_s", m.retransmit_cap_s);
    mr.get("warmup_s", m.warmup_s);
    mr.get("min_link_attempts", m.min_link_attempts);
    mr.get("control_loss", m.control_loss);
    if (const json* cs = mr.child("csma")) {
      ObjectReader sr(*cs, "mac.csma");
      sr.get("contention_window", m.csma.contention_window);
      sr.get("sense_threshold_dbm", m.csma.sense_threshold_dbm);
      sr.finish();
    }
    if (const json* rt = mr.child("rtdma")) {
      ObjectReader tr(*rt, "mac.rtdma");
      tr.get("frame_slots", m.rtdma.frame_slots);
      tr.get("failure_burst", m.rtdma.failure_burst);
      tr.finish();
    }
    mr.finish();
  }
  if (const json* u = r.child("ukf")) {
    ObjectReader ur(*u, "ukf");
    auto& p = c.ukf;
    ur.get("alpha", p.alpha);
    ur.get("kappa", p.kappa);
    ur.get("beta", p.beta);
    ur.get("pos_noise", p.pos_noise);
    ur.get("accel_noise", p.accel_noise);
    ur.get("gap_noise", p.gap_noise);
    ur.get("v0_walk", p.v0_walk);
    ur.get("time_gap_walk", p.time_gap_walk);
    ur.get("meas_sigma", p.meas_sigma);
    ur.get("outlier_sigma", p.outlier_sigma);
    ur.finish();
  }
  r.finish();
  c.validate();
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["duration_s"] = c.duration_s;
  j["protocol"] = to_string(c.protocol);
  j["road"] = {{"kind", c.road.kind},         {"length", c.road.length},
               {"lanes_a", c.road.lanes_a},   {"speed_a", c.road.speed_a},
               {"lanes_b", c.road.lanes_b},   {"speed_b", c.road.speed_b},
               {"turn_probability", c.road.turn_probability}};
  j["vehicles"] = json::array();
  for (const auto& v : c.vehicles) {
    j["vehicles"].push_back({{"segment", v.segment}, {"lane", v.lane}, {"s", v.s}, {"v", v.v}});
  }
  j["fills"] = json::array();
  for (const auto& f : c.fills) {
    j["fills"].push_back(
        {{"segment", f.segment}, {"lane", f.lane}, {"spacing", f.spacing}, {"jitter", f.jitter}});
  }
  j["flows"] = json::array();
  for (const auto& f : c.flows) {
    json e = {{"segment", f.segment},     {"lane", f.lane},
              {"rate", f.rate},           {"start_s", f.start_s},
              {"v0_spread", f.v0_spread}, {"t_gap_spread", f.t_gap_spread}};
    if (f.end_s < 1e299) e["end_s"] = f.end_s;
    j["flows"].push_back(e);
  }
  j["removals"] = json::array();
  for (const auto& r : c.removals) {
    j["removals"].push_back({{"vehicle", r.vehicle}, {"time_s", r.time_s}});
  }
  j["mobility"] = {{"enabled", c.mobility.enabled},
                   {"lane_change_rate", c.mobility.lane_change_rate},
                   {"idm", idm_json(c.mobility.idm)}};
  j["channel"] = {{"tx_power_dbm", c.channel.tx_power_dbm},
                  {"d_ref", c.channel.d_ref},
                  {"path_loss_ref_db", c.channel.path_loss_ref_db},
                  {"exponent", c.channel.exponent},
                  {"shadowing_sigma_db", c.channel.shadowing_sigma_db},
                  {"fading", fading_name(c.channel.fading)},
                  {"nakagami_m", c.channel.nakagami_m},
                  {"noise_dbm", c.channel.noise_dbm},
                  {"coherence_slots", c.channel.coherence_slots}};
  j["radio"] = {{"packet_bytes", c.radio.packet_bytes},
                {"bit_rate_bps", c.radio.bit_rate_bps},
                {"midpoint_db", c.radio.midpoint_db},
                {"slope_per_db", c.radio.slope_per_db}};
  const auto& m = c.mac;
  j["mac"] = {{"t_rel", m.t_rel},
              {"comm_range", m.comm_range},
              {"slot_s", m.slot_s},
              {"data_period_slots", m.data_period_slots},
              {"control_period_slots", m.control_period_slots},
              {"feedback_window_slots", m.feedback_window_slots},
              {"discovery_burst_s", m.discovery_burst_s},
              {"gps_sigma", m.gps_sigma},
              {"c_ewma", m.c_ewma},
              {"d0", m.d0},
              {"estimate_range_factor", m.estimate_range_factor},
              {"candidate_range_factor", m.candidate_range_factor},
              {"mu_weight", m.mu_weight},
              {"bc2", m.bc2},
              {"retransmit_cap_s", m.retransmit_cap_s},
              {"warmup_s", m.warmup_s},
              {"min_link_attempts", m.min_link_attempts},
              {"control_loss", m.control_loss},
              {"csma",
               {{"contention_window", m.csma.contention_window},
                {"sense_threshold_dbm", m.csma.sense_threshold_dbm}}},
              {"rtdma",
               {{"frame_slots", m.rtdma.frame_slots}, {"failure_burst", m.rtdma.failure_burst}}}};
  const auto& u = c.ukf;
  j["ukf"] = {{"alpha", u.alpha},
              {"kappa", u.kappa},
              {"beta", u.beta},
              {"pos_noise", u.pos_noise},
              {"accel_noise", u.accel_noise},
              {"gap_noise", u.gap_noise},
              {"v0_walk", u.v0_walk},
              {"time_gap_walk", u.time_gap_walk},
              {"meas_sigma", u.meas_sigma},
              {"outlier_sigma", u.outlier_sigma}};
  return j;
}

void ScenarioConfig::validate() const {
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    throw ConfigError("duration_s", "must be finite and >= 0");
  }
  if (!(road.length > 0.0)) throw ConfigError("road.length", "must be > 0");
  if (road.lanes_a < 1) throw ConfigError("road.lanes_a", "must be >= 1");
  if (road.lanes_b < 1) throw ConfigError("road.lanes_b", "must be >= 1");
  if (!(road.speed_a > 0.0)) throw ConfigError("road.speed_a", "must be > 0");
  if (!(road.speed_b > 0.0)) throw ConfigError("road.speed_b", "must be > 0");
  if (!(road.turn_probability >= 0.0 && road.turn_probability <= 1.0)) {
    throw ConfigError("road.turn_probability", "must be in [0, 1]");
  }
  const auto net = road.build();
  auto check_lane = [&](const std::string& path, SegmentId seg, int lane) {
    const auto* s = net.find(seg);
    if (!s) throw ConfigError(path + ".segment", "no such segment");
    if (lane < 0 || lane >= s->lanes()) throw ConfigError(path + ".lane", "lane out of range");
    return s;
  };
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const std::string p = "vehicles[" + std::to_string(i) + "]";
    const auto* s = check_lane(p, vehicles[i].segment, vehicles[i].lane);
    if (!(vehicles[i].s >= 0.0 && vehicles[i].s < s->length())) {
      throw ConfigError(p + ".s", "outside the segment");
    }
  }
  for (std::size_t i = 0; i < fills.size(); ++i) {
    const std::string p = "fills[" + std::to_string(i) + "]";
    check_lane(p, fills[i].segment, fills[i].lane);
    if (!(fills[i].spacing > 0.0)) throw ConfigError(p + ".spacing", "must be > 0");
    if (!(fills[i].jitter >= 0.0 && fills[i].jitter < 0.5)) {
      throw ConfigError(p + ".jitter", "must be in [0, 0.5)");
    }
  }
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const std::string p = "flows[" + std::to_string(i) + "]";
    check_lane(p, flows[i].segment, flows[i].lane);
    if (!(flows[i].rate > 0.0)) throw ConfigError(p + ".rate", "must be > 0");
  }
  for (std::size_t i = 0; i < removals.size(); ++i) {
    if (!(removals[i].time_s >= 0.0)) {
      throw ConfigError("removals[" + std::to_string(i) + "].time_s", "must be >= 0");
    }
  }
  if (!(mobility.lane_change_rate >= 0.0)) {
    throw ConfigError("mobility.lane_change_rate", "must be >= 0");
  }
  {
    mobility::IdmParams idm = mobility.idm;
    if (!(idm.v0 > 0.0)) idm.v0 = 1.0;  // "speed limit" placeholder
    idm.validate();
  }
  channel.validate();
  radio.validate();
  if (!(mac.t_rel > 0.0 && mac.t_rel < 1.0)) throw ConfigError("mac.t_rel", "must be in (0, 1)");
  if (!(mac.comm_range > 0.0)) throw ConfigError("mac.comm_range", "must be > 0");
  if (!(mac.slot_s > 0.0)) throw ConfigError("mac.slot_s", "must be > 0");
  if (mac.data_period_slots < 1) throw ConfigError("mac.data_period_slots", "must be >= 1");
  if (mac.control_period_slots < 1) throw ConfigError("mac.control_period_slots", "must be >= 1");
  if (mac.feedback_window_slots < 1 || mac.feedback_window_slots % mac.control_period_slots != 0) {
    throw ConfigError("mac.feedback_window_slots",
                      "must be a positive multiple of control_period_slots");
  }
  if (!(mac.discovery_burst_s >= 0.0)) throw ConfigError("mac.discovery_burst_s", "must be >= 0");
  if (!(mac.gps_sigma >= 0.0)) throw ConfigError("mac.gps_sigma", "must be >= 0");
  if (!(mac.c_ewma >= 0.0 && mac.c_ewma < 1.0)) throw ConfigError("mac.c_ewma", "must be in [0, 1)");
  if (!(mac.d0 > 0.0)) throw ConfigError("mac.d0", "must be > 0");
  if (!(mac.estimate_range_factor >= 1.0)) {
    throw ConfigError("mac.estimate_range_factor", "must be >= 1");
  }
  if (!(mac.candidate_range_factor >= mac.estimate_range_factor)) {
    throw ConfigError("mac.candidate_range_factor", "must be >= estimate_range_factor");
  }
  if (!(mac.mu_weight >= 0.0 && mac.mu_weight <= 1.0)) {
    throw ConfigError("mac.mu_weight", "must be in [0, 1]");
  }
  if (!(mac.retransmit_cap_s > 0.0)) throw ConfigError("mac.retransmit_cap_s", "must be > 0");
  if (!(mac.warmup_s >= 0.0)) throw ConfigError("mac.warmup_s", "must be >= 0");
  if (mac.min_link_attempts < 1) throw ConfigError("mac.min_link_attempts", "must be >= 1");
  if (!(mac.control_loss >= 0.0 && mac.control_loss < 1.0)) {
    throw ConfigError("mac.control_loss", "must be in [0, 1)");
  }
  if (mac.csma.contention_window < 0) throw ConfigError("mac.csma.contention_window", "must be >= 0");
  if (mac.rtdma.frame_slots < 1) throw ConfigError("mac.rtdma.frame_slots", "must be >= 1");
  if (mac.rtdma.failure_burst < 1) throw ConfigError("mac.rtdma.failure_burst", "must be >= 1");
  ukf.validate();
}

std::int64_t ScenarioConfig::total_slots() const {
  return static_cast<std::int64_t>(std::llround(duration_s / mac.slot_s));
}

double calibrated_tx_power_dbm(const channel::ChannelParams& ch, const channel::RadioModel& radio,
                               double range, double t_rel, double margin_db) {
  const double path_loss =
      ch.path_loss_ref_db + 10.0 * ch.exponent * std::log10(std::max(range, ch.d_ref) / ch.d_ref);
  return ch.noise_dbm + radio.f_inv_db(t_rel) + margin_db + path_loss;
}

// ---------------------------------------------------------------------------
// Presets.

namespace {

ScenarioConfig base(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  c.channel.tx_power_dbm = calibrated_tx_power_dbm(c.channel, c.radio, c.mac.comm_range,
                                                   c.mac.t_rel, 6.0);
  c.mobility.idm.v0 = 0.0;  // follow the speed limit
  return c;
}

ScenarioConfig crossing() {
  ScenarioConfig c = base("crossing");
  c.duration_s = 60.0;
  c.road = RoadSpec{"crossing", 1200.0, 2, 120.0 / 3.6, 1, 40.0 / 3.6, 0.1};
  c.channel.shadowing_sigma_db = 2.0;
  c.mobility.lane_change_rate = 0.02;
  const double spacing_a = 80.0;
  const double spacing_b = 60.0;
  for (SegmentId seg : {0u, 1u}) {
    for (int lane = 0; lane < 2; ++lane) {
      c.fills.push_back({seg, lane, spacing_a, 0.3});
      c.flows.push_back({seg, lane, c.road.speed_a / spacing_a, 0.0, 1e300, 0.05, 0.1});
    }
  }
  for (SegmentId seg : {2u, 3u}) {
    c.fills.push_back({seg, 0, spacing_b, 0.3});
    c.flows.push_back({seg, 0, c.road.speed_b / spacing_b, 0.0, 1e300, 0.05, 0.1});
  }
  return c;
}

ScenarioConfig freeway() {
  ScenarioConfig c = base("freeway");
  c.duration_s = 60.0;
  c.road = RoadSpec{"two_way", 1500.0, 2, 110.0 / 3.6, 1, 40.0 / 3.6, 0.0};
  c.channel.shadowing_sigma_db = 2.0;
  c.mobility.lane_change_rate = 0.02;
  const double spacing = 60.0;
  for (SegmentId seg : {0u, 1u}) {
    for (int lane = 0; lane < 2; ++lane) {
      c.fills.push_back({seg, lane, spacing, 0.3});
      c.flows.push_back({seg, lane, c.road.speed_a / spacing, 0.0, 1e300, 0.1, 0.1});
    }
  }
  return c;
}

ScenarioConfig static_line() {
  ScenarioConfig c = base("static-line");
  c.duration_s = 140.0;
  c.road = RoadSpec{"straight", 1000.0, 1, 30.0, 1, 30.0, 0.0};
  c.mobility.enabled = false;
  for (int i = 0; i < 20; ++i) c.vehicles.push_back({0, 0, 20.0 + 25.0 * i, 0.0});
  return c;
}

ScenarioConfig bc2_departure() {
  ScenarioConfig c = base("bc2-departure");
  c.duration_s = 60.0;
  c.road = RoadSpec{"straight", 1500.0, 1, 30.0, 1, 30.0, 0.0};
  c.mobility.enabled = false;
  c.mac.data_period_slots = 10;
  // Sender, inner receiver (125 m), boundary receiver (148 m), a cluster just
  // past the boundary that both receivers must silence, an empty band, then
  // a dense tail that only the boundary receiver needs silenced.
  for (double x : {100.0, 225.0, 248.0, 270.0, 290.0, 310.0}) c.vehicles.push_back({0, 0, x, 0.0});
  for (int i = 0; i < 25; ++i) c.vehicles.push_back({0, 0, 480.0 + 15.0 * i, 0.0});
  c.removals.push_back({3, 40.0});
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"crossing", "freeway", "static-line", "bc2-departure"};
}

std::string preset_description(const std::string& name) {
  if (name == "crossing") {
    return "two-way roads crossing: 2-lane 120 km/h and 1-lane 40 km/h, ~100 vehicles";
  }
  if (name == "freeway") return "two-way 2-lane freeway at 110 km/h, ~100 vehicles";
  if (name == "static-line") return "20 stationary vehicles on a line, 25 m apart";
  if (name == "bc2-departure") return "stationary line whose boundary receiver leaves at 40 s (31 vehicles)";
  throw NotFoundError("unknown preset '" + name + "'");
}

ScenarioConfig preset(const std::string& name) {
  if (name == "crossing") return crossing();
  if (name == "freeway") return freeway();
  if (name == "static-line") return static_line();
  if (name == "bc2-departure") return bc2_departure();
  throw NotFoundError("unknown preset '" + name + "'");
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("preset")) {
    const std::string name = j.at("preset").get<std::string>();
    json merged = config_to_json(preset(name));
    j.erase("preset");
    merged.merge_patch(j);
    return config_from_json(merged);
  }
  return config_from_json(j);
}

}  // namespace cps::engine
