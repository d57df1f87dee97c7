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
#include "cps/engine/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <unordered_map>

#include "cps/broadcast/control_message.hpp"
#include "cps/broadcast/sender_er.hpp"
#include "cps/broadcast/set_cover.hpp"
#include "cps/channel/power_estimate.hpp"
#include "cps/common/error.hpp"
#include "cps/common/rng.hpp"
#include "cps/gprk/exclusion_region.hpp"
#include "cps/gprk/link_model.hpp"
#include "cps/linklife/initialization.hpp"
#include "cps/linklife/registry.hpp"
#include "cps/scheduler/scheduler.hpp"
#include "cps/tracking/tracker_bank.hpp"

namespace cps::engine {

namespace {

// Stream tags for keyed randomness.
constexpr std::uint64_t kTagGenerate = 0x67656eULL;
constexpr std::uint64_t kTagGps = 0x677073ULL;
constexpr std::uint64_t kTagDeliver = 0x646c76ULL;
constexpr std::uint64_t kTagControlLoss = 0x6c6f7373ULL;
constexpr std::uint64_t kTagBackoff = 0x626b6fULL;
constexpr std::uint64_t kTagReserve = 0x727376ULL;
constexpr std::uint64_t kTagFill = 0x66696c6cULL;
constexpr std::uint64_t kTagFlow = 0x666c6f77ULL;
constexpr std::uint64_t kTagPriority = 0x7072696fULL;

// Distances below this are treated as this when used as a ratio base.
constexpr double kMinLinkDistance = 1.0;

struct Packet {
  Slot generated = 0;
  std::vector<VehicleId> pending;  // receivers still owed this packet
  bool sent = false;
};

struct MacState {
  Slot entered = 0;
  bool has_packet = false;  // CPS and OCPS keep only the newest packet
  Slot packet_generated = 0;
  std::deque<Packet> queue;  // baselines
  channel::PowerEstimate activity;  // beta of this vehicle as its neighbors estimate it
  int tx_since_round = 0;
  Slot last_round = 0;
  int backoff = 0;
  int reserved = -1;
};

struct LinkStats {
  int window_attempts = 0;
  int window_successes = 0;
  double window_interference = 0.0;  // summed over attempts with a SINR draw
  int window_draws = 0;
  std::int64_t attempts = 0;  // post-warmup
  std::int64_t successes = 0;
  gprk::MuUEstimator mu;
  int failed_frames = 0;  // reservation baseline
  explicit LinkStats(double mu_weight) : mu(mu_weight) {}
};

struct TimedPower {
  channel::PowerEstimate est;
  Slot stamp = 0;
};

// What the rest of the network learned from a sender's last control message.
struct Published {
  std::vector<VehicleId> cover;  // receivers whose ERs are signaled
  std::vector<double> cover_K;   // decoded (quantized) K of each
  std::vector<VehicleId> members;  // discrete sender-ER union, sorted
};

// Per-receiver neighborhood at a control round.
struct Heard {
  VehicleId id = 0;
  double distance = 0.0;
  double power_mw = 0.0;  // estimated (geometric) or oracle (physical) power at the receiver
  double path_loss_power_mw = 0.0;
};

class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& config);
  MetricsRecord run();

 private:
  bool scheduled_protocol() const {
    return cfg_.protocol == Protocol::CPS || cfg_.protocol == Protocol::OCPS;
  }
  bool geometric() const { return cfg_.protocol == Protocol::CPS; }
  Slot to_slots(double seconds) const {
    return static_cast<Slot>(std::llround(seconds / cfg_.mac.slot_s));
  }
  std::optional<std::size_t> index_of(VehicleId id) const;
  Vec2 true_position(const mobility::VehicleState& v) const {
    return net_.segment(v.segment).position(v.s_pos, v.lane);
  }

  void place_initial();
  void admit(const mobility::VehicleState& v, Slot t, const char* how);
  void forget(VehicleId id, Slot t, const char* why);
  void step_mobility(Slot t);
  void refresh_positions();
  tracking::Observation observe(std::size_t i, Slot t) const;
  void generate_packets(Slot t);
  bool in_discovery(VehicleId id, Slot t) const;
  void discovery_beacons(Slot t);
  void control_round(Slot t);
  void update_power_estimates(Slot t, const std::vector<bool>& heard);
  void refresh_links(Slot t);
  std::vector<gprk::Candidate> candidates_for(LinkId link, double d_sr, double p_sr,
                                              const std::vector<Heard>& heard,
                                              std::vector<double>& path_loss_mw) const;
  double link_signal_mw(VehicleId s, VehicleId r, std::size_t is, std::size_t ir, Slot t) const;
  void publish(Slot t, const std::vector<bool>& heard);
  broadcast::SenderER discrete_sender_er(VehicleId sender) const;
  std::vector<VehicleId> schedule(Slot t);
  std::vector<VehicleId> schedule_csma(Slot t, const std::vector<VehicleId>& pending);
  void reserve_slot(VehicleId id, Slot t, int avoid);
  void deliver(Slot t, const std::vector<VehicleId>& tx);
  void feedback(Slot t);
  void set_K(LinkId id, double K) { last_K_[id] = K; }
  void finish();

  ScenarioConfig cfg_;
  mobility::RoadNetwork net_;
  channel::RadioModel radio_;
  Slot warmup_slots_;
  Slot burst_slots_;
  std::vector<mobility::VehicleState> vehicles_;  // sorted by id
  std::vector<Vec2> pos_;  // true positions, parallel to vehicles_
  std::vector<Vec2> est_;  // positions as the control plane believes, parallel
  std::map<VehicleId, MacState> mac_;
  std::vector<mobility::FlowGenerator> flows_;
  VehicleId next_id_ = 1;
  std::optional<tracking::TrackerBank> bank_;
  broadcast::LocalFrame frame_;
  std::unordered_map<LinkId, TimedPower, LinkIdHash> power_;  // keyed (source, listener)
  linklife::LinkRegistry registry_;
  std::map<LinkId, std::vector<gprk::Candidate>> candidates_;
  std::map<LinkId, double> signal_mw_;
  std::map<LinkId, LinkStats> stats_;
  std::map<VehicleId, Published> published_;
  std::map<LinkId, std::string> last_method_;
  std::map<LinkId, double> last_K_;
  std::map<Slot, std::vector<VehicleId>> removals_;
  std::int64_t event_bytes_ = 0;
  MetricsRecord rec_;
};

Simulator::Simulator(const ScenarioConfig& config)
    : cfg_(config),
      net_(config.road.build()),
      radio_(config.radio),
      warmup_slots_(0),
      burst_slots_(0),
      registry_(linklife::RetentionPolicy{config.mac.slot_s, 2.0, 60.0, 0.1, 5.0}) {
  cfg_.validate();
  warmup_slots_ = to_slots(cfg_.mac.warmup_s);
  burst_slots_ = to_slots(cfg_.mac.discovery_burst_s);
  rec_.config = cfg_;
  if (geometric()) {
    mobility::IdmParams model = cfg_.mobility.idm;
    if (!(model.v0 > 0.0)) model.v0 = net_.segments().front().speed_limit();
    bank_.emplace(net_, cfg_.ukf, model);
  }
  for (std::size_t k = 0; k < cfg_.flows.size(); ++k) {
    const auto& f = cfg_.flows[k];
    mobility::FlowSpec spec;
    spec.segment = f.segment;
    spec.lane = f.lane;
    spec.rate = f.rate;
    spec.start_s = f.start_s;
    spec.end_s = f.end_s;
    spec.idm = cfg_.mobility.idm;
    spec.v0_spread = f.v0_spread;
    spec.t_gap_spread = f.t_gap_spread;
    spec.seed = hash_keys(cfg_.seed, kTagFlow, k);
    flows_.emplace_back(net_, spec);
  }
  for (const auto& r : cfg_.removals) removals_[to_slots(r.time_s)].push_back(r.vehicle);
}

std::optional<std::size_t> Simulator::index_of(VehicleId id) const {
  auto it = std::lower_bound(vehicles_.begin(), vehicles_.end(), id,
                             [](const auto& v, VehicleId x) { return v.id < x; });
  if (it == vehicles_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - vehicles_.begin());
}

// ---------------------------------------------------------------------------
// Population.

void Simulator::place_initial() {
  std::vector<mobility::VehicleState> vs;
  auto make = [&](SegmentId seg, int lane, double s, double v, std::uint64_t key) {
    mobility::VehicleState st;
    st.id = next_id_++;
    st.segment = seg;
    st.lane = lane;
    st.s_pos = s;
    st.idm = cfg_.mobility.idm;
    const auto& segment = net_.segment(seg);
    if (!(st.idm.v0 > 0.0)) st.idm.v0 = segment.speed_limit();
    StreamRng draw = keyed_rng(cfg_.seed, kTagFill, key);
    st.idm.v0 *= 1.0 + 0.05 * draw.uniform(-1.0, 1.0);
    st.v = cfg_.mobility.enabled ? (v < 0.0 ? st.idm.v0 : v) : 0.0;
    vs.push_back(st);
  };
  for (const auto& v : cfg_.vehicles) make(v.segment, v.lane, v.s, v.v, next_id_);
  for (std::size_t f = 0; f < cfg_.fills.size(); ++f) {
    const auto& fill = cfg_.fills[f];
    const double length = net_.segment(fill.segment).length();
    for (int k = 0;; ++k) {
      StreamRng draw = keyed_rng(cfg_.seed, kTagFill, f, k, 1u);
      const double s = fill.spacing * (k + 0.5 + fill.jitter * draw.uniform(-1.0, 1.0));
      if (s >= length - 1.0) break;
      if (s < 5.0) continue;
      make(fill.segment, fill.lane, s, -1.0, next_id_);
    }
  }
  mobility::assign_leads(vs);
  // Start followers no faster than their leads so the first steps are calm.
  for (auto& v : vs) {
    if (!v.lead) continue;
    auto it = std::find_if(vs.begin(), vs.end(), [&](const auto& o) { return o.id == *v.lead; });
    if (it != vs.end()) {
      const double gap = mobility::gap_between(v, *it);
      if (!(gap > 0.0)) {
        throw ConfigError("vehicles", "vehicles " + std::to_string(v.id) + " and " +
                                          std::to_string(it->id) + " overlap");
      }
      if (gap < mobility::idm_desired_gap(v.v, it->v, v.idm)) v.v = std::min(v.v, it->v);
    }
  }
  for (const auto& v : vs) admit(v, 0, "initial");
}

void Simulator::admit(const mobility::VehicleState& v, Slot t, const char* how) {
  vehicles_.push_back(v);
  MacState m;
  m.entered = t;
  m.last_round = t;
  m.activity.beta = 1.0 / cfg_.mac.data_period_slots;
  m.activity.has_beta = true;
  m.backoff = static_cast<int>(
      keyed_rng(cfg_.seed, kTagBackoff, v.id, t).below(cfg_.mac.csma.contention_window + 1));
  mac_[v.id] = std::move(m);
  rec_.events.push_back({t, "enter", v.id, 0, how});
}

void Simulator::forget(VehicleId id, Slot t, const char* why) {
  mac_.erase(id);
  published_.erase(id);
  if (bank_) bank_->erase(id);
  rec_.events.push_back({t, "leave", id, 0, why});
}

void Simulator::step_mobility(Slot t) {
  if (auto it = removals_.find(t); it != removals_.end()) {
    for (VehicleId id : it->second) {
      auto idx = index_of(id);
      if (!idx) continue;
      vehicles_.erase(vehicles_.begin() + static_cast<std::ptrdiff_t>(*idx));
      forget(id, t, "removed");
    }
    mobility::assign_leads(vehicles_);
  }
  if (cfg_.mobility.enabled && !vehicles_.empty()) {
    mobility::StepParams params;
    params.dt = cfg_.mac.slot_s;
    params.seed = cfg_.seed;
    params.step_index = t;
    params.lane_change_rate = cfg_.mobility.lane_change_rate;
    auto out = mobility::step_traffic(net_, vehicles_, params);
    vehicles_ = std::move(out.vehicles);
    refresh_positions();
    for (const auto& e : out.events) {
      if (e.kind == mobility::EventKind::Exit) {
        forget(e.vehicle, t, "exit");
        continue;
      }
      const bool turn = e.kind == mobility::EventKind::Turn;
      rec_.events.push_back({t, turn ? "turn" : "lane_change", e.vehicle, 0,
                             std::to_string(e.to_segment) + ":" + std::to_string(e.to_lane)});
      // Out-of-cycle control message so neighbors re-center their track.
      if (scheduled_protocol()) {
        event_bytes_ += static_cast<std::int64_t>(broadcast::encoded_size(0, 0));
        if (bank_) {
          if (auto idx = index_of(e.vehicle)) bank_->reset(observe(*idx, t), t);
        }
      }
    }
  }
  const double now = static_cast<double>(t) * cfg_.mac.slot_s;
  for (auto& flow : flows_) {
    for (const auto& v : flow.poll(now, vehicles_, next_id_)) {
      admit(v, t, "flow");
      mobility::assign_leads(vehicles_);
    }
  }
  refresh_positions();
  rec_.summary.max_vehicles =
      std::max(rec_.summary.max_vehicles, static_cast<int>(vehicles_.size()));
}

void Simulator::refresh_positions() {
  pos_.resize(vehicles_.size());
  for (std::size_t i = 0; i < vehicles_.size(); ++i) pos_[i] = true_position(vehicles_[i]);
}

tracking::Observation Simulator::observe(std::size_t i, Slot t) const {
  const auto& v = vehicles_[i];
  StreamRng gps = keyed_rng(cfg_.seed, kTagGps, v.id, t);
  const double ex = gps.normal(0.0, cfg_.mac.gps_sigma);
  const double ey = gps.normal(0.0, cfg_.mac.gps_sigma);
  const Vec2 reported = frame_.from_fixed(frame_.to_fixed(pos_[i] + Vec2{ex, ey}));
  return {v.id, reported, v.segment, v.lane};
}

bool Simulator::in_discovery(VehicleId id, Slot t) const {
  auto it = mac_.find(id);
  return it != mac_.end() && t - it->second.entered < burst_slots_;
}

// ---------------------------------------------------------------------------
// Traffic.

void Simulator::generate_packets(Slot t) {
  const int period = cfg_.mac.data_period_slots;
  const Slot frame = t / period;
  const double range2 = cfg_.mac.comm_range * cfg_.mac.comm_range;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    const VehicleId id = vehicles_[i].id;
    // Generation instants are jittered uniformly within each period.
    const Slot at = frame * period + static_cast<Slot>(hash_keys(cfg_.seed, kTagGenerate, id, frame) %
                                                       static_cast<std::uint64_t>(period));
    if (at != t) continue;
    auto& m = mac_.at(id);
    if (scheduled_protocol()) {
      m.has_packet = true;
      m.packet_generated = t;
      continue;
    }
    Packet p;
    p.generated = t;
    for (std::size_t j = 0; j < vehicles_.size(); ++j) {
      if (j != i && squared_distance(pos_[i], pos_[j]) <= range2) p.pending.push_back(vehicles_[j].id);
    }
    m.queue.push_back(std::move(p));
  }
  if (!scheduled_protocol()) {
    const Slot cap = to_slots(cfg_.mac.retransmit_cap_s);
    for (auto& [id, m] : mac_) {
      while (!m.queue.empty() && t - m.queue.front().generated >= cap) m.queue.pop_front();
    }
  }
}

// ---------------------------------------------------------------------------
// Control plane.

void Simulator::discovery_beacons(Slot t) {
  if (!scheduled_protocol() || t % cfg_.mac.control_period_slots == 0) return;
  std::vector<tracking::Observation> obs;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (!in_discovery(vehicles_[i].id, t)) continue;
    event_bytes_ += static_cast<std::int64_t>(broadcast::encoded_size(0, 0));
    if (bank_) obs.push_back(observe(i, t));
  }
  if (bank_ && !obs.empty()) bank_->observe_all(obs, t);
}

void Simulator::control_round(Slot t) {
  // Which control messages get through this round.
  std::vector<bool> heard(vehicles_.size(), true);
  if (cfg_.mac.control_loss > 0.0) {
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      heard[i] = !keyed_rng(cfg_.seed, kTagControlLoss, vehicles_[i].id, t)
                      .bernoulli(cfg_.mac.control_loss);
    }
  }
  // Transmit probabilities from the activity seen since the last round.
  for (auto& [id, m] : mac_) {
    const Slot span = t - m.last_round;
    if (span > 0) {
      m.activity = channel::update_beta(m.activity, static_cast<double>(m.tx_since_round) /
                                                        static_cast<double>(span));
    }
    m.tx_since_round = 0;
    m.last_round = t;
  }
  if (bank_) {
    std::vector<tracking::Observation> obs;
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      if (heard[i]) obs.push_back(observe(i, t));
    }
    bank_->observe_all(obs, t);
  }
  est_.resize(vehicles_.size());
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    std::optional<Vec2> p = bank_ ? bank_->position(vehicles_[i].id) : std::nullopt;
    est_[i] = p ? *p : pos_[i];
  }
  if (geometric()) update_power_estimates(t, heard);
  refresh_links(t);
  publish(t, heard);
}

void Simulator::update_power_estimates(Slot t, const std::vector<bool>& heard) {
  const double range = cfg_.mac.estimate_range_factor * cfg_.mac.comm_range;
  const double range2 = range * range;
  for (std::size_t c = 0; c < vehicles_.size(); ++c) {
    if (!heard[c]) continue;
    for (std::size_t r = 0; r < vehicles_.size(); ++r) {
      if (r == c || squared_distance(pos_[c], pos_[r]) > range2) continue;
      const LinkId key{vehicles_[c].id, vehicles_[r].id};
      const double sample = channel::received_power_mw(cfg_.channel, key.sender, pos_[c],
                                                       key.receiver, pos_[r], t, cfg_.seed);
      auto& entry = power_[key];
      entry.est = channel::update_power_estimate(entry.est, sample, {});
      entry.stamp = t;
    }
  }
  // Forget pairs that drifted out of the estimation range.
  for (auto it = power_.begin(); it != power_.end();) {
    if (t - it->second.stamp > 10 * cfg_.mac.control_period_slots) {
      it = power_.erase(it);
    } else {
      ++it;
    }
  }
}

double Simulator::link_signal_mw(VehicleId s, VehicleId r, std::size_t is, std::size_t ir,
                                 Slot t) const {
  if (!geometric()) {
    return channel::average_received_power_mw(cfg_.channel, s, pos_[is], r, pos_[ir], t,
                                              cfg_.seed);
  }
  auto it = power_.find(LinkId{s, r});
  if (it != power_.end() && it->second.est.has_power) return it->second.est.power_mw;
  return channel::mean_received_power_mw(cfg_.channel, distance(est_[is], est_[ir]));
}

std::vector<gprk::Candidate> Simulator::candidates_for(LinkId link, double d_sr, double p_sr,
                                                       const std::vector<Heard>& heard,
                                                       std::vector<double>& path_loss_mw) const {
  std::vector<gprk::Candidate> out;
  out.reserve(heard.size());
  path_loss_mw.clear();
  for (const auto& h : heard) {
    if (h.id == link.sender) continue;
    path_loss_mw.push_back(h.path_loss_power_mw);
    const double beta = mac_.at(h.id).activity.beta;
    const double ratio = geometric() ? h.distance / d_sr : p_sr / std::max(h.power_mw, 1e-300);
    out.push_back({h.id, ratio, beta * h.power_mw});
  }
  return out;
}

void Simulator::refresh_links(Slot t) {
  const double range = cfg_.mac.comm_range;
  const double cand_range = cfg_.mac.candidate_range_factor * range;
  const double noise = cfg_.channel.noise_mw();
  const auto model = geometric() ? linklife::InterferenceModel::Geometric
                                 : linklife::InterferenceModel::Physical;

  // Receiver -> senders of its registered links, as of the start of the round.
  std::map<VehicleId, std::vector<VehicleId>> senders_of;
  for (const auto& [id, rec] : registry_.active()) senders_of[id.receiver].push_back(id.sender);

  // Neighborhood of every vehicle that has at least one in-range sender,
  // ordered as the ER rules expect (nearest or strongest first).
  std::vector<std::vector<Heard>> heard(vehicles_.size());
  std::vector<bool> has_sender(vehicles_.size(), false);
  for (std::size_t r = 0; r < vehicles_.size(); ++r) {
    for (std::size_t s = 0; s < vehicles_.size(); ++s) {
      if (s != r && distance(pos_[s], pos_[r]) <= range) {
        has_sender[r] = true;
        break;
      }
    }
  }
  for (std::size_t r = 0; r < vehicles_.size(); ++r) {
    if (!has_sender[r]) continue;
    const VehicleId rid = vehicles_[r].id;
    for (std::size_t c = 0; c < vehicles_.size(); ++c) {
      if (c == r) continue;
      Heard h;
      h.id = vehicles_[c].id;
      if (geometric()) {
        h.distance = distance(est_[c], est_[r]);
        if (h.distance > cand_range) continue;
        h.path_loss_power_mw = channel::mean_received_power_mw(cfg_.channel, h.distance);
        auto it = power_.find(LinkId{h.id, rid});
        h.power_mw = (it != power_.end() && it->second.est.has_power) ? it->second.est.power_mw
                                                                       : h.path_loss_power_mw;
      } else {
        h.distance = distance(pos_[c], pos_[r]);
        if (h.distance > cand_range) continue;
        h.power_mw = channel::average_received_power_mw(cfg_.channel, h.id, pos_[c], rid, pos_[r],
                                                        t, cfg_.seed);
        h.path_loss_power_mw = channel::mean_received_power_mw(cfg_.channel, h.distance);
      }
      heard[r].push_back(h);
    }
    auto& list = heard[r];
    if (geometric()) {
      std::sort(list.begin(), list.end(), [](const Heard& a, const Heard& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
      });
    } else {
      std::sort(list.begin(), list.end(), [](const Heard& a, const Heard& b) {
        return a.power_mw != b.power_mw ? a.power_mw > b.power_mw : a.id < b.id;
      });
    }
  }

  const auto& positions = geometric() ? est_ : pos_;
  std::map<LinkId, bool> in_range;
  for (std::size_t s = 0; s < vehicles_.size(); ++s) {
    for (std::size_t r = 0; r < vehicles_.size(); ++r) {
      if (s == r || distance(pos_[s], pos_[r]) > range) continue;
      const LinkId id{vehicles_[s].id, vehicles_[r].id};
      in_range[id] = true;
      const double d_sr = std::max(kMinLinkDistance, distance(positions[s], positions[r]));
      const double p_sr = link_signal_mw(id.sender, id.receiver, s, r, t);
      signal_mw_[id] = p_sr;
      std::vector<double> path_loss;
      auto cands = candidates_for(id, d_sr, p_sr, heard[r], path_loss);

      const auto& a = vehicles_[s];
      const auto& b = vehicles_[r];
      const Vec2 va = net_.segment(a.segment).heading(a.s_pos) * a.v;
      const Vec2 vb = net_.segment(b.segment).heading(b.s_pos) * b.v;
      const Vec2 sep = pos_[s] - pos_[r];
      const double sep_norm = std::max(sep.norm(), 1e-9);
      const double closing = -((va.x - vb.x) * sep.x + (va.y - vb.y) * sep.y) / sep_norm;
      const bool transient =
          linklife::is_transient(a.segment == b.segment, closing, registry_.policy());

      const auto action = linklife::handle_transient(registry_, id, transient, d_sr, t);
      if (action == linklife::TransientAction::NewLink ||
          action == linklife::TransientAction::Reinitialize) {
        std::vector<linklife::SelfReferenceCandidate> self_refs;
        if (auto it = senders_of.find(id.receiver); it != senders_of.end()) {
          for (VehicleId sj : it->second) {
            if (sj == id.sender) continue;
            const auto js = index_of(sj);
            const auto* rec = registry_.find(LinkId{sj, id.receiver});
            if (!js || !rec) continue;
            self_refs.push_back({sj, rec->model.K, rec->model.t_rel,
                                 distance(positions[*js], positions[r]),
                                 link_signal_mw(sj, id.receiver, *js, r, t),
                                 distance(positions[*js], positions[s]), rec->model.converged});
          }
        }
        std::vector<linklife::NeighborReferenceCandidate> neighbor_refs;
        for (std::size_t j = 0; j < vehicles_.size(); ++j) {
          const double d_senders = distance(positions[j], positions[s]);
          if (d_senders >= cfg_.mac.d0) continue;
          const VehicleId sj = vehicles_[j].id;
          const auto& active = registry_.active();
          for (auto it = active.lower_bound(LinkId{sj, 0});
               it != active.end() && it->first.sender == sj; ++it) {
            const VehicleId rj = it->first.receiver;
            if (rj == id.receiver) continue;
            const auto jr = index_of(rj);
            if (!jr) continue;
            const double d_receivers = distance(positions[*jr], positions[r]);
            if (d_receivers >= cfg_.mac.d0) continue;
            neighbor_refs.push_back({it->first, it->second.model.K, it->second.model.t_rel,
                                     link_signal_mw(sj, rj, j, *jr, t), d_senders, d_receivers,
                                     it->second.model.converged});
          }
        }
        std::vector<linklife::PairwiseCandidate> pairwise;
        pairwise.reserve(cands.size());
        for (std::size_t k = 0; k < cands.size(); ++k) {
          pairwise.push_back({cands[k].id, cands[k].ratio, path_loss[k]});
        }
        linklife::InitInputs in;
        in.self_refs = self_refs;
        in.neighbor_refs = neighbor_refs;
        in.sorted = cands;
        in.pairwise = pairwise;
        in.d0 = cfg_.mac.d0;
        in.noise_mw = noise;
        in.model = model;
        const linklife::NewLink nl{id, cfg_.mac.t_rel, d_sr, p_sr};
        auto init = linklife::initialize_link(nl, in, radio_);
        init.K = broadcast::k_on_wire_grid(init.K);
        if (action == linklife::TransientAction::NewLink) {
          linklife::LinkRecord rec;
          rec.model.link = id;
          rec.model.t_rel = cfg_.mac.t_rel;
          rec.model.c_ewma = cfg_.mac.c_ewma;
          rec.model.K = init.K;
          rec.method = init.method;
          rec.init_distance = d_sr;
          rec.activated_slot = t;
          rec.last_seen_slot = t;
          rec.transient = transient;
          registry_.activate(id, rec);
        } else {
          auto* rec = registry_.find(id);
          rec->model.K = init.K;
          rec->method = init.method;
          rec->init_distance = d_sr;
        }
        last_method_[id] = linklife::to_string(init.method);
        set_K(id, init.K);
        rec_.events.push_back({t,
                               action == linklife::TransientAction::NewLink ? "link_init"
                                                                            : "link_reinit",
                               id.sender, id.receiver, linklife::to_string(init.method)});
      } else if (action == linklife::TransientAction::Restored) {
        auto* rec = registry_.find(id);
        rec->method = linklife::InitMethod::Restored;
        rec->init_distance = d_sr;
        last_method_[id] = linklife::to_string(linklife::InitMethod::Restored);
        set_K(id, rec->model.K);
        rec_.events.push_back({t, "link_restored", id.sender, id.receiver, ""});
      }
      auto* rec = registry_.find(id);
      rec->last_seen_slot = t;
      rec->transient = transient;
      candidates_[id] = std::move(cands);
    }
  }

  std::vector<LinkId> gone;
  for (const auto& [id, rec] : registry_.active()) {
    if (!in_range.count(id)) gone.push_back(id);
  }
  for (const auto& id : gone) {
    registry_.deactivate(id, t);
    candidates_.erase(id);
    signal_mw_.erase(id);
  }
  registry_.collect_garbage(t);
}

broadcast::SenderER Simulator::discrete_sender_er(VehicleId sender) const {
  std::vector<broadcast::ReceiverEr> ers;
  const auto& active = registry_.active();
  for (auto it = active.lower_bound(LinkId{sender, 0});
       it != active.end() && it->first.sender == sender; ++it) {
    broadcast::ReceiverEr er;
    er.receiver = it->first.receiver;
    er.members.push_back(er.receiver);
    const auto cit = candidates_.find(it->first);
    if (cit != candidates_.end()) {
      for (const auto& c : cit->second) {
        if (c.ratio <= it->second.model.K) er.members.push_back(c.id);
      }
    }
    std::sort(er.members.begin(), er.members.end());
    er.members.erase(std::unique(er.members.begin(), er.members.end()), er.members.end());
    ers.push_back(std::move(er));
  }
  return broadcast::build_sender_er(sender, std::move(ers));
}

void Simulator::publish(Slot t, const std::vector<bool>& heard) {
  ControlRow row;
  row.slot = t;
  row.event_bytes = event_bytes_;
  event_bytes_ = 0;
  row.active_links = static_cast<int>(registry_.active().size());
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    const VehicleId id = vehicles_[i].id;
    if (in_discovery(id, t)) continue;
    const auto er = discrete_sender_er(id);
    const auto cover = broadcast::select_signaling_cover(er);

    broadcast::ControlMessage msg;
    msg.sender = id;
    msg.location = geometric() ? est_[i] : pos_[i];
    for (VehicleId r : cover) {
      const auto ir = index_of(r);
      const double K = registry_.find(LinkId{id, r})->model.K;
      msg.descriptors.push_back({ir ? (geometric() ? est_[*ir] : pos_[*ir]) : msg.location,
                                 std::min(K, broadcast::kKMax)});
    }
    const auto bytes = broadcast::encode_control_message(msg, frame_);
    ++row.messages;
    row.cover_receivers += static_cast<int>(cover.size());
    // Identity and location are the signal-map substitute; the oracle
    // variant gets interference relations for free.
    const std::int64_t signal = geometric() ? 13 : 0;
    row.signal_bytes += signal;
    row.er_bytes += static_cast<std::int64_t>(bytes.size()) - signal;
    if (!heard[i]) continue;
    const auto decoded = broadcast::decode_control_message(bytes, frame_);
    Published p;
    p.cover = cover;
    for (const auto& d : decoded.descriptors) p.cover_K.push_back(d.K);
    p.members = er.union_members();
    published_[id] = std::move(p);
  }
  rec_.control.push_back(row);
}

// ---------------------------------------------------------------------------
// Channel access.

std::vector<VehicleId> Simulator::schedule(Slot t) {
  std::vector<VehicleId> pending;
  for (const auto& v : vehicles_) {
    const auto& m = mac_.at(v.id);
    if (scheduled_protocol()) {
      if (m.has_packet && !in_discovery(v.id, t)) pending.push_back(v.id);
    } else if (!m.queue.empty()) {
      pending.push_back(v.id);
    }
  }
  if (pending.empty()) return {};

  if (cfg_.protocol == Protocol::CSMA) return schedule_csma(t, pending);
  if (cfg_.protocol == Protocol::RTDMA) {
    std::vector<VehicleId> tx;
    const int phase = static_cast<int>(t % cfg_.mac.rtdma.frame_slots);
    for (VehicleId id : pending) {
      if (mac_.at(id).reserved == phase) tx.push_back(id);
    }
    return tx;
  }

  const auto prios = scheduler::slot_priorities(pending, t, hash_keys(cfg_.seed, kTagPriority));
  if (cfg_.protocol == Protocol::OCPS) {
    auto member = [&](VehicleId a, VehicleId b) {
      auto it = published_.find(a);
      return it != published_.end() &&
             std::binary_search(it->second.members.begin(), it->second.members.end(), b);
    };
    return scheduler::select_transmitters_lazy(
               pending, prios, [&](VehicleId a, VehicleId b) { return member(a, b) || member(b, a); },
               t)
        .transmitters;
  }

  // Geometric sender ERs around the currently estimated receiver positions.
  struct Geo {
    Vec2 at;
    double reach = 0.0;
    std::vector<scheduler::Disk> disks;
  };
  std::map<VehicleId, Geo> geo;
  auto est_of = [&](VehicleId id) -> std::optional<Vec2> {
    if (auto p = bank_->position(id)) return p;
    if (auto i = index_of(id)) return pos_[*i];
    return std::nullopt;
  };
  for (VehicleId id : pending) {
    Geo g;
    g.at = *est_of(id);
    if (auto it = published_.find(id); it != published_.end()) {
      const auto& p = it->second;
      for (std::size_t k = 0; k < p.cover.size(); ++k) {
        const auto r = est_of(p.cover[k]);
        if (!r) continue;
        const double d = std::max(kMinLinkDistance, distance(g.at, *r));
        const double radius = p.cover_K[k] * d;
        g.disks.push_back({*r, radius});
        g.reach = std::max(g.reach, d + radius);
      }
    }
    geo.emplace(id, std::move(g));
  }
  auto conflict = [&](VehicleId a, VehicleId b) {
    const auto& ga = geo.at(a);
    const auto& gb = geo.at(b);
    const double d = distance(ga.at, gb.at);
    if (d > ga.reach && d > gb.reach) return false;
    return scheduler::in_disks(gb.at, ga.disks) || scheduler::in_disks(ga.at, gb.disks);
  };
  return scheduler::select_transmitters_lazy(pending, prios, conflict, t).transmitters;
}

std::vector<VehicleId> Simulator::schedule_csma(Slot t, const std::vector<VehicleId>& pending) {
  const double threshold = channel::dbm_to_mw(cfg_.mac.csma.sense_threshold_dbm);
  std::vector<std::pair<int, VehicleId>> order;
  for (VehicleId id : pending) order.emplace_back(mac_.at(id).backoff, id);
  std::sort(order.begin(), order.end());

  std::vector<std::pair<int, std::size_t>> started;  // (mini-slot, vehicle index)
  std::vector<VehicleId> tx;
  for (const auto& [counter, id] : order) {
    const std::size_t i = *index_of(id);
    // Carrier sense: the channel turns busy at the first mini-slot where the
    // summed power of transmissions already under way exceeds the threshold.
    double sensed = 0.0;
    std::optional<int> busy_at;
    for (const auto& [start, j] : started) {
      if (start >= counter) break;
      sensed += channel::average_received_power_mw(cfg_.channel, vehicles_[j].id, pos_[j], id,
                                                   pos_[i], t, cfg_.seed);
      if (sensed >= threshold) {
        busy_at = start;
        break;
      }
    }
    if (busy_at) {
      mac_.at(id).backoff = counter - *busy_at;
      continue;
    }
    started.emplace_back(counter, i);
    tx.push_back(id);
  }
  for (VehicleId id : tx) {
    mac_.at(id).backoff = static_cast<int>(keyed_rng(cfg_.seed, kTagBackoff, id, t)
                                               .below(cfg_.mac.csma.contention_window + 1));
  }
  std::sort(tx.begin(), tx.end());
  return tx;
}

void Simulator::reserve_slot(VehicleId id, Slot t, int avoid) {
  const int frame = cfg_.mac.rtdma.frame_slots;
  const std::size_t i = *index_of(id);
  std::vector<bool> used(static_cast<std::size_t>(frame), false);
  for (std::size_t j = 0; j < vehicles_.size(); ++j) {
    if (j == i || distance(pos_[i], pos_[j]) > cfg_.mac.comm_range) continue;
    const int r = mac_.at(vehicles_[j].id).reserved;
    if (r >= 0) used[static_cast<std::size_t>(r)] = true;
  }
  if (avoid >= 0) used[static_cast<std::size_t>(avoid)] = true;
  std::vector<int> free;
  for (int k = 0; k < frame; ++k) {
    if (!used[static_cast<std::size_t>(k)]) free.push_back(k);
  }
  StreamRng rng = keyed_rng(cfg_.seed, kTagReserve, id, t);
  const int pick = free.empty() ? static_cast<int>(rng.below(static_cast<std::uint64_t>(frame)))
                                : free[rng.below(free.size())];
  mac_.at(id).reserved = pick;
  rec_.events.push_back({t, "reserve", id, 0, std::to_string(pick)});
}

// ---------------------------------------------------------------------------
// Data plane.

void Simulator::deliver(Slot t, const std::vector<VehicleId>& tx) {
  SlotRow row;
  row.slot = t;
  row.transmitters = static_cast<int>(tx.size());
  const double range2 = cfg_.mac.comm_range * cfg_.mac.comm_range;
  const double noise = cfg_.channel.noise_mw();
  const bool measured = t >= warmup_slots_;

  std::vector<std::size_t> txi;
  for (VehicleId id : tx) txi.push_back(*index_of(id));

  // Power of every transmitter at every vehicle that hears at least one.
  std::map<std::size_t, std::vector<double>> rx_power;
  for (std::size_t a = 0; a < txi.size(); ++a) {
    for (std::size_t r = 0; r < vehicles_.size(); ++r) {
      if (r == txi[a] || squared_distance(pos_[txi[a]], pos_[r]) > range2) continue;
      if (rx_power.count(r)) continue;
      std::vector<double> p(txi.size(), 0.0);
      for (std::size_t b = 0; b < txi.size(); ++b) {
        if (txi[b] == r) continue;
        p[b] = channel::received_power_mw(cfg_.channel, tx[b], pos_[txi[b]], vehicles_[r].id,
                                          pos_[r], t, cfg_.seed);
      }
      rx_power.emplace(r, std::move(p));
    }
  }

  for (std::size_t a = 0; a < txi.size(); ++a) {
    const VehicleId s = tx[a];
    auto& m = mac_.at(s);
    ++m.tx_since_round;
    bool any_failure_burst = false;
    Packet* packet = (!scheduled_protocol() && !m.queue.empty()) ? &m.queue.front() : nullptr;
    for (std::size_t r = 0; r < vehicles_.size(); ++r) {
      if (r == txi[a] || squared_distance(pos_[txi[a]], pos_[r]) > range2) continue;
      const VehicleId rid = vehicles_[r].id;
      const LinkId link{s, rid};
      auto sit = stats_.find(link);
      if (sit == stats_.end()) sit = stats_.emplace(link, LinkStats(cfg_.mac.mu_weight)).first;
      auto& st = sit->second;
      bool ok = false;
      const bool busy = std::binary_search(tx.begin(), tx.end(), rid);
      if (!busy) {
        const auto& p = rx_power.at(r);
        double interference = 0.0;
        for (std::size_t b = 0; b < p.size(); ++b) {
          if (b != a) interference += p[b];
        }
        const double sinr = p[a] / (noise + interference);
        ok = keyed_rng(cfg_.seed, kTagDeliver, s, rid, t).bernoulli(radio_.f(sinr));
        st.window_interference += interference;
        ++st.window_draws;
      }
      ++st.window_attempts;
      ++row.attempts;
      if (ok) {
        ++st.window_successes;
        ++row.deliveries;
      }
      if (measured) {
        ++st.attempts;
        if (ok) ++st.successes;
      }
      if (ok && measured) {
        if (scheduled_protocol()) {
          rec_.delays_s.push_back(static_cast<double>(t - m.packet_generated + 1) *
                                  cfg_.mac.slot_s);
        } else if (packet) {
          auto pit = std::find(packet->pending.begin(), packet->pending.end(), rid);
          if (pit != packet->pending.end()) {
            rec_.delays_s.push_back(static_cast<double>(t - packet->generated + 1) *
                                    cfg_.mac.slot_s);
          }
        }
      }
      if (packet && ok) {
        auto pit = std::find(packet->pending.begin(), packet->pending.end(), rid);
        if (pit != packet->pending.end()) packet->pending.erase(pit);
      }
      if (cfg_.protocol == Protocol::RTDMA) {
        st.failed_frames = ok ? 0 : st.failed_frames + 1;
        if (st.failed_frames >= cfg_.mac.rtdma.failure_burst) any_failure_burst = true;
      }
    }
    if (scheduled_protocol()) {
      m.has_packet = false;
    } else if (packet) {
      // Receivers that left the range are no longer owed the packet.
      const std::size_t si = txi[a];
      std::erase_if(packet->pending, [&](VehicleId rid) {
        auto ri = index_of(rid);
        return !ri || squared_distance(pos_[si], pos_[*ri]) > range2;
      });
      if (packet->pending.empty()) m.queue.pop_front();
    }
    if (any_failure_burst) {
      const int old = m.reserved;
      reserve_slot(s, t, old);
      for (auto it = stats_.lower_bound(LinkId{s, 0}); it != stats_.end() && it->first.sender == s;
           ++it) {
        it->second.failed_frames = 0;
      }
    }
  }
  rec_.slots.push_back(row);
}

// ---------------------------------------------------------------------------
// Reliability feedback.

void Simulator::feedback(Slot t) {
  const Slot window_end = t + 1;
  std::map<LinkId, double> budget;
  for (auto& [id, rec] : registry_.active()) {
    auto sit = stats_.find(id);
    if (sit == stats_.end() || sit->second.window_attempts == 0) continue;
    auto& st = sit->second;
    // Add-half estimate: a perfect window of n attempts reads below 1.
    const double Y = (static_cast<double>(st.window_successes) + 0.5) /
                     (static_cast<double>(st.window_attempts) + 1.0);
    rec.model = gprk::update_ewma(rec.model, Y);
    if (st.window_draws > 0) st.mu.observe(st.window_interference / st.window_draws);
    const double signal = signal_mw_.count(id) ? signal_mw_.at(id) : 0.0;
    if (!(signal > 0.0)) continue;
    const auto b =
        gprk::compute_delta_I(rec.model, gprk::interference_axis(radio_, signal), st.mu.value());
    budget[id] = b.delta_I;
  }

  std::map<LinkId, std::pair<double, std::string>> adapted;  // K before, rule
  const broadcast::BroadcastOptions opts{cfg_.mac.bc2};
  VehicleId current = 0;
  bool have_current = false;
  broadcast::SenderER er;
  for (const auto& [id, delta] : budget) {
    if (!have_current || id.sender != current) {
      er = discrete_sender_er(id.sender);
      current = id.sender;
      have_current = true;
    }
    auto* rec = registry_.find(id);
    const auto cit = candidates_.find(id);
    const std::vector<gprk::Candidate> empty;
    const auto& cands = cit != candidates_.end() ? cit->second : empty;
    const double before = rec->model.K;
    const auto res =
        broadcast::adapt_receiver_er_broadcast(er, id.receiver, before, delta, cands, opts);
    // Kept on the wire grid so membership matches what the scheduler enforces.
    const double K_grid = broadcast::k_on_wire_grid(res.K);
    rec->model.K = K_grid;
    set_K(id, K_grid);
    adapted[id] = {before, broadcast::to_string(res.rule)};
  }

  for (auto& [id, st] : stats_) {
    if (st.window_attempts > 0) {
      LinkWindowRow row;
      row.window_end = window_end;
      row.link = id;
      row.attempts = st.window_attempts;
      row.successes = st.window_successes;
      if (const auto* rec = registry_.find(id)) {
        row.K_after = rec->model.K;
        row.K_before = rec->model.K;
        if (auto it = adapted.find(id); it != adapted.end()) {
          row.K_before = it->second.first;
          row.rule = it->second.second;
        }
      }
      rec_.windows.push_back(row);
    }
    st.window_attempts = 0;
    st.window_successes = 0;
    st.window_interference = 0.0;
    st.window_draws = 0;
  }
}

void Simulator::finish() {
  for (const auto& [id, st] : stats_) {
    LinkTotalRow row;
    row.link = id;
    row.attempts = st.attempts;
    row.successes = st.successes;
    if (auto it = last_method_.find(id); it != last_method_.end()) row.init_method = it->second;
    if (auto it = last_K_.find(id); it != last_K_.end()) row.final_K = it->second;
    rec_.links.push_back(row);
  }
  rec_.summary = summarize(rec_);
}

MetricsRecord Simulator::run() {
  const Slot total = cfg_.total_slots();
  if (total > 0) {
    place_initial();
    refresh_positions();
    rec_.summary.max_vehicles = static_cast<int>(vehicles_.size());
  }
  for (Slot t = 0; t < total; ++t) {
    if (t > 0) step_mobility(t);
    if (cfg_.protocol == Protocol::RTDMA) {
      for (const auto& v : vehicles_) {
        if (mac_.at(v.id).reserved < 0) reserve_slot(v.id, t, -1);
      }
    }
    // Parked vehicles: the filter only averages fixes.
    if (bank_ && cfg_.mobility.enabled) bank_->predict_all(cfg_.mac.slot_s);
    generate_packets(t);
    if (scheduled_protocol()) {
      discovery_beacons(t);
      if (t % cfg_.mac.control_period_slots == 0) control_round(t);
    }
    const auto tx = schedule(t);
    deliver(t, tx);
    if (scheduled_protocol() && (t + 1) % cfg_.mac.feedback_window_slots == 0) feedback(t);
  }
  finish();
  return std::move(rec_);
}

}  // namespace

MetricsRecord run(const ScenarioConfig& config) {
  Simulator sim(config);
  return sim.run();
}

}  // namespace cps::engine
