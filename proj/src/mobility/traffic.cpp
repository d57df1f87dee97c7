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
#include "cps/mobility/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cps/common/error.hpp"

namespace cps::mobility {

double gap_between(const VehicleState& follower, const VehicleState& lead) {
  return lead.s_pos - lead.length - follower.s_pos;
}

namespace {

// Indices ordered by (segment, lane, s descending, id).
std::vector<std::size_t> lane_order(std::span<const VehicleState> vs) {
  std::vector<std::size_t> order(vs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = vs[a];
    const auto& y = vs[b];
    if (x.segment != y.segment) return x.segment < y.segment;
    if (x.lane != y.lane) return x.lane < y.lane;
    if (x.s_pos != y.s_pos) return x.s_pos > y.s_pos;
    return x.id < y.id;
  });
  return order;
}

// Index of each vehicle's lead, or -1.
std::vector<std::ptrdiff_t> lead_indices(std::span<const VehicleState> vs) {
  const auto order = lane_order(vs);
  std::vector<std::ptrdiff_t> lead(vs.size(), -1);
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& v = vs[order[k]];
    const auto& prev = vs[order[k - 1]];
    if (prev.segment == v.segment && prev.lane == v.lane) {
      lead[order[k]] = static_cast<std::ptrdiff_t>(order[k - 1]);
    }
  }
  return lead;
}

void check_gaps(std::span<const VehicleState> vs, const std::vector<std::ptrdiff_t>& lead) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (lead[i] < 0) continue;
    const auto& v = vs[i];
    const auto& l = vs[static_cast<std::size_t>(lead[i])];
    const double g = gap_between(v, l);
    if (!(g > 0.0)) {
      throw CollisionError("vehicle " + std::to_string(v.id) + " collided with " +
                           std::to_string(l.id) + " (gap " + std::to_string(g) + " m)");
    }
  }
}

struct Neighbors {
  const VehicleState* ahead = nullptr;
  const VehicleState* behind = nullptr;
};

Neighbors neighbors_in_lane(std::span<const VehicleState> vs, VehicleId self, SegmentId seg,
                            int lane, double s) {
  Neighbors n;
  for (const auto& o : vs) {
    if (o.id == self || o.segment != seg || o.lane != lane) continue;
    if (o.s_pos >= s) {
      if (!n.ahead || o.s_pos < n.ahead->s_pos) n.ahead = &o;
    } else if (!n.behind || o.s_pos > n.behind->s_pos) {
      n.behind = &o;
    }
  }
  return n;
}

// Moving `v` to (seg, lane, s) keeps both new gaps at least the desired gap.
bool insertion_safe(std::span<const VehicleState> vs, const VehicleState& v, SegmentId seg,
                    int lane, double s) {
  const Neighbors n = neighbors_in_lane(vs, v.id, seg, lane, s);
  if (n.ahead) {
    const double gap = n.ahead->s_pos - n.ahead->length - s;
    if (gap < idm_desired_gap(v.v, n.ahead->v, v.idm)) return false;
  }
  if (n.behind) {
    const double gap = s - v.length - n.behind->s_pos;
    if (gap < idm_desired_gap(n.behind->v, v.v, n.behind->idm)) return false;
  }
  return true;
}

double coin(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return static_cast<double>(hash_keys(seed, a, b, c) >> 11) * 0x1.0p-53;
}

}  // namespace

void assign_leads(std::span<VehicleState> vehicles) {
  const auto lead = lead_indices(vehicles);
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    if (lead[i] < 0) {
      vehicles[i].lead.reset();
    } else {
      vehicles[i].lead = vehicles[static_cast<std::size_t>(lead[i])].id;
    }
  }
}

StepOutput step_traffic(const RoadNetwork& net, std::span<const VehicleState> vehicles,
                        const StepParams& params, std::span<const LaneChangeRequest> requests) {
  if (!(params.dt > 0.0)) throw DomainError("step_traffic: dt must be > 0");
  StepOutput out;
  out.vehicles.assign(vehicles.begin(), vehicles.end());
  auto& vs = out.vehicles;
  if (vs.empty()) return out;
  const auto lead = lead_indices(vs);
  check_gaps(vs, lead);

  // Accelerations from the pre-step snapshot.
  std::vector<double> acc(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& v = vs[i];
    if (lead[i] >= 0) {
      const auto& l = vs[static_cast<std::size_t>(lead[i])];
      acc[i] = idm_accel_acc(gap_between(v, l), v.v, l.v, l.accel, v.idm);
    } else {
      acc[i] = idm_accel_free(v.v, v.idm);
    }
  }

  std::vector<double> s_old(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto& v = vs[i];
    s_old[i] = v.s_pos;
    v.accel = acc[i];
    v.v = std::max(0.0, v.v + acc[i] * params.dt);
    v.s_pos += v.v * params.dt;
  }

  // Turns at crossing points passed during this step.
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto& v = vs[i];
    const auto& seg = net.segment(v.segment);
    for (std::size_t t = 0; t < seg.turns.size(); ++t) {
      const auto& turn = seg.turns[t];
      if (!(s_old[i] < turn.at_s && v.s_pos >= turn.at_s)) continue;
      if (coin(params.seed, v.id, v.segment, t + 1) >= turn.probability) continue;
      const auto& target = net.segment(turn.to_segment);
      const int lane = std::min(v.lane, target.lanes() - 1);
      const double s = turn.to_s + (v.s_pos - turn.at_s);
      if (!insertion_safe(vs, v, target.id(), lane, s)) continue;
      out.events.push_back({v.id, EventKind::Turn, v.segment, v.lane, target.id(), lane});
      v.segment = target.id();
      v.lane = lane;
      v.s_pos = s;
      break;
    }
  }

  // Lane changes: explicit requests first, then spontaneous ones.
  auto try_lane_change = [&](VehicleState& v, int target) {
    const auto& seg = net.segment(v.segment);
    if (seg.lanes() < 2) return;
    if (target < 0) {
      if (v.lane == 0) {
        target = 1;
      } else if (v.lane == seg.lanes() - 1) {
        target = v.lane - 1;
      } else {
        target = coin(params.seed, v.id, static_cast<std::uint64_t>(params.step_index), 11) < 0.5
                     ? v.lane - 1
                     : v.lane + 1;
      }
    }
    if (target == v.lane || target < 0 || target >= seg.lanes()) return;
    if (!insertion_safe(vs, v, v.segment, target, v.s_pos)) return;
    out.events.push_back({v.id, EventKind::LaneChange, v.segment, v.lane, v.segment, target});
    v.lane = target;
  };
  for (const auto& r : requests) {
    auto it = std::find_if(vs.begin(), vs.end(), [&](const auto& o) { return o.id == r.vehicle; });
    if (it != vs.end()) try_lane_change(*it, r.target_lane);
  }
  if (params.lane_change_rate > 0.0) {
    const double p = params.lane_change_rate * params.dt;
    for (auto& v : vs) {
      if (coin(params.seed, v.id, static_cast<std::uint64_t>(params.step_index), 7) < p) {
        try_lane_change(v, -1);
      }
    }
  }

  // Exits at segment ends.
  std::vector<VehicleState> kept;
  kept.reserve(vs.size());
  for (auto& v : vs) {
    if (v.s_pos >= net.segment(v.segment).length()) {
      out.events.push_back({v.id, EventKind::Exit, v.segment, v.lane, v.segment, v.lane});
    } else {
      kept.push_back(std::move(v));
    }
  }
  vs = std::move(kept);
  assign_leads(vs);
  check_gaps(vs, lead_indices(vs));
  return out;
}

FlowGenerator::FlowGenerator(const RoadNetwork& net, FlowSpec spec)
    : net_(&net), spec_(std::move(spec)), rng_(spec_.seed) {
  const auto& seg = net.segment(spec_.segment);  // throws on invalid id
  if (!(spec_.rate > 0.0)) throw ConfigError("flows.rate", "must be > 0");
  if (spec_.lane < 0 || spec_.lane >= seg.lanes()) throw ConfigError("flows.lane", "lane out of range");
  next_arrival_ = spec_.start_s + rng_.exponential(spec_.rate);
}

void FlowGenerator::draw_until(double now) {
  while (next_arrival_ <= now && next_arrival_ < spec_.end_s) {
    arrivals_.push_back(next_arrival_);
    pending_.push_back(next_arrival_);
    next_arrival_ += rng_.exponential(spec_.rate);
  }
}

std::vector<VehicleState> FlowGenerator::poll(double now, std::span<const VehicleState> existing,
                                              VehicleId& next_id) {
  draw_until(now);
  std::vector<VehicleState> inserted;
  if (pending_.empty()) return inserted;

  const auto& seg = net_->segment(spec_.segment);
  IdmParams idm = spec_.idm;
  if (!(idm.v0 > 0.0)) idm.v0 = seg.speed_limit();
  // Per-arrival parameter draws come from a keyed stream so the arrival
  // process itself stays a plain exponential sequence.
  StreamRng draw = keyed_rng(spec_.seed, arrivals_.size() - pending_.size(), 0x5eedULL);
  idm.v0 *= 1.0 + spec_.v0_spread * draw.uniform(-1.0, 1.0);
  idm.T_gap *= 1.0 + spec_.t_gap_spread * draw.uniform(-1.0, 1.0);

  VehicleState v;
  v.segment = spec_.segment;
  v.lane = spec_.lane;
  v.s_pos = 0.0;
  v.idm = idm;
  v.v = idm.v0;
  const Neighbors n = neighbors_in_lane(existing, kMaxVehicleId, v.segment, v.lane, 0.0);
  if (n.ahead) {
    const double gap = n.ahead->s_pos - n.ahead->length;
    if (gap < idm.s0) return inserted;  // deferred
    if (gap < idm_desired_gap(v.v, n.ahead->v, idm)) v.v = std::min(idm.v0, n.ahead->v);
  }
  v.id = next_id++;
  pending_.erase(pending_.begin());
  inserted.push_back(v);
  return inserted;
}

}  // namespace cps::mobility
