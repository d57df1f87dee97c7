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
#include "cps/scheduler/scheduler.hpp"

#include <algorithm>
#include <numeric>

#include "cps/common/rng.hpp"

namespace cps::scheduler {

std::size_t ConflictGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adjacency) n += a.size();
  return n / 2;
}

bool ConflictGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto& adj = adjacency[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

ConflictGraph build_conflict_graph(std::vector<VehicleId> senders,
                                   const MembershipFn& in_sender_er) {
  std::sort(senders.begin(), senders.end());
  senders.erase(std::unique(senders.begin(), senders.end()), senders.end());
  ConflictGraph g;
  g.vertices = std::move(senders);
  g.adjacency.assign(g.vertices.size(), {});
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < g.vertices.size(); ++j) {
      const VehicleId a = g.vertices[i];
      const VehicleId b = g.vertices[j];
      if (in_sender_er(a, b) || in_sender_er(b, a)) {
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
      }
    }
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

bool in_disks(Vec2 p, std::span<const Disk> disks) {
  for (const auto& d : disks) {
    if (squared_distance(p, d.center) <= d.radius * d.radius) return true;
  }
  return false;
}

ConflictGraph build_conflict_graph(std::span<const GeometricSenderEr> ers,
                                   const std::function<Vec2(VehicleId)>& location) {
  std::vector<VehicleId> ids;
  for (const auto& e : ers) ids.push_back(e.sender);
  std::vector<std::size_t> order(ers.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ers[a].sender < ers[b].sender; });
  auto find = [&](VehicleId v) -> const GeometricSenderEr* {
    auto it = std::lower_bound(order.begin(), order.end(), v, [&](std::size_t i, VehicleId x) {
      return ers[i].sender < x;
    });
    return it == order.end() || ers[*it].sender != v ? nullptr : &ers[*it];
  };
  return build_conflict_graph(std::move(ids), [&](VehicleId a, VehicleId b) {
    const GeometricSenderEr* e = find(a);
    return e && in_disks(location(b), e->receiver_disks);
  });
}

std::vector<std::uint64_t> slot_priorities(std::span<const VehicleId> ids, Slot slot,
                                           std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  out.reserve(ids.size());
  for (VehicleId id : ids) out.push_back(hash_keys(seed, id, static_cast<std::uint64_t>(slot)));
  return out;
}

std::vector<std::size_t> priority_order(std::span<const VehicleId> ids,
                                        std::span<const std::uint64_t> priorities) {
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (priorities[a] != priorities[b]) return priorities[a] > priorities[b];
    return ids[a] < ids[b];
  });
  return order;
}

SlotSchedule select_transmitters(const ConflictGraph& g, std::span<const std::uint64_t> priorities,
                                 Slot slot) {
  SlotSchedule s;
  s.slot = slot;
  s.priorities.assign(priorities.begin(), priorities.end());
  std::vector<bool> admitted(g.size(), false);
  for (std::size_t v : priority_order(g.vertices, priorities)) {
    bool ok = true;
    for (std::size_t u : g.adjacency[v]) {
      if (admitted[u]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      admitted[v] = true;
      s.transmitters.push_back(g.vertices[v]);
    }
  }
  return s;
}

SlotSchedule select_transmitters_lazy(std::span<const VehicleId> ids,
                                      std::span<const std::uint64_t> priorities,
                                      const std::function<bool(VehicleId, VehicleId)>& conflict,
                                      Slot slot) {
  SlotSchedule s;
  s.slot = slot;
  s.priorities.assign(priorities.begin(), priorities.end());
  for (std::size_t v : priority_order(ids, priorities)) {
    bool ok = true;
    for (VehicleId t : s.transmitters) {
      if (conflict(ids[v], t)) {
        ok = false;
        break;
      }
    }
    if (ok) s.transmitters.push_back(ids[v]);
  }
  return s;
}

namespace {

std::vector<bool> membership(const ConflictGraph& g, std::span<const VehicleId> set) {
  std::vector<bool> in(g.size(), false);
  for (VehicleId v : set) {
    auto it = std::lower_bound(g.vertices.begin(), g.vertices.end(), v);
    if (it != g.vertices.end() && *it == v) in[it - g.vertices.begin()] = true;
  }
  return in;
}

}  // namespace

bool is_independent(const ConflictGraph& g, std::span<const VehicleId> set) {
  const auto in = membership(g, set);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!in[v]) continue;
    for (std::size_t u : g.adjacency[v]) {
      if (in[u]) return false;
    }
  }
  return true;
}

bool is_maximal(const ConflictGraph& g, std::span<const VehicleId> set) {
  const auto in = membership(g, set);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (in[v]) continue;
    bool blocked = false;
    for (std::size_t u : g.adjacency[v]) blocked = blocked || in[u];
    if (!blocked) return false;
  }
  return true;
}

}  // namespace cps::scheduler
