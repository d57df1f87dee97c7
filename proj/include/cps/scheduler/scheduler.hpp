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
#include <functional>
#include <span>
#include <vector>

#include "cps/common/geometry.hpp"
#include "cps/common/ids.hpp"

namespace cps::scheduler {

/// Undirected conflict graph over vehicles with pending transmissions.
/// Vertices are sorted by id; adjacency lists hold vertex indices.
struct ConflictGraph {
  std::vector<VehicleId> vertices;
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t size() const { return vertices.size(); }
  std::size_t edge_count() const;
  bool has_edge(std::size_t a, std::size_t b) const;
};

/// in_sender_er(a, b): vehicle b lies in a's sender ER.
using MembershipFn = std::function<bool(VehicleId a, VehicleId b)>;

/// Edge (a, b) iff b is in a's sender ER or a is in b's.
ConflictGraph build_conflict_graph(std::vector<VehicleId> senders, const MembershipFn& in_sender_er);

/// A receiver ER as seen by other vehicles: a disk of radius D(S,R)*K
/// around the estimated receiver position.
struct Disk {
  Vec2 center;
  double radius = 0.0;
};

struct GeometricSenderEr {
  VehicleId sender = 0;
  std::vector<Disk> receiver_disks;
};

bool in_disks(Vec2 p, std::span<const Disk> disks);

/// Conflict graph from geometric sender ERs and estimated locations.
/// `location(v)` must be defined for every sender.
ConflictGraph build_conflict_graph(std::span<const GeometricSenderEr> ers,
                                   const std::function<Vec2(VehicleId)>& location);

/// 64-bit hash priority of each vehicle for the slot.
std::vector<std::uint64_t> slot_priorities(std::span<const VehicleId> ids, Slot slot,
                                           std::uint64_t seed);

struct SlotSchedule {
  Slot slot = 0;
  std::vector<VehicleId> transmitters;  // in admission order
  std::vector<std::uint64_t> priorities;
};

/// Vertex order by descending priority, ties by ascending id.
std::vector<std::size_t> priority_order(std::span<const VehicleId> ids,
                                        std::span<const std::uint64_t> priorities);

/// Greedy maximal independent set by descending priority.
SlotSchedule select_transmitters(const ConflictGraph& g, std::span<const std::uint64_t> priorities,
                                 Slot slot = 0);

/// Same selection without materializing the graph: a vehicle is admitted
/// iff it conflicts with no vehicle admitted before it.
SlotSchedule select_transmitters_lazy(std::span<const VehicleId> ids,
                                      std::span<const std::uint64_t> priorities,
                                      const std::function<bool(VehicleId, VehicleId)>& conflict,
                                      Slot slot = 0);

bool is_independent(const ConflictGraph& g, std::span<const VehicleId> set);
bool is_maximal(const ConflictGraph& g, std::span<const VehicleId> set);

}  // namespace cps::scheduler
