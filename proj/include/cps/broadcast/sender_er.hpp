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
#include <vector>

#include "cps/common/ids.hpp"
#include "cps/gprk/exclusion_region.hpp"

namespace cps::broadcast {

/// Discrete exclusion region of one receiver of a broadcast sender. Members
/// are sorted by id and include the receiver itself.
struct ReceiverEr {
  VehicleId receiver = 0;
  std::vector<VehicleId> members;
};

/// Union of the receiver ERs of one sender, with per-receiver constrained
/// flags. A receiver is unconstrained when every member of its ER also
/// belongs to some other receiver's ER.
class SenderER {
 public:
  SenderER() = default;
  SenderER(VehicleId sender, std::vector<ReceiverEr> ers);

  VehicleId sender() const { return sender_; }
  const std::vector<ReceiverEr>& receivers() const { return ers_; }
  const std::vector<VehicleId>& union_members() const { return union_; }
  bool empty() const { return ers_.empty(); }

  std::optional<std::size_t> index_of(VehicleId receiver) const;
  bool constrained(std::size_t i) const { return constrained_[i]; }
  const std::vector<bool>& constrained_flags() const { return constrained_; }

  /// True if `c` belongs to the ER of a receiver other than index i.
  bool in_other(VehicleId c, std::size_t i) const;
  bool contains(VehicleId c) const;

  /// Replaces one receiver's member set and refreshes union and flags.
  void replace_members(std::size_t i, std::vector<VehicleId> members);

  /// Flags evaluated directly from the definition, for cross-checking.
  std::vector<bool> recompute_flags() const;

 private:
  void refresh();

  VehicleId sender_ = 0;
  std::vector<ReceiverEr> ers_;  // sorted by receiver id
  std::map<VehicleId, int> multiplicity_;
  std::vector<VehicleId> union_;
  std::vector<bool> constrained_;
};

SenderER build_sender_er(VehicleId sender, std::vector<ReceiverEr> ers);

/// Interference of C at receiver i under the correlated-adaptation rule:
/// zero when C is already silenced by another receiver's ER.
double effective_interference_bc1(VehicleId c, std::size_t receiver_index, const SenderER& er,
                                  double base_I);

enum class BroadcastRule { ER0, ER1, ER2, BC2A, BC2B };

const char* to_string(BroadcastRule r);

struct BroadcastAdaptResult {
  double K = 0.0;
  BroadcastRule rule = BroadcastRule::ER0;
  bool saturated = false;
  std::vector<VehicleId> members;  // interferer members, nearest first
};

struct BroadcastOptions {
  bool bc2_enabled = true;
};

/// Adapts receiver `receiver`'s K given its budget and updates `er`.
/// `sorted` are its candidates (excluding sender and receiver) ordered by
/// gprk::sort_candidates, carrying unmasked interference.
BroadcastAdaptResult adapt_receiver_er_broadcast(SenderER& er, VehicleId receiver, double K,
                                                 double delta_I,
                                                 std::span<const gprk::Candidate> sorted,
                                                 BroadcastOptions opts = {});

}  // namespace cps::broadcast
