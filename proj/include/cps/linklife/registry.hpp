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

#include "cps/common/ids.hpp"
#include "cps/gprk/link_model.hpp"
#include "cps/linklife/initialization.hpp"

namespace cps::linklife {

struct LinkRecord {
  gprk::LinkModel model;
  InitMethod method = InitMethod::PairwiseFallback;
  double init_distance = 0.0;  // D(S,R) at the last (re)initialization
  Slot activated_slot = 0;
  Slot last_seen_slot = 0;
  bool transient = false;
};

struct DormantRecord {
  gprk::LinkModel model;
  Slot last_seen_slot = 0;
};

struct RetentionPolicy {
  double slot_s = 0.0025;
  double retention_s = 2.0;  // re-entry gap below which K is restored
  double gc_s = 60.0;        // dormant entries older than this are dropped
  double material_change = 0.1;  // relative change in D(S,R) forcing re-init
  double transient_speed = 5.0;  // |closing speed| above which a link is transient
};

/// Active links keyed by (sender, receiver) plus dormant entries of links
/// whose endpoints recently left each other's range.
class LinkRegistry {
 public:
  explicit LinkRegistry(RetentionPolicy policy = {}) : policy_(policy) {}

  const RetentionPolicy& policy() const { return policy_; }

  LinkRecord* find(LinkId id);
  const LinkRecord* find(LinkId id) const;
  const DormantRecord* find_dormant(LinkId id) const;

  LinkRecord& activate(LinkId id, LinkRecord record);
  /// Moves an active link to the dormant set. No-op if not active.
  void deactivate(LinkId id, Slot now);
  /// Drops dormant entries idle for at least gc_s. Returns how many.
  std::size_t collect_garbage(Slot now);

  const std::map<LinkId, LinkRecord>& active() const { return active_; }
  std::map<LinkId, LinkRecord>& active() { return active_; }
  const std::map<LinkId, DormantRecord>& dormant() const { return dormant_; }

 private:
  RetentionPolicy policy_;
  std::map<LinkId, LinkRecord> active_;
  std::map<LinkId, DormantRecord> dormant_;
};

/// Opposite-direction or cross-road pairs: different segments or a closing
/// speed above the threshold.
bool is_transient(bool same_segment, double closing_speed, const RetentionPolicy& policy);

enum class TransientAction {
  Untouched,     // active and stable enough to keep adapting
  Reinitialize,  // active transient link whose geometry moved materially
  Restored,      // re-entered within the retention window; K restored
  NewLink,       // needs full initialization
};

/// Decides how a link that is in range at `now` is maintained. Restores
/// dormant state into the registry when the re-entry gap is short; leaves
/// initialization of new and re-initialized links to the caller.
TransientAction handle_transient(LinkRegistry& registry, LinkId id, bool transient,
                                 double d_now, Slot now);

}  // namespace cps::linklife
