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
#include "cps/linklife/registry.hpp"

#include <cmath>

namespace cps::linklife {

LinkRecord* LinkRegistry::find(LinkId id) {
  auto it = active_.find(id);
  return it == active_.end() ? nullptr : &it->second;
}

const LinkRecord* LinkRegistry::find(LinkId id) const {
  auto it = active_.find(id);
  return it == active_.end() ? nullptr : &it->second;
}

const DormantRecord* LinkRegistry::find_dormant(LinkId id) const {
  auto it = dormant_.find(id);
  return it == dormant_.end() ? nullptr : &it->second;
}

LinkRecord& LinkRegistry::activate(LinkId id, LinkRecord record) {
  dormant_.erase(id);
  record.model.link = id;
  return active_.insert_or_assign(id, std::move(record)).first->second;
}

void LinkRegistry::deactivate(LinkId id, Slot now) {
  auto it = active_.find(id);
  if (it == active_.end()) return;
  dormant_.insert_or_assign(id, DormantRecord{it->second.model, now});
  active_.erase(it);
}

std::size_t LinkRegistry::collect_garbage(Slot now) {
  std::size_t n = 0;
  for (auto it = dormant_.begin(); it != dormant_.end();) {
    if ((now - it->second.last_seen_slot) * policy_.slot_s >= policy_.gc_s) {
      it = dormant_.erase(it);
      ++n;
    } else {
      ++it;
    }
  }
  return n;
}

bool is_transient(bool same_segment, double closing_speed, const RetentionPolicy& policy) {
  return !same_segment || std::abs(closing_speed) > policy.transient_speed;
}

TransientAction handle_transient(LinkRegistry& registry, LinkId id, bool transient,
                                 double d_now, Slot now) {
  const auto& pol = registry.policy();
  if (LinkRecord* rec = registry.find(id)) {
    rec->last_seen_slot = now;
    rec->transient = transient;
    if (!transient) return TransientAction::Untouched;
    const double base = rec->init_distance;
    if (base > 0.0 && std::abs(d_now - base) / base > pol.material_change) {
      return TransientAction::Reinitialize;
    }
    return TransientAction::Untouched;
  }
  if (const DormantRecord* d = registry.find_dormant(id)) {
    if ((now - d->last_seen_slot) * pol.slot_s < pol.retention_s) {
      LinkRecord rec;
      rec.model = d->model;
      rec.method = InitMethod::Restored;
      rec.init_distance = d_now;
      rec.activated_slot = now;
      rec.last_seen_slot = now;
      rec.transient = transient;
      registry.activate(id, rec);
      return TransientAction::Restored;
    }
  }
  return TransientAction::NewLink;
}

}  // namespace cps::linklife
