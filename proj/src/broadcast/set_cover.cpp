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
#include "cps/broadcast/set_cover.hpp"

#include <algorithm>
#include <set>

namespace cps::broadcast {

std::vector<std::size_t> greedy_set_cover(std::span<const std::vector<VehicleId>> sets) {
  std::set<VehicleId> uncovered;
  for (const auto& s : sets) uncovered.insert(s.begin(), s.end());
  std::vector<bool> taken(sets.size(), false);
  std::vector<std::size_t> chosen;
  while (!uncovered.empty()) {
    std::size_t best = sets.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (taken[i]) continue;
      std::size_t gain = 0;
      for (VehicleId v : sets[i]) gain += uncovered.count(v);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == sets.size()) break;
    taken[best] = true;
    chosen.push_back(best);
    for (VehicleId v : sets[best]) uncovered.erase(v);
  }
  return chosen;
}

std::vector<VehicleId> select_signaling_cover(const SenderER& er) {
  std::vector<std::vector<VehicleId>> sets;
  sets.reserve(er.receivers().size());
  for (const auto& r : er.receivers()) sets.push_back(r.members);
  std::vector<VehicleId> out;
  for (std::size_t i : greedy_set_cover(sets)) out.push_back(er.receivers()[i].receiver);
  return out;
}

}  // namespace cps::broadcast
