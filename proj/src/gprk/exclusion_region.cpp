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
#include "cps/gprk/exclusion_region.hpp"

#include <algorithm>
#include <cmath>

#include "cps/common/error.hpp"

namespace cps::gprk {

bool can_transmit_concurrently(Vec2 c, Vec2 s, Vec2 r, double K) {
  return distance(c, r) > distance(s, r) * K;
}

void sort_candidates(std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.ratio != b.ratio) return a.ratio < b.ratio;
    return a.id < b.id;
  });
}

std::vector<VehicleId> region_members(double K, std::span<const Candidate> sorted) {
  std::vector<VehicleId> out;
  for (const auto& c : sorted) {
    if (c.ratio > K) break;
    out.push_back(c.id);
  }
  return out;
}

namespace {

std::size_t member_count(double K, std::span<const Candidate> sorted) {
  return static_cast<std::size_t>(
      std::upper_bound(sorted.begin(), sorted.end(), K,
                       [](double k, const Candidate& c) { return k < c.ratio; }) -
      sorted.begin());
}

}  // namespace

AdaptResult adapt_K(double K, double delta_I, std::span<const Candidate> sorted) {
  if (!(K >= 0.0) || !std::isfinite(K)) throw DomainError("K must be finite and >= 0");
  AdaptResult out;
  out.K = K;
  const std::size_t before = member_count(K, sorted);

  if (delta_I < 0.0) {
    out.rule = AdaptRule::ER1;
    const double need = -delta_I;
    double sum = 0.0;
    bool met = false;
    for (std::size_t i = before; i < sorted.size(); ++i) {
      sum += sorted[i].interference_mw;
      if (sum >= need) {
        out.K = sorted[i].ratio;
        met = true;
        break;
      }
    }
    if (!met) {
      out.saturated = true;
      if (!sorted.empty()) out.K = std::max(K, sorted.back().ratio);
    }
  } else if (delta_I > 0.0) {
    out.rule = AdaptRule::ER2;
    if (before > 0) {
      double removed = 0.0;
      std::size_t keep = before;
      while (keep > 0 && removed + sorted[keep - 1].interference_mw <= delta_I) {
        removed += sorted[keep - 1].interference_mw;
        --keep;
      }
      out.K = keep == 0 ? 0.0 : sorted[keep - 1].ratio;
    }
  } else {
    out.rule = AdaptRule::ER0;
  }

  const std::size_t after = member_count(out.K, sorted);
  for (std::size_t i = 0; i < after; ++i) out.members.push_back(sorted[i].id);
  for (std::size_t i = before; i < after; ++i) out.added.push_back(sorted[i].id);
  for (std::size_t i = after; i < before; ++i) out.removed.push_back(sorted[i].id);
  return out;
}

double expected_interference(const channel::PowerEstimate& est) {
  if (!est.has_power || !est.has_beta) throw NotFoundError("no power estimate for interferer");
  return est.beta * est.power_mw;
}

}  // namespace cps::gprk
