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

#include <span>
#include <vector>

#include "cps/channel/power_estimate.hpp"
#include "cps/common/geometry.hpp"
#include "cps/common/ids.hpp"

namespace cps::gprk {

/// Geometric concurrency rule: C may transmit concurrently with S -> R
/// iff D(C, R) > D(S, R) * K.
bool can_transmit_concurrently(Vec2 c, Vec2 s, Vec2 r, double K);

/// Vehicle that may enter or leave a receiver's exclusion region.
/// `ratio` is the normalized distance D(C,R)/D(S,R) (or, for the physical
/// model, P(S,R)/P(C,R)); C is a member iff ratio <= K.
struct Candidate {
  VehicleId id = 0;
  double ratio = 0.0;
  double interference_mw = 0.0;  // I(C, R, t)
};

/// Sorts by (ratio, id) ascending: nearest first, ties by id.
void sort_candidates(std::vector<Candidate>& candidates);

/// Members of the region of parameter K, nearest first.
std::vector<VehicleId> region_members(double K, std::span<const Candidate> sorted);

enum class AdaptRule { ER0, ER1, ER2 };

struct AdaptResult {
  double K = 0.0;
  AdaptRule rule = AdaptRule::ER0;
  bool saturated = false;            // ER1 ran out of candidates
  std::vector<VehicleId> members;    // nearest first
  std::vector<VehicleId> added;
  std::vector<VehicleId> removed;
};

/// Adapts K from the interference budget.
///  - delta_I == 0: K unchanged.
///  - delta_I < 0: adds non-members nearest first until their summed
///    interference reaches |delta_I| at node B; K = ratio(B). Running out
///    of candidates sets K to the farthest candidate and flags saturation.
///  - delta_I > 0: removes members farthest first while the removed
///    interference stays <= delta_I; K becomes the ratio of the farthest
///    remaining member (0 when none remain). Empty region: K unchanged.
/// `sorted` must be ordered by sort_candidates.
AdaptResult adapt_K(double K, double delta_I, std::span<const Candidate> sorted);

/// I(C, R, t) = beta_C(t) * P(C, R, t). Throws NotFoundError when either
/// estimate is missing.
double expected_interference(const channel::PowerEstimate& est);

}  // namespace cps::gprk
