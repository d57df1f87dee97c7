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
#include "cps/broadcast/sender_er.hpp"

#include <algorithm>

namespace cps::broadcast {

SenderER::SenderER(VehicleId sender, std::vector<ReceiverEr> ers)
    : sender_(sender), ers_(std::move(ers)) {
  std::sort(ers_.begin(), ers_.end(),
            [](const ReceiverEr& a, const ReceiverEr& b) { return a.receiver < b.receiver; });
  for (auto& e : ers_) {
    std::sort(e.members.begin(), e.members.end());
    e.members.erase(std::unique(e.members.begin(), e.members.end()), e.members.end());
    for (VehicleId m : e.members) ++multiplicity_[m];
  }
  refresh();
}

std::optional<std::size_t> SenderER::index_of(VehicleId receiver) const {
  auto it = std::lower_bound(ers_.begin(), ers_.end(), receiver,
                             [](const ReceiverEr& e, VehicleId r) { return e.receiver < r; });
  if (it == ers_.end() || it->receiver != receiver) return std::nullopt;
  return static_cast<std::size_t>(it - ers_.begin());
}

bool SenderER::contains(VehicleId c) const { return multiplicity_.count(c) > 0; }

bool SenderER::in_other(VehicleId c, std::size_t i) const {
  auto it = multiplicity_.find(c);
  if (it == multiplicity_.end()) return false;
  const auto& own = ers_[i].members;
  const int self = std::binary_search(own.begin(), own.end(), c) ? 1 : 0;
  return it->second - self > 0;
}

void SenderER::replace_members(std::size_t i, std::vector<VehicleId> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (VehicleId m : ers_[i].members) {
    auto it = multiplicity_.find(m);
    if (--it->second == 0) multiplicity_.erase(it);
  }
  ers_[i].members = std::move(members);
  for (VehicleId m : ers_[i].members) ++multiplicity_[m];
  refresh();
}

void SenderER::refresh() {
  union_.clear();
  union_.reserve(multiplicity_.size());
  for (const auto& [id, n] : multiplicity_) union_.push_back(id);
  constrained_.assign(ers_.size(), false);
  for (std::size_t i = 0; i < ers_.size(); ++i) {
    for (VehicleId m : ers_[i].members) {
      if (multiplicity_.at(m) < 2) {
        constrained_[i] = true;
        break;
      }
    }
  }
}

std::vector<bool> SenderER::recompute_flags() const {
  std::vector<bool> out(ers_.size(), false);
  for (std::size_t i = 0; i < ers_.size(); ++i) {
    std::vector<VehicleId> rest;
    for (std::size_t j = 0; j < ers_.size(); ++j) {
      if (j == i) continue;
      rest.insert(rest.end(), ers_[j].members.begin(), ers_[j].members.end());
    }
    std::sort(rest.begin(), rest.end());
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    out[i] = rest != union_;
  }
  return out;
}

SenderER build_sender_er(VehicleId sender, std::vector<ReceiverEr> ers) {
  return SenderER(sender, std::move(ers));
}

double effective_interference_bc1(VehicleId c, std::size_t receiver_index, const SenderER& er,
                                  double base_I) {
  return er.in_other(c, receiver_index) ? 0.0 : base_I;
}

const char* to_string(BroadcastRule r) {
  switch (r) {
    case BroadcastRule::ER0: return "ER0";
    case BroadcastRule::ER1: return "ER1";
    case BroadcastRule::ER2: return "ER2";
    case BroadcastRule::BC2A: return "BC2A";
    case BroadcastRule::BC2B: return "BC2B";
  }
  return "?";
}

namespace {

std::size_t count_within(double K, std::span<const gprk::Candidate> sorted) {
  std::size_t n = 0;
  while (n < sorted.size() && sorted[n].ratio <= K) ++n;
  return n;
}

// ER of receiver i (itself plus the first n candidates) lies inside the
// other receivers' ERs.
bool prefix_covered(const SenderER& er, std::size_t i, VehicleId receiver,
                    std::span<const gprk::Candidate> sorted, std::size_t n) {
  if (!er.in_other(receiver, i)) return false;
  for (std::size_t k = 0; k < n; ++k) {
    if (!er.in_other(sorted[k].id, i)) return false;
  }
  return true;
}

std::vector<gprk::Candidate> masked(const SenderER& er, std::size_t i,
                                    std::span<const gprk::Candidate> sorted) {
  std::vector<gprk::Candidate> out(sorted.begin(), sorted.end());
  for (auto& c : out) c.interference_mw = effective_interference_bc1(c.id, i, er, c.interference_mw);
  return out;
}

// Largest prefix-region K whose members stay inside the other ERs.
double largest_covered_K(const SenderER& er, std::size_t i, std::span<const gprk::Candidate> sorted,
                         double K) {
  std::size_t n = 0;
  while (n < sorted.size() && er.in_other(sorted[n].id, i)) ++n;
  // Do not split a group of equal ratios at the first uncovered node.
  if (n < sorted.size()) {
    while (n > 0 && sorted[n - 1].ratio == sorted[n].ratio) --n;
  }
  return n == 0 ? K : std::max(K, sorted[n - 1].ratio);
}

}  // namespace

BroadcastAdaptResult adapt_receiver_er_broadcast(SenderER& er, VehicleId receiver, double K,
                                                 double delta_I,
                                                 std::span<const gprk::Candidate> sorted,
                                                 BroadcastOptions opts) {
  const auto idx = er.index_of(receiver);
  BroadcastAdaptResult out;
  if (!idx) {
    auto r = gprk::adapt_K(K, delta_I, sorted);
    out.K = r.K;
    out.rule = static_cast<BroadcastRule>(r.rule);
    out.saturated = r.saturated;
    out.members = r.members;
    return out;
  }
  const std::size_t i = *idx;
  const auto bc1 = masked(er, i, sorted);
  const std::size_t before = count_within(K, sorted);

  if (delta_I <= 0.0 || !opts.bc2_enabled) {
    auto r = gprk::adapt_K(K, delta_I, bc1);
    out.K = r.K;
    out.rule = static_cast<BroadcastRule>(r.rule);
    out.saturated = r.saturated;
  } else if (prefix_covered(er, i, receiver, sorted, before)) {
    out.rule = BroadcastRule::BC2A;
    const double k_a = largest_covered_K(er, i, sorted, K);
    out.K = gprk::adapt_K(k_a, delta_I, sorted).K;
  } else {
    const auto trial = gprk::adapt_K(K, delta_I, bc1);
    const std::size_t trial_n = count_within(trial.K, sorted);
    if (!prefix_covered(er, i, receiver, sorted, trial_n)) {
      out.K = trial.K;
      out.rule = BroadcastRule::ER2;
    } else {
      out.rule = BroadcastRule::BC2B;
      std::size_t keep = before;
      double debit = 0.0;
      while (keep > 0 && !prefix_covered(er, i, receiver, sorted, keep)) {
        debit += bc1[keep - 1].interference_mw;
        --keep;
      }
      const double k_strip = keep == 0 ? 0.0 : sorted[keep - 1].ratio;
      out.K = gprk::adapt_K(k_strip, delta_I - debit, sorted).K;
    }
  }

  // An adapted unconstrained ER keeps at least its nearest interferer.
  if ((out.rule == BroadcastRule::BC2A || out.rule == BroadcastRule::BC2B) && before > 0 &&
      count_within(out.K, sorted) == 0) {
    out.K = sorted.front().ratio;
  }

  const std::size_t after = count_within(out.K, sorted);
  std::vector<VehicleId> ids{receiver};
  for (std::size_t k = 0; k < after; ++k) {
    out.members.push_back(sorted[k].id);
    ids.push_back(sorted[k].id);
  }
  er.replace_members(i, std::move(ids));
  return out;
}

}  // namespace cps::broadcast
