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
#include "cps/linklife/initialization.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "cps/common/error.hpp"

namespace cps::linklife {

const char* to_string(InitMethod m) {
  switch (m) {
    case InitMethod::SelfReference: return "self";
    case InitMethod::NeighborReference: return "neighbor";
    case InitMethod::PairwiseFallback: return "pairwise";
    case InitMethod::Restored: return "restored";
  }
  return "?";
}

std::optional<std::size_t> select_self_reference(std::span<const SelfReferenceCandidate> cands) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    if (!c.converged) continue;
    if (!best || std::tie(c.d_to_new_sender, c.sender) <
                     std::tie(cands[*best].d_to_new_sender, cands[*best].sender)) {
      best = i;
    }
  }
  return best;
}

std::optional<std::size_t> select_neighbor_reference(
    std::span<const NeighborReferenceCandidate> cands, double d0) {
  std::optional<std::size_t> best;
  double best_metric = 0.0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    if (!c.converged || !(c.d_senders < d0) || !(c.d_receivers < d0)) continue;
    const double metric = std::max(c.d_senders, c.d_receivers);
    if (!best || metric < best_metric ||
        (metric == best_metric && c.link < cands[*best].link)) {
      best = i;
      best_metric = metric;
    }
  }
  return best;
}

double reference_delta_I(double p_new_mw, double t_new, double p_ref_mw, double t_ref,
                         const channel::RadioModel& radio) {
  return p_new_mw - p_ref_mw +
         p_new_mw * (1.0 / radio.f_inv(t_new) - 1.0 / radio.f_inv(t_ref));
}

namespace {

LinkInit finish(LinkInit init, std::span<const gprk::Candidate> sorted) {
  init.adapt = gprk::adapt_K(init.seed_K, init.delta_I, sorted);
  init.K = init.adapt.K;
  return init;
}

}  // namespace

LinkInit init_from_self_reference(const NewLink& link, const SelfReferenceCandidate& ref,
                                  const channel::RadioModel& radio,
                                  std::span<const gprk::Candidate> sorted,
                                  InterferenceModel model) {
  LinkInit init;
  init.method = InitMethod::SelfReference;
  init.reference_sender = ref.sender;
  if (model == InterferenceModel::Geometric) {
    if (!(link.d_sr > 0.0)) throw DomainError("new link has zero length");
    init.seed_K = ref.d_to_receiver * ref.K / link.d_sr;
  } else {
    if (!(ref.p_to_receiver_mw > 0.0)) throw DomainError("reference power must be positive");
    init.seed_K = ref.K * link.p_sr_mw / ref.p_to_receiver_mw;
  }
  init.delta_I =
      reference_delta_I(link.p_sr_mw, link.t_rel, ref.p_to_receiver_mw, ref.t_rel, radio);
  return finish(init, sorted);
}

LinkInit init_from_neighbor_reference(const NewLink& link, const NeighborReferenceCandidate& ref,
                                      const channel::RadioModel& radio,
                                      std::span<const gprk::Candidate> sorted) {
  LinkInit init;
  init.method = InitMethod::NeighborReference;
  init.reference_link = ref.link;
  init.seed_K = ref.K;
  init.delta_I = reference_delta_I(link.p_sr_mw, link.t_rel, ref.p_sr_mw, ref.t_rel, radio);
  return finish(init, sorted);
}

LinkInit init_pairwise_fallback(const NewLink& link, std::span<const PairwiseCandidate> cands,
                                const channel::RadioModel& radio, double noise_mw) {
  LinkInit init;
  init.method = InitMethod::PairwiseFallback;
  double k = 0.0;
  for (const auto& c : cands) {
    const double sinr = link.p_sr_mw / (noise_mw + c.power_mw);
    if (radio.f(sinr) < link.t_rel) k = std::max(k, c.ratio);
  }
  init.seed_K = k;
  init.K = k;
  init.adapt.K = k;
  for (const auto& c : cands) {
    if (c.ratio <= k) init.adapt.members.push_back(c.id);
  }
  return init;
}

LinkInit initialize_link(const NewLink& link, const InitInputs& in,
                         const channel::RadioModel& radio) {
  if (auto i = select_self_reference(in.self_refs)) {
    return init_from_self_reference(link, in.self_refs[*i], radio, in.sorted, in.model);
  }
  if (auto i = select_neighbor_reference(in.neighbor_refs, in.d0)) {
    return init_from_neighbor_reference(link, in.neighbor_refs[*i], radio, in.sorted);
  }
  return init_pairwise_fallback(link, in.pairwise, radio, in.noise_mw);
}

}  // namespace cps::linklife
