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

#include <optional>
#include <span>
#include <vector>

#include "cps/channel/radio.hpp"
#include "cps/gprk/exclusion_region.hpp"
#include "cps/gprk/link_model.hpp"

namespace cps::linklife {

/// How K relates to a receiver's exclusion region. Geometric: members are
/// within D(S,R)*K of R. Physical: members are received at R with power at
/// least P(S,R)/K.
enum class InterferenceModel { Geometric, Physical };

enum class InitMethod { SelfReference, NeighborReference, PairwiseFallback, Restored };

const char* to_string(InitMethod m);

/// The link being instantiated, as seen by its receiver.
struct NewLink {
  LinkId link;
  double t_rel = 0.9;
  double d_sr = 0.0;     // D(S_i, R_i), m
  double p_sr_mw = 0.0;  // P(S_i, R_i)
};

/// Converged-or-not link <S_j, R_i> sharing the new link's receiver.
struct SelfReferenceCandidate {
  VehicleId sender = 0;
  double K = 0.0;
  double t_rel = 0.9;
  double d_to_receiver = 0.0;     // D(S_j, R_i)
  double p_to_receiver_mw = 0.0;  // P(S_j, R_i)
  double d_to_new_sender = 0.0;   // D(S_j, S_i)
  bool converged = false;
};

/// Link <S_j, R_j> near the new link.
struct NeighborReferenceCandidate {
  LinkId link;
  double K = 0.0;
  double t_rel = 0.9;
  double p_sr_mw = 0.0;    // P(S_j, R_j)
  double d_senders = 0.0;  // D(S_j, S_i)
  double d_receivers = 0.0;  // D(R_j, R_i)
  bool converged = false;
};

/// Candidate for the pairwise fallback, with path-loss predicted power.
struct PairwiseCandidate {
  VehicleId id = 0;
  double ratio = 0.0;  // same normalization as gprk::Candidate
  double power_mw = 0.0;
};

struct LinkInit {
  InitMethod method = InitMethod::PairwiseFallback;
  double seed_K = 0.0;
  double delta_I = 0.0;
  double K = 0.0;
  std::optional<VehicleId> reference_sender;
  std::optional<LinkId> reference_link;
  gprk::AdaptResult adapt;
};

/// Converged candidate closest to the new sender; ties by sender id.
std::optional<std::size_t> select_self_reference(std::span<const SelfReferenceCandidate> cands);

/// Converged candidate with both endpoint offsets < d0, minimizing the larger
/// offset; ties by (sender, receiver).
std::optional<std::size_t> select_neighbor_reference(
    std::span<const NeighborReferenceCandidate> cands, double d0);

/// P_i - P_ref + P_i (1/f_inv(T_i) - 1/f_inv(T_ref)).
double reference_delta_I(double p_new_mw, double t_new, double p_ref_mw, double t_ref,
                         const channel::RadioModel& radio);

/// Seeds K so both links share one exclusion region around R_i, then runs
/// one adaptation pass. `sorted` holds the new link's candidates.
LinkInit init_from_self_reference(const NewLink& link, const SelfReferenceCandidate& ref,
                                  const channel::RadioModel& radio,
                                  std::span<const gprk::Candidate> sorted,
                                  InterferenceModel model = InterferenceModel::Geometric);

/// Copies the reference K and runs one adaptation pass.
LinkInit init_from_neighbor_reference(const NewLink& link, const NeighborReferenceCandidate& ref,
                                      const channel::RadioModel& radio,
                                      std::span<const gprk::Candidate> sorted);

/// Smallest K whose region holds every vehicle that alone would pull the
/// link below its target. 0 when there is none.
LinkInit init_pairwise_fallback(const NewLink& link, std::span<const PairwiseCandidate> cands,
                                const channel::RadioModel& radio, double noise_mw);

struct InitInputs {
  std::span<const SelfReferenceCandidate> self_refs;
  std::span<const NeighborReferenceCandidate> neighbor_refs;
  std::span<const gprk::Candidate> sorted;
  std::span<const PairwiseCandidate> pairwise;
  double d0 = 30.0;
  double noise_mw = 0.0;
  InterferenceModel model = InterferenceModel::Geometric;
};

/// Self-reference, else neighbor-reference, else pairwise fallback.
LinkInit initialize_link(const NewLink& link, const InitInputs& in,
                         const channel::RadioModel& radio);

}  // namespace cps::linklife
