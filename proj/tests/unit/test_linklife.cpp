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
#include <gtest/gtest.h>

#include <vector>

#include "cps/channel/radio.hpp"
#include "cps/linklife/initialization.hpp"
#include "cps/linklife/registry.hpp"
#include "oracle_values.hpp"

using namespace cps;
using namespace cps::linklife;

namespace {

channel::RadioModel radio;

}  // namespace

TEST(SelfReference, SeedScalesWithDistance) {
  NewLink l{{1, 9}, 0.9, 25.0, 1e-7};
  SelfReferenceCandidate ref{2, 2.0, 0.9, 50.0, 1e-7, 10.0, true};
  auto init = init_from_self_reference(l, ref, radio, {});
  EXPECT_DOUBLE_EQ(init.seed_K, oracle::seed_K_self);
  EXPECT_DOUBLE_EQ(init.delta_I, 0.0);
  EXPECT_DOUBLE_EQ(init.K, oracle::seed_K_self);
  EXPECT_EQ(init.method, InitMethod::SelfReference);
}

TEST(SelfReference, StricterTargetExpands) {
  const double p = oracle::axis_signal;
  NewLink l{{1, 9}, 0.95, 25.0, p};
  SelfReferenceCandidate ref{2, 2.0, 0.9, 50.0, p, 10.0, true};
  std::vector<gprk::Candidate> c{{5, 4.5, 1e-9}, {6, 5.0, 1e-9}};
  auto init = init_from_self_reference(l, ref, radio, c);
  EXPECT_LT(init.delta_I, 0.0);
  EXPECT_NEAR(init.delta_I, oracle::ref_dI_T095, 1e-9 * std::abs(oracle::ref_dI_T095));
  EXPECT_GT(init.K, init.seed_K);
}

TEST(SelfReference, ClosestConvergedSenderWins) {
  std::vector<SelfReferenceCandidate> c{
      {5, 1.0, 0.9, 40.0, 1e-7, 12.0, true},
      {3, 1.0, 0.9, 40.0, 1e-7, 8.0, false},
      {7, 1.0, 0.9, 40.0, 1e-7, 12.0, true},
  };
  EXPECT_EQ(select_self_reference(c), std::optional<std::size_t>{0});
  c[1].converged = true;
  EXPECT_EQ(select_self_reference(c), std::optional<std::size_t>{1});
}

TEST(NeighborReference, TwinLinkCopiesK) {
  NewLink l{{1, 2}, 0.9, 30.0, 2e-7};
  NeighborReferenceCandidate ref{{3, 4}, 2.75, 0.9, 2e-7, 5.0, 5.0, true};
  auto init = init_from_neighbor_reference(l, ref, radio, {});
  EXPECT_DOUBLE_EQ(init.K, 2.75);
  EXPECT_DOUBLE_EQ(init.delta_I, 0.0);
}

TEST(NeighborReference, SmallestMetricChosen) {
  std::vector<NeighborReferenceCandidate> c{
      {{3, 4}, 1.0, 0.9, 1e-7, 20.0, 5.0, true},
      {{5, 6}, 1.0, 0.9, 1e-7, 10.0, 10.0, true},
  };
  EXPECT_EQ(select_neighbor_reference(c, 30.0), std::optional<std::size_t>{1});
}

TEST(NeighborReference, TieBrokenByLinkId) {
  std::vector<NeighborReferenceCandidate> c{
      {{8, 1}, 1.0, 0.9, 1e-7, 10.0, 10.0, true},
      {{2, 9}, 1.0, 0.9, 1e-7, 10.0, 10.0, true},
  };
  EXPECT_EQ(select_neighbor_reference(c, 30.0), std::optional<std::size_t>{1});
}

TEST(NeighborReference, ThresholdExcludes) {
  std::vector<NeighborReferenceCandidate> c{{{3, 4}, 1.0, 0.9, 1e-7, 31.0, 5.0, true}};
  EXPECT_FALSE(select_neighbor_reference(c, 30.0).has_value());
}

TEST(Pairwise, NoVehiclesGivesEmptyRegion) {
  NewLink l{{1, 2}, 0.9, 30.0, 1e-7};
  auto init = init_pairwise_fallback(l, {}, radio, 1e-12);
  EXPECT_DOUBLE_EQ(init.K, 0.0);
}

TEST(Pairwise, HarmlessDistantVehicle) {
  NewLink l{{1, 2}, 0.9, 30.0, 1e-7};
  std::vector<PairwiseCandidate> c{{3, 20.0, 1e-7 / 8000.0}};
  EXPECT_DOUBLE_EQ(init_pairwise_fallback(l, c, radio, 1e-12).K, 0.0);
}

TEST(Pairwise, HarmfulVehicleSetsK) {
  // Exponent 2, D(C,R) = 60, D(S,R) = 30: solo SIR of 4 (6.02 dB).
  ASSERT_LT(oracle::pairwise_solo_pdr, 0.9);
  NewLink l{{1, 2}, 0.9, 30.0, 1e-7};
  std::vector<PairwiseCandidate> c{{3, 2.0, 1e-7 / 4.0}};
  auto init = init_pairwise_fallback(l, c, radio, 1e-18);
  EXPECT_DOUBLE_EQ(init.K, oracle::pairwise_K);
  ASSERT_EQ(init.adapt.members.size(), 1u);
}

TEST(InitializeLink, PreferenceOrder) {
  NewLink l{{1, 2}, 0.9, 30.0, 1e-7};
  std::vector<SelfReferenceCandidate> s{{5, 1.0, 0.9, 30.0, 1e-7, 5.0, true}};
  std::vector<NeighborReferenceCandidate> n{{{3, 4}, 1.0, 0.9, 1e-7, 5.0, 5.0, true}};
  InitInputs in;
  in.self_refs = s;
  in.neighbor_refs = n;
  EXPECT_EQ(initialize_link(l, in, radio).method, InitMethod::SelfReference);
  in.self_refs = {};
  EXPECT_EQ(initialize_link(l, in, radio).method, InitMethod::NeighborReference);
  in.neighbor_refs = {};
  EXPECT_EQ(initialize_link(l, in, radio).method, InitMethod::PairwiseFallback);
}

TEST(Registry, ShortReentryRestoresK) {
  LinkRegistry reg;
  const LinkId id{1, 2};
  LinkRecord rec;
  rec.model.K = 3.25;
  reg.activate(id, rec);
  reg.deactivate(id, 1000);
  const Slot gap = static_cast<Slot>(1.5 / reg.policy().slot_s);
  EXPECT_EQ(handle_transient(reg, id, true, 50.0, 1000 + gap), TransientAction::Restored);
  ASSERT_NE(reg.find(id), nullptr);
  EXPECT_DOUBLE_EQ(reg.find(id)->model.K, 3.25);
}

TEST(Registry, LongReentryIsNewLink) {
  LinkRegistry reg;
  const LinkId id{1, 2};
  reg.activate(id, LinkRecord{});
  reg.deactivate(id, 0);
  const Slot gap = static_cast<Slot>(10.0 / reg.policy().slot_s);
  EXPECT_EQ(handle_transient(reg, id, true, 50.0, gap), TransientAction::NewLink);
}

TEST(Registry, StableLinkUntouched) {
  LinkRegistry reg;
  const LinkId id{1, 2};
  LinkRecord rec;
  rec.init_distance = 40.0;
  reg.activate(id, rec);
  EXPECT_EQ(handle_transient(reg, id, false, 41.0, 10), TransientAction::Untouched);
}

TEST(Registry, TransientLinkReinitializesOnMaterialChange) {
  LinkRegistry reg;
  const LinkId id{1, 2};
  LinkRecord rec;
  rec.init_distance = 40.0;
  rec.transient = true;
  reg.activate(id, rec);
  EXPECT_EQ(handle_transient(reg, id, true, 41.0, 10), TransientAction::Untouched);
  EXPECT_EQ(handle_transient(reg, id, true, 60.0, 20), TransientAction::Reinitialize);
}

TEST(Registry, GarbageCollection) {
  LinkRegistry reg;
  reg.activate({1, 2}, LinkRecord{});
  reg.deactivate({1, 2}, 0);
  EXPECT_EQ(reg.collect_garbage(10), 0u);
  EXPECT_EQ(reg.collect_garbage(static_cast<Slot>(61.0 / reg.policy().slot_s)), 1u);
  EXPECT_TRUE(reg.dormant().empty());
}

TEST(Transient, Classification) {
  RetentionPolicy p;
  EXPECT_TRUE(is_transient(false, 0.0, p));
  EXPECT_TRUE(is_transient(true, 40.0, p));
  EXPECT_FALSE(is_transient(true, 1.0, p));
}
