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

#include <cmath>
#include <vector>

#include "cps/common/error.hpp"
#include "cps/mobility/idm.hpp"
#include "cps/mobility/road_network.hpp"
#include "cps/mobility/traffic.hpp"
#include "oracle_values.hpp"

using namespace cps;
using namespace cps::mobility;

namespace {

constexpr double kTol = 1e-9;

VehicleState car(VehicleId id, double s, double v, int lane = 0) {
  VehicleState x;
  x.id = id;
  x.segment = 0;
  x.lane = lane;
  x.s_pos = s;
  x.v = v;
  return x;
}

}  // namespace

TEST(DesiredGap, StandstillIsMinimumGap) {
  IdmParams p;
  EXPECT_DOUBLE_EQ(idm_desired_gap(0.0, 17.0, p), 2.0);
}

TEST(DesiredGap, EqualSpeedsUseTimeGapOnly) {
  IdmParams p;
  EXPECT_NEAR(idm_desired_gap(10.0, 10.0, p), 12.0, kTol);
}

TEST(DesiredGap, MatchesOracle) {
  EXPECT_NEAR(idm_desired_gap(20.0, 15.0, IdmParams{}), oracle::idm_desired_gap_20_15, kTol);
}

TEST(FreeAccel, ZeroAtDesiredSpeed) {
  IdmParams p;
  EXPECT_NEAR(idm_accel_free(p.v0, p), 0.0, kTol);
}

TEST(FreeAccel, MaximumFromStandstill) {
  IdmParams p;
  EXPECT_DOUBLE_EQ(idm_accel_free(0.0, p), p.a_max);
}

TEST(FreeAccel, AboveDesiredSpeedMatchesOracle) {
  IdmParams p;
  EXPECT_NEAR(idm_accel_free(1.2 * p.v0, p), oracle::idm_free_1p2_v0, kTol);
}

TEST(Iidm, MatchesOracle) {
  EXPECT_NEAR(idm_accel_iidm(30.0, 20.0, 20.0, IdmParams{}), oracle::idm_iidm_20_20_30, kTol);
}

TEST(Iidm, FreeFlowAtDesiredSpeed) {
  IdmParams p;
  EXPECT_NEAR(idm_accel_iidm(1e9, p.v0, p.v0, p), 0.0, 1e-9);
}

TEST(Iidm, ContinuousAcrossUnitInteractionRatio) {
  IdmParams p;
  for (double v : {0.5, 5.0, 12.0, 20.0, 29.0}) {
    for (double dv : {-3.0, 0.0, 4.0}) {
      const double vl = std::max(0.0, v - dv);
      const double s = idm_desired_gap(v, vl, p);  // z == 1
      const double below = idm_accel_iidm(s * (1.0 + 1e-12), v, vl, p);
      const double above = idm_accel_iidm(s * (1.0 - 1e-12), v, vl, p);
      EXPECT_NEAR(below, above, 1e-9) << "v=" << v << " vl=" << vl;
      EXPECT_NEAR(idm_accel_iidm(s, v, vl, p), 0.0, 1e-9);
    }
  }
}

TEST(Iidm, RejectsNonpositiveGap) {
  EXPECT_THROW(idm_accel_iidm(0.0, 10.0, 10.0, IdmParams{}), CollisionError);
  EXPECT_THROW(idm_accel_iidm(-1.0, 10.0, 10.0, IdmParams{}), CollisionError);
}

TEST(Cah, MatchingSpeedsGiveZero) {
  EXPECT_NEAR(idm_accel_cah(500.0, 20.0, 20.0, 0.0, IdmParams{}), 0.0, kTol);
}

TEST(Cah, MatchesOracle) {
  EXPECT_NEAR(idm_accel_cah(15.0, 25.0, 20.0, -1.0, IdmParams{}), oracle::idm_cah_25_20_15_m1,
              kTol);
}

TEST(Cah, ContinuousAtBranchBoundary) {
  IdmParams p;
  // v_l (v - v_l) = -2 s a_l  with a_l < 0, solved for s.
  for (double v : {10.0, 18.0, 25.0}) {
    for (double vl : {5.0, 12.0, 20.0}) {
      for (double al : {-0.5, -1.0, -2.0}) {
        const double s = vl * (v - vl) / (-2.0 * al);
        if (!(s > 0.0)) continue;
        const double lo = idm_accel_cah(s * (1.0 - 1e-11), v, vl, al, p);
        const double hi = idm_accel_cah(s * (1.0 + 1e-11), v, vl, al, p);
        EXPECT_NEAR(lo, hi, 1e-8) << v << " " << vl << " " << al;
      }
    }
  }
}

TEST(Cah, RejectsNonpositiveGap) {
  EXPECT_THROW(idm_accel_cah(0.0, 10.0, 10.0, 0.0, IdmParams{}), CollisionError);
}

TEST(Acc, MatchesOracle) {
  EXPECT_NEAR(idm_accel_acc(15.0, 25.0, 20.0, -1.0, IdmParams{}), oracle::idm_acc_25_20_15_m1,
              kTol);
}

TEST(Acc, SampledCasesMatchOracle) {
  IdmParams p;
  for (const auto& c : oracle::idm_samples) {
    EXPECT_NEAR(idm_accel_acc(c.s, c.v, c.vl, c.al, p), c.acc, kTol) << c.s << " " << c.v;
    EXPECT_NEAR(idm_accel_iidm(c.s, c.v, c.vl, p), c.iidm, kTol) << c.s << " " << c.v;
    EXPECT_NEAR(idm_accel_cah(c.s, c.v, c.vl, c.al, p), c.cah, kTol) << c.s << " " << c.v;
  }
}

TEST(Acc, ZeroBlendIsIidm) {
  IdmParams p;
  p.c_acc = 0.0;
  for (const auto& c : oracle::idm_samples) {
    EXPECT_DOUBLE_EQ(idm_accel_acc(c.s, c.v, c.vl, c.al, p), idm_accel_iidm(c.s, c.v, c.vl, p));
  }
}

TEST(Acc, NeverBelowIidmWhenCahIsHigher) {
  IdmParams p;
  for (const auto& c : oracle::idm_samples) {
    if (c.cah > c.iidm) EXPECT_GE(c.acc, c.iidm);
  }
}

TEST(IdmParams, ValidateRejectsBadValues) {
  IdmParams p;
  p.c_acc = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.b_comf = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(RoadNetwork, StraightGeometry) {
  auto net = RoadNetwork::straight(1000.0, 2, 30.0);
  const auto& seg = net.segment(0);
  EXPECT_DOUBLE_EQ(seg.length(), 1000.0);
  const Vec2 p = seg.position(250.0, 0);
  EXPECT_NEAR(p.x, 250.0, 1e-9);
  EXPECT_NEAR(seg.project(p), 250.0, 1e-9);
  EXPECT_NEAR(distance(seg.position(10.0, 0), seg.position(10.0, 1)), seg.lane_width(), 1e-9);
}

TEST(RoadNetwork, UnknownSegmentThrows) {
  auto net = RoadNetwork::straight(100.0, 1, 30.0);
  EXPECT_THROW(net.segment(9), NotFoundError);
  EXPECT_EQ(net.find(9), nullptr);
}

TEST(RoadNetwork, CrossingHasFourApproaches) {
  auto net = RoadNetwork::crossing(1200.0, 2, 33.3, 1, 11.1, 0.1);
  EXPECT_EQ(net.segments().size(), 4u);
  // All four pass through the origin at mid length.
  for (const auto& seg : net.segments()) {
    EXPECT_NEAR(seg.project({0.0, 0.0}), 600.0, 4.0);
  }
}

TEST(StepTraffic, EmptyIsNoop) {
  auto net = RoadNetwork::straight(1000.0, 1, 30.0);
  auto out = step_traffic(net, {}, StepParams{});
  EXPECT_TRUE(out.vehicles.empty());
  EXPECT_TRUE(out.events.empty());
}

TEST(StepTraffic, SingleVehicleAccelerates) {
  auto net = RoadNetwork::straight(100000.0, 1, 30.0);
  std::vector<VehicleState> vs{car(1, 0.0, 10.0)};
  StepParams sp;
  sp.dt = 0.0025;
  double prev = vs[0].v;
  for (int k = 0; k < 400; ++k) {
    sp.step_index = k;
    vs = step_traffic(net, vs, sp).vehicles;
    EXPECT_GT(vs[0].v, prev);
    prev = vs[0].v;
  }
}

TEST(StepTraffic, IsolatedVehicleReachesDesiredSpeed) {
  auto net = RoadNetwork::straight(1e7, 1, 30.0);
  std::vector<VehicleState> vs{car(1, 0.0, 5.0)};
  StepParams sp;
  sp.dt = 0.0025;
  for (int k = 0; k < 120000; ++k) {  // 300 s
    sp.step_index = k;
    vs = step_traffic(net, vs, sp).vehicles;
  }
  EXPECT_LT(std::abs(vs[0].v - vs[0].idm.v0) / vs[0].idm.v0, 1e-3);
}

TEST(StepTraffic, DetectsOverlap) {
  auto net = RoadNetwork::straight(1000.0, 1, 30.0);
  std::vector<VehicleState> vs{car(1, 100.0, 10.0), car(2, 97.0, 10.0)};
  EXPECT_THROW(step_traffic(net, vs, StepParams{}), CollisionError);
}

TEST(StepTraffic, ExitsAtSegmentEnd) {
  auto net = RoadNetwork::straight(100.0, 1, 30.0);
  std::vector<VehicleState> vs{car(1, 99.99, 30.0)};
  auto out = step_traffic(net, vs, StepParams{});
  EXPECT_TRUE(out.vehicles.empty());
  ASSERT_EQ(out.events.size(), 1u);
  EXPECT_EQ(out.events[0].kind, EventKind::Exit);
}

TEST(StepTraffic, LaneChangeRequestHonoredWhenSafe) {
  auto net = RoadNetwork::straight(1000.0, 2, 30.0);
  std::vector<VehicleState> vs{car(1, 100.0, 20.0)};
  std::vector<LaneChangeRequest> req{{1, 1}};
  auto out = step_traffic(net, vs, StepParams{}, req);
  EXPECT_EQ(out.vehicles[0].lane, 1);
  ASSERT_EQ(out.events.size(), 1u);
  EXPECT_EQ(out.events[0].kind, EventKind::LaneChange);
}

TEST(StepTraffic, LaneChangeRefusedIntoOccupiedSpot) {
  auto net = RoadNetwork::straight(1000.0, 2, 30.0);
  std::vector<VehicleState> vs{car(1, 100.0, 20.0), car(2, 104.0, 20.0, 1)};
  std::vector<LaneChangeRequest> req{{1, 1}};
  auto out = step_traffic(net, vs, StepParams{}, req);
  EXPECT_EQ(out.vehicles[0].lane, 0);
}

TEST(StepTraffic, Deterministic) {
  auto net = RoadNetwork::crossing(1200.0, 2, 30.0, 1, 12.0, 0.5);
  std::vector<VehicleState> a;
  for (int i = 0; i < 10; ++i) a.push_back(car(i + 1, 50.0 + 40.0 * i, 25.0));
  auto b = a;
  StepParams sp;
  sp.seed = 9;
  sp.lane_change_rate = 0.5;
  for (int k = 0; k < 4000; ++k) {
    sp.step_index = k;
    a = step_traffic(net, a, sp).vehicles;
    b = step_traffic(net, b, sp).vehicles;
  }
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].s_pos, b[i].s_pos);
    EXPECT_EQ(a[i].v, b[i].v);
    EXPECT_EQ(a[i].segment, b[i].segment);
  }
}

TEST(Platoon, TenMinutesWithoutCollisionSettlesAtDesiredSpeed) {
  auto net = RoadNetwork::straight(1e6, 1, 30.0);
  std::vector<VehicleState> vs;
  for (int i = 0; i < 10; ++i) vs.push_back(car(i + 1, 1000.0 - 25.0 * i, 20.0));
  StepParams sp;
  sp.dt = 0.0025;
  for (int k = 0; k < 240000; ++k) {  // 600 s
    sp.step_index = k;
    vs = step_traffic(net, vs, sp).vehicles;  // throws on collision
  }
  for (const auto& v : vs) EXPECT_LT(std::abs(v.v - v.idm.v0) / v.idm.v0, 0.01) << v.id;
}

TEST(Flow, ArrivalCountMatchesReplay) {
  auto net = RoadNetwork::straight(10000.0, 1, 30.0);
  FlowSpec spec;
  spec.rate = 0.5;
  spec.seed = 7;
  FlowGenerator gen(net, spec);
  VehicleId next = 1;
  std::vector<VehicleState> none;
  std::size_t count = 0;
  double first = -1.0;
  const double dt = 0.0025;
  for (int k = 0; k <= 24000; ++k) {
    const double now = k * dt;
    auto ins = gen.poll(now, none, next);
    if (!ins.empty() && first < 0.0) first = now;
    count += ins.size();
  }
  EXPECT_EQ(count, oracle::flow_count_60s);
  EXPECT_GE(first, oracle::flow_first_arrival);
  EXPECT_LT(first - oracle::flow_first_arrival, dt);
}

TEST(Flow, BlockedEntryDefers) {
  auto net = RoadNetwork::straight(10000.0, 1, 30.0);
  FlowSpec spec;
  spec.rate = 100.0;
  spec.seed = 3;
  FlowGenerator gen(net, spec);
  VehicleId next = 1;
  std::vector<VehicleState> blocker{car(99, 6.0, 0.0)};  // rear bumper at 1 m < s0
  EXPECT_TRUE(gen.poll(1.0, blocker, next).empty());
  std::vector<VehicleState> clear;
  EXPECT_EQ(gen.poll(1.0, clear, next).size(), 1u);
}

TEST(Flow, SameSeedSameSequence) {
  auto net = RoadNetwork::straight(10000.0, 1, 30.0);
  FlowSpec spec;
  spec.rate = 0.8;
  spec.seed = 11;
  spec.v0_spread = 0.1;
  FlowGenerator a(net, spec), b(net, spec);
  VehicleId na = 1, nb = 1;
  std::vector<VehicleState> none;
  for (int k = 0; k < 2000; ++k) {
    auto x = a.poll(k * 0.05, none, na);
    auto y = b.poll(k * 0.05, none, nb);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].idm.v0, y[i].idm.v0);
  }
}
