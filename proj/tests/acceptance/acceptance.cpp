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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cps/broadcast/control_message.hpp"
#include "cps/broadcast/overhead.hpp"
#include "cps/broadcast/set_cover.hpp"
#include "cps/channel/radio.hpp"
#include "cps/common/error.hpp"
#include "cps/common/rng.hpp"
#include "cps/engine/config.hpp"
#include "cps/engine/metrics.hpp"
#include "cps/engine/simulator.hpp"
#include "cps/gprk/link_model.hpp"
#include "cps/mobility/idm.hpp"
#include "cps/mobility/road_network.hpp"
#include "cps/mobility/traffic.hpp"
#include "cps/scheduler/scheduler.hpp"
#include "cps/tracking/tracker_bank.hpp"
#include "cps/tracking/ukf.hpp"
#include "oracle_values.hpp"

using namespace cps;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path out_root() {
  static const fs::path root = [] {
    auto p = fs::temp_directory_path() / "cps_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

// Preset runs shared between criteria, keyed by "preset/protocol".
std::map<std::string, engine::MetricsRecord>& cache() {
  static std::map<std::string, engine::MetricsRecord> c;
  return c;
}

const engine::MetricsRecord& run_preset(const std::string& name, engine::Protocol p,
                                        double* seconds = nullptr) {
  const std::string key = name + "/" + engine::to_string(p);
  auto it = cache().find(key);
  if (it == cache().end()) {
    auto cfg = engine::preset(name);
    cfg.protocol = p;
    const auto t0 = Clock::now();
    auto rec = engine::run(cfg);
    if (seconds) *seconds = seconds_since(t0);
    it = cache().emplace(key, std::move(rec)).first;
  }
  return it->second;
}

// ---------------------------------------------------------------------------

Outcome reliability_predictability() {
  double secs = 0.0;
  const auto& r = run_preset("crossing", engine::Protocol::CPS, &secs);
  const auto& s = r.summary;
  const double frac = s.frac_links_meeting.value_or(0.0);
  const bool ok = frac >= 0.95 && s.max_vehicles >= 80 && secs <= 300.0 && s.links_evaluated > 0;
  return {ok, fmt("links meeting 0.88: %.4f of %d, vehicles %d, mean PDR %.4f, runtime %.1f s", frac,
                  s.links_evaluated, s.max_vehicles, s.mean_pdr.value_or(0.0), secs)};
}

Outcome baseline_ordering() {
  const auto& cps = run_preset("crossing", engine::Protocol::CPS).summary;
  const auto& csma = run_preset("crossing", engine::Protocol::CSMA).summary;
  const auto& rtdma = run_preset("crossing", engine::Protocol::RTDMA).summary;
  const double m_cps = cps.mean_pdr.value_or(0.0);
  const double m_csma = csma.mean_pdr.value_or(1.0);
  const double v_cps = cps.pdr_variance.value_or(1.0);
  const double v_rtdma = rtdma.pdr_variance.value_or(0.0);
  const bool ok = m_csma < 0.5 && 0.5 < m_cps && v_rtdma > 2.0 * v_cps;
  return {ok, fmt("mean PDR csma %.4f < 0.5 < cps %.4f; variance rtdma %.3g vs cps %.3g (ratio %.1f)",
                  m_csma, m_cps, v_rtdma, v_cps, v_cps > 0 ? v_rtdma / v_cps : INFINITY)};
}

Outcome overhead_closed_forms() {
  const auto r = broadcast::overhead_report(100, 1.0);
  const broadcast::Rational expect{48 + 64 * 99, 13};
  const bool ok = r.signal_map_bits == 638400 && r.signal_map_bps == 638400.0 &&
                  r.gprk_bytes == 1300 && r.reduction == expect &&
                  r.signal_map_bits == oracle::bits_100 &&
                  r.reduction.num == oracle::reduction_100_num &&
                  r.reduction.den == oracle::reduction_100_den;
  return {ok, fmt("%llu bps, %llu bytes, reduction %llu/%llu",
                  static_cast<unsigned long long>(r.signal_map_bits),
                  static_cast<unsigned long long>(r.gprk_bytes),
                  static_cast<unsigned long long>(r.reduction.num),
                  static_cast<unsigned long long>(r.reduction.den))};
}

std::size_t exhaustive_cover(const std::vector<std::vector<VehicleId>>& sets,
                             const std::set<VehicleId>& universe) {
  const std::size_t n = sets.size();
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k >= best) continue;
    std::set<VehicleId> u;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) u.insert(sets[i].begin(), sets[i].end());
    }
    if (u == universe) best = k;
  }
  return best;
}

Outcome set_cover_bound() {
  const auto t0 = Clock::now();
  Rng rng(4242);
  int invalid = 0, over_bound = 0, optimal = 0;
  const int instances = 200;
  for (int trial = 0; trial < instances; ++trial) {
    // Receivers along a road; each ER is the set of vehicles within a random
    // radius of its receiver.
    const std::size_t vehicles = 5 + rng.below(36);  // <= 40
    std::vector<double> x(vehicles);
    for (auto& v : x) v = rng.uniform(0.0, 600.0);
    const std::size_t receivers = 1 + rng.below(std::min<std::size_t>(10, vehicles));
    std::vector<std::vector<VehicleId>> sets;
    for (std::size_t r = 0; r < receivers; ++r) {
      const std::size_t rx = rng.below(vehicles);
      const double radius = rng.uniform(20.0, 200.0);
      std::vector<VehicleId> er;
      for (std::size_t v = 0; v < vehicles; ++v) {
        if (std::abs(x[v] - x[rx]) <= radius) er.push_back(v);
      }
      sets.push_back(er);
    }
    std::set<VehicleId> universe;
    for (const auto& s : sets) universe.insert(s.begin(), s.end());
    const auto pick = broadcast::greedy_set_cover(sets);
    std::set<VehicleId> covered;
    for (auto i : pick) covered.insert(sets[i].begin(), sets[i].end());
    if (covered != universe) ++invalid;
    const auto opt = exhaustive_cover(sets, universe);
    const double bound = (std::log(static_cast<double>(universe.size())) + 1.0) * opt;
    if (static_cast<double>(pick.size()) > bound + 1e-12) ++over_bound;
    if (pick.size() == opt) ++optimal;
  }
  const double secs = seconds_since(t0);
  const bool ok = invalid == 0 && over_bound == 0 && secs <= 30.0;
  return {ok, fmt("%d instances: %d invalid, %d over bound, %d optimal, %.2f s", instances, invalid,
                  over_bound, optimal, secs)};
}

Outcome scheduler_contract() {
  Rng rng(777);
  int violations = 0;
  std::size_t total_tx = 0;
  const int slots = 10000;
  for (Slot slot = 0; slot < slots; ++slot) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<VehicleId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = 1000 + 3 * i + rng.below(3);
    std::map<std::pair<VehicleId, VehicleId>, bool> edge;
    const double density = rng.uniform(0.0, 0.5);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) edge[{ids[a], ids[b]}] = rng.bernoulli(density);
    }
    auto conflict = [&](VehicleId a, VehicleId b) {
      if (a > b) std::swap(a, b);
      auto it = edge.find({a, b});
      return it != edge.end() && it->second;
    };
    const auto g = scheduler::build_conflict_graph(ids, conflict);
    const auto pr = scheduler::slot_priorities(g.vertices, slot, 99);
    const auto s = scheduler::select_transmitters(g, pr, slot);
    total_tx += s.transmitters.size();
    // Direct checks against the edge table, independent of the graph type.
    std::set<VehicleId> chosen(s.transmitters.begin(), s.transmitters.end());
    bool bad = chosen.size() != s.transmitters.size();
    for (VehicleId a : chosen) {
      for (VehicleId b : chosen) {
        if (a < b && conflict(a, b)) bad = true;
      }
    }
    for (VehicleId v : ids) {
      if (chosen.count(v)) continue;
      bool blocked = false;
      for (VehicleId a : chosen) blocked |= conflict(a, v);
      if (!blocked) bad = true;
    }
    if (bad || !scheduler::is_independent(g, s.transmitters) ||
        !scheduler::is_maximal(g, s.transmitters)) {
      ++violations;
    }
  }
  return {violations == 0, fmt("%d slots, %d violations, mean set size %.2f", slots, violations,
                               static_cast<double>(total_tx) / slots)};
}

Outcome controller_behavior() {
  const auto& r = run_preset("static-line", engine::Protocol::CPS);
  const double t = r.config.mac.t_rel;
  const Slot window = r.config.mac.feedback_window_slots;
  std::map<LinkId, bool> reached;
  std::map<LinkId, std::pair<std::int64_t, std::int64_t>> tail;  // windows 41-50
  int monotone_violations = 0;
  for (const auto& w : r.windows) {
    const Slot k = w.window_end / window;
    if (k > 50) continue;
    const double pdr = static_cast<double>(w.successes) / w.attempts;
    reached.try_emplace(w.link, false);
    if (pdr >= t) reached[w.link] = true;
    if (k > 40) {
      tail[w.link].first += w.attempts;
      tail[w.link].second += w.successes;
    }
    if (pdr < t && w.K_before && w.K_after && *w.K_after < *w.K_before) ++monotone_violations;
  }
  int not_reached = 0, tail_below = 0;
  for (const auto& [id, ok] : reached) not_reached += ok ? 0 : 1;
  for (const auto& [id, c] : tail) {
    if (static_cast<double>(c.second) / c.first < t) ++tail_below;
  }

  // Budget arithmetic against the scripted oracle.
  channel::RadioModel radio;
  auto model = [](double Y, double T, double c, double y_prev) {
    gprk::LinkModel m;
    m.t_rel = T;
    m.c_ewma = c;
    m = gprk::update_ewma(m, y_prev);
    return gprk::update_ewma(m, Y);
  };
  const auto axis = gprk::interference_axis(radio, oracle::axis_signal);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  const double e1 = rel(gprk::compute_delta_I(model(0.8, 0.9, 0.0, 0.8), axis, 0.0).delta_I,
                        oracle::dI_axis_Y08_T09);
  const double e2 = rel(gprk::compute_delta_I(model(0.95, 0.9, 0.0, 0.95), axis, 0.0).delta_I,
                        oracle::dI_axis_Y095_T09);
  const double e3 = rel(gprk::compute_delta_I(model(0.7, 0.9, 0.5, 0.85), axis, 1e-9).delta_I,
                        oracle::dI_axis_c05);
  const double e4 = rel(gprk::compute_delta_I(model(0.8, 0.9, 0.0, 0.8),
                                              [&](double p) { return radio.f_inv(p); }, 0.0)
                            .delta_I,
                        oracle::dI_raw_Y08_T09);
  const double worst = std::max({e1, e2, e3, e4});

  const bool ok = !reached.empty() && not_reached == 0 && monotone_violations == 0 &&
                  worst <= 1e-9;
  return {ok, fmt("%zu links: %d never reached T, %d below T over windows 41-50, %d K decreases "
                  "below T; budget oracle rel. error %.1e",
                  reached.size(), not_reached, tail_below, monotone_violations, worst)};
}

// Worst windowed PDR of the surviving link over the 5 s after departure.
std::optional<double> post_departure_min(const engine::MetricsRecord& r, LinkId link,
                                         double depart_s) {
  const Slot start = static_cast<Slot>(std::llround(depart_s / r.config.mac.slot_s));
  const Slot end = start + static_cast<Slot>(std::llround(5.0 / r.config.mac.slot_s));
  std::optional<double> worst;
  for (const auto& w : r.windows) {
    if (w.link != link) continue;
    const Slot w_start = w.window_end - r.config.mac.feedback_window_slots;
    if (w.window_end <= start || w_start >= end) continue;
    const double pdr = static_cast<double>(w.successes) / w.attempts;
    worst = worst ? std::min(*worst, pdr) : pdr;
  }
  return worst;
}

Outcome bc2_departure() {
  auto cfg = engine::preset("bc2-departure");
  const double depart = cfg.removals.at(0).time_s;
  const LinkId survivor{1, 2};
  const double floor = cfg.mac.t_rel - 0.05;
  const auto on = engine::run(cfg);
  cfg.mac.bc2 = false;
  const auto off = engine::run(cfg);
  const auto m_on = post_departure_min(on, survivor, depart);
  const auto m_off = post_departure_min(off, survivor, depart);
  const bool ok = m_on && m_off && *m_on >= floor && *m_off < floor;
  return {ok, fmt("min PDR of 1->2 in 5 s after departure: coverage floor on %.3f (>= %.2f), off %.3f (< %.2f)",
                  m_on.value_or(-1.0), floor, m_off.value_or(-1.0), floor)};
}

Outcome idm_correctness() {
  using namespace mobility;
  IdmParams p;
  double worst = 0.0;
  auto track = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
  track(idm_desired_gap(20.0, 15.0, p), oracle::idm_desired_gap_20_15);
  track(idm_accel_free(1.2 * p.v0, p), oracle::idm_free_1p2_v0);
  track(idm_accel_iidm(30.0, 20.0, 20.0, p), oracle::idm_iidm_20_20_30);
  track(idm_accel_cah(15.0, 25.0, 20.0, -1.0, p), oracle::idm_cah_25_20_15_m1);
  track(idm_accel_acc(15.0, 25.0, 20.0, -1.0, p), oracle::idm_acc_25_20_15_m1);
  for (const auto& c : oracle::idm_samples) {
    track(idm_accel_acc(c.s, c.v, c.vl, c.al, p), c.acc);
    track(idm_accel_iidm(c.s, c.v, c.vl, p), c.iidm);
    track(idm_accel_cah(c.s, c.v, c.vl, c.al, p), c.cah);
  }

  // Platoon of 10 for 600 s; step_traffic throws on any nonpositive gap.
  auto net = RoadNetwork::straight(1e6, 1, 30.0);
  std::vector<VehicleState> vs;
  for (int i = 0; i < 10; ++i) {
    VehicleState v;
    v.id = static_cast<VehicleId>(i + 1);
    v.s_pos = 1000.0 - 25.0 * i;
    v.v = 15.0 + i;
    vs.push_back(v);
  }
  bool collided = false;
  double min_gap = INFINITY;
  StepParams sp;
  try {
    for (int k = 0; k < 240000; ++k) {
      sp.step_index = k;
      vs = step_traffic(net, vs, sp).vehicles;
      for (std::size_t i = 1; i < vs.size(); ++i) {
        min_gap = std::min(min_gap, vs[i - 1].s_pos - vs[i - 1].length - vs[i].s_pos);
      }
    }
  } catch (const CollisionError&) {
    collided = true;
  }

  std::vector<VehicleState> lone(1);
  lone[0].id = 1;
  lone[0].v = 0.0;
  auto road = RoadNetwork::straight(1e7, 1, 30.0);
  for (int k = 0; k < 120000; ++k) lone = step_traffic(road, lone, sp).vehicles;  // 300 s
  const double rel_err = std::abs(lone[0].v - lone[0].idm.v0) / lone[0].idm.v0;

  const bool ok = worst <= 1e-9 && !collided && rel_err < 1e-3;
  return {ok, fmt("oracle max abs error %.1e over %zu cases; platoon %s (min gap %.2f m); "
                  "isolated |v-v0|/v0 = %.1e",
                  worst, oracle::idm_samples.size() * 3 + 5, collided ? "COLLIDED" : "clean",
                  min_gap, rel_err)};
}

// Position tracking of vehicles on a road network from noisy, quantized
// location reports every `period` slots.
struct TrackingRun {
  double ukf_sq = 0.0;
  double cv_sq = 0.0;
  std::size_t n = 0;
  double ukf_rmse() const { return std::sqrt(ukf_sq / n); }
  double cv_rmse() const { return std::sqrt(cv_sq / n); }
};

TrackingRun track_scenario(const mobility::RoadNetwork& net,
                           std::vector<mobility::VehicleState> vs,
                           std::vector<mobility::FlowGenerator>* flows, double duration_s,
                           double warmup_s, std::uint64_t seed) {
  const double dt = 0.0025;
  const int period = 100;
  const double sigma = 4.0;
  tracking::UkfParams up;
  up.meas_sigma = sigma;
  tracking::TrackerBank bank(net, up);
  broadcast::LocalFrame frame;
  std::map<VehicleId, tracking::ConstantVelocityExtrapolator> cv;
  std::map<VehicleId, double> first_seen;
  Rng rng(seed);
  VehicleId next_id = 1000;
  TrackingRun out;
  const long steps = std::lround(duration_s / dt);
  for (long k = 0; k < steps; ++k) {
    const double now = k * dt;
    mobility::StepParams sp;
    sp.step_index = k;
    sp.seed = seed;
    vs = mobility::step_traffic(net, vs, sp).vehicles;
    if (flows) {
      for (auto& f : *flows) {
        for (auto& v : f.poll(now, vs, next_id)) vs.push_back(v);
      }
    }
    std::set<VehicleId> alive;
    for (const auto& v : vs) alive.insert(v.id);
    for (auto it = first_seen.begin(); it != first_seen.end();) {
      if (!alive.count(it->first)) {
        bank.erase(it->first);
        cv.erase(it->first);
        it = first_seen.erase(it);
      } else {
        ++it;
      }
    }
    bank.predict_all(dt);
    if (k % period == 0) {
      std::vector<tracking::Observation> obs;
      for (const auto& v : vs) {
        const auto& seg = net.segment(v.segment);
        Vec2 p = seg.position(v.s_pos, v.lane);
        p = p + Vec2{rng.normal(0.0, sigma), rng.normal(0.0, sigma)};
        p = frame.from_fixed(frame.to_fixed(p));
        obs.push_back({v.id, p, v.segment, v.lane});
        first_seen.try_emplace(v.id, now);
        cv[v.id].observe(now, seg.project(p));
      }
      bank.observe_all(obs, k);
    }
    if (now < warmup_s) continue;
    for (const auto& v : vs) {
      auto fs_it = first_seen.find(v.id);
      if (fs_it == first_seen.end() || now - fs_it->second < warmup_s) continue;
      const auto* t = bank.find(v.id);
      if (!t || t->segment != v.segment) continue;
      const double e_ukf = t->mean[tracking::kPos] - v.s_pos;
      const double e_cv = cv[v.id].predict(now) - v.s_pos;
      out.ukf_sq += e_ukf * e_ukf;
      out.cv_sq += e_cv * e_cv;
      ++out.n;
    }
  }
  return out;
}

Outcome tracking_quality() {
  // Straight two-lane road with Poisson inflow and mixed desired speeds.
  auto road = mobility::RoadNetwork::straight(3000.0, 2, 30.0);
  std::vector<mobility::FlowGenerator> flows;
  for (int lane = 0; lane < 2; ++lane) {
    mobility::FlowSpec f;
    f.lane = lane;
    f.rate = 0.3;
    f.v0_spread = 0.15;
    f.t_gap_spread = 0.2;
    f.seed = 100 + lane;
    flows.emplace_back(road, f);
  }
  const auto straight = track_scenario(road, {}, &flows, 120.0, 10.0, 5);

  // Opposite-direction pass at 80 km/h each way.
  auto two_way = mobility::RoadNetwork::two_way(1000.0, 1, 22.22);
  std::vector<mobility::VehicleState> pair(2);
  pair[0].id = 1;
  pair[0].segment = 0;
  pair[0].s_pos = 100.0;
  pair[1].id = 2;
  pair[1].segment = 1;
  pair[1].s_pos = 100.0;
  for (auto& v : pair) {
    v.idm.v0 = 22.22;
    v.v = 22.22;
  }
  const auto pass = track_scenario(two_way, pair, nullptr, 35.0, 2.0, 6);

  const bool ok = straight.n > 0 && straight.ukf_rmse() < 2.0 && pass.n > 0 &&
                  pass.ukf_rmse() <= pass.cv_rmse();
  return {ok, fmt("straight road UKF RMSE %.3f m (%zu samples, CV %.2f m); opposite pass UKF %.3f m "
                  "vs constant-velocity %.3f m",
                  straight.ukf_rmse(), straight.n, straight.cv_rmse(), pass.ukf_rmse(),
                  pass.cv_rmse())};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  int mismatches = 0;
  std::string detail;
  for (const auto& name : engine::preset_names()) {
    const auto& first = run_preset(name, engine::Protocol::CPS);
    auto cfg = engine::preset(name);
    const auto second = engine::run(cfg);
    const auto a = out_root() / (name + "_a");
    const auto b = out_root() / (name + "_b");
    engine::export_metrics(first, a.string());
    engine::export_metrics(second, b.string());
    int files = 0;
    for (const char* f : {"pdr.csv", "concurrency.csv", "control.csv", "links.csv", "events.csv"}) {
      ++files;
      if (slurp(a / f) != slurp(b / f)) {
        ++mismatches;
        detail += std::string(" ") + name + "/" + f;
      }
    }
    (void)files;
  }
  return {mismatches == 0,
          fmt("%zu presets x 5 CSVs, %d mismatches%s", engine::preset_names().size(), mismatches,
              detail.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* label;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"1 reliability on crossing preset", reliability_predictability},
      {"2 baseline ordering", baseline_ordering},
      {"3 overhead closed forms", overhead_closed_forms},
      {"4 set-cover bound", set_cover_bound},
      {"5 scheduler contract", scheduler_contract},
      {"6 controller behavior", controller_behavior},
      {"7 receiver departure", bc2_departure},
      {"8 car-following correctness", idm_correctness},
      {"9 tracking quality", tracking_quality},
      {"10 determinism", determinism},
  };
  // With an argument, run only that criterion (1-based).
  std::size_t first = 0, last = criteria.size();
  if (argc > 1) {
    const long n = std::strtol(argv[1], nullptr, 10);
    if (n < 1 || n > static_cast<long>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu]\n", argv[0], criteria.size());
      return 2;
    }
    first = static_cast<std::size_t>(n - 1);
    last = first + 1;
  }
  int failed = 0;
  for (std::size_t k = first; k < last; ++k) {
    const auto& c = criteria[k];
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", c.label, o.detail.c_str());
    std::fflush(stdout);
  }
  const std::size_t ran = last - first;
  std::printf("%zu of %zu criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
