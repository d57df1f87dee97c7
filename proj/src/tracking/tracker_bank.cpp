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
#include "cps/tracking/tracker_bank.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace cps::tracking {

namespace {

struct LaneEntry {
  SegmentId segment;
  int lane;
  double s;
  VehicleId id;
  bool operator<(const LaneEntry& o) const {
    return std::tie(segment, lane, s, id) < std::tie(o.segment, o.lane, o.s, o.id);
  }
};

// Index of the entry ahead in the same lane, if within `horizon`.
std::optional<std::size_t> ahead(const std::vector<LaneEntry>& v, std::size_t i, double horizon) {
  if (i + 1 >= v.size()) return std::nullopt;
  const auto& a = v[i];
  const auto& b = v[i + 1];
  if (a.segment != b.segment || a.lane != b.lane || b.s - a.s > horizon) return std::nullopt;
  return i + 1;
}

}  // namespace

TrackerBank::TrackerBank(const mobility::RoadNetwork& net, UkfParams params,
                         mobility::IdmParams model, double vehicle_length, double lead_horizon)
    : net_(&net),
      params_(params),
      model_(model),
      vehicle_length_(vehicle_length),
      lead_horizon_(lead_horizon) {
  params_.validate();
}

void TrackerBank::predict_all(double dt) {
  std::vector<LaneEntry> order;
  order.reserve(tracks_.size());
  for (const auto& [id, t] : tracks_) {
    order.push_back({t.segment, t.lane, t.mean[kPos], id});
  }
  std::sort(order.begin(), order.end());
  std::vector<LeadInfo> leads(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& t = tracks_.at(order[i].id);
    if (auto j = ahead(order, i, lead_horizon_)) {
      const auto& lead = tracks_.at(order[*j].id);
      leads[i] = LeadInfo{true, lead.mean[kSpeed], 0.0};
      // The gap follows the lead's own estimate rather than a separate measurement.
      reset_gap(t, lead.mean[kPos] - t.mean[kPos] - vehicle_length_,
                t.cov(kPos, kPos) + lead.cov(kPos, kPos));
      t.lead = order[*j].id;
    } else {
      t.lead.reset();
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& t = tracks_.at(order[i].id);
    t = ukf_predict(t, dt, params_, leads[i]);
  }
}

mobility::IdmParams TrackerBank::model_for(SegmentId segment) const {
  mobility::IdmParams m = model_;
  m.v0 = net_->segment(segment).speed_limit();
  return m;
}

double TrackerBank::along_track(const Observation& o) const {
  const auto& seg = net_->segment(o.segment);
  return std::clamp(seg.project(o.location), 0.0, seg.length());
}

void TrackerBank::observe_all(std::span<const Observation> obs, Slot now) {
  std::vector<LaneEntry> order;
  order.reserve(obs.size());
  std::map<VehicleId, const Observation*> by_id;
  for (const auto& o : obs) {
    order.push_back({o.segment, o.lane, along_track(o), o.id});
    by_id[o.id] = &o;
  }
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& e = order[i];
    const Observation& o = *by_id.at(e.id);
    std::optional<double> gap;
    std::optional<VehicleId> lead;
    if (auto j = ahead(order, i, lead_horizon_)) {
      gap = order[*j].s - e.s - vehicle_length_;
      lead = order[*j].id;
    }

    auto it = tracks_.find(e.id);
    if (it == tracks_.end()) {
      const double speed = net_->segment(o.segment).speed_limit();
      auto& fresh = tracks_
                        .emplace(e.id, make_track(e.s, speed, gap.value_or(lead_horizon_),
                                                  model_for(o.segment), o.segment, o.lane, now,
                                                  params_))
                        .first->second;
      fresh.lead = lead;
      continue;
    }
    TrackState& t = it->second;
    if (t.segment != o.segment || t.lane != o.lane) {
      t = reset_to_measurement(t, e.s, o.segment, o.lane, now, params_);
      continue;
    }
    if (gap && t.lead != lead) {
      // A new lead: the old gap state says nothing about it.
      const double r2 = params_.meas_sigma * params_.meas_sigma;
      reset_gap(t, *gap, 2.0 * r2);
      t.lead = lead;
      gap.reset();
    }
    auto r = ukf_update(t, e.s, params_);
    if (!r.accepted) ++rejected_;
    t = r.track;
    t.last_update = now;
  }
}

void TrackerBank::reset(const Observation& obs, Slot now) {
  const double s = along_track(obs);
  auto it = tracks_.find(obs.id);
  if (it == tracks_.end()) {
    const double speed = net_->segment(obs.segment).speed_limit();
    tracks_.emplace(obs.id, make_track(s, speed, lead_horizon_, model_for(obs.segment),
                                       obs.segment, obs.lane, now, params_));
    return;
  }
  it->second = reset_to_measurement(it->second, s, obs.segment, obs.lane, now, params_);
}

void TrackerBank::erase(VehicleId id) { tracks_.erase(id); }

const TrackState* TrackerBank::find(VehicleId id) const {
  auto it = tracks_.find(id);
  return it == tracks_.end() ? nullptr : &it->second;
}

std::optional<Vec2> TrackerBank::position(VehicleId id) const {
  const TrackState* t = find(id);
  if (!t) return std::nullopt;
  const auto& seg = net_->segment(t->segment);
  return seg.position(std::clamp(t->mean[kPos], 0.0, seg.length()), t->lane);
}

}  // namespace cps::tracking
