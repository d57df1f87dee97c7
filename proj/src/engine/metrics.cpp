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
#include "cps/engine/metrics.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cps/common/error.hpp"

namespace cps::engine {

using nlohmann::json;

namespace {

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v, int digits = 6) {
  return v ? fmt(*v, digits) : std::string();
}

// Linear interpolation between order statistics.
double percentile(std::vector<double> sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

template <typename T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <typename T>
void get_opt(const json& j, const char* key, std::optional<T>& v) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    v.reset();
  } else {
    v = it->template get<T>();
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

Summary summarize(const MetricsRecord& r) {
  const auto& c = r.config;
  Summary s;
  s.name = c.name;
  s.protocol = to_string(c.protocol);
  s.seed = c.seed;
  s.duration_s = c.duration_s;
  s.slots = c.total_slots();
  s.warmup_s = c.mac.warmup_s;
  s.t_rel = c.mac.t_rel;
  s.max_vehicles = r.summary.max_vehicles;

  std::vector<double> pdrs;
  for (const auto& l : r.links) {
    if (l.attempts > 0) ++s.links_total;
    if (l.attempts < c.mac.min_link_attempts) continue;
    pdrs.push_back(static_cast<double>(l.successes) / static_cast<double>(l.attempts));
  }
  s.links_evaluated = static_cast<int>(pdrs.size());
  if (!pdrs.empty()) {
    const double n = static_cast<double>(pdrs.size());
    const double mean = std::accumulate(pdrs.begin(), pdrs.end(), 0.0) / n;
    double var = 0.0;
    for (double p : pdrs) var += (p - mean) * (p - mean);
    s.mean_pdr = mean;
    s.pdr_variance = var / n;
    s.min_pdr = *std::min_element(pdrs.begin(), pdrs.end());
    const auto ok = std::count_if(pdrs.begin(), pdrs.end(),
                                  [&](double p) { return p >= c.mac.t_rel - 0.02 - 1e-12; });
    s.frac_links_meeting = static_cast<double>(ok) / n;
  }

  const Slot warmup_slots = static_cast<Slot>(std::llround(c.mac.warmup_s / c.mac.slot_s));
  int window_ok = 0;
  for (const auto& w : r.windows) {
    if (w.window_end - c.mac.feedback_window_slots < warmup_slots || w.attempts < 10) continue;
    ++s.window_samples;
    if (static_cast<double>(w.successes) / w.attempts >= c.mac.t_rel - 0.02 - 1e-12) ++window_ok;
  }
  if (s.window_samples > 0) {
    s.frac_windows_meeting = static_cast<double>(window_ok) / s.window_samples;
  }

  std::int64_t measured_slots = 0;
  std::int64_t tx_total = 0;
  for (const auto& row : r.slots) {
    if (row.slot < warmup_slots) continue;
    ++measured_slots;
    tx_total += row.transmitters;
    s.attempts += row.attempts;
    s.deliveries += row.deliveries;
  }
  if (measured_slots > 0) {
    const double seconds = static_cast<double>(measured_slots) * c.mac.slot_s;
    s.throughput_pps = static_cast<double>(s.deliveries) / seconds;
    s.mean_concurrency = static_cast<double>(tx_total) / static_cast<double>(measured_slots);
  }

  if (!r.delays_s.empty()) {
    std::vector<double> d = r.delays_s;
    std::sort(d.begin(), d.end());
    s.delay_mean_ms = 1e3 * std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    s.delay_p50_ms = 1e3 * percentile(d, 0.5);
    s.delay_p90_ms = 1e3 * percentile(d, 0.9);
    s.delay_p99_ms = 1e3 * percentile(d, 0.99);
  }

  for (const auto& row : r.control) {
    s.control_bytes += row.signal_bytes + row.er_bytes + row.event_bytes;
  }
  if (c.duration_s > 0.0) s.control_bps = 8.0 * static_cast<double>(s.control_bytes) / c.duration_s;

  for (const auto& l : r.links) {
    if (!l.init_method.empty()) ++s.init_methods[l.init_method];
  }
  return s;
}

json summary_to_json(const Summary& s) {
  json j;
  j["name"] = s.name;
  j["protocol"] = s.protocol;
  j["seed"] = s.seed;
  j["duration_s"] = s.duration_s;
  j["slots"] = s.slots;
  j["warmup_s"] = s.warmup_s;
  j["t_rel"] = s.t_rel;
  j["max_vehicles"] = s.max_vehicles;
  j["links_total"] = s.links_total;
  j["links_evaluated"] = s.links_evaluated;
  put_opt(j, "mean_pdr", s.mean_pdr);
  put_opt(j, "pdr_variance", s.pdr_variance);
  put_opt(j, "min_pdr", s.min_pdr);
  put_opt(j, "frac_links_meeting", s.frac_links_meeting);
  j["window_samples"] = s.window_samples;
  put_opt(j, "frac_windows_meeting", s.frac_windows_meeting);
  j["attempts"] = s.attempts;
  j["deliveries"] = s.deliveries;
  j["throughput_pps"] = s.throughput_pps;
  j["mean_concurrency"] = s.mean_concurrency;
  put_opt(j, "delay_mean_ms", s.delay_mean_ms);
  put_opt(j, "delay_p50_ms", s.delay_p50_ms);
  put_opt(j, "delay_p90_ms", s.delay_p90_ms);
  put_opt(j, "delay_p99_ms", s.delay_p99_ms);
  j["control_bytes"] = s.control_bytes;
  j["control_bps"] = s.control_bps;
  j["init_methods"] = s.init_methods;
  return j;
}

Summary summary_from_json(const json& j) {
  Summary s;
  try {
    s.name = j.at("name").get<std::string>();
    s.protocol = j.at("protocol").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.duration_s = j.at("duration_s").get<double>();
    s.slots = j.at("slots").get<std::int64_t>();
    s.warmup_s = j.at("warmup_s").get<double>();
    s.t_rel = j.at("t_rel").get<double>();
    s.max_vehicles = j.at("max_vehicles").get<int>();
    s.links_total = j.at("links_total").get<int>();
    s.links_evaluated = j.at("links_evaluated").get<int>();
    get_opt(j, "mean_pdr", s.mean_pdr);
    get_opt(j, "pdr_variance", s.pdr_variance);
    get_opt(j, "min_pdr", s.min_pdr);
    get_opt(j, "frac_links_meeting", s.frac_links_meeting);
    s.window_samples = j.at("window_samples").get<int>();
    get_opt(j, "frac_windows_meeting", s.frac_windows_meeting);
    s.attempts = j.at("attempts").get<std::int64_t>();
    s.deliveries = j.at("deliveries").get<std::int64_t>();
    s.throughput_pps = j.at("throughput_pps").get<double>();
    s.mean_concurrency = j.at("mean_concurrency").get<double>();
    get_opt(j, "delay_mean_ms", s.delay_mean_ms);
    get_opt(j, "delay_p50_ms", s.delay_p50_ms);
    get_opt(j, "delay_p90_ms", s.delay_p90_ms);
    get_opt(j, "delay_p99_ms", s.delay_p99_ms);
    s.control_bytes = j.at("control_bytes").get<std::int64_t>();
    s.control_bps = j.at("control_bps").get<double>();
    s.init_methods = j.at("init_methods").get<std::map<std::string, int>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed summary: ") + e.what());
  }
  return s;
}

void export_metrics(const MetricsRecord& r, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  const fs::path root(dir);

  std::ostringstream pdr;
  pdr << "window_end_slot,sender,receiver,attempts,successes,pdr,K_before,K_after,rule\n";
  for (const auto& w : r.windows) {
    pdr << w.window_end << ',' << w.link.sender << ',' << w.link.receiver << ',' << w.attempts
        << ',' << w.successes << ',' << fmt(static_cast<double>(w.successes) / w.attempts) << ','
        << fmt_opt(w.K_before) << ',' << fmt_opt(w.K_after) << ',' << w.rule << '\n';
  }
  write_file(root / "pdr.csv", pdr.str());

  std::ostringstream conc;
  conc << "slot,transmitters,attempts,deliveries\n";
  for (const auto& s : r.slots) {
    conc << s.slot << ',' << s.transmitters << ',' << s.attempts << ',' << s.deliveries << '\n';
  }
  write_file(root / "concurrency.csv", conc.str());

  std::ostringstream ctl;
  ctl << "slot,messages,signal_bytes,er_bytes,event_bytes,cover_receivers,active_links\n";
  for (const auto& c : r.control) {
    ctl << c.slot << ',' << c.messages << ',' << c.signal_bytes << ',' << c.er_bytes << ','
        << c.event_bytes << ',' << c.cover_receivers << ',' << c.active_links << '\n';
  }
  write_file(root / "control.csv", ctl.str());

  std::ostringstream links;
  links << "sender,receiver,attempts,successes,pdr,init_method,final_K\n";
  for (const auto& l : r.links) {
    links << l.link.sender << ',' << l.link.receiver << ',' << l.attempts << ',' << l.successes
          << ','
          << (l.attempts > 0 ? fmt(static_cast<double>(l.successes) / l.attempts) : std::string())
          << ',' << l.init_method << ',' << fmt_opt(l.final_K) << '\n';
  }
  write_file(root / "links.csv", links.str());

  std::ostringstream ev;
  ev << "slot,kind,vehicle,other,detail\n";
  for (const auto& e : r.events) {
    ev << e.slot << ',' << e.kind << ',' << e.vehicle << ',' << e.other << ',' << e.detail << '\n';
  }
  write_file(root / "events.csv", ev.str());

  json j = summary_to_json(r.summary);
  j["config"] = config_to_json(r.config);
  write_file(root / "summary.json", j.dump(2) + "\n");
}

Summary read_summary(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "summary.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
  }
  return summary_from_json(j);
}

std::string comparison_table(const std::vector<std::pair<std::string, Summary>>& runs) {
  auto cell = [](const std::optional<double>& v, int digits) {
    return v ? fmt(*v, digits) : std::string("-");
  };
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"run", "protocol", "links", "mean_pdr", "pdr_var", "links>=T-0.02",
                  "throughput_pps", "concurrency", "delay_p50_ms", "delay_p90_ms", "control_bps"});
  for (const auto& [label, s] : runs) {
    rows.push_back({label, s.protocol, std::to_string(s.links_evaluated), cell(s.mean_pdr, 4),
                    cell(s.pdr_variance, 5), cell(s.frac_links_meeting, 4),
                    fmt(s.throughput_pps, 1), fmt(s.mean_concurrency, 3), cell(s.delay_p50_ms, 2),
                    cell(s.delay_p90_ms, 2), fmt(s.control_bps, 0)});
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i] << std::string(width[i] - row[i].size() + (i + 1 < row.size() ? 2 : 0), ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cps::engine
