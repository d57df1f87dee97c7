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
// Command-line front end: run scenarios, list presets, compare runs.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cps/common/error.hpp"
#include "cps/engine/config.hpp"
#include "cps/engine/metrics.hpp"
#include "cps/engine/simulator.hpp"

namespace fs = std::filesystem;
using namespace cps::engine;

namespace {

int cmd_run(const std::string& config_path, const std::string& preset_name, const std::string& out,
            std::optional<std::uint64_t> seed, const std::string& protocol,
            std::optional<double> duration) {
  ScenarioConfig cfg = preset_name.empty() ? load_config(config_path) : preset(preset_name);
  if (seed) cfg.seed = *seed;
  if (!protocol.empty()) cfg.protocol = parse_protocol(protocol);
  if (duration) cfg.duration_s = *duration;
  cfg.validate();
  const MetricsRecord rec = run(cfg);
  export_metrics(rec, out);
  std::cout << comparison_table({{cfg.name, rec.summary}});
  return 0;
}

int cmd_report(const std::vector<std::string>& dirs) {
  std::vector<std::pair<std::string, Summary>> runs;
  for (const auto& d : dirs) {
    if (fs::exists(fs::path(d) / "summary.json")) {
      runs.emplace_back(fs::path(d).filename().string(), read_summary(d));
      continue;
    }
    if (!fs::is_directory(d)) throw cps::IoError("no such run directory '" + d + "'");
    std::vector<fs::path> subdirs;
    for (const auto& e : fs::directory_iterator(d)) {
      if (e.is_directory() && fs::exists(e.path() / "summary.json")) subdirs.push_back(e.path());
    }
    std::sort(subdirs.begin(), subdirs.end());
    if (subdirs.empty()) throw cps::IoError("no summary.json under '" + d + "'");
    for (const auto& p : subdirs) runs.emplace_back(p.filename().string(), read_summary(p.string()));
  }
  std::cout << comparison_table(runs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slotted V2V scheduling simulator"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write metrics");
  std::string config_path, preset_name, out, protocol;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  auto* config_opt = run_cmd->add_option("--config", config_path, "Scenario JSON file");
  auto* preset_opt = run_cmd->add_option("--preset", preset_name, "Built-in preset instead of a file");
  config_opt->excludes(preset_opt);
  run_cmd->add_option("--out", out, "Output directory")->required();
  run_cmd->add_option("--seed", seed, "Override the seed");
  run_cmd->add_option("--protocol", protocol, "cps|ocps|csma|rtdma")
      ->check(CLI::IsMember({"cps", "ocps", "csma", "rtdma"}));
  run_cmd->add_option("--duration", duration, "Override the duration in seconds");

  auto* presets_cmd = app.add_subcommand("presets", "Inspect built-in presets");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
  auto* show_cmd = presets_cmd->add_subcommand("show", "Print a preset as JSON");
  std::string show_name;
  show_cmd->add_option("name", show_name, "Preset name")->required();

  auto* report_cmd = app.add_subcommand("report", "Compare runs in a plain-text table");
  std::vector<std::string> in_dirs;
  report_cmd->add_option("--in", in_dirs, "Run directory, or a directory of runs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (config_path.empty() && preset_name.empty()) {
        std::cerr << "run: one of --config or --preset is required\n";
        return 2;
      }
      return cmd_run(config_path, preset_name, out, seed, protocol, duration);
    }
    if (*list_cmd) {
      for (const auto& n : preset_names()) std::cout << n << "  " << preset_description(n) << '\n';
      return 0;
    }
    if (*show_cmd) {
      std::cout << config_to_json(preset(show_name)).dump(2) << '\n';
      return 0;
    }
    if (*report_cmd) return cmd_report(in_dirs);
  } catch (const cps::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const cps::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
