/*
 * Copyright 2026 The cfleo Authors
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

// Command-line front end: run, sweep, verify.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfleo/config.hpp"
#include "cfleo/simrunner.hpp"
#include "cfleo/verification.hpp"

namespace {

std::vector<int> parse_sap_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos);
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size() || v < 1) throw std::invalid_argument("bad SAP count '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void print_summary(const cfleo::MetricsLog& log) {
  std::printf("mode=%s M=%d K=%d runs=%zu avg_se=%.6f avg_service_time_s=%.4f "
              "handover_rate=%.6g\n",
              std::string(cfleo::to_string(log.mode)).c_str(), log.num_saps, log.num_uts,
              log.runs.size(), log.avg_se, log.avg_service_time_s, log.handover_rate);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free LEO satellite network simulator"};
  app.set_version_flag("--version", std::string("cfleo ") + CFLEO_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string mode_text;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 0;

  auto* run_cmd = app.add_subcommand("run", "Simulate one mode and export CSV logs");
  run_cmd->add_option("--config", config_path, "Configuration file")->required()->check(
      CLI::ExistingFile);
  run_cmd->add_option("--mode", mode_text, "cf_jpahm | best_channel | max_serv_time");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Base seed (overrides config)");
  run_cmd->add_option("--out", out_dir, "Output directory (overrides config)");
  run_cmd->add_option("--threads", threads, "Worker threads, 0 = hardware");

  std::string saps_text = "4,8,16,24,32";
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep cluster size over all modes");
  sweep_cmd->add_option("--config", config_path, "Configuration file")->required()->check(
      CLI::ExistingFile);
  sweep_cmd->add_option("--saps", saps_text, "Comma-separated SAP counts");
  sweep_cmd->add_option("--out", out_dir, "Output directory (overrides config)");
  sweep_cmd->add_option("--threads", threads, "Worker threads, 0 = hardware");

  int trials = 100000;
  auto* verify_cmd = app.add_subcommand("verify", "Monte-Carlo and oracle self-checks");
  verify_cmd->add_option("--config", config_path, "Configuration file")->required()->check(
      CLI::ExistingFile);
  verify_cmd->add_option("--trials", trials, "Monte-Carlo trials")->check(
      CLI::Range(10000, 100000000));

  CLI11_PARSE(app, argc, argv);

  try {
    cfleo::SimConfig cfg = cfleo::load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    if (*run_cmd) {
      if (!mode_text.empty()) cfg.mode = cfleo::parse_mode(mode_text);
      if (*seed_opt) cfg.seed = seed;
      cfg.validate();
      const cfleo::MetricsLog log = cfleo::run(cfg, threads);
      cfleo::export_log(log, cfg, cfg.output_dir);
      print_summary(log);
      return 0;
    }
    if (*sweep_cmd) {
      const std::vector<int> saps = parse_sap_list(saps_text);
      const auto cells = cfleo::sweep(cfg, saps, cfg.output_dir, threads);
      std::printf("%-14s %4s %12s %18s %14s\n", "mode", "M", "avg_se", "service_time_s",
                  "handover_rate");
      for (const auto& c : cells) {
        std::printf("%-14s %4d %12.6f %18.4f %14.6g\n",
                    std::string(cfleo::to_string(c.mode)).c_str(), c.num_saps, c.avg_se,
                    c.avg_service_time_s, c.handover_rate);
      }
      return 0;
    }
    if (*verify_cmd) {
      cfleo::VerifyOptions opt;
      opt.trials = trials;
      opt.seed = cfg.seed;
      bool ok = true;
      for (const auto& r : cfleo::run_verification(cfg.ga, cfg.alpha, opt)) {
        std::printf("%-5s %-26s value=%.6g limit=%.6g\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.value, r.limit);
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
