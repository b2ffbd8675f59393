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

/**
 * @file simrunner.hpp
 * @brief Slot loop, cluster-size sweeps and CSV export.
 */
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cfleo/config.hpp"
#include "cfleo/metrics.hpp"

namespace cfleo {

/// Runs config.num_runs independent runs of config.mode. Deterministic in
/// (config, seed); runs are spread over worker threads when available.
MetricsLog run(const SimConfig& config, unsigned threads = 0);

/// Fills avg_se, avg_service_time_s and handover_rate from the raw records.
void compute_aggregates(MetricsLog& log);

struct SweepCell {
  int num_saps = 0;
  Mode mode = Mode::kCfJpahm;
  double avg_se = 0.0;
  double avg_service_time_s = 0.0;
  double handover_rate = 0.0;
};

/// Modes in sweep order.
const std::vector<Mode>& sweep_modes();

/// Every (M, mode) cell on paired per-run seeds. When `out_dir` is
/// non-empty each cell's log is exported to out_dir/M<m>_<mode>/ and the
/// sweep tables are written to out_dir.
std::vector<SweepCell> sweep(const SimConfig& config, std::span<const int> sap_counts,
                             const std::filesystem::path& out_dir = {}, unsigned threads = 0);

/// rates.csv, events.csv, summary.csv and config.echo.
void export_log(const MetricsLog& log, const SimConfig& config,
                const std::filesystem::path& dir);

/// summary.csv (all cells), fig2_service_time.csv, fig3_spectral_efficiency.csv.
void export_sweep(const std::vector<SweepCell>& cells, const SimConfig& config,
                  const std::filesystem::path& dir);

/// "%.17g"; shortest text that reads back to the same double.
std::string format_double(double x);

}  // namespace cfleo
