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

#include "cfleo/simrunner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

#include "cfleo/allocation.hpp"
#include "cfleo/channel.hpp"
#include "cfleo/handover.hpp"
#include "cfleo/training.hpp"

namespace cfleo {

namespace fs = std::filesystem;

namespace {

AllocationProblem make_problem(const SimConfig& c, LargeScaleParams ls, int k_count) {
  AllocationProblem pb;
  pb.ls = std::move(ls);
  pb.pa = assign_pilots(k_count, c.tau_up, c.pilot_power_w());
  pb.noise_var = c.noise_var_w();
  pb.frame = c.frame();
  pb.r_min = Eigen::VectorXd::Constant(k_count, c.r_min_bps_hz);
  pb.p_max = Eigen::VectorXd::Constant(pb.ls.num_saps(), c.p_max_w());
  pb.alpha = c.alpha;
  return pb;
}

RunRecord simulate_run(const SimConfig& c, int run_index) {
  const GeometryConfig geo = c.geometry_config();
  const int k_count = geo.num_uts;
  const int horizon = c.horizon_slots;
  const std::uint64_t run_seed =
      derive_seed(c.seed, {tag(Purpose::kRun), static_cast<std::uint64_t>(run_index)});

  Rng geo_rng = make_stream(run_seed, {tag(Purpose::kGeometry)});
  const ClusterSnapshot initial = build_constellation(geo, geo_rng);
  Rng shadow_rng = make_stream(run_seed, {tag(Purpose::kShadowing)});
  const Eigen::MatrixXd shadow =
      draw_shadowing(geo.num_saps, k_count, c.channel.shadow_std_db, shadow_rng);

  RunRecord rec;
  rec.rate.assign(static_cast<std::size_t>(horizon) * k_count, 0.0);
  rec.served.assign(rec.rate.size(), 0);
  rec.assoc.assign(rec.rate.size(), -1);

  HandoverState state = HandoverState::initial(k_count, kCurrentCluster);
  PowerSolution previous;
  std::vector<int> previous_active;

  for (int t = 0; t < horizon; ++t) {
    const ClusterSnapshot snap = propagate(initial, geo, t);
    LargeScaleParams ls = large_scale(snap, c.channel, shadow);
    const std::size_t row = static_cast<std::size_t>(t) * k_count;

    if (c.mode == Mode::kCfJpahm) {
      std::vector<int> active;
      for (int k = 0; k < k_count; ++k) {
        if (state.uts[k].serving == kCurrentCluster) active.push_back(k);
      }
      PowerSolution full;
      full.P = Eigen::MatrixXd::Zero(geo.num_saps, k_count);
      full.admitted.assign(k_count, false);
      full.rates = Eigen::VectorXd::Zero(k_count);
      full.feasible = true;
      if (!active.empty()) {
        const int n_active = static_cast<int>(active.size());
        const AllocationProblem pb = make_problem(c, select_uts(ls, active), n_active);
        GaParams ga = c.ga;
        ga.seed = derive_seed(run_seed, {tag(Purpose::kGa), static_cast<std::uint64_t>(t)});

        // Warm start from the previous slot, restricted to UTs still active.
        PowerSolution warm;
        const PowerSolution* warm_ptr = nullptr;
        if (!previous_active.empty()) {
          warm.P = Eigen::MatrixXd::Zero(geo.num_saps, n_active);
          warm.admitted.assign(n_active, false);
          for (int j = 0; j < n_active; ++j) {
            const auto it = std::find(previous_active.begin(), previous_active.end(), active[j]);
            if (it == previous_active.end()) continue;
            const auto i = it - previous_active.begin();
            warm.P.col(j) = previous.P.col(i);
            warm.admitted[j] = previous.admitted[i];
          }
          warm_ptr = &warm;
        }
        PowerSolution sol = ga_solve(pb, ga, warm_ptr);
        for (int j = 0; j < n_active; ++j) {
          const int k = active[j];
          full.P.col(k) = sol.P.col(j);
          full.admitted[k] = sol.admitted[j];
          full.rates(k) = sol.rates(j);
        }
        previous = std::move(sol);
        previous_active = active;
      }
      auto upd = update(state, full, snap, t, c.handover);
      state = std::move(upd.state);
      rec.events.insert(rec.events.end(), upd.events.begin(), upd.events.end());
      for (int k = 0; k < k_count; ++k) {
        rec.rate[row + k] = full.admitted[k] ? full.rates(k) : 0.0;
        rec.served[row + k] = full.admitted[k] ? 1 : 0;
        rec.assoc[row + k] = state.uts[k].serving;
      }
    } else {
      const AllocationProblem pb = make_problem(c, std::move(ls), k_count);
      PowerSolution sol;
      if (c.mode == Mode::kBestChannel) {
        sol = best_channel_allocate(pb, snap);
      } else {
        std::vector<int> prev(k_count, -1);
        if (t > 0) {
          for (int k = 0; k < k_count; ++k) prev[k] = state.uts[k].serving;
        }
        sol = max_serv_time_allocate(pb, snap, prev);
      }
      if (t == 0) {
        state = HandoverState::initial(sol.association);
      } else {
        auto upd = track_association(state, sol.association, t);
        state = std::move(upd.state);
        rec.events.insert(rec.events.end(), upd.events.begin(), upd.events.end());
      }
      for (int k = 0; k < k_count; ++k) {
        rec.rate[row + k] = sol.rates(k);
        rec.served[row + k] = sol.admitted[k] ? 1 : 0;
        rec.assoc[row + k] = sol.association[k];
      }
    }
  }
  return rec;
}

}  // namespace

void compute_aggregates(MetricsLog& log) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& run : log.runs) {
    for (double r : run.rate) sum += r;
    n += run.rate.size();
  }
  // Every UT has the same horizon, so the mean of per-UT time averages is
  // the mean over all (run, slot, UT) rows.
  log.avg_se = n > 0 ? sum / static_cast<double>(n) : 0.0;
  const ServiceStats st = service_time_stats(log);
  log.avg_service_time_s = st.avg_service_time_s;
  log.handover_rate = st.handover_rate;
}

MetricsLog run(const SimConfig& config, unsigned threads) {
  config.validate();
  MetricsLog log;
  log.mode = config.mode;
  log.num_saps = config.geometry.num_saps;
  log.num_uts = config.geometry.num_uts;
  log.horizon = config.horizon_slots;
  log.slot_duration_s = config.handover.slot_duration_s;
  log.runs.resize(config.num_runs);

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(config.num_runs));
  if (threads <= 1) {
    for (int r = 0; r < config.num_runs; ++r) log.runs[r] = simulate_run(config, r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int r = next++; r < config.num_runs; r = next++) {
            log.runs[r] = simulate_run(config, r);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  compute_aggregates(log);
  return log;
}

const std::vector<Mode>& sweep_modes() {
  static const std::vector<Mode> modes = {Mode::kCfJpahm, Mode::kMaxServTime,
                                          Mode::kBestChannel};
  return modes;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_summary_row(std::ostream& out, Mode mode, int num_saps, double se, double st,
                       double hr) {
  out << to_string(mode) << ',' << num_saps << ',' << format_double(se) << ','
      << format_double(st) << ',' << format_double(hr) << '\n';
}

constexpr const char* kSummaryHeader = "mode,M,avg_se,avg_service_time,handover_rate\n";

}  // namespace

void export_log(const MetricsLog& log, const SimConfig& config, const fs::path& dir) {
  ensure_dir(dir);
  {
    const fs::path p = dir / "rates.csv";
    auto out = open_out(p);
    out << "run,slot,ut,rate,served,assoc\n";
    for (std::size_t r = 0; r < log.runs.size(); ++r) {
      const auto& run = log.runs[r];
      for (int t = 0; t < log.horizon; ++t) {
        for (int k = 0; k < log.num_uts; ++k) {
          const std::size_t i = static_cast<std::size_t>(t) * log.num_uts + k;
          out << r << ',' << t << ',' << k << ',' << format_double(run.rate[i]) << ','
              << static_cast<int>(run.served[i]) << ',' << run.assoc[i] << '\n';
        }
      }
    }
    close_out(out, p);
  }
  {
    const fs::path p = dir / "events.csv";
    auto out = open_out(p);
    out << "run,slot,ut,kind,from,to\n";
    for (std::size_t r = 0; r < log.runs.size(); ++r) {
      for (const auto& e : log.runs[r].events) {
        out << r << ',' << e.slot << ',' << e.ut << ',' << to_string(e.kind) << ',' << e.from
            << ',' << e.to << '\n';
      }
    }
    close_out(out, p);
  }
  {
    const fs::path p = dir / "summary.csv";
    auto out = open_out(p);
    out << kSummaryHeader;
    write_summary_row(out, log.mode, log.num_saps, log.avg_se, log.avg_service_time_s,
                      log.handover_rate);
    close_out(out, p);
  }
  {
    const fs::path p = dir / "config.echo";
    auto out = open_out(p);
    out << config_to_json(config).dump(2) << '\n';
    close_out(out, p);
  }
}

void export_sweep(const std::vector<SweepCell>& cells, const SimConfig& config,
                  const fs::path& dir) {
  ensure_dir(dir);
  std::map<int, std::map<Mode, const SweepCell*>> table;
  for (const auto& c : cells) table[c.num_saps][c.mode] = &c;
  {
    const fs::path p = dir / "summary.csv";
    auto out = open_out(p);
    out << kSummaryHeader;
    for (const auto& c : cells) {
      write_summary_row(out, c.mode, c.num_saps, c.avg_se, c.avg_service_time_s, c.handover_rate);
    }
    close_out(out, p);
  }
  const auto figure = [&](const char* name, double SweepCell::*field) {
    const fs::path p = dir / name;
    auto out = open_out(p);
    out << "M";
    for (Mode m : sweep_modes()) out << ',' << to_string(m);
    out << '\n';
    for (const auto& [num_saps, row] : table) {
      out << num_saps;
      for (Mode m : sweep_modes()) {
        const auto it = row.find(m);
        out << ',' << (it != row.end() ? format_double(it->second->*field) : "");
      }
      out << '\n';
    }
    close_out(out, p);
  };
  figure("fig2_service_time.csv", &SweepCell::avg_service_time_s);
  figure("fig3_spectral_efficiency.csv", &SweepCell::avg_se);
  {
    const fs::path p = dir / "config.echo";
    auto out = open_out(p);
    out << config_to_json(config).dump(2) << '\n';
    close_out(out, p);
  }
}

std::vector<SweepCell> sweep(const SimConfig& config, std::span<const int> sap_counts,
                             const fs::path& out_dir, unsigned threads) {
  if (sap_counts.empty()) throw std::invalid_argument("sweep: empty SAP count list");
  std::vector<SweepCell> cells;
  for (int num_saps : sap_counts) {
    for (Mode mode : sweep_modes()) {
      SimConfig c = config;
      c.geometry.num_saps = num_saps;
      c.mode = mode;
      const MetricsLog log = run(c, threads);
      cells.push_back({num_saps, mode, log.avg_se, log.avg_service_time_s, log.handover_rate});
      if (!out_dir.empty()) {
        export_log(log, c, out_dir / ("M" + std::to_string(num_saps) + "_" +
                                      std::string(to_string(mode))));
      }
    }
  }
  if (!out_dir.empty()) export_sweep(cells, config, out_dir);
  return cells;
}

}  // namespace cfleo
