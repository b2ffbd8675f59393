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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   cfleo_acceptance --cli <cfleo binary> --config <table1.json> --work <dir>
//                    [--only 1,2,...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfleo/allocation.hpp"
#include "cfleo/channel.hpp"
#include "cfleo/config.hpp"
#include "cfleo/downlink.hpp"
#include "cfleo/simrunner.hpp"
#include "cfleo/training.hpp"
#include "cfleo/verification.hpp"

using namespace cfleo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  std::string cli;
  std::string config;
  std::string work;
  std::set<int> only;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Closed forms written out again here so that a slip in the library cannot
// cancel against the same slip in its own reference values.
struct Independent {
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd W;
  Eigen::MatrixXd var;
  Eigen::VectorXd numerator;
  Eigen::VectorXd interference;
  Eigen::VectorXd contamination;
  Eigen::VectorXd self_correction;
};

Independent independent_closed_forms(const RateInputs& in) {
  const auto& L = in.ls.L;
  const auto& kappa = in.ls.kappa;
  const int m_count = static_cast<int>(L.rows());
  const int k_count = static_cast<int>(L.cols());
  const double tau = in.pa.tau_up;
  Eigen::MatrixXd beta(m_count, k_count);
  Eigen::MatrixXd lam(m_count, k_count);
  for (int k = 0; k < k_count; ++k) {
    for (int m = 0; m < m_count; ++m) {
      beta(m, k) = kappa(m, k) * L(m, k) / (kappa(m, k) + 1.0);
      lam(m, k) = L(m, k) / (kappa(m, k) + 1.0);
    }
  }
  Independent r;
  r.gamma.resize(m_count, k_count);
  r.var.resize(m_count, k_count);
  r.W.resize(m_count, k_count);
  for (int k = 0; k < k_count; ++k) {
    for (int m = 0; m < m_count; ++m) {
      double g = in.noise_var;
      for (int j = 0; j < k_count; ++j) {
        if (in.pa.pilot_index[j] == in.pa.pilot_index[k]) g += in.pa.q(j) * tau * lam(m, j);
      }
      r.gamma(m, k) = g;
      r.var(m, k) = in.pa.q(k) * tau * lam(m, k) * lam(m, k) / g;
      r.W(m, k) = beta(m, k) + r.var(m, k);
    }
  }
  r.numerator = Eigen::VectorXd::Zero(k_count);
  r.interference = Eigen::VectorXd::Zero(k_count);
  r.contamination = Eigen::VectorXd::Zero(k_count);
  r.self_correction = Eigen::VectorXd::Zero(k_count);
  for (int k = 0; k < k_count; ++k) {
    double s = 0.0;
    for (int m = 0; m < m_count; ++m) {
      s += std::sqrt(in.P(m, k) * r.W(m, k));
      if (in.P(m, k) > 0.0) r.self_correction(k) += in.P(m, k) * beta(m, k) * beta(m, k) / r.W(m, k);
    }
    r.numerator(k) = s * s;
    for (int j = 0; j < k_count; ++j) {
      for (int m = 0; m < m_count; ++m) r.interference(k) += in.P(m, j) * L(m, k);
      if (j == k || in.pa.pilot_index[j] != in.pa.pilot_index[k]) continue;
      double c = 0.0;
      for (int m = 0; m < m_count; ++m) {
        if (in.P(m, j) > 0.0) {
          c += std::sqrt(in.P(m, j) / r.W(m, j)) * lam(m, k) * lam(m, j) / r.gamma(m, j);
        }
      }
      r.contamination(k) += in.pa.q(k) * in.pa.q(j) * tau * tau * c * c;
    }
  }
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// --- 1 ----------------------------------------------------------------------
Outcome antenna_pattern() {
  double worst_delta = 0.0;
  for (double eta : {2.0, 10.0, 20.0}) {
    const double delta = angle_loss_db(half_power_angle(eta), eta) - angle_loss_db(0.0, eta);
    worst_delta = std::max(worst_delta, std::abs(delta - 3.0103));
  }
  // The boresight target is quoted by the acceptance text; the pattern
  // formula itself evaluates to -16.0708 dB (see the decisions ledger).
  const double boresight = angle_loss_db(0.0, 20.0);
  const bool boresight_ok = std::abs(boresight - (-16.091)) <= 1e-3;
  return {worst_delta <= 1e-6 && boresight_ok,
          "worst |delta - 3.0103| = " + fmt("%.2e", worst_delta) + " dB, angle_loss(0,20) = " +
              fmt("%.4f", boresight) + " dB (target -16.091 +/- 0.001)"};
}

// --- 2 ----------------------------------------------------------------------
Outcome estimator_moments() {
  const auto inst = reference_moment_instance();
  const auto ind = independent_closed_forms(inst);
  Rng rng = make_stream(20260101, {tag(Purpose::kMonteCarlo), 1});
  const auto rep = estimator_moment_check(inst.ls, inst.pa, inst.noise_var, 100000, rng);
  double worst = 0.0;
  double cf_mismatch = 0.0;
  int terms = 0;
  for (const auto& t : rep.terms) {
    ++terms;
    worst = std::max(worst, t.rel_error);
    double want = 0.0;
    if (t.name == "estimate.mean") want = std::sqrt(inst.ls.beta(t.m, t.k));
    else if (t.name == "estimate.variance") want = ind.var(t.m, t.k);
    else if (t.name == "estimate.second_moment") want = ind.W(t.m, t.k);
    else if (t.name == "estimate.copilot_cov")
      want = inst.pa.tau_up * std::sqrt(inst.pa.q(t.k) * inst.pa.q(t.kp)) *
             inst.ls.lambda(t.m, t.k) * inst.ls.lambda(t.m, t.kp) / ind.gamma(t.m, t.k);
    cf_mismatch = std::max(cf_mismatch, rel(t.closed_form, want));
  }
  const bool ok = terms == 48 && worst <= 0.03 && cf_mismatch <= 1e-12;
  return {ok, std::to_string(terms) + " terms, worst MC error " + fmt("%.4f", worst) +
                  ", closed-form cross-check " + fmt("%.1e", cf_mismatch)};
}

// --- 3 ----------------------------------------------------------------------
Outcome rate_terms() {
  const auto inst = reference_moment_instance();
  const auto ind = independent_closed_forms(inst);
  const auto cf = closed_form_rate(inst);
  double cf_mismatch = 0.0;
  for (int k = 0; k < 4; ++k) {
    cf_mismatch = std::max({cf_mismatch, rel(cf.numerator(k), ind.numerator(k)),
                            rel(cf.interference(k), ind.interference(k)),
                            rel(cf.contamination(k), ind.contamination(k)),
                            rel(cf.self_correction(k), ind.self_correction(k))});
  }
  Rng rng = make_stream(20260101, {tag(Purpose::kMonteCarlo), 2});
  const auto rep = mc_moment_check(inst, 100000, rng);
  double worst = 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : rep.terms) {
    if (t.name == "rate.sinr") continue;  // derived from the others
    worst = std::max(worst, t.rel_error);
    ++counts[t.name];
  }
  const bool terms_ok = counts["rate.numerator"] == 4 && counts["rate.self_variance"] == 4 &&
                        counts["rate.interference"] == 12 && counts["rate.contamination"] == 4;

  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int m_count = 1 + static_cast<int>(gen() % 6);
    const int k_count = 1 + static_cast<int>(gen() % 8);
    Eigen::MatrixXd L(m_count, k_count);
    Eigen::MatrixXd kappa(m_count, k_count);
    RateInputs in;
    in.P.resize(m_count, k_count);
    for (int k = 0; k < k_count; ++k) {
      for (int m = 0; m < m_count; ++m) {
        L(m, k) = u(gen) < 0.2 ? 0.0 : std::pow(10.0, 6.0 * u(gen) - 3.0);
        kappa(m, k) = u(gen) < 0.1 ? 0.0 : std::pow(10.0, 4.0 * u(gen) - 2.0);
        in.P(m, k) = L(m, k) > 0.0 ? 10.0 * u(gen) : 0.0;
      }
    }
    in.ls = large_scale_from_linear(L, kappa);
    in.pa = assign_pilots(k_count, 1 + static_cast<int>(gen() % 4), 3.0 * u(gen));
    in.noise_var = std::pow(10.0, 4.0 * u(gen) - 3.0);
    try {
      const auto r = closed_form_rate(in);
      for (int k = 0; k < k_count; ++k) {
        const double den =
            r.interference(k) + r.contamination(k) - r.self_correction(k) + in.noise_var;
        if (!(den > 0.0) || !(r.rate(k) >= 0.0)) ++violations;
      }
    } catch (const std::exception&) {
      ++violations;
    }
  }
  const bool ok = terms_ok && worst <= 0.03 && cf_mismatch <= 1e-12 && violations == 0;
  return {ok, "worst MC term error " + fmt("%.4f", worst) + ", closed-form cross-check " +
                  fmt("%.1e", cf_mismatch) + ", denominator violations " +
                  std::to_string(violations) + "/10000 draws"};
}

// --- 4 ----------------------------------------------------------------------
Outcome ga_vs_grid(const SimConfig& cfg) {
  int hits = 0;
  double worst = 1e300;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto pb = reference_oracle_problem(seed, cfg.alpha);
    const auto grid = brute_force_solve(pb, 8);
    GaParams ga = cfg.ga;
    ga.seed = derive_seed(seed, {tag(Purpose::kGa)});
    const auto s = ga_solve(pb, ga);
    const double ratio = s.objective / grid.objective;
    worst = std::min(worst, ratio);
    if (s.objective >= 0.95 * grid.objective) ++hits;
  }
  return {hits >= 9, std::to_string(hits) + "/10 seeds within 95% of the grid optimum, worst ratio " +
                         fmt("%.4f", worst)};
}

// --- 5 ----------------------------------------------------------------------
Outcome constraints(const SimConfig& cfg) {
  std::mt19937_64 gen(5150);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  double min_slack = 1e300;
  std::string first_reason;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m_count = 1 + static_cast<int>(gen() % 6);
    const int k_count = 1 + static_cast<int>(gen() % 8);
    Eigen::MatrixXd L(m_count, k_count);
    Eigen::MatrixXd kappa(m_count, k_count);
    for (int k = 0; k < k_count; ++k) {
      for (int m = 0; m < m_count; ++m) {
        L(m, k) = u(gen) < 0.15 ? 0.0 : std::pow(10.0, 3.0 * u(gen) - 1.5);
        kappa(m, k) = std::pow(10.0, 3.0 * u(gen) - 1.0);
      }
    }
    AllocationProblem pb;
    pb.ls = large_scale_from_linear(L, kappa);
    pb.pa = assign_pilots(k_count, 1 + static_cast<int>(gen() % 4), 0.5 + u(gen));
    pb.noise_var = 0.02 + u(gen);
    pb.r_min.resize(k_count);
    for (int k = 0; k < k_count; ++k) pb.r_min(k) = u(gen);
    pb.p_max.resize(m_count);
    for (int m = 0; m < m_count; ++m) pb.p_max(m) = 0.1 + 3.0 * u(gen);
    pb.alpha = u(gen);
    ClusterSnapshot snap;
    snap.sap_positions.resize(m_count);
    snap.ut_positions.resize(k_count);
    snap.visible = (L.array() > 0.0).matrix();
    std::vector<int> prev(k_count);
    for (int k = 0; k < k_count; ++k) prev[k] = static_cast<int>(gen() % (m_count + 1)) - 1;

    GaParams ga = cfg.ga;
    ga.population = 30;
    ga.generations = 40;
    ga.seed = static_cast<std::uint64_t>(trial);
    for (const auto& s : {ga_solve(pb, ga), best_channel_allocate(pb, snap),
                          max_serv_time_allocate(pb, snap, prev)}) {
      for (int m = 0; m < m_count; ++m) min_slack = std::min(min_slack, pb.p_max(m) - s.P.row(m).sum());
      const auto why = check_constraints(pb, s, 1e-9);
      if (why) {
        if (bad == 0) first_reason = *why;
        ++bad;
      }
    }
  }
  return {bad == 0, "3000 solutions from 1000 problems, violations " + std::to_string(bad) +
                        ", min budget slack " + fmt("%.3e", min_slack) + " W" +
                        (bad ? " (" + first_reason + ")" : "")};
}

// --- 6, 7, 8 -----------------------------------------------------------------
struct Cell {
  double se = 0.0;
  double st = 0.0;
};
using Table = std::map<int, std::map<std::string, Cell>>;

Table read_summary(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("missing " + file.string());
  Table t;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string mode, m, se, st, hr;
    std::getline(ss, mode, ',');
    std::getline(ss, m, ',');
    std::getline(ss, se, ',');
    std::getline(ss, st, ',');
    std::getline(ss, hr, ',');
    t[std::stoi(m)][mode] = {std::stod(se), std::stod(st)};
  }
  return t;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * (i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

// Both executions write to the same --out path so that their effective
// configs, which config.echo records, are identical; each result is then
// moved aside for comparison.
int run_cli_sweep(const Options& opt, const fs::path& keep_as) {
  const fs::path out = fs::path(opt.work) / "sweep";
  fs::remove_all(out);
  fs::remove_all(keep_as);
  const std::string cmd = "\"" + opt.cli + "\" sweep --config \"" + opt.config +
                          "\" --saps 4,8,16,24,32 --out \"" + out.string() + "\" > \"" +
                          (keep_as.string() + ".log") + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == 0) fs::rename(out, keep_as);
  return rc;
}

Outcome service_time_trend(const Table& t) {
  std::vector<double> m, cf;
  bool order = true;
  std::string cells;
  for (const auto& [M, row] : t) {
    const double a = row.at("cf_jpahm").st;
    const double b = row.at("max_serv_time").st;
    const double c = row.at("best_channel").st;
    order = order && a > b && b > c;
    m.push_back(M);
    cf.push_back(a);
    cells += " M" + std::to_string(M) + ":" + fmt("%.2f", a) + "/" + fmt("%.2f", b) + "/" +
             fmt("%.2f", c);
  }
  const double rho = spearman(m, cf);
  return {order && rho > 0.0 && t.size() == 5,
          "CF>MST>BC in every cell: " + std::string(order ? "yes" : "no") + ", rho=" +
              fmt("%.3f", rho) + " | s:" + cells};
}

Outcome spectral_efficiency_trend(const Table& t) {
  std::vector<double> m, cf;
  bool beats = true;
  std::string cells;
  for (const auto& [M, row] : t) {
    const double a = row.at("cf_jpahm").se;
    const double b = row.at("max_serv_time").se;
    const double c = row.at("best_channel").se;
    beats = beats && a > b && a > c;
    m.push_back(M);
    cf.push_back(a);
    cells += " M" + std::to_string(M) + ":" + fmt("%.3f", a) + "/" + fmt("%.3f", b) + "/" +
             fmt("%.3f", c);
  }
  const double rho = spearman(m, cf);
  bool widening = false;
  std::string gaps;
  if (t.count(4) && t.count(32)) {
    const auto gap = [&](int M, const char* base) {
      return t.at(M).at("cf_jpahm").se - t.at(M).at(base).se;
    };
    widening = gap(32, "max_serv_time") > gap(4, "max_serv_time") &&
               gap(32, "best_channel") > gap(4, "best_channel");
    gaps = ", gap vs BC " + fmt("%.3f", gap(4, "best_channel")) + " -> " +
           fmt("%.3f", gap(32, "best_channel"));
  }
  return {beats && rho > 0.0 && widening && t.size() == 5,
          "CF above both in every cell: " + std::string(beats ? "yes" : "no") + ", rho=" +
              fmt("%.3f", rho) + gaps + " | bps/Hz:" + cells};
}

Outcome determinism(const fs::path& a, const fs::path& b) {
  int files = 0;
  std::vector<std::string> diffs;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel_path = fs::relative(entry.path(), a);
    const fs::path other = b / rel_path;
    ++files;
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(other, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {});
    const std::string sb((std::istreambuf_iterator<char>(fb)), {});
    if (!fb || sa != sb) diffs.push_back(rel_path.string());
  }
  std::size_t files_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) files_b += entry.is_regular_file();
  const bool ok = files > 0 && diffs.empty() && files_b == static_cast<std::size_t>(files);
  return {ok, std::to_string(files) + " files compared, " + std::to_string(diffs.size()) +
                  " differ" + (diffs.empty() ? "" : " (first: " + diffs.front() + ")")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfleo acceptance checks"};
  Options opt;
  std::string only;
  app.add_option("--cli", opt.cli, "Path to the cfleo command-line binary")->required();
  app.add_option("--config", opt.config, "Reference configuration")->required()->check(
      CLI::ExistingFile);
  app.add_option("--work", opt.work, "Scratch directory")->required();
  app.add_option("--only", only, "Comma-separated criterion numbers");
  CLI11_PARSE(app, argc, argv);
  for (std::size_t p = 0; !only.empty() && p < only.size();) {
    const auto c = only.find(',', p);
    opt.only.insert(std::stoi(only.substr(p, c - p)));
    if (c == std::string::npos) break;
    p = c + 1;
  }
  const auto wanted = [&](int n) { return opt.only.empty() || opt.only.count(n) > 0; };

  const SimConfig cfg = load_config(opt.config);
  fs::create_directories(opt.work);
  const fs::path sweep_a = fs::path(opt.work) / "sweep_a";
  const fs::path sweep_b = fs::path(opt.work) / "sweep_b";

  int failures = 0;
  const auto report = [&](int n, const char* title, double budget_s,
                          const std::function<Outcome()>& fn) {
    if (!wanted(n)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0.0 && secs > budget_s) {
      o.pass = false;
      o.detail += " [over the " + fmt("%.0f", budget_s) + " s budget]";
    }
    std::printf("[%s] %d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", n, title, secs,
                o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "antenna pattern", 1.0, antenna_pattern);
  report(2, "estimator moment identities", 30.0, estimator_moments);
  report(3, "closed-form rate vs Monte-Carlo", 120.0, rate_terms);
  report(4, "GA vs grid oracle", 60.0, [&] { return ga_vs_grid(cfg); });
  report(5, "constraint satisfaction", 120.0, [&] { return constraints(cfg); });

  bool have_a = false;
  const auto first_sweep = [&]() -> Outcome {
    if (!have_a) {
      if (run_cli_sweep(opt, sweep_a) != 0) throw std::runtime_error("sweep run A failed");
      have_a = true;
    }
    return {true, ""};
  };
  report(6, "service time trend", 0.0, [&] {
    first_sweep();
    return service_time_trend(read_summary(sweep_a / "summary.csv"));
  });
  report(7, "spectral efficiency trend", 0.0, [&] {
    first_sweep();
    return spectral_efficiency_trend(read_summary(sweep_a / "summary.csv"));
  });
  report(8, "sweep determinism", 0.0, [&] {
    first_sweep();
    if (run_cli_sweep(opt, sweep_b) != 0) throw std::runtime_error("sweep run B failed");
    return determinism(sweep_a, sweep_b);
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
