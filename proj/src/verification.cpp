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

#include "cfleo/verification.hpp"

#include <algorithm>
#include <random>

#include "cfleo/channel.hpp"
#include "cfleo/units.hpp"

namespace cfleo {

RateInputs reference_moment_instance() {
  Eigen::MatrixXd L(3, 4);
  L << 1.0, 0.6, 1.4, 0.8,
       0.7, 1.5, 0.9, 1.2,
       1.3, 0.9, 0.6, 1.8;
  Eigen::MatrixXd kappa(3, 4);
  kappa << 1.0, 0.6, 1.5, 0.8,
           0.5, 1.2, 0.7, 1.0,
           0.9, 0.5, 1.1, 0.6;
  RateInputs in;
  in.ls = large_scale_from_linear(L, kappa);
  in.pa = assign_pilots(4, 2, 1.0);
  in.noise_var = 0.1;
  in.frame = FrameConfig{300, 30, 0, 270};
  in.P.resize(3, 4);
  in.P << 0.6, 0.3, 0.8, 0.4,
          0.2, 0.9, 0.5, 0.7,
          0.7, 0.4, 0.3, 1.0;
  return in;
}

AllocationProblem reference_oracle_problem(std::uint64_t seed, double alpha) {
  Rng rng(derive_seed(seed, {0x6f7261636c65ULL}));
  std::uniform_real_distribution<double> l_dist(0.2, 2.0);
  std::uniform_real_distribution<double> k_dist(0.0, 10.0);
  Eigen::MatrixXd L(2, 2);
  Eigen::MatrixXd kappa(2, 2);
  for (int m = 0; m < 2; ++m) {
    for (int k = 0; k < 2; ++k) {
      L(m, k) = l_dist(rng);
      kappa(m, k) = db_to_linear(k_dist(rng));
    }
  }
  AllocationProblem pb;
  pb.ls = large_scale_from_linear(L, kappa);
  pb.pa = assign_pilots(2, 2, 1.0);
  pb.noise_var = 0.1;
  pb.frame = FrameConfig{300, 30, 0, 270};
  pb.r_min = Eigen::VectorXd::Constant(2, 0.5);
  pb.p_max = Eigen::VectorXd::Constant(2, 1.0);
  pb.alpha = alpha;
  return pb;
}

std::vector<CheckResult> run_verification(const GaParams& ga, double alpha,
                                          const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const RateInputs inst = reference_moment_instance();

  Rng est_rng = make_stream(opt.seed, {tag(Purpose::kMonteCarlo), 1});
  const MomentReport est =
      estimator_moment_check(inst.ls, inst.pa, inst.noise_var, opt.trials, est_rng);
  for (const char* prefix : {"estimate.mean", "estimate.variance", "estimate.second_moment",
                             "estimate.copilot_cov"}) {
    const double e = est.max_rel_error(prefix);
    out.push_back({prefix, e, opt.moment_tolerance, e <= opt.moment_tolerance});
  }

  Rng rate_rng = make_stream(opt.seed, {tag(Purpose::kMonteCarlo), 2});
  const MomentReport rate = mc_moment_check(inst, opt.trials, rate_rng);
  for (const char* prefix : {"rate.numerator", "rate.self_variance", "rate.interference",
                             "rate.contamination"}) {
    const double e = rate.max_rel_error(prefix);
    out.push_back({prefix, e, opt.moment_tolerance, e <= opt.moment_tolerance});
  }

  int hits = 0;
  double worst = 1e300;
  for (int s = 0; s < opt.oracle_seeds; ++s) {
    const AllocationProblem pb = reference_oracle_problem(opt.seed + s, alpha);
    const PowerSolution grid = brute_force_solve(pb, opt.grid_levels);
    GaParams g = ga;
    g.seed = derive_seed(opt.seed, {tag(Purpose::kGa), static_cast<std::uint64_t>(s)});
    const PowerSolution sol = ga_solve(pb, g);
    const double ratio = grid.objective > 0.0 ? sol.objective / grid.objective : 1.0;
    worst = std::min(worst, ratio);
    if (sol.objective >= opt.oracle_ratio * grid.objective) ++hits;
  }
  out.push_back({"ga.oracle_hits", static_cast<double>(hits),
                 static_cast<double>(opt.oracle_required), hits >= opt.oracle_required});
  out.push_back({"ga.oracle_worst_ratio", worst, opt.oracle_ratio, true});
  return out;
}

}  // namespace cfleo
