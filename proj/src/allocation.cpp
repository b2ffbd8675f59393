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

#include "cfleo/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cfleo {

void AllocationProblem::validate() const {
  const int m_count = num_saps();
  const int k_count = num_uts();
  if (r_min.size() != k_count) throw std::invalid_argument("allocation: r_min must have K entries");
  if (p_max.size() != m_count) throw std::invalid_argument("allocation: p_max must have M entries");
  if ((r_min.array() < 0.0).any()) throw std::invalid_argument("allocation: r_min must be >= 0");
  if (!(p_max.array() > 0.0).all()) throw std::invalid_argument("allocation: p_max must be > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("allocation: alpha must lie in [0, 1]");
  if (pa.num_uts() != k_count) throw std::invalid_argument("allocation: pilot assignment size mismatch");
}

void GaParams::validate() const {
  if (population < 2) throw std::invalid_argument("ga: population must be >= 2");
  if (generations < 0) throw std::invalid_argument("ga: generations must be >= 0");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("ga: crossover rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("ga: mutation rate must lie in [0, 1]");
  if (!(mutation_sigma >= 0.0)) throw std::invalid_argument("ga: mutation sigma must be >= 0");
  if (elitism < 0 || elitism > population) throw std::invalid_argument("ga: elitism must lie in [0, population]");
  if (!(penalty_weight >= 0.0)) throw std::invalid_argument("ga: penalty weight must be >= 0");
}

double objective(double alpha, const Eigen::VectorXd& rates, const std::vector<bool>& admitted) {
  double rate_sum = 0.0;
  double count = 0.0;
  for (std::size_t k = 0; k < admitted.size(); ++k) {
    if (!admitted[k]) continue;
    rate_sum += rates(static_cast<Eigen::Index>(k));
    count += 1.0;
  }
  return (1.0 - alpha) * rate_sum + alpha * count;
}

double objective(const AllocationProblem& problem, const PowerSolution& solution) {
  return objective(problem.alpha, solution.rates, solution.admitted);
}

namespace {

/// Problem plus its precomputed rate model.
class Evaluator {
 public:
  explicit Evaluator(const AllocationProblem& problem)
      : pb_(problem), model_(problem.ls, problem.pa, problem.noise_var, problem.frame) {
    pb_.validate();
  }

  const AllocationProblem& problem() const { return pb_; }
  const DownlinkModel& model() const { return model_; }

  /// In-place repair; returns how many admitted UTs had to be dropped.
  int repair(Eigen::MatrixXd& P, std::vector<bool>& admitted, Eigen::VectorXd& rates) const {
    const Eigen::Index m_count = P.rows();
    const Eigen::Index k_count = P.cols();
    const auto& W = model_.second_moment();
    for (Eigen::Index k = 0; k < k_count; ++k) {
      if (!admitted[k]) {
        P.col(k).setZero();
        continue;
      }
      for (Eigen::Index m = 0; m < m_count; ++m) {
        if (!(P(m, k) > 0.0) || !(W(m, k) > 0.0)) P(m, k) = 0.0;
      }
    }
    for (Eigen::Index m = 0; m < m_count; ++m) {
      const double budget = pb_.p_max(m);
      const double used = P.row(m).sum();
      if (used > budget * (1.0 + 1e-12)) P.row(m) *= budget / used;
    }
    int dropped = 0;
    while (true) {
      model_.rates(P, rates);
      bool changed = false;
      for (Eigen::Index k = 0; k < k_count; ++k) {
        if (admitted[k] && rates(k) < pb_.r_min(k)) {
          admitted[k] = false;
          P.col(k).setZero();
          changed = true;
          ++dropped;
        }
      }
      if (!changed) break;
    }
    return dropped;
  }

  PowerSolution finish(Eigen::MatrixXd P, std::vector<bool> admitted) const {
    PowerSolution s;
    repair(P, admitted, s.rates);
    s.P = std::move(P);
    s.admitted = std::move(admitted);
    s.objective = objective(pb_.alpha, s.rates, s.admitted);
    s.feasible = true;
    return s;
  }

 private:
  const AllocationProblem& pb_;
  DownlinkModel model_;
};

struct Individual {
  Eigen::MatrixXd frac;  // M x K fractions of each SAP budget
  std::vector<bool> admit;
  Eigen::MatrixXd P;
  Eigen::VectorXd rates;
  double objective = 0.0;
  double fitness = 0.0;
};

void evaluate(const Evaluator& ev, const GaParams& ga, Individual& ind) {
  const auto& p_max = ev.problem().p_max;
  ind.P = ind.frac.array().colwise() * p_max.array();
  const int dropped = ev.repair(ind.P, ind.admit, ind.rates);
  // Lamarckian write-back: the chromosome keeps the repaired genes.
  ind.frac = ind.P.array().colwise() / p_max.array();
  ind.objective = objective(ev.problem().alpha, ind.rates, ind.admit);
  ind.fitness = ind.objective - ga.penalty_weight * dropped;
}

Individual proportional_seed(const AllocationProblem& pb) {
  Individual ind;
  ind.frac = Eigen::MatrixXd::Zero(pb.num_saps(), pb.num_uts());
  for (int m = 0; m < pb.num_saps(); ++m) {
    const double row = pb.ls.L.row(m).sum();
    if (row > 0.0) ind.frac.row(m) = pb.ls.L.row(m) / row;
  }
  ind.admit.assign(pb.num_uts(), true);
  return ind;
}

Individual strongest_link_seed(const AllocationProblem& pb) {
  const int m_count = pb.num_saps();
  const int k_count = pb.num_uts();
  std::vector<int> assoc(k_count, -1);
  std::vector<int> load(m_count, 0);
  for (int k = 0; k < k_count; ++k) {
    double best = 0.0;
    for (int m = 0; m < m_count; ++m) {
      if (pb.ls.L(m, k) > best) {
        best = pb.ls.L(m, k);
        assoc[k] = m;
      }
    }
    if (assoc[k] >= 0) ++load[assoc[k]];
  }
  Individual ind;
  ind.frac = Eigen::MatrixXd::Zero(m_count, k_count);
  for (int k = 0; k < k_count; ++k) {
    if (assoc[k] >= 0) ind.frac(assoc[k], k) = 1.0 / load[assoc[k]];
  }
  ind.admit.assign(k_count, true);
  return ind;
}

Individual random_individual(const AllocationProblem& pb, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Individual ind;
  ind.frac.resize(pb.num_saps(), pb.num_uts());
  for (Eigen::Index k = 0; k < ind.frac.cols(); ++k) {
    for (Eigen::Index m = 0; m < ind.frac.rows(); ++m) ind.frac(m, k) = u(rng);
  }
  ind.admit.resize(pb.num_uts());
  for (int k = 0; k < pb.num_uts(); ++k) ind.admit[k] = u(rng) < 0.5;
  return ind;
}

const Individual& tournament(const std::vector<Individual>& pop, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  const Individual& a = pop[pick(rng)];
  const Individual& b = pop[pick(rng)];
  return a.fitness >= b.fitness ? a : b;
}

PowerSolution to_solution(const Individual& ind) {
  PowerSolution s;
  s.P = ind.P;
  s.admitted = ind.admit;
  s.rates = ind.rates;
  s.objective = ind.objective;
  s.feasible = true;
  return s;
}

}  // namespace

PowerSolution repair(const AllocationProblem& problem, Eigen::MatrixXd P,
                     std::vector<bool> admitted) {
  if (P.rows() != problem.num_saps() || P.cols() != problem.num_uts() ||
      static_cast<int>(admitted.size()) != problem.num_uts()) {
    throw std::invalid_argument("repair: solution shape does not match the problem");
  }
  return Evaluator(problem).finish(std::move(P), std::move(admitted));
}

std::optional<std::string> check_constraints(const AllocationProblem& problem,
                                             const PowerSolution& s, double budget_tol) {
  std::ostringstream why;
  const int m_count = problem.num_saps();
  const int k_count = problem.num_uts();
  if (s.P.rows() != m_count || s.P.cols() != k_count) return "P has the wrong shape";
  if (static_cast<int>(s.admitted.size()) != k_count) return "admission vector has the wrong size";
  if (s.rates.size() != k_count) return "rate vector has the wrong size";
  if (!s.P.allFinite()) return "P has non-finite entries";
  if ((s.P.array() < 0.0).any()) return "negative power (25d)";
  for (int m = 0; m < m_count; ++m) {
    const double slack = problem.p_max(m) - s.P.row(m).sum();
    if (slack < -budget_tol) {
      why << "SAP " << m << " over budget by " << -slack << " W (25b)";
      return why.str();
    }
  }
  const DownlinkModel model(problem.ls, problem.pa, problem.noise_var, problem.frame);
  Eigen::VectorXd rates;
  model.rates(s.P, rates);
  for (int k = 0; k < k_count; ++k) {
    if (std::abs(rates(k) - s.rates(k)) > 1e-9 * (1.0 + std::abs(rates(k)))) {
      why << "stored rate of UT " << k << " does not match the power matrix";
      return why.str();
    }
    if (s.admitted[k] && !(rates(k) >= problem.r_min(k))) {
      why << "admitted UT " << k << " below minimum rate (25a)";
      return why.str();
    }
  }
  const double obj = objective(problem.alpha, rates, s.admitted);
  if (std::abs(obj - s.objective) > 1e-9 * (1.0 + std::abs(obj))) return "objective mismatch";
  return std::nullopt;
}

PowerSolution ga_solve(const AllocationProblem& problem, const GaParams& ga,
                       const PowerSolution* warm_start) {
  ga.validate();
  const Evaluator ev(problem);
  const int m_count = problem.num_saps();
  const int k_count = problem.num_uts();

  std::vector<Individual> pop;
  pop.reserve(ga.population);
  if (warm_start != nullptr && warm_start->P.rows() == m_count &&
      warm_start->P.cols() == k_count &&
      static_cast<int>(warm_start->admitted.size()) == k_count) {
    Individual ind;
    ind.frac = warm_start->P.array().colwise() / problem.p_max.array();
    ind.admit = warm_start->admitted;
    pop.push_back(std::move(ind));
  }
  if (static_cast<int>(pop.size()) < ga.population) pop.push_back(proportional_seed(problem));
  if (static_cast<int>(pop.size()) < ga.population) pop.push_back(strongest_link_seed(problem));
  while (static_cast<int>(pop.size()) < ga.population) {
    Rng rng = make_stream(ga.seed, {tag(Purpose::kGa), 0, pop.size()});
    pop.push_back(random_individual(problem, rng));
  }

  bool have_best = false;
  Individual best;
  const auto track_best = [&](const std::vector<Individual>& population) {
    for (const auto& ind : population) {
      if (!have_best || ind.objective > best.objective) {
        best = ind;
        have_best = true;
      }
    }
  };

  for (auto& ind : pop) evaluate(ev, ga, ind);
  track_best(pop);

  std::vector<std::size_t> order(pop.size());
  std::vector<Individual> next;
  next.reserve(pop.size());
  for (int gen = 1; gen <= ga.generations; ++gen) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].fitness > pop[b].fitness;
    });
    next.clear();
    for (int e = 0; e < ga.elitism; ++e) next.push_back(pop[order[e]]);

    for (int i = ga.elitism; i < ga.population; ++i) {
      Rng rng = make_stream(ga.seed, {tag(Purpose::kGa), static_cast<std::uint64_t>(gen),
                                      static_cast<std::uint64_t>(i)});
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::normal_distribution<double> noise(0.0, ga.mutation_sigma);
      const Individual& a = tournament(pop, rng);
      const Individual& b = tournament(pop, rng);
      Individual child;
      child.frac = a.frac;
      child.admit = a.admit;
      const Eigen::Index genes = m_count * k_count;
      if (u(rng) < ga.crossover_rate) {
        // Uniform crossover, one random bit per gene.
        std::uint64_t bits = 0;
        for (Eigen::Index g = 0; g < genes + k_count; ++g) {
          if (g % 64 == 0) bits = rng();
          const bool take_b = (bits >> (g % 64)) & 1U;
          if (!take_b) continue;
          if (g < genes) {
            child.frac.data()[g] = b.frac.data()[g];
          } else {
            child.admit[g - genes] = b.admit[g - genes];
          }
        }
      }
      // Mutation sites are visited by geometric skips, which is equivalent
      // to an independent coin per gene but far cheaper at low rates.
      if (ga.mutation_rate > 0.0) {
        const bool every = ga.mutation_rate >= 1.0;
        std::geometric_distribution<long> skip(every ? 0.5 : ga.mutation_rate);
        for (Eigen::Index g = every ? 0 : skip(rng); g < genes + k_count;
             g += every ? 1 : 1 + skip(rng)) {
          if (g < genes) {
            double& x = child.frac.data()[g];
            x = std::clamp(x + noise(rng), 0.0, 1.0);
          } else {
            child.admit[g - genes] = !child.admit[g - genes];
          }
        }
      }
      evaluate(ev, ga, child);
      next.push_back(std::move(child));
    }
    pop.swap(next);
    track_best(pop);
  }
  return to_solution(best);
}

PowerSolution brute_force_solve(const AllocationProblem& problem, int grid_levels,
                                std::uint64_t* evaluated) {
  if (grid_levels < 2) throw std::invalid_argument("brute_force_solve: need >= 2 grid levels");
  const Evaluator ev(problem);
  const int m_count = problem.num_saps();
  const int k_count = problem.num_uts();
  const int genes = m_count * k_count;
  const double candidates =
      std::pow(static_cast<double>(grid_levels), genes) * std::pow(2.0, k_count);
  if (candidates > 1e7) {
    throw std::invalid_argument("brute_force_solve: instance too large (" +
                                std::to_string(candidates) + " candidates > 1e7)");
  }

  std::vector<int> digits(genes, 0);
  Eigen::MatrixXd P(m_count, k_count);
  Eigen::VectorXd rates;
  std::vector<bool> admitted(k_count);
  PowerSolution best;
  bool have_best = false;
  std::uint64_t count = 0;
  const double step = 1.0 / (grid_levels - 1);
  while (true) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k_count); ++mask) {
      for (int g = 0; g < genes; ++g) {
        const int m = g % m_count;
        P(m, g / m_count) = digits[g] * step * problem.p_max(m);
      }
      for (int k = 0; k < k_count; ++k) admitted[k] = (mask >> k) & 1U;
      ev.repair(P, admitted, rates);
      ++count;
      const double obj = objective(problem.alpha, rates, admitted);
      if (!have_best || obj > best.objective) {
        best.P = P;
        best.admitted = admitted;
        best.rates = rates;
        best.objective = obj;
        best.feasible = true;
        have_best = true;
      }
    }
    int g = 0;
    while (g < genes && ++digits[g] == grid_levels) digits[g++] = 0;
    if (g == genes) break;
  }
  if (evaluated != nullptr) *evaluated = count;
  return best;
}

int best_sap(const AllocationProblem& problem, const ClusterSnapshot& snapshot, int k) {
  if (snapshot.num_saps() != problem.num_saps() || snapshot.num_uts() != problem.num_uts()) {
    throw std::invalid_argument("best_sap: snapshot does not match the problem");
  }
  int best = -1;
  double best_gain = 0.0;
  for (int m = 0; m < problem.num_saps(); ++m) {
    const double g = problem.ls.L(m, k);
    if (snapshot.visible(m, k) && g > best_gain) {
      best_gain = g;
      best = m;
    }
  }
  return best;
}

PowerSolution single_sap_allocate(const AllocationProblem& problem,
                                  const std::vector<int>& association) {
  const Evaluator ev(problem);
  const int m_count = problem.num_saps();
  const int k_count = problem.num_uts();
  if (static_cast<int>(association.size()) != k_count) {
    throw std::invalid_argument("single_sap_allocate: association must have K entries");
  }
  std::vector<int> load(m_count, 0);
  for (int a : association) {
    if (a >= m_count) throw std::invalid_argument("single_sap_allocate: SAP index out of range");
    if (a >= 0) ++load[a];
  }
  PowerSolution s;
  s.P = Eigen::MatrixXd::Zero(m_count, k_count);
  for (int k = 0; k < k_count; ++k) {
    const int a = association[k];
    if (a >= 0) s.P(a, k) = problem.p_max(a) / load[a];
  }
  ev.model().rates(s.P, s.rates);
  s.admitted.resize(k_count);
  for (int k = 0; k < k_count; ++k) s.admitted[k] = s.rates(k) >= problem.r_min(k);
  s.objective = objective(problem.alpha, s.rates, s.admitted);
  s.feasible = true;
  s.association = association;
  return s;
}

PowerSolution best_channel_allocate(const AllocationProblem& problem,
                                    const ClusterSnapshot& snapshot) {
  std::vector<int> assoc(problem.num_uts());
  for (int k = 0; k < problem.num_uts(); ++k) assoc[k] = best_sap(problem, snapshot, k);
  return single_sap_allocate(problem, assoc);
}

PowerSolution max_serv_time_allocate(const AllocationProblem& problem,
                                     const ClusterSnapshot& snapshot,
                                     const std::vector<int>& prev_association) {
  const int k_count = problem.num_uts();
  if (static_cast<int>(prev_association.size()) != k_count) {
    throw std::invalid_argument("max_serv_time_allocate: previous association must have K entries");
  }
  std::vector<int> assoc(k_count);
  std::vector<bool> held(k_count, false);
  for (int k = 0; k < k_count; ++k) {
    const int prev = prev_association[k];
    if (prev >= 0 && prev < problem.num_saps() && snapshot.visible(prev, k) &&
        problem.ls.L(prev, k) > 0.0) {
      assoc[k] = prev;
      held[k] = true;
    } else {
      assoc[k] = best_sap(problem, snapshot, k);
    }
  }
  PowerSolution tentative = single_sap_allocate(problem, assoc);
  bool changed = false;
  for (int k = 0; k < k_count; ++k) {
    if (held[k] && tentative.rates(k) < problem.r_min(k)) {
      const int best = best_sap(problem, snapshot, k);
      if (best != assoc[k]) {
        assoc[k] = best;
        changed = true;
      }
    }
  }
  return changed ? single_sap_allocate(problem, assoc) : tentative;
}

}  // namespace cfleo
