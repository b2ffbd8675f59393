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
 * @file allocation.hpp
 * @brief Joint power allocation and admission for one cluster and one slot.
 *
 * The problem maximises (1 - alpha) sum_k R_k I_k + alpha sum_k I_k subject
 * to R_k >= R_k^min for admitted UTs, per-SAP power budgets and p >= 0.
 * All solvers share one repair step so every emitted solution is feasible.
 */
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfleo/downlink.hpp"
#include "cfleo/geometry.hpp"

namespace cfleo {

struct AllocationProblem {
  LargeScaleParams ls;
  PilotAssignment pa;
  double noise_var = 0.0;
  FrameConfig frame;
  Eigen::VectorXd r_min;  // K, bps/Hz
  Eigen::VectorXd p_max;  // M, W
  double alpha = 0.5;

  int num_saps() const { return ls.num_saps(); }
  int num_uts() const { return ls.num_uts(); }
  void validate() const;
};

struct PowerSolution {
  Eigen::MatrixXd P;
  std::vector<bool> admitted;
  double objective = 0.0;
  Eigen::VectorXd rates;
  bool feasible = false;
  /// Serving SAP per UT for single-SAP baselines (-1 = none); empty otherwise.
  std::vector<int> association;
};

struct GaParams {
  int population = 60;
  int generations = 150;
  double crossover_rate = 0.9;
  double mutation_rate = 0.02;
  double mutation_sigma = 0.1;
  int elitism = 2;
  double penalty_weight = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

double objective(double alpha, const Eigen::VectorXd& rates,
                 const std::vector<bool>& admitted);
double objective(const AllocationProblem& problem, const PowerSolution& solution);

/// Projects (P, I) onto the feasible set: negative entries are clipped,
/// columns of non-admitted UTs and links without estimate statistics are
/// zeroed, over-budget SAP rows are rescaled proportionally, and admitted
/// UTs below their minimum rate are dropped (their power released) until
/// every admitted UT meets its minimum.
PowerSolution repair(const AllocationProblem& problem, Eigen::MatrixXd P,
                     std::vector<bool> admitted);

/// nullopt when the solution satisfies all constraints, else the reason.
std::optional<std::string> check_constraints(const AllocationProblem& problem,
                                             const PowerSolution& solution,
                                             double budget_tol = 1e-9);

/// Genetic search over budget fractions and admission bits. `warm_start`, if
/// given and shaped like the problem, joins the initial population.
PowerSolution ga_solve(const AllocationProblem& problem, const GaParams& ga,
                       const PowerSolution* warm_start = nullptr);

/// Exhaustive search over budget fractions {0, 1/(n-1), ..., 1} and all
/// admission vectors. Rejects instances above 1e7 candidates.
PowerSolution brute_force_solve(const AllocationProblem& problem, int grid_levels,
                                std::uint64_t* evaluated = nullptr);

/// Index of the SAP with the largest L for UT k among visible SAPs, lowest
/// index on ties; -1 when no SAP is usable.
int best_sap(const AllocationProblem& problem, const ClusterSnapshot& snapshot, int k);

/// Single-SAP allocation for a fixed association: each SAP splits its budget
/// equally among its UTs, I_k = [R_k >= R_k^min].
PowerSolution single_sap_allocate(const AllocationProblem& problem,
                                  const std::vector<int>& association);

PowerSolution best_channel_allocate(const AllocationProblem& problem,
                                    const ClusterSnapshot& snapshot);

PowerSolution max_serv_time_allocate(const AllocationProblem& problem,
                                     const ClusterSnapshot& snapshot,
                                     const std::vector<int>& prev_association);

}  // namespace cfleo
