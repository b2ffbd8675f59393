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
 * @file training.hpp
 * @brief Uplink pilot assignment, pilot reception and phase-aware MMSE
 * channel estimation.
 *
 * UTs sharing a pilot form a co-pilot set; their despread observations are
 * identical up to noise and every estimate in the set is contaminated by the
 * NLoS parts of the others. The estimator knows the true LoS phases.
 */
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "cfleo/channel.hpp"
#include "cfleo/rng.hpp"

namespace cfleo {

struct PilotAssignment {
  int tau_up = 1;
  std::vector<int> pilot_index;              // UT -> pilot id
  std::vector<std::vector<int>> copilots;    // UT -> UTs on the same pilot (incl. itself)
  Eigen::VectorXd q;                         // pilot power per UT (W)

  int num_uts() const { return static_cast<int>(pilot_index.size()); }
};

/// Maps (num_uts, tau_up) to a pilot id per UT.
using PilotPolicy = std::function<std::vector<int>(int, int)>;

std::vector<int> round_robin_pilots(int num_uts, int tau_up);

PilotAssignment assign_pilots(int num_uts, int tau_up, double pilot_power_w,
                              const PilotPolicy& policy = round_robin_pilots);

/// Builds co-pilot sets from explicit pilot ids and per-UT powers.
PilotAssignment make_pilot_assignment(int tau_up, std::vector<int> pilot_index,
                                      Eigen::VectorXd q);

/// tau x tau matrix whose columns are mutually orthogonal pilots with
/// squared norm tau (scaled DFT).
Eigen::MatrixXcd pilot_book(int tau_up);

struct PilotObservation {
  Eigen::MatrixXcd y;         // M x tau, row m is the received pilot block at SAP m
  Eigen::MatrixXcd despread;  // M x K, psi_k^H y_m
  double noise_var = 0.0;
};

PilotObservation receive_and_despread(const ChannelRealization& channels,
                                      const PilotAssignment& pa, double noise_var,
                                      Rng& rng);

struct EstimateSet {
  Eigen::MatrixXcd hhat;
  Eigen::MatrixXd gamma;
  Eigen::MatrixXcd mean;
  Eigen::MatrixXd variance;

  /// E{|hhat|^2} = |mean|^2 + variance.
  Eigen::MatrixXd second_moment() const;
};

/// Throws std::domain_error when a gamma entry is zero.
EstimateSet mmse_estimate(const PilotObservation& obs, const LargeScaleParams& ls,
                          const Eigen::MatrixXd& phases, const PilotAssignment& pa);

// Closed-form estimate statistics, independent of any realization.
Eigen::MatrixXd pilot_gamma(const LargeScaleParams& ls, const PilotAssignment& pa,
                            double noise_var);
Eigen::MatrixXd estimate_variance(const LargeScaleParams& ls, const PilotAssignment& pa,
                                  double noise_var);
/// Per-link E{|hhat|^2}, the diagonal of the W matrix of each UT.
Eigen::MatrixXd estimate_second_moment(const LargeScaleParams& ls,
                                       const PilotAssignment& pa, double noise_var);

/// One Monte-Carlo vs closed-form comparison.
struct MomentTerm {
  std::string name;
  int m = -1;
  int k = -1;
  int kp = -1;
  double closed_form = 0.0;
  double monte_carlo = 0.0;
  double rel_error = 0.0;
};

struct MomentReport {
  std::vector<MomentTerm> terms;
  int trials = 0;

  double max_rel_error() const;
  /// Largest error among terms whose name starts with `prefix`.
  double max_rel_error(const std::string& prefix) const;
};

/// Monte-Carlo check of the estimator statistics conditioned on one fixed
/// phase draw: conditional mean, conditional variance, second moment and
/// co-pilot cross-covariance for every link with lambda > 0.
MomentReport estimator_moment_check(const LargeScaleParams& ls,
                                    const PilotAssignment& pa, double noise_var,
                                    int n_trials, Rng& rng);

}  // namespace cfleo
