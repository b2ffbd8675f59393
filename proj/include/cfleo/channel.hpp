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
 * @file channel.hpp
 * @brief Large-scale fading and Rician small-scale realizations per SAP-UT pair.
 */
#pragma once

#include <Eigen/Dense>

#include "cfleo/geometry.hpp"
#include "cfleo/rng.hpp"

namespace cfleo {

struct ChannelConfig {
  double carrier_ghz = 30.0;
  double eta = 20.0;
  double shadow_std_db = 5.0;
  double rician_k_db = 10.0;
  double sat_gain_db = 30.0;
  double ut_gain_db = 5.0;

  void validate() const;
};

/// Slow per-pair parameters. beta is the LoS power, lambda the NLoS variance.
struct LargeScaleParams {
  Eigen::MatrixXd L;
  Eigen::MatrixXd kappa;
  Eigen::MatrixXd beta;
  Eigen::MatrixXd lambda;
  // dB diagnostics; antenna gains are not included in any of these.
  Eigen::MatrixXd loss_dist_db;
  Eigen::MatrixXd loss_shad_db;
  Eigen::MatrixXd loss_angle_db;
  double antenna_gain_db = 0.0;

  int num_saps() const { return static_cast<int>(L.rows()); }
  int num_uts() const { return static_cast<int>(L.cols()); }
};

struct ChannelRealization {
  Eigen::MatrixXcd h;
  Eigen::MatrixXd phase;
  Eigen::MatrixXcd nlos;
};

/// Boresight-angle pattern loss in dB. Negative near boresight (net gain).
/// Throws std::domain_error for theta outside [0, pi/2).
double angle_loss_db(double theta, double eta);

/// Half-power off-boresight angle of the pattern, arccos(0.5^(1/eta)).
double half_power_angle(double eta);

/// Free-space path loss in dB for a slant range in km and a carrier in GHz.
double distance_loss_db(double slant_km, double carrier_ghz);

Eigen::MatrixXd draw_shadowing(int num_saps, int num_uts, double std_db, Rng& rng);

/// Builds L/beta/lambda from a snapshot and a fixed shadowing matrix (dB).
/// Non-visible pairs get L = 0.
LargeScaleParams large_scale(const ClusterSnapshot& snapshot,
                             const ChannelConfig& config,
                             const Eigen::MatrixXd& shadow_db);

LargeScaleParams large_scale(const ClusterSnapshot& snapshot,
                             const ChannelConfig& config, Rng& rng);

/// Builds the parameter set straight from linear L and K-factor matrices.
/// An infinite K-factor means pure LoS.
LargeScaleParams large_scale_from_linear(const Eigen::MatrixXd& L,
                                         const Eigen::MatrixXd& kappa);

/// Keeps only the given UT columns.
LargeScaleParams select_uts(const LargeScaleParams& ls,
                            const std::vector<int>& columns);

ChannelRealization draw_channel(const LargeScaleParams& ls, Rng& rng);

/// Channel draw with caller-fixed LoS phases.
ChannelRealization draw_channel(const LargeScaleParams& ls,
                                const Eigen::MatrixXd& phase, Rng& rng);

}  // namespace cfleo
