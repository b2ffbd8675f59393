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
 * @file downlink.hpp
 * @brief Conjugate beamforming and the closed-form downlink achievable rate.
 *
 * Every matrix in the rate expression is diagonal, so each trace reduces to
 * a sum over SAPs. With P_k = diag(p_{m,k} / W_k[m]):
 *
 *   tr(P_k^{1/2} W_k)          = sum_m sqrt(p_{m,k} W_k[m])
 *   tr(P_k' A'_k W_k')         = sum_m p_{m,k'} L_{m,k}
 *   tr(P_k' ^{1/2} A_k G_k' A_k') = sum_m sqrt(p_{m,k'}/W_k'[m]) lambda_{m,k} lambda_{m,k'} / gamma_{m,k'}
 *   tr(P_k B_k^2)              = sum_m p_{m,k} beta_{m,k}^2 / W_k[m]
 */
#pragma once

#include <Eigen/Dense>

#include "cfleo/channel.hpp"
#include "cfleo/training.hpp"

namespace cfleo {

struct FrameConfig {
  int tau_c = 300;
  int tau_up = 30;
  int tau_ud = 0;
  int tau_dd = 270;

  void validate() const;
  double dl_fraction() const { return static_cast<double>(tau_dd) / tau_c; }
};

/// Thermal noise power in W over the given bandwidth.
double noise_power_w(double nsd_dbm_hz, double bandwidth_mhz, double noise_figure_db);

struct RateInputs {
  Eigen::MatrixXd P;  // M x K power scaling factors (W)
  LargeScaleParams ls;
  PilotAssignment pa;
  double noise_var = 0.0;
  FrameConfig frame;
};

struct RateReport {
  Eigen::VectorXd rate;             // bps/Hz
  Eigen::VectorXd sinr;
  Eigen::VectorXd numerator;        // |tr(P_k^{1/2} W_k)|^2
  Eigen::VectorXd interference;     // sum_k' tr(P_k' A'_k W_k')
  Eigen::VectorXd contamination;    // co-pilot coherent terms
  Eigen::VectorXd self_correction;  // tr(P_k B_k^2)
};

/// v_{m,k} = sqrt(p_{m,k} / E|hhat_{m,k}|^2) hhat_{m,k}.
/// Throws std::domain_error for power on a link with zero estimate statistics.
Eigen::MatrixXcd precoder(const EstimateSet& est, const Eigen::MatrixXd& P);

/// Precomputed per-slot view of the rate expression. Immutable after
/// construction and safe to share between threads.
class DownlinkModel {
 public:
  DownlinkModel(LargeScaleParams ls, PilotAssignment pa, double noise_var,
                FrameConfig frame);

  RateReport evaluate(const Eigen::MatrixXd& P) const;
  /// Rates only; `rates` must have num_uts() entries.
  void rates(const Eigen::MatrixXd& P, Eigen::VectorXd& rates) const;

  int num_saps() const { return static_cast<int>(ls_.L.rows()); }
  int num_uts() const { return static_cast<int>(ls_.L.cols()); }
  const LargeScaleParams& large_scale() const { return ls_; }
  const PilotAssignment& pilots() const { return pa_; }
  const Eigen::MatrixXd& second_moment() const { return W_; }
  const Eigen::MatrixXd& gamma() const { return gamma_; }
  double noise_var() const { return noise_; }
  const FrameConfig& frame() const { return frame_; }

 private:
  template <bool kFull>
  void evaluate_impl(const Eigen::MatrixXd& P, RateReport* report,
                     Eigen::VectorXd& rates) const;

  LargeScaleParams ls_;
  PilotAssignment pa_;
  double noise_;
  FrameConfig frame_;
  Eigen::MatrixXd W_;
  Eigen::MatrixXd gamma_;
  Eigen::MatrixXd self_coef_;  // beta^2 / W
  Eigen::MatrixXd inv_sqrt_W_;
};

RateReport closed_form_rate(const RateInputs& inputs);

/// Monte-Carlo estimates of every term of the rate expression over joint
/// draws of phases, channels, pilot noise and estimates. Terms:
///   rate.numerator        |E{v_k^H h_k}|^2
///   rate.self_variance    Var{v_k^H h_k} vs tr(P_k A'_k W_k) - tr(P_k B_k^2)
///   rate.interference     Var{v_k'^H h_k} vs tr(P_k' A'_k W_k'), k' != k
///   rate.contamination    |E{v_k'^H h_k}|^2 for co-pilots k'
///   rate.sinr             end-to-end SINR from the moments
MomentReport mc_moment_check(const RateInputs& inputs, int n_trials, Rng& rng);

}  // namespace cfleo
