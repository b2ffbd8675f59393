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

#include "cfleo/downlink.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cfleo/units.hpp"

namespace cfleo {

void FrameConfig::validate() const {
  if (tau_c < 1) throw std::invalid_argument("frame: tau_c must be >= 1");
  if (tau_up < 1) throw std::invalid_argument("frame: tau_up must be >= 1");
  if (tau_ud < 0 || tau_dd < 0) throw std::invalid_argument("frame: negative segment");
  if (tau_up + tau_ud + tau_dd != tau_c) {
    throw std::invalid_argument("frame: tau_up + tau_ud + tau_dd must equal tau_c");
  }
}

double noise_power_w(double nsd_dbm_hz, double bandwidth_mhz, double noise_figure_db) {
  const double dbm = nsd_dbm_hz + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
  return db_to_linear(dbm - 30.0);
}

Eigen::MatrixXcd precoder(const EstimateSet& est, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd W = est.second_moment();
  if (P.rows() != W.rows() || P.cols() != W.cols()) {
    throw std::invalid_argument("precoder: power matrix shape mismatch");
  }
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(P.rows(), P.cols());
  for (Eigen::Index k = 0; k < P.cols(); ++k) {
    for (Eigen::Index m = 0; m < P.rows(); ++m) {
      if (P(m, k) <= 0.0) continue;
      if (!(W(m, k) > 0.0)) {
        throw std::domain_error("precoder: power on a link with zero estimate statistics");
      }
      V(m, k) = std::sqrt(P(m, k) / W(m, k)) * est.hhat(m, k);
    }
  }
  return V;
}

DownlinkModel::DownlinkModel(LargeScaleParams ls, PilotAssignment pa, double noise_var,
                             FrameConfig frame)
    : ls_(std::move(ls)), pa_(std::move(pa)), noise_(noise_var), frame_(frame) {
  frame_.validate();
  if (!(noise_ > 0.0)) throw std::invalid_argument("downlink: noise variance must be > 0");
  if (pa_.num_uts() != ls_.num_uts()) {
    throw std::invalid_argument("downlink: pilot assignment and channel disagree on K");
  }
  gamma_ = pilot_gamma(ls_, pa_, noise_);
  W_ = estimate_second_moment(ls_, pa_, noise_);
  self_coef_.resize(W_.rows(), W_.cols());
  inv_sqrt_W_.resize(W_.rows(), W_.cols());
  for (Eigen::Index k = 0; k < W_.cols(); ++k) {
    for (Eigen::Index m = 0; m < W_.rows(); ++m) {
      const double w = W_(m, k);
      self_coef_(m, k) = w > 0.0 ? ls_.beta(m, k) * ls_.beta(m, k) / w : 0.0;
      inv_sqrt_W_(m, k) = w > 0.0 ? 1.0 / std::sqrt(w) : 0.0;
    }
  }
}

template <bool kFull>
void DownlinkModel::evaluate_impl(const Eigen::MatrixXd& P, RateReport* report,
                                  Eigen::VectorXd& rates) const {
  const Eigen::Index m_count = W_.rows();
  const Eigen::Index k_count = W_.cols();
  if (P.rows() != m_count || P.cols() != k_count) {
    throw std::invalid_argument("downlink: power matrix shape mismatch");
  }
  const double tau = pa_.tau_up;
  const double prefactor = frame_.dl_fraction();
  const Eigen::VectorXd total = P.rowwise().sum();

  for (Eigen::Index k = 0; k < k_count; ++k) {
    double amp = 0.0;
    double self = 0.0;
    for (Eigen::Index m = 0; m < m_count; ++m) {
      const double p = P(m, k);
      if (p == 0.0) continue;
      if (p < 0.0) throw std::invalid_argument("downlink: negative power");
      if (W_(m, k) <= 0.0) {
        throw std::domain_error("downlink: power on a link with zero estimate statistics");
      }
      amp += std::sqrt(p * W_(m, k));
      self += p * self_coef_(m, k);
    }
    const double interference = total.dot(ls_.L.col(k));
    double contamination = 0.0;
    for (int kp : pa_.copilots[k]) {
      if (kp == k) continue;
      double tr = 0.0;
      for (Eigen::Index m = 0; m < m_count; ++m) {
        const double p = P(m, kp);
        if (p == 0.0) continue;
        tr += std::sqrt(p) * inv_sqrt_W_(m, kp) * ls_.lambda(m, k) * ls_.lambda(m, kp) /
              gamma_(m, kp);
      }
      contamination += pa_.q(k) * pa_.q(kp) * tau * tau * tr * tr;
    }
    const double numerator = amp * amp;
    const double denominator = interference + contamination - self + noise_;
    if (!(denominator > 0.0)) {
      throw std::domain_error("downlink: non-positive SINR denominator (model violation)");
    }
    const double sinr = numerator / denominator;
    rates(k) = prefactor * std::log2(1.0 + sinr);
    if constexpr (kFull) {
      report->sinr(k) = sinr;
      report->numerator(k) = numerator;
      report->interference(k) = interference;
      report->contamination(k) = contamination;
      report->self_correction(k) = self;
    }
  }
}

RateReport DownlinkModel::evaluate(const Eigen::MatrixXd& P) const {
  const Eigen::Index k_count = W_.cols();
  RateReport r;
  r.rate.resize(k_count);
  r.sinr.resize(k_count);
  r.numerator.resize(k_count);
  r.interference.resize(k_count);
  r.contamination.resize(k_count);
  r.self_correction.resize(k_count);
  evaluate_impl<true>(P, &r, r.rate);
  return r;
}

void DownlinkModel::rates(const Eigen::MatrixXd& P, Eigen::VectorXd& out) const {
  out.resize(W_.cols());
  evaluate_impl<false>(P, nullptr, out);
}

RateReport closed_form_rate(const RateInputs& inputs) {
  return DownlinkModel(inputs.ls, inputs.pa, inputs.noise_var, inputs.frame)
      .evaluate(inputs.P);
}

namespace {

// Welford accumulator for a complex scalar.
struct ComplexStats {
  std::complex<double> mean = 0.0;
  double m2 = 0.0;
  long n = 0;

  void add(std::complex<double> x) {
    ++n;
    const std::complex<double> delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += std::real(std::conj(delta) * (x - mean));
  }
  double variance() const { return m2 / static_cast<double>(n); }
  double second_moment() const { return variance() + std::norm(mean); }
};

}  // namespace

MomentReport mc_moment_check(const RateInputs& inputs, int n_trials, Rng& rng) {
  if (n_trials < 2) throw std::invalid_argument("mc_moment_check: need >= 2 trials");
  const DownlinkModel model(inputs.ls, inputs.pa, inputs.noise_var, inputs.frame);
  const RateReport cf = model.evaluate(inputs.P);
  const auto& ls = inputs.ls;
  const auto& pa = inputs.pa;
  const auto& P = inputs.P;
  const Eigen::Index m_count = ls.L.rows();
  const Eigen::Index k_count = ls.L.cols();

  // stats[kp * K + k] accumulates v_kp^H h_k.
  std::vector<ComplexStats> stats(k_count * k_count);
  for (int t = 0; t < n_trials; ++t) {
    const auto ch = draw_channel(ls, rng);
    const auto obs = receive_and_despread(ch, pa, inputs.noise_var, rng);
    const auto est = mmse_estimate(obs, ls, ch.phase, pa);
    const Eigen::MatrixXcd V = precoder(est, P);
    for (Eigen::Index kp = 0; kp < k_count; ++kp) {
      for (Eigen::Index k = 0; k < k_count; ++k) {
        stats[kp * k_count + k].add(V.col(kp).dot(ch.h.col(k)));
      }
    }
  }

  const auto& W = model.second_moment();
  const auto& gamma = model.gamma();
  const double tau = pa.tau_up;
  MomentReport report;
  report.trials = n_trials;
  const auto add = [&](const char* name, int k, int kp, double closed, double mc) {
    report.terms.push_back({name, -1, k, kp, closed, mc, std::abs(mc - closed) / std::abs(closed)});
  };

  for (Eigen::Index k = 0; k < k_count; ++k) {
    const int ki = static_cast<int>(k);
    const auto& self = stats[k * k_count + k];
    if (cf.numerator(k) > 0.0) add("rate.numerator", ki, ki, cf.numerator(k), std::norm(self.mean));
    const double total_k = P.col(k).dot(ls.L.col(k));
    const double self_var_cf = total_k - cf.self_correction(k);
    // Zero up to rounding when every serving link is pure LoS.
    if (self_var_cf > 1e-12 * total_k) add("rate.self_variance", ki, ki, self_var_cf, self.variance());

    double mc_total = 0.0;
    for (Eigen::Index kp = 0; kp < k_count; ++kp) {
      const auto& s = stats[kp * k_count + k];
      mc_total += s.second_moment();
      if (kp == k) continue;
      const int kpi = static_cast<int>(kp);
      const double tr_interf = P.col(kp).dot(ls.L.col(k));
      if (tr_interf > 0.0) add("rate.interference", ki, kpi, tr_interf, s.variance());
      if (pa.pilot_index[kp] == pa.pilot_index[k]) {
        double tr = 0.0;
        for (Eigen::Index m = 0; m < m_count; ++m) {
          if (P(m, kp) > 0.0) {
            tr += std::sqrt(P(m, kp) / W(m, kp)) * ls.lambda(m, k) * ls.lambda(m, kp) /
                  gamma(m, kp);
          }
        }
        const double coh = pa.q(k) * pa.q(kp) * tau * tau * tr * tr;
        if (coh > 0.0) add("rate.contamination", ki, kpi, coh, std::norm(s.mean));
      }
    }
    if (cf.sinr(k) > 0.0) {
      const double num = std::norm(self.mean);
      const double mc_sinr = num / (mc_total - num + inputs.noise_var);
      add("rate.sinr", ki, ki, cf.sinr(k), mc_sinr);
    }
  }
  return report;
}

}  // namespace cfleo
