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

#include "cfleo/training.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace cfleo {

std::vector<int> round_robin_pilots(int num_uts, int tau_up) {
  std::vector<int> idx(num_uts);
  for (int k = 0; k < num_uts; ++k) idx[k] = k % tau_up;
  return idx;
}

PilotAssignment make_pilot_assignment(int tau_up, std::vector<int> pilot_index,
                                      Eigen::VectorXd q) {
  if (tau_up < 1) throw std::invalid_argument("training: tau_up must be >= 1");
  if (static_cast<Eigen::Index>(pilot_index.size()) != q.size()) {
    throw std::invalid_argument("training: pilot_index and q differ in length");
  }
  if ((q.array() < 0.0).any()) throw std::invalid_argument("training: negative pilot power");
  PilotAssignment pa;
  pa.tau_up = tau_up;
  pa.pilot_index = std::move(pilot_index);
  pa.q = std::move(q);
  const int k_count = pa.num_uts();
  std::vector<std::vector<int>> by_pilot(tau_up);
  for (int k = 0; k < k_count; ++k) {
    const int p = pa.pilot_index[k];
    if (p < 0 || p >= tau_up) throw std::invalid_argument("training: pilot id out of range");
    by_pilot[p].push_back(k);
  }
  pa.copilots.resize(k_count);
  for (int k = 0; k < k_count; ++k) pa.copilots[k] = by_pilot[pa.pilot_index[k]];
  return pa;
}

PilotAssignment assign_pilots(int num_uts, int tau_up, double pilot_power_w,
                              const PilotPolicy& policy) {
  if (tau_up < 1) throw std::invalid_argument("training: tau_up must be >= 1");
  return make_pilot_assignment(tau_up, policy(num_uts, tau_up),
                               Eigen::VectorXd::Constant(num_uts, pilot_power_w));
}

Eigen::MatrixXcd pilot_book(int tau_up) {
  if (tau_up < 1) throw std::invalid_argument("training: tau_up must be >= 1");
  Eigen::MatrixXcd book(tau_up, tau_up);
  for (int a = 0; a < tau_up; ++a) {
    for (int n = 0; n < tau_up; ++n) {
      book(n, a) = std::polar(1.0, 2.0 * std::numbers::pi * a * n / tau_up);
    }
  }
  return book;
}

PilotObservation receive_and_despread(const ChannelRealization& channels,
                                      const PilotAssignment& pa, double noise_var,
                                      Rng& rng) {
  const auto m_count = channels.h.rows();
  const auto k_count = channels.h.cols();
  if (k_count != pa.num_uts()) {
    throw std::invalid_argument("training: channel/pilot UT count mismatch");
  }
  const Eigen::MatrixXcd book = pilot_book(pa.tau_up);
  const int tau = pa.tau_up;

  // Transmitted pilot block: column k is sqrt(q_k) psi_k.
  Eigen::MatrixXcd tx(tau, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    tx.col(k) = std::sqrt(pa.q(k)) * book.col(pa.pilot_index[k]);
  }

  PilotObservation obs;
  obs.noise_var = noise_var;
  obs.y = channels.h * tx.transpose();
  for (Eigen::Index m = 0; m < m_count; ++m) {
    for (int n = 0; n < tau; ++n) obs.y(m, n) += complex_gaussian(rng, noise_var);
  }
  obs.despread.resize(m_count, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const auto psi = book.col(pa.pilot_index[k]);
    for (Eigen::Index m = 0; m < m_count; ++m) {
      obs.despread(m, k) = psi.dot(obs.y.row(m).transpose());  // conjugates psi
    }
  }
  return obs;
}

Eigen::MatrixXd pilot_gamma(const LargeScaleParams& ls, const PilotAssignment& pa,
                            double noise_var) {
  const auto m_count = ls.L.rows();
  const auto k_count = ls.L.cols();
  Eigen::MatrixXd gamma(m_count, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (Eigen::Index m = 0; m < m_count; ++m) {
      double g = noise_var;
      for (int kp : pa.copilots[k]) g += pa.q(kp) * pa.tau_up * ls.lambda(m, kp);
      gamma(m, k) = g;
    }
  }
  return gamma;
}

Eigen::MatrixXd estimate_variance(const LargeScaleParams& ls, const PilotAssignment& pa,
                                  double noise_var) {
  const Eigen::MatrixXd gamma = pilot_gamma(ls, pa, noise_var);
  Eigen::MatrixXd var(gamma.rows(), gamma.cols());
  for (Eigen::Index k = 0; k < gamma.cols(); ++k) {
    for (Eigen::Index m = 0; m < gamma.rows(); ++m) {
      const double lam = ls.lambda(m, k);
      var(m, k) = lam > 0.0 ? pa.q(k) * pa.tau_up * lam * lam / gamma(m, k) : 0.0;
    }
  }
  return var;
}

Eigen::MatrixXd estimate_second_moment(const LargeScaleParams& ls,
                                       const PilotAssignment& pa, double noise_var) {
  return ls.beta + estimate_variance(ls, pa, noise_var);
}

Eigen::MatrixXd EstimateSet::second_moment() const {
  return mean.cwiseAbs2() + variance;
}

EstimateSet mmse_estimate(const PilotObservation& obs, const LargeScaleParams& ls,
                          const Eigen::MatrixXd& phases, const PilotAssignment& pa) {
  const auto m_count = ls.L.rows();
  const auto k_count = ls.L.cols();
  const double tau = pa.tau_up;
  EstimateSet est;
  est.gamma = pilot_gamma(ls, pa, obs.noise_var);
  est.mean.resize(m_count, k_count);
  est.variance.resize(m_count, k_count);
  est.hhat.resize(m_count, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (Eigen::Index m = 0; m < m_count; ++m) {
      const double g = est.gamma(m, k);
      if (!(g > 0.0)) {
        throw std::domain_error("mmse_estimate: degenerate gamma (no noise and no NLoS)");
      }
      std::complex<double> ybar = 0.0;
      for (int kp : pa.copilots[k]) {
        ybar += std::sqrt(pa.q(kp)) * tau * std::sqrt(ls.beta(m, kp)) *
                std::polar(1.0, phases(m, kp));
      }
      const double lam = ls.lambda(m, k);
      const std::complex<double> mu = std::sqrt(ls.beta(m, k)) * std::polar(1.0, phases(m, k));
      est.mean(m, k) = mu;
      est.variance(m, k) = pa.q(k) * tau * lam * lam / g;
      est.hhat(m, k) = mu + std::sqrt(pa.q(k)) * lam * (obs.despread(m, k) - ybar) / g;
    }
  }
  return est;
}

double MomentReport::max_rel_error() const {
  double worst = 0.0;
  for (const auto& t : terms) worst = std::max(worst, t.rel_error);
  return worst;
}

double MomentReport::max_rel_error(const std::string& prefix) const {
  double worst = 0.0;
  for (const auto& t : terms) {
    if (t.name.rfind(prefix, 0) == 0) worst = std::max(worst, t.rel_error);
  }
  return worst;
}

MomentReport estimator_moment_check(const LargeScaleParams& ls,
                                    const PilotAssignment& pa, double noise_var,
                                    int n_trials, Rng& rng) {
  const auto m_count = ls.L.rows();
  const auto k_count = ls.L.cols();
  if (n_trials < 2) throw std::invalid_argument("estimator_moment_check: need >= 2 trials");

  Eigen::MatrixXd phases(m_count, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (Eigen::Index m = 0; m < m_count; ++m) phases(m, k) = uniform_phase(rng);
  }
  const Eigen::MatrixXd gamma = pilot_gamma(ls, pa, noise_var);
  const Eigen::MatrixXd var_cf = estimate_variance(ls, pa, noise_var);
  const Eigen::MatrixXd second_cf = ls.beta + var_cf;

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(m_count, k_count);
  Eigen::MatrixXd sum_dev2 = Eigen::MatrixXd::Zero(m_count, k_count);
  Eigen::MatrixXd sum_abs2 = Eigen::MatrixXd::Zero(m_count, k_count);
  // Cross-covariance accumulators for ordered co-pilot pairs, indexed [m][k][kp].
  std::vector<std::complex<double>> cross(m_count * k_count * k_count, 0.0);

  for (int t = 0; t < n_trials; ++t) {
    const auto ch = draw_channel(ls, phases, rng);
    const auto obs = receive_and_despread(ch, pa, noise_var, rng);
    const auto est = mmse_estimate(obs, ls, phases, pa);
    const Eigen::MatrixXcd dev = est.hhat - est.mean;
    sum += est.hhat;
    sum_dev2 += dev.cwiseAbs2();
    sum_abs2 += est.hhat.cwiseAbs2();
    for (Eigen::Index k = 0; k < k_count; ++k) {
      for (int kp : pa.copilots[k]) {
        if (kp == k) continue;
        for (Eigen::Index m = 0; m < m_count; ++m) {
          cross[(m * k_count + k) * k_count + kp] += dev(m, k) * std::conj(dev(m, kp));
        }
      }
    }
  }

  MomentReport report;
  report.trials = n_trials;
  const double n = n_trials;
  const auto rel = [](double mc, double cf) { return std::abs(mc - cf) / std::abs(cf); };
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (Eigen::Index m = 0; m < m_count; ++m) {
      const int mi = static_cast<int>(m);
      const int ki = static_cast<int>(k);
      if (ls.beta(m, k) > 0.0) {
        const std::complex<double> cf = std::sqrt(ls.beta(m, k)) * std::polar(1.0, phases(m, k));
        const std::complex<double> mc = sum(m, k) / n;
        report.terms.push_back({"estimate.mean", mi, ki, -1, std::abs(cf), std::abs(mc),
                                std::abs(mc - cf) / std::abs(cf)});
      }
      if (ls.lambda(m, k) > 0.0 && pa.q(k) > 0.0) {
        const double mc_var = sum_dev2(m, k) / n;
        report.terms.push_back({"estimate.variance", mi, ki, -1, var_cf(m, k), mc_var,
                                rel(mc_var, var_cf(m, k))});
      }
      if (second_cf(m, k) > 0.0) {
        const double mc2 = sum_abs2(m, k) / n;
        report.terms.push_back({"estimate.second_moment", mi, ki, -1, second_cf(m, k), mc2,
                                rel(mc2, second_cf(m, k))});
      }
      for (int kp : pa.copilots[k]) {
        if (kp == k) continue;
        const double cf = pa.tau_up * std::sqrt(pa.q(k) * pa.q(kp)) * ls.lambda(m, k) *
                          ls.lambda(m, kp) / gamma(m, k);
        if (!(cf > 0.0)) continue;
        const std::complex<double> mc = cross[(m * k_count + k) * k_count + kp] / n;
        report.terms.push_back({"estimate.copilot_cov", mi, ki, kp, cf, std::abs(mc),
                                std::abs(mc - cf) / cf});
      }
    }
  }
  return report;
}

}  // namespace cfleo
