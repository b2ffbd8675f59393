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

#include "cfleo/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cfleo/units.hpp"

namespace cfleo {

void ChannelConfig::validate() const {
  if (!(carrier_ghz > 0.0)) throw std::invalid_argument("channel: carrier_ghz must be > 0");
  if (!(eta > 0.0)) throw std::invalid_argument("channel: eta must be > 0");
  if (!(shadow_std_db >= 0.0)) throw std::invalid_argument("channel: shadow_std_db must be >= 0");
}

double half_power_angle(double eta) { return std::acos(std::pow(0.5, 1.0 / eta)); }

double angle_loss_db(double theta, double eta) {
  if (!(theta >= 0.0) || theta >= std::numbers::pi / 2) {
    throw std::domain_error("angle_loss_db: theta must lie in [0, pi/2)");
  }
  if (!(eta > 0.0)) throw std::domain_error("angle_loss_db: eta must be > 0");
  const double beamwidth = 2.0 * half_power_angle(eta);
  const double peak = 32.0 * std::numbers::ln2 / (2.0 * beamwidth * beamwidth);
  return -10.0 * std::log10(std::pow(std::cos(theta), eta) * peak);
}

double distance_loss_db(double slant_km, double carrier_ghz) {
  const double d = slant_km * 1e3;
  const double f = carrier_ghz * 1e9;
  return 20.0 * std::log10(4.0 * std::numbers::pi * d * f / kSpeedOfLight);
}

Eigen::MatrixXd draw_shadowing(int num_saps, int num_uts, double std_db, Rng& rng) {
  Eigen::MatrixXd s(num_saps, num_uts);
  std::normal_distribution<double> n(0.0, 1.0);
  // UT-major so that the same UT column is reproduced when only M changes.
  for (int k = 0; k < num_uts; ++k) {
    for (int m = 0; m < num_saps; ++m) s(m, k) = std_db * n(rng);
  }
  return s;
}

namespace {

void split_rician(LargeScaleParams& ls) {
  const auto rows = ls.L.rows();
  const auto cols = ls.L.cols();
  ls.beta.resize(rows, cols);
  ls.lambda.resize(rows, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    for (Eigen::Index m = 0; m < rows; ++m) {
      const double L = ls.L(m, k);
      const double kap = ls.kappa(m, k);
      if (std::isinf(kap)) {
        ls.beta(m, k) = L;
        ls.lambda(m, k) = 0.0;
      } else {
        ls.beta(m, k) = kap * L / (kap + 1.0);
        ls.lambda(m, k) = L / (kap + 1.0);
      }
    }
  }
}

}  // namespace

LargeScaleParams large_scale_from_linear(const Eigen::MatrixXd& L,
                                         const Eigen::MatrixXd& kappa) {
  if (L.rows() != kappa.rows() || L.cols() != kappa.cols()) {
    throw std::invalid_argument("large_scale_from_linear: shape mismatch");
  }
  if ((L.array() < 0.0).any() || (kappa.array() < 0.0).any()) {
    throw std::invalid_argument("large_scale_from_linear: negative entries");
  }
  LargeScaleParams ls;
  ls.L = L;
  ls.kappa = kappa;
  ls.loss_dist_db = Eigen::MatrixXd::Zero(L.rows(), L.cols());
  ls.loss_shad_db = Eigen::MatrixXd::Zero(L.rows(), L.cols());
  ls.loss_angle_db = Eigen::MatrixXd::Zero(L.rows(), L.cols());
  split_rician(ls);
  return ls;
}

LargeScaleParams large_scale(const ClusterSnapshot& snapshot,
                             const ChannelConfig& config,
                             const Eigen::MatrixXd& shadow_db) {
  config.validate();
  const int m_count = snapshot.num_saps();
  const int k_count = snapshot.num_uts();
  if (shadow_db.rows() != m_count || shadow_db.cols() != k_count) {
    throw std::invalid_argument("large_scale: shadowing matrix shape mismatch");
  }
  LargeScaleParams ls;
  ls.antenna_gain_db = config.sat_gain_db + config.ut_gain_db;
  ls.L.resize(m_count, k_count);
  ls.kappa = Eigen::MatrixXd::Constant(m_count, k_count, db_to_linear(config.rician_k_db));
  ls.loss_dist_db.resize(m_count, k_count);
  ls.loss_shad_db = shadow_db;
  ls.loss_angle_db.resize(m_count, k_count);
  for (int k = 0; k < k_count; ++k) {
    for (int m = 0; m < m_count; ++m) {
      const double dist = distance_loss_db(snapshot.slant(m, k), config.carrier_ghz);
      const double theta = snapshot.boresight(m, k);
      // Pairs at or past the horizon have no defined pattern value.
      const double angle = theta < std::numbers::pi / 2
                               ? angle_loss_db(theta, config.eta)
                               : std::numeric_limits<double>::infinity();
      ls.loss_dist_db(m, k) = dist;
      ls.loss_angle_db(m, k) = angle;
      const double total = dist + shadow_db(m, k) + angle - ls.antenna_gain_db;
      ls.L(m, k) = snapshot.visible(m, k) ? std::pow(10.0, -total / 10.0) : 0.0;
    }
  }
  split_rician(ls);
  return ls;
}

LargeScaleParams large_scale(const ClusterSnapshot& snapshot,
                             const ChannelConfig& config, Rng& rng) {
  return large_scale(snapshot, config,
                     draw_shadowing(snapshot.num_saps(), snapshot.num_uts(),
                                    config.shadow_std_db, rng));
}

LargeScaleParams select_uts(const LargeScaleParams& ls,
                            const std::vector<int>& columns) {
  const auto pick = [&](const Eigen::MatrixXd& src) {
    Eigen::MatrixXd out(src.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) out.col(j) = src.col(columns[j]);
    return out;
  };
  LargeScaleParams out;
  out.L = pick(ls.L);
  out.kappa = pick(ls.kappa);
  out.beta = pick(ls.beta);
  out.lambda = pick(ls.lambda);
  out.loss_dist_db = pick(ls.loss_dist_db);
  out.loss_shad_db = pick(ls.loss_shad_db);
  out.loss_angle_db = pick(ls.loss_angle_db);
  out.antenna_gain_db = ls.antenna_gain_db;
  return out;
}

ChannelRealization draw_channel(const LargeScaleParams& ls,
                                const Eigen::MatrixXd& phase, Rng& rng) {
  const auto rows = ls.L.rows();
  const auto cols = ls.L.cols();
  ChannelRealization c;
  c.phase = phase;
  c.nlos.resize(rows, cols);
  c.h.resize(rows, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    for (Eigen::Index m = 0; m < rows; ++m) {
      c.nlos(m, k) = complex_gaussian(rng, ls.lambda(m, k));
      c.h(m, k) = std::sqrt(ls.beta(m, k)) * std::polar(1.0, phase(m, k)) + c.nlos(m, k);
    }
  }
  return c;
}

ChannelRealization draw_channel(const LargeScaleParams& ls, Rng& rng) {
  Eigen::MatrixXd phase(ls.L.rows(), ls.L.cols());
  for (Eigen::Index k = 0; k < phase.cols(); ++k) {
    for (Eigen::Index m = 0; m < phase.rows(); ++m) phase(m, k) = uniform_phase(rng);
  }
  return draw_channel(ls, phase, rng);
}

}  // namespace cfleo
