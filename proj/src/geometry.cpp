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

#include "cfleo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cfleo {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) {
    throw std::invalid_argument(std::string("geometry: ") + field + " " + what);
  }
}

}  // namespace

void GeometryConfig::validate() const {
  require(altitude_km > 0.0, "altitude_km", "must be > 0");
  require(area_km > 0.0, "area_km", "must be > 0");
  require(num_saps >= 1, "num_saps", "must be >= 1");
  require(num_uts >= 1, "num_uts", "must be >= 1");
  require(num_saps == 1 || sap_spacing_km > 0.0, "sap_spacing_km",
          "must be > 0 when num_saps > 1");
  require(ground_speed_kms >= 0.0, "ground_speed_kms", "must be >= 0");
  require(max_boresight_rad > 0.0 && max_boresight_rad < std::numbers::pi / 2,
          "max_boresight", "must lie in (0, 90) deg");
  require(next_cluster_offset_km >= 0.0, "next_cluster_offset_km",
          "must be >= 0");
  require(slot_duration_s > 0.0, "slot_duration_s", "must be > 0");
}

GridShape sap_grid_shape(int num_saps) {
  if (num_saps < 1) {
    throw std::invalid_argument("geometry: num_saps must be >= 1");
  }
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(num_saps))));
  const int rows = (num_saps + cols - 1) / cols;
  return {rows, cols};
}

double boresight_angle(const Point3& sap, const Point3& ut) {
  const double dx = sap.x - ut.x;
  const double dy = sap.y - ut.y;
  return std::atan2(std::hypot(dx, dy), sap.z - ut.z);
}

double slant_range(const Point3& sap, const Point3& ut) {
  const double dx = sap.x - ut.x;
  const double dy = sap.y - ut.y;
  const double dz = sap.z - ut.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void recompute_links(ClusterSnapshot& s, const GeometryConfig& config) {
  const int m_count = s.num_saps();
  const int k_count = s.num_uts();
  s.boresight.resize(m_count, k_count);
  s.slant.resize(m_count, k_count);
  s.visible.resize(m_count, k_count);
  for (int m = 0; m < m_count; ++m) {
    for (int k = 0; k < k_count; ++k) {
      const double theta = boresight_angle(s.sap_positions[m], s.ut_positions[k]);
      s.boresight(m, k) = theta;
      s.slant(m, k) = slant_range(s.sap_positions[m], s.ut_positions[k]);
      s.visible(m, k) = theta <= config.max_boresight_rad;
    }
  }

  // The trailing cluster is a rigid copy offset backwards on the track axis;
  // its leading-edge SAPs are the ones furthest along +x.
  double lead_x = -std::numeric_limits<double>::infinity();
  for (const auto& p : s.sap_positions) lead_x = std::max(lead_x, p.x);
  s.next_cluster_visible.assign(k_count, false);
  for (const auto& p : s.sap_positions) {
    if (p.x < lead_x - 1e-9) continue;
    Point3 edge{p.x - config.next_cluster_offset_km, p.y, p.z};
    for (int k = 0; k < k_count; ++k) {
      if (boresight_angle(edge, s.ut_positions[k]) <= config.max_boresight_rad) {
        s.next_cluster_visible[k] = true;
      }
    }
  }
}

ClusterSnapshot build_constellation(const GeometryConfig& config,
                                    std::vector<Point3> ut_positions) {
  config.validate();
  const auto shape = sap_grid_shape(config.num_saps);
  const double cx = config.area_km / 2.0;
  const double cy = config.area_km / 2.0;

  ClusterSnapshot s;
  s.time_slot = 0;
  s.sap_positions.reserve(config.num_saps);
  for (int i = 0; i < config.num_saps; ++i) {
    const int row = i / shape.cols;
    const int col = i % shape.cols;
    s.sap_positions.push_back(
        {cx + (col - (shape.cols - 1) / 2.0) * config.sap_spacing_km,
         cy + (row - (shape.rows - 1) / 2.0) * config.sap_spacing_km,
         config.altitude_km});
  }
  s.ut_positions = std::move(ut_positions);
  recompute_links(s, config);
  return s;
}

ClusterSnapshot build_constellation(const GeometryConfig& config, Rng& rng) {
  config.validate();
  std::uniform_real_distribution<double> u(0.0, config.area_km);
  std::vector<Point3> uts;
  uts.reserve(config.num_uts);
  for (int k = 0; k < config.num_uts; ++k) {
    const double x = u(rng);
    const double y = u(rng);
    uts.push_back({x, y, 0.0});
  }
  return build_constellation(config, std::move(uts));
}

ClusterSnapshot propagate(const ClusterSnapshot& snapshot,
                          const GeometryConfig& config, int slots) {
  if (slots < 0) {
    throw std::invalid_argument("geometry: propagate needs slots >= 0");
  }
  ClusterSnapshot s = snapshot;
  s.time_slot = snapshot.time_slot + slots;
  if (slots == 0) return s;
  const double shift = config.ground_speed_kms * config.slot_duration_s * slots;
  for (auto& p : s.sap_positions) p.x += shift;
  recompute_links(s, config);
  return s;
}

}  // namespace cfleo
