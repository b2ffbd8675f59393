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
 * @file geometry.hpp
 * @brief Cluster placement, rigid-track motion and SAP/UT look angles.
 *
 * Everything lives in a flat local tangent frame: x is the track axis,
 * y the cross-track axis, z the height above ground, all in km. SAP
 * antennas point at nadir, so the boresight angle is the off-nadir angle.
 */
#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cfleo/rng.hpp"

namespace cfleo {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct GeometryConfig {
  double altitude_km = 550.0;
  double area_km = 1000.0;
  int num_saps = 8;
  double sap_spacing_km = 250.0;
  int num_uts = 40;
  double ground_speed_kms = 7.0;
  double max_boresight_rad = 1.0471975511965976;  // 60 deg
  double next_cluster_offset_km = 1200.0;
  double slot_duration_s = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct ClusterSnapshot {
  int time_slot = 0;
  std::vector<Point3> sap_positions;
  std::vector<Point3> ut_positions;
  Eigen::MatrixXd boresight;  // M x K, rad
  Eigen::MatrixXd slant;      // M x K, km
  BoolMatrix visible;         // M x K
  std::vector<bool> next_cluster_visible;

  int num_saps() const { return static_cast<int>(sap_positions.size()); }
  int num_uts() const { return static_cast<int>(ut_positions.size()); }
};

/// Rows x columns of the SAP grid for M SAPs (last row may be short).
struct GridShape {
  int rows = 0;
  int cols = 0;
};
GridShape sap_grid_shape(int num_saps);

ClusterSnapshot build_constellation(const GeometryConfig& config, Rng& rng);

/// Same as build_constellation but with caller-supplied UT positions.
ClusterSnapshot build_constellation(const GeometryConfig& config,
                                    std::vector<Point3> ut_positions);

/// Advances the snapshot by `slots` slots of rigid cluster motion.
ClusterSnapshot propagate(const ClusterSnapshot& snapshot,
                          const GeometryConfig& config, int slots);

/// Fills boresight/slant/visibility matrices from the stored positions.
void recompute_links(ClusterSnapshot& snapshot, const GeometryConfig& config);

double boresight_angle(const Point3& sap, const Point3& ut);
double slant_range(const Point3& sap, const Point3& ut);

}  // namespace cfleo
