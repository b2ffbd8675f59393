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
 * @file config.hpp
 * @brief Run configuration: a flat JSON object whose keys are exactly the
 * per-module parameter names. Every key is optional; unknown keys are errors.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfleo/allocation.hpp"
#include "cfleo/channel.hpp"
#include "cfleo/downlink.hpp"
#include "cfleo/geometry.hpp"
#include "cfleo/handover.hpp"
#include "cfleo/metrics.hpp"

namespace cfleo {

struct SimConfig {
  GeometryConfig geometry;
  ChannelConfig channel;

  int tau_c = 300;
  int tau_up = 30;
  double pilot_power_dbw = 5.0;

  int tau_dd = 270;
  double bandwidth_mhz = 20.0;
  double noise_figure_db = 7.0;
  double nsd_dbm_hz = -174.0;

  double alpha = 0.5;
  double r_min_bps_hz = 0.05;
  double p_max_dbw = 15.0;
  GaParams ga;

  HandoverConfig handover;

  int horizon_slots = 120;
  int num_runs = 10;
  Mode mode = Mode::kCfJpahm;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  FrameConfig frame() const;
  double noise_var_w() const;
  double pilot_power_w() const;
  double p_max_w() const;
  /// Geometry with the slot duration taken from the handover block.
  GeometryConfig geometry_config() const;

  /// Throws std::invalid_argument with the offending key in the message.
  void validate() const;
};

/// Every key a configuration file may contain.
const std::vector<std::string>& config_keys();

SimConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimConfig& config);
SimConfig load_config(const std::filesystem::path& path);

}  // namespace cfleo
