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

#include "cfleo/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <type_traits>

#include "cfleo/units.hpp"

namespace cfleo {

using nlohmann::json;

FrameConfig SimConfig::frame() const {
  return FrameConfig{tau_c, tau_up, tau_c - tau_up - tau_dd, tau_dd};
}

double SimConfig::noise_var_w() const {
  return noise_power_w(nsd_dbm_hz, bandwidth_mhz, noise_figure_db);
}

double SimConfig::pilot_power_w() const { return db_to_linear(pilot_power_dbw); }
double SimConfig::p_max_w() const { return db_to_linear(p_max_dbw); }

GeometryConfig SimConfig::geometry_config() const {
  GeometryConfig g = geometry;
  g.slot_duration_s = handover.slot_duration_s;
  return g;
}

namespace {

void check(bool ok, const char* key, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("config key '") + key + "': " + what);
}

}  // namespace

void SimConfig::validate() const {
  check(geometry.altitude_km > 0.0, "altitude_km", "must be > 0");
  check(geometry.area_km > 0.0, "area_km", "must be > 0");
  check(geometry.num_saps >= 1, "num_saps", "must be >= 1");
  check(geometry.num_uts >= 1, "num_uts", "must be >= 1");
  check(geometry.num_saps == 1 || geometry.sap_spacing_km > 0.0, "sap_spacing_km", "must be > 0");
  check(geometry.ground_speed_kms >= 0.0, "ground_speed_kms", "must be >= 0");
  check(geometry.max_boresight_rad > 0.0 && geometry.max_boresight_rad < deg_to_rad(90.0),
        "max_boresight_deg", "must lie in (0, 90)");
  check(geometry.next_cluster_offset_km >= 0.0, "next_cluster_offset_km", "must be >= 0");
  check(channel.carrier_ghz > 0.0, "carrier_ghz", "must be > 0");
  check(channel.eta > 0.0, "eta", "must be > 0");
  check(channel.shadow_std_db >= 0.0, "shadow_std_db", "must be >= 0");
  check(tau_c >= 1, "tau_c", "must be >= 1");
  check(tau_up >= 1, "tau_up", "must be >= 1");
  check(tau_dd >= 0, "tau_dd", "must be >= 0");
  check(tau_up + tau_dd <= tau_c, "tau_dd", "tau_up + tau_dd must not exceed tau_c");
  check(bandwidth_mhz > 0.0, "bandwidth_mhz", "must be > 0");
  check(alpha >= 0.0 && alpha <= 1.0, "alpha", "must lie in [0, 1]");
  check(r_min_bps_hz >= 0.0, "r_min_bps_hz", "must be >= 0");
  check(ga.population >= 2, "ga_population", "must be >= 2");
  check(ga.generations >= 0, "ga_generations", "must be >= 0");
  check(ga.crossover_rate >= 0.0 && ga.crossover_rate <= 1.0, "ga_crossover", "must lie in [0, 1]");
  check(ga.mutation_rate >= 0.0 && ga.mutation_rate <= 1.0, "ga_mutation", "must lie in [0, 1]");
  check(ga.elitism >= 0 && ga.elitism <= ga.population, "ga_elitism", "must lie in [0, ga_population]");
  check(ga.penalty_weight >= 0.0, "ga_penalty_weight", "must be >= 0");
  check(handover.confirm_slots >= 1, "handover_confirm_slots", "must be >= 1");
  check(handover.slot_duration_s > 0.0, "slot_duration_s", "must be > 0");
  check(horizon_slots >= 1, "horizon_slots", "must be >= 1");
  check(num_runs >= 1, "num_runs", "must be >= 1");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "altitude_km", "area_km", "num_saps", "num_uts", "sap_spacing_km",
      "ground_speed_kms", "max_boresight_deg", "next_cluster_offset_km",
      "carrier_ghz", "eta", "shadow_std_db", "rician_k_db", "sat_gain_db", "ut_gain_db",
      "tau_c", "tau_up", "pilot_power_dbw",
      "tau_dd", "bandwidth_mhz", "noise_figure_db", "nsd_dbm_hz",
      "alpha", "r_min_bps_hz", "p_max_dbw", "ga_population", "ga_generations",
      "ga_crossover", "ga_mutation", "ga_elitism", "ga_penalty_weight",
      "handover_confirm_slots", "slot_duration_s",
      "horizon_slots", "num_runs", "mode", "seed", "output_dir"};
  return keys;
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer() && !it->is_number_unsigned()) {
      throw std::invalid_argument(std::string("config key '") + key + "': expected an integer");
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (it->is_number_integer() && !it->is_number_unsigned() && it->get<std::int64_t>() < 0) {
        throw std::invalid_argument(std::string("config key '") + key + "': must be >= 0");
      }
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) {
      throw std::invalid_argument(std::string("config key '") + key + "': expected a number");
    }
  }
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

SimConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (value.is_object() || value.is_array()) {
      throw std::invalid_argument("config key '" + key + "': nested values are not allowed");
    }
  }
  SimConfig c;
  auto& g = c.geometry;
  read(j, "altitude_km", g.altitude_km);
  read(j, "area_km", g.area_km);
  read(j, "num_saps", g.num_saps);
  read(j, "num_uts", g.num_uts);
  read(j, "sap_spacing_km", g.sap_spacing_km);
  read(j, "ground_speed_kms", g.ground_speed_kms);
  double boresight_deg = rad_to_deg(g.max_boresight_rad);
  read(j, "max_boresight_deg", boresight_deg);
  g.max_boresight_rad = deg_to_rad(boresight_deg);
  read(j, "next_cluster_offset_km", g.next_cluster_offset_km);

  auto& ch = c.channel;
  read(j, "carrier_ghz", ch.carrier_ghz);
  read(j, "eta", ch.eta);
  read(j, "shadow_std_db", ch.shadow_std_db);
  read(j, "rician_k_db", ch.rician_k_db);
  read(j, "sat_gain_db", ch.sat_gain_db);
  read(j, "ut_gain_db", ch.ut_gain_db);

  read(j, "tau_c", c.tau_c);
  read(j, "tau_up", c.tau_up);
  read(j, "pilot_power_dbw", c.pilot_power_dbw);
  read(j, "tau_dd", c.tau_dd);
  read(j, "bandwidth_mhz", c.bandwidth_mhz);
  read(j, "noise_figure_db", c.noise_figure_db);
  read(j, "nsd_dbm_hz", c.nsd_dbm_hz);

  read(j, "alpha", c.alpha);
  read(j, "r_min_bps_hz", c.r_min_bps_hz);
  read(j, "p_max_dbw", c.p_max_dbw);
  read(j, "ga_population", c.ga.population);
  read(j, "ga_generations", c.ga.generations);
  read(j, "ga_crossover", c.ga.crossover_rate);
  read(j, "ga_mutation", c.ga.mutation_rate);
  read(j, "ga_elitism", c.ga.elitism);
  read(j, "ga_penalty_weight", c.ga.penalty_weight);

  read(j, "handover_confirm_slots", c.handover.confirm_slots);
  read(j, "slot_duration_s", c.handover.slot_duration_s);
  g.slot_duration_s = c.handover.slot_duration_s;

  read(j, "horizon_slots", c.horizon_slots);
  read(j, "num_runs", c.num_runs);
  std::string mode(to_string(c.mode));
  read(j, "mode", mode);
  try {
    c.mode = parse_mode(mode);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config key 'mode': ") + e.what());
  }
  read(j, "seed", c.seed);
  read(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

json config_to_json(const SimConfig& c) {
  json j;
  j["altitude_km"] = c.geometry.altitude_km;
  j["area_km"] = c.geometry.area_km;
  j["num_saps"] = c.geometry.num_saps;
  j["num_uts"] = c.geometry.num_uts;
  j["sap_spacing_km"] = c.geometry.sap_spacing_km;
  j["ground_speed_kms"] = c.geometry.ground_speed_kms;
  j["max_boresight_deg"] = rad_to_deg(c.geometry.max_boresight_rad);
  j["next_cluster_offset_km"] = c.geometry.next_cluster_offset_km;
  j["carrier_ghz"] = c.channel.carrier_ghz;
  j["eta"] = c.channel.eta;
  j["shadow_std_db"] = c.channel.shadow_std_db;
  j["rician_k_db"] = c.channel.rician_k_db;
  j["sat_gain_db"] = c.channel.sat_gain_db;
  j["ut_gain_db"] = c.channel.ut_gain_db;
  j["tau_c"] = c.tau_c;
  j["tau_up"] = c.tau_up;
  j["pilot_power_dbw"] = c.pilot_power_dbw;
  j["tau_dd"] = c.tau_dd;
  j["bandwidth_mhz"] = c.bandwidth_mhz;
  j["noise_figure_db"] = c.noise_figure_db;
  j["nsd_dbm_hz"] = c.nsd_dbm_hz;
  j["alpha"] = c.alpha;
  j["r_min_bps_hz"] = c.r_min_bps_hz;
  j["p_max_dbw"] = c.p_max_dbw;
  j["ga_population"] = c.ga.population;
  j["ga_generations"] = c.ga.generations;
  j["ga_crossover"] = c.ga.crossover_rate;
  j["ga_mutation"] = c.ga.mutation_rate;
  j["ga_elitism"] = c.ga.elitism;
  j["ga_penalty_weight"] = c.ga.penalty_weight;
  j["handover_confirm_slots"] = c.handover.confirm_slots;
  j["slot_duration_s"] = c.handover.slot_duration_s;
  j["horizon_slots"] = c.horizon_slots;
  j["num_runs"] = c.num_runs;
  j["mode"] = std::string(to_string(c.mode));
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);  // allow comments
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace cfleo
