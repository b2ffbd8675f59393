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
 * @file verification.hpp
 * @brief Reference instances and the self-check behind `cfleo verify`.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfleo/allocation.hpp"
#include "cfleo/downlink.hpp"
#include "cfleo/training.hpp"

namespace cfleo {

/// 3 SAPs, 4 UTs, 2 pilots (UTs 0/2 and 1/3 share). Normalized units with
/// a low K-factor so every scattered-path moment is well above MC noise.
RateInputs reference_moment_instance();

/// Random M=2, K=2 problem for the GA-vs-grid comparison.
AllocationProblem reference_oracle_problem(std::uint64_t seed, double alpha = 0.5);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  int trials = 100000;
  double moment_tolerance = 0.03;
  int oracle_seeds = 10;
  int oracle_required = 9;
  int grid_levels = 8;
  double oracle_ratio = 0.95;
  std::uint64_t seed = 1;
};

/// Estimator and rate moment checks plus the GA-vs-grid oracle.
std::vector<CheckResult> run_verification(const GaParams& ga, double alpha,
                                          const VerifyOptions& options);

}  // namespace cfleo
