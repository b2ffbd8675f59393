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
 * @file rng.hpp
 * @brief Seed derivation and random draws shared by every module.
 *
 * Streams are keyed by (base seed, tags...) so a draw for a given run, slot
 * and purpose is reproducible regardless of execution order.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfleo {

using Rng = std::mt19937_64;

/// Tags naming what a derived stream is used for.
enum class Purpose : std::uint64_t {
  kGeometry = 1,
  kShadowing = 2,
  kGa = 3,
  kMonteCarlo = 4,
  kRun = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> tags);

inline Rng make_stream(std::uint64_t base,
                       std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(base, tags));
}

inline std::uint64_t tag(Purpose p) { return static_cast<std::uint64_t>(p); }

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
std::complex<double> complex_gaussian(Rng& rng, double variance);

/// Uniform phase on [-pi, pi].
double uniform_phase(Rng& rng);

}  // namespace cfleo
