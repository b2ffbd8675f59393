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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cfleo/allocation.hpp"
#include "cfleo/verification.hpp"

using namespace cfleo;

namespace {

AllocationProblem random_problem(std::mt19937_64& gen, int m_count, int k_count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd L(m_count, k_count);
  Eigen::MatrixXd kappa(m_count, k_count);
  for (int k = 0; k < k_count; ++k) {
    for (int m = 0; m < m_count; ++m) {
      L(m, k) = u(gen) < 0.15 ? 0.0 : std::pow(10.0, 2.0 * u(gen) - 1.0);
      kappa(m, k) = std::pow(10.0, 2.0 * u(gen) - 0.5);
    }
  }
  AllocationProblem pb;
  pb.ls = large_scale_from_linear(L, kappa);
  pb.pa = assign_pilots(k_count, 1 + static_cast<int>(gen() % 4), 1.0);
  pb.noise_var = 0.05 + u(gen);
  pb.r_min = Eigen::VectorXd::Constant(k_count, 0.6 * u(gen));
  pb.p_max = (Eigen::VectorXd::Random(m_count).array() + 1.5).matrix();
  pb.alpha = u(gen);
  return pb;
}

GaParams quick_ga(std::uint64_t seed) {
  GaParams ga;
  ga.population = 24;
  ga.generations = 30;
  ga.seed = seed;
  return ga;
}

}  // namespace

TEST_CASE("objective weights") {
  const Eigen::VectorXd rates = Eigen::Vector3d(0.5, 1.0, 2.0);
  CHECK(objective(1.0, rates, {true, true, true}) == 3.0);
  CHECK(objective(0.0, rates, {true, false, true}) == 2.5);
  CHECK(objective(0.5, rates, {true, false, false}) == doctest::Approx(0.75));
}

TEST_CASE("unreachable minimum rate admits nobody") {
  auto pb = reference_oracle_problem(3);
  pb.r_min.setConstant(std::numeric_limits<double>::infinity());
  const auto s = ga_solve(pb, quick_ga(1));
  for (bool a : s.admitted) CHECK_FALSE(a);
  CHECK(s.objective == 0.0);
  CHECK_FALSE(check_constraints(pb, s).has_value());
}

TEST_CASE("brute force enumerates every candidate") {
  Eigen::MatrixXd L = Eigen::MatrixXd::Constant(1, 1, 1.0);
  AllocationProblem pb;
  pb.ls = large_scale_from_linear(L, Eigen::MatrixXd::Ones(1, 1));
  pb.pa = assign_pilots(1, 1, 1.0);
  pb.noise_var = 0.1;
  pb.r_min = Eigen::VectorXd::Zero(1);
  pb.p_max = Eigen::VectorXd::Ones(1);
  pb.alpha = 0.5;
  std::uint64_t n = 0;
  const auto s = brute_force_solve(pb, 2, &n);
  CHECK(n == 4);
  CHECK(s.admitted[0]);
  CHECK(s.P(0, 0) == 1.0);
  CHECK_THROWS_AS(brute_force_solve(reference_oracle_problem(1), 40), std::invalid_argument);
}

TEST_CASE("brute-force regression fixture") {
  // Optimum of reference_oracle_problem(1) on the 8-level grid, computed once
  // by brute_force_solve and frozen here.
  const auto pb = reference_oracle_problem(1);
  const auto s = brute_force_solve(pb, 8);
  CHECK(s.objective == doctest::Approx(1.9945691920587449).epsilon(1e-12));
  CHECK(s.admitted == (std::vector<bool>{true, true}));
  CHECK_FALSE(check_constraints(pb, s).has_value());
}

TEST_CASE("GA reaches the grid optimum on small problems") {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto pb = reference_oracle_problem(seed);
    const auto grid = brute_force_solve(pb, 8);
    GaParams ga;
    ga.seed = seed;
    const auto s = ga_solve(pb, ga);
    if (s.objective >= 0.95 * grid.objective) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("GA is deterministic in its seed") {
  std::mt19937_64 gen(4);
  const auto pb = random_problem(gen, 4, 6);
  const auto a = ga_solve(pb, quick_ga(9));
  const auto b = ga_solve(pb, quick_ga(9));
  CHECK(a.P == b.P);
  CHECK(a.admitted == b.admitted);
  CHECK(a.objective == b.objective);
}

TEST_CASE("GA never loses to its warm start or to nothing") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pb = random_problem(gen, 3, 5);
    const auto warm = best_channel_allocate(pb, [&] {
      ClusterSnapshot snap;
      snap.sap_positions.resize(pb.num_saps());
      snap.ut_positions.resize(pb.num_uts());
      snap.visible = (pb.ls.L.array() > 0.0).matrix();
      return snap;
    }());
    const auto warm_repaired = repair(pb, warm.P, std::vector<bool>(pb.num_uts(), true));
    const auto s = ga_solve(pb, quick_ga(trial), &warm_repaired);
    CHECK(s.objective >= 0.0);
    CHECK(s.objective >= warm_repaired.objective - 1e-12);
  }
}

TEST_CASE("repair yields feasible solutions and is idempotent") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-0.2, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int m_count = 1 + static_cast<int>(gen() % 4);
    const int k_count = 1 + static_cast<int>(gen() % 6);
    const auto pb = random_problem(gen, m_count, k_count);
    Eigen::MatrixXd P(m_count, k_count);
    for (int i = 0; i < P.size(); ++i) P.data()[i] = u(gen);
    std::vector<bool> admit(k_count);
    for (int k = 0; k < k_count; ++k) admit[k] = gen() & 1U;
    const auto s = repair(pb, P, admit);
    const auto why = check_constraints(pb, s);
    CHECK_MESSAGE(!why.has_value(), why.value_or(""));
    const auto again = repair(pb, s.P, s.admitted);
    CHECK(again.P == s.P);
    CHECK(again.admitted == s.admitted);
  }
}

TEST_CASE("every allocator emits feasible solutions") {
  std::mt19937_64 gen(2026);
  for (int trial = 0; trial < 60; ++trial) {
    const int m_count = 1 + static_cast<int>(gen() % 5);
    const int k_count = 1 + static_cast<int>(gen() % 7);
    const auto pb = random_problem(gen, m_count, k_count);
    ClusterSnapshot snap;
    snap.sap_positions.resize(m_count);
    snap.ut_positions.resize(k_count);
    snap.visible = (pb.ls.L.array() > 0.0).matrix();
    std::vector<int> prev(k_count);
    for (int k = 0; k < k_count; ++k) prev[k] = static_cast<int>(gen() % (m_count + 1)) - 1;
    for (const auto& s : {ga_solve(pb, quick_ga(trial)), best_channel_allocate(pb, snap),
                          max_serv_time_allocate(pb, snap, prev)}) {
      const auto why = check_constraints(pb, s);
      CHECK_MESSAGE(!why.has_value(), why.value_or(""));
    }
  }
}

TEST_CASE("baseline allocations") {
  Eigen::MatrixXd L(3, 3);
  L << 1.0, 0.2, 0.0,
       2.0, 0.1, 0.0,
       0.5, 0.9, 0.0;
  AllocationProblem pb;
  pb.ls = large_scale_from_linear(L, Eigen::MatrixXd::Constant(3, 3, 10.0));
  pb.pa = assign_pilots(3, 3, 1.0);
  pb.noise_var = 0.1;
  pb.r_min = Eigen::VectorXd::Constant(3, 0.1);
  pb.p_max = Eigen::Vector3d(1.0, 4.0, 2.0);
  pb.alpha = 0.5;
  ClusterSnapshot snap;
  snap.sap_positions.resize(3);
  snap.ut_positions.resize(3);
  snap.visible = (L.array() > 0.0).matrix();

  SUBCASE("best channel") {
    const auto s = best_channel_allocate(pb, snap);
    CHECK(s.association == std::vector<int>{1, 2, -1});
    CHECK(s.P(1, 0) == 4.0);
    CHECK(s.P(2, 1) == 2.0);
    CHECK(s.P.col(2).sum() == 0.0);
    for (int k = 0; k < 3; ++k) CHECK((s.P.col(k).array() > 0.0).count() <= 1);
    // Scaling every gain leaves the association alone.
    auto scaled = pb;
    scaled.ls = large_scale_from_linear(7.5 * L, Eigen::MatrixXd::Constant(3, 3, 10.0));
    CHECK(best_channel_allocate(scaled, snap).association == s.association);
  }
  SUBCASE("two UTs on one SAP split its budget") {
    const auto s = single_sap_allocate(pb, {1, 1, -1});
    CHECK(s.P(1, 0) == 2.0);
    CHECK(s.P(1, 1) == 2.0);
  }
  SUBCASE("ties go to the lowest index") {
    Eigen::MatrixXd T = Eigen::MatrixXd::Constant(3, 1, 1.0);
    auto tied = pb;
    tied.ls = large_scale_from_linear(T, Eigen::MatrixXd::Ones(3, 1));
    tied.pa = assign_pilots(1, 1, 1.0);
    tied.r_min = Eigen::VectorXd::Zero(1);
    ClusterSnapshot s1;
    s1.sap_positions.resize(3);
    s1.ut_positions.resize(1);
    s1.visible = BoolMatrix::Constant(3, 1, true);
    CHECK(best_sap(tied, s1, 0) == 0);
  }
  SUBCASE("max service time holds a good link and drops a bad one") {
    const auto held = max_serv_time_allocate(pb, snap, {0, 2, -1});
    CHECK(held.association[0] == 0);
    auto strict = pb;
    strict.r_min = Eigen::VectorXd::Constant(3, 5.0);
    const auto moved = max_serv_time_allocate(strict, snap, {0, 0, -1});
    CHECK(moved.association[0] == 1);
    CHECK(moved.association[1] == 2);
  }
}

TEST_CASE("max service time never switches in a static scene") {
  std::mt19937_64 gen(8);
  const auto pb = random_problem(gen, 4, 6);
  ClusterSnapshot snap;
  snap.sap_positions.resize(4);
  snap.ut_positions.resize(6);
  snap.visible = (pb.ls.L.array() > 0.0).matrix();
  auto s = max_serv_time_allocate(pb, snap, std::vector<int>(6, -1));
  for (int t = 0; t < 20; ++t) {
    const auto next = max_serv_time_allocate(pb, snap, s.association);
    CHECK(next.association == s.association);
    s = next;
  }
}
