#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ptlp/transport.hpp"
#include "test_support.hpp"

using ptlp::CostMatrix;
using ptlp::brute_force_opt;
using ptlp::solve_opt;
using ptlp::solve_ot;

TEST_CASE("cost matrices reject invalid entries") {
  CHECK_THROWS_AS(CostMatrix::from_rows({{-1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(CostMatrix::from_rows({{std::nan("")}}), std::invalid_argument);
  CHECK_THROWS_AS(CostMatrix::from_rows({{1.0, 2.0}, {3.0}}), std::invalid_argument);

  const auto capped = CostMatrix::from_rows({{1.0, 5.0}}).truncated_at(2.0);
  CHECK(capped.truncated());
  CHECK(capped.at(0, 0) == 1.0);
  CHECK(capped.at(0, 1) == 2.0);
}

TEST_CASE("solve_ot finds the minimum-cost perfect matching") {
  CHECK(solve_ot(CostMatrix(2, 2)).total_cost == 0.0);

  const auto diag = solve_ot(CostMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
  CHECK(diag.total_cost == 0.0);
  REQUIRE(diag.pairs.size() == 2);
  CHECK(diag.pairs[0].j == 0);
  CHECK(diag.pairs[1].j == 1);

  // both permutations enumerated: id = 7, swap = 3
  const auto swapped = solve_ot(CostMatrix::from_rows({{3.0, 1.0}, {2.0, 4.0}}));
  CHECK(swapped.total_cost == 3.0);
  CHECK(swapped.pairs[0].j == 1);
  CHECK(swapped.pairs[1].j == 0);
  CHECK(swapped.destroyed_mass == 0.0);
  CHECK(swapped.created_mass == 0.0);

  CHECK_THROWS_WITH(solve_ot(CostMatrix(2, 1)),
                    Catch::Matchers::ContainsSubstring("solve_opt"));
}

TEST_CASE("solve_opt handles the penalty boundary cases") {
  // cost 100 > 2*lambda: destroy and create instead
  const auto skip = solve_opt(CostMatrix::from_rows({{100.0}}), 1.0);
  CHECK(skip.total_cost == 2.0);
  CHECK(skip.pairs.empty());
  CHECK(skip.destroyed_mass == 1.0);
  CHECK(skip.created_mass == 1.0);

  // cost 0.3 < 2*lambda: match
  const auto match = solve_opt(CostMatrix::from_rows({{0.3}}), 1.0);
  CHECK(match.total_cost == 0.3);
  REQUIRE(match.pairs.size() == 1);

  // match (0,0) at 0.1, destroy sample 1 at lambda = 0.5
  const auto c = CostMatrix::from_rows({{0.1}, {0.9}});
  const auto partial = solve_opt(c, 0.5);
  CHECK(partial.total_cost == Catch::Approx(0.6));
  CHECK(partial.total_cost == Catch::Approx(brute_force_opt(c, 0.5)));
  REQUIRE(partial.pairs.size() == 1);
  CHECK(partial.pairs[0].i == 0);
  CHECK(partial.destroyed_mass == 1.0);

  CHECK_THROWS_AS(solve_opt(CostMatrix(1, 1), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_opt(CostMatrix(1, 1), -1.0), std::invalid_argument);
}

TEST_CASE("brute-force oracle on its own examples") {
  CHECK(brute_force_opt(CostMatrix(0, 0), 1.0) == 0.0);
  // min cost 1 exceeds 2*lambda = 0.8, so destroying everything wins at 4*lambda
  CHECK(brute_force_opt(CostMatrix::from_rows({{1.0, 3.0}, {3.0, 1.0}}), 0.4) ==
        Catch::Approx(1.6));
  CHECK_THROWS_AS(brute_force_opt(CostMatrix(7, 2), 1.0), std::invalid_argument);
}

TEST_CASE("solve_opt equals the brute-force oracle on random instances") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = rng() % 6, n = rng() % 6;
    const auto cost = testsupport::random_cost_matrix(rng, m, n);
    const double lambda = testsupport::uniform(rng, 0.1, 5.0);
    const double exact = solve_opt(cost, lambda).total_cost;
    const double oracle = brute_force_opt(cost, lambda);
    REQUIRE(std::fabs(exact - oracle) <= 1e-9);
  }
}

TEST_CASE("plans have 1-1 structure") {
  std::mt19937_64 rng(103);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + rng() % 12, n = 1 + rng() % 12;
    const auto cost = testsupport::random_cost_matrix(rng, m, n);
    const auto plan = solve_opt(cost, testsupport::uniform(rng, 0.1, 5.0));
    const auto violation = testsupport::plan_structure_violation(plan, m, n);
    REQUIRE(violation.empty());
  }
}

TEST_CASE("opt value is non-decreasing in lambda") {
  std::mt19937_64 rng(107);
  for (int t = 0; t < 100; ++t) {
    const auto cost = testsupport::random_cost_matrix(rng, 1 + rng() % 8, 1 + rng() % 8);
    const double l1 = testsupport::uniform(rng, 0.05, 2.0);
    const double l2 = l1 + testsupport::uniform(rng, 0.0, 3.0);
    CHECK(solve_opt(cost, l1).total_cost <= solve_opt(cost, l2).total_cost + 1e-12);
  }
}

TEST_CASE("truncating costs at 2*lambda does not change the optimum") {
  std::mt19937_64 rng(109);
  for (int t = 0; t < 100; ++t) {
    const auto cost = testsupport::random_cost_matrix(rng, 1 + rng() % 8, 1 + rng() % 8);
    const double lambda = testsupport::uniform(rng, 0.1, 4.0);
    const auto truncated = cost.truncated_at(2.0 * lambda);
    CHECK(solve_opt(cost, lambda).total_cost == solve_opt(truncated, lambda).total_cost);
  }
}

TEST_CASE("large lambda forces a full matching equal to solve_ot") {
  std::mt19937_64 rng(113);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 8;
    const auto cost = testsupport::random_cost_matrix(rng, n, n);
    double max_entry = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) max_entry = std::max(max_entry, cost.at(i, j));
    const auto opt = solve_opt(cost, max_entry / 2.0 + 0.01);
    CHECK(opt.pairs.size() == n);
    CHECK(opt.total_cost == solve_ot(cost).total_cost);
  }
}
