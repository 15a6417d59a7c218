#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "ptlp/metrics.hpp"
#include "ptlp/sliced.hpp"
#include "test_support.hpp"

using ptlp::DiscreteSignal;
using ptlp::GroundCostParams;
using ptlp::SliceSet;

TEST_CASE("sample_slices draws reproducible unit directions") {
  CHECK_THROWS_AS(ptlp::sample_slices(0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(ptlp::sample_slices(4, 0, 1), std::invalid_argument);

  const auto one_dim = ptlp::sample_slices(32, 1, 5);
  for (const auto& dir : one_dim.directions)
    CHECK((dir[0] == 1.0 || dir[0] == -1.0));

  const auto s1 = ptlp::sample_slices(16, 4, 99);
  const auto s2 = ptlp::sample_slices(16, 4, 99);
  CHECK(s1.directions == s2.directions);
  CHECK_NOTHROW(s1.validate(false));

  // Monte-Carlo uniformity: the empirical mean direction is near zero
  const auto big = ptlp::sample_slices(10000, 3, 7);
  double mean[3] = {0, 0, 0};
  for (const auto& dir : big.directions)
    for (int c = 0; c < 3; ++c) mean[c] += dir[c];
  double norm = 0.0;
  for (double c : mean) norm += (c / 10000.0) * (c / 10000.0);
  CHECK(std::sqrt(norm) < 0.05);
}

TEST_CASE("ot_1d is the monotone coupling") {
  CHECK(ptlp::ot_1d({1.0, 2.0}, {1.0, 2.0}, 2.0) == 0.0);
  CHECK(ptlp::ot_1d({0.0, 1.0}, {1.0, 2.0}, 1.0) == Catch::Approx(2.0));
  CHECK(ptlp::ot_1d({0.0, 3.0}, {1.0, 1.0}, 2.0) == Catch::Approx(5.0));
  CHECK_THROWS_AS(ptlp::ot_1d({0.0}, {0.0, 1.0}, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ptlp::ot_1d({1.0, 0.0}, {0.0, 1.0}, 2.0), std::invalid_argument);
  CHECK(ptlp::ot_1d({1.0, 0.0}, {0.0, 1.0}, 2.0, /*sort_inputs=*/true) == 0.0);

  std::mt19937_64 rng(301);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<double> u(n), v(n);
    for (auto& x : u) x = testsupport::uniform(rng, -2.0, 2.0);
    for (auto& x : v) x = testsupport::uniform(rng, -2.0, 2.0);
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    const double p = (t % 2 == 0) ? 1.0 : 2.0;
    ptlp::CostMatrix cost(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cost.at(i, j) = ptlp::detail::pow_p(std::fabs(u[i] - v[j]), p);
    CHECK(std::fabs(ptlp::ot_1d(u, v, p) - ptlp::solve_ot(cost).total_cost) <= 1e-9);
  }
}

TEST_CASE("opt_1d solves 1D partial transport exactly") {
  CHECK(ptlp::opt_1d({0.5, 1.0}, {0.5, 1.0}, 2.0, 1.0) == 0.0);
  CHECK(ptlp::opt_1d({0.0}, {10.0}, 1.0, 1.0) == Catch::Approx(2.0));
  CHECK(ptlp::opt_1d({0.0, 1.0}, {0.1}, 1.0, 0.5) == Catch::Approx(0.6));
  CHECK_THROWS_AS(ptlp::opt_1d({0.0}, {1.0}, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ptlp::opt_1d({1.0, 0.0}, {0.0}, 2.0, 1.0), std::invalid_argument);

  std::mt19937_64 rng(307);
  // against the exhaustive oracle
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = rng() % 6, n = rng() % 6;
    std::vector<double> u(m), v(n);
    for (auto& x : u) x = testsupport::uniform(rng, -1.0, 1.0);
    for (auto& x : v) x = testsupport::uniform(rng, -1.0, 1.0);
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    const double p = (t % 2 == 0) ? 1.0 : 2.0;
    const double lambda = testsupport::uniform(rng, 0.05, 1.5);
    ptlp::CostMatrix cost(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cost.at(i, j) = ptlp::detail::pow_p(std::fabs(u[i] - v[j]), p);
    if (m == 0 && n == 0) continue;
    REQUIRE(std::fabs(ptlp::opt_1d(u, v, p, lambda) -
                      ptlp::brute_force_opt(cost, lambda)) <= 1e-9);
  }
  // against the general assignment solver at larger sizes
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = 1 + rng() % 120, n = 1 + rng() % 120;
    std::vector<double> u(m), v(n);
    for (auto& x : u) x = testsupport::uniform(rng, 0.0, 1.0);
    for (auto& x : v) x = testsupport::uniform(rng, 0.0, 1.0);
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    const double p = (t % 2 == 0) ? 1.0 : 2.0;
    const double lambda = testsupport::uniform(rng, 0.02, 0.6);
    ptlp::CostMatrix cost(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cost.at(i, j) = ptlp::detail::pow_p(std::fabs(u[i] - v[j]), p);
    REQUIRE(std::fabs(ptlp::opt_1d(u, v, p, lambda) -
                      ptlp::solve_opt(cost, lambda).total_cost) <= 1e-9);
  }
}

TEST_CASE("stlp averages 1D transport over slices") {
  std::mt19937_64 rng(311);
  const auto a = testsupport::random_signal(rng, 6, 1, 1);
  const auto b = testsupport::random_signal(rng, 6, 1, 1);
  const GroundCostParams params(2.0, 2.0, 1.0);
  const auto slices = ptlp::sample_slices(20, 2, 17);

  CHECK(ptlp::stlp(a, a, params, slices) == 0.0);
  CHECK(ptlp::stlp(a, b, params, slices) == ptlp::stlp(b, a, params, slices));

  // a single slice reduces to the 1D closed form on the projections
  SliceSet one;
  one.directions = {{0.6, 0.8}};
  const auto lift_a = ptlp::lift(a, params), lift_b = ptlp::lift(b, params);
  auto project = [&](const std::vector<ptlp::LiftedPoint>& pts) {
    std::vector<double> out;
    for (const auto& pt : pts) out.push_back(0.6 * pt[0] + 0.8 * pt[1]);
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(ptlp::stlp(a, b, params, one) ==
        ptlp::ot_1d(project(lift_a), project(lift_b), params.p));

  const auto longer = testsupport::random_signal(rng, 7, 1, 1);
  CHECK_THROWS_AS(ptlp::stlp(a, longer, params, slices), std::invalid_argument);
}

TEST_CASE("sptlp averages 1D partial transport with per-slice penalties") {
  std::mt19937_64 rng(313);
  const auto a = testsupport::random_signal(rng, 5, 1, 1);
  const auto b = testsupport::random_signal(rng, 8, 1, 1);
  const GroundCostParams params(2.0, 1.0, 0.4);

  auto slices = ptlp::sample_slices(16, 2, 23);
  CHECK_THROWS_AS(ptlp::sptlp(a, b, params, slices), std::invalid_argument);
  slices.lambdas.assign(slices.count(), params.lambda);

  CHECK(ptlp::sptlp(a, a, params, slices) == 0.0);
  CHECK(ptlp::sptlp(a, b, params, slices) == ptlp::sptlp(b, a, params, slices));
  // per-slice value is at most lambda * (M + N)
  CHECK(ptlp::sptlp(a, b, params, slices) <=
        params.lambda * static_cast<double>(a.size() + b.size()));

  // a degenerate set repeating one direction equals that single projection
  SliceSet repeated;
  repeated.directions = {{1.0, 0.0}, {1.0, 0.0}};
  repeated.lambdas = {0.4, 0.4};
  const auto lift_a = ptlp::lift(a, params), lift_b = ptlp::lift(b, params);
  auto project = [&](const std::vector<ptlp::LiftedPoint>& pts) {
    std::vector<double> out;
    for (const auto& pt : pts) out.push_back(pt[0]);
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(ptlp::sptlp(a, b, params, repeated) ==
        ptlp::opt_1d(project(lift_a), project(lift_b), params.p, 0.4));
}

TEST_CASE("sliced values are bit-identical across runs and thread counts") {
  std::mt19937_64 rng(317);
  const auto a = testsupport::random_signal(rng, 30, 1, 2);
  const auto b = testsupport::random_signal(rng, 24, 1, 2);
  const GroundCostParams params(2.0, 1.0, 0.5);
  auto slices = ptlp::sample_slices(64, 3, 41);
  slices.lambdas.assign(slices.count(), params.lambda);

  const double v1 = ptlp::sptlp(a, b, params, slices, 1);
  const double v2 = ptlp::sptlp(a, b, params, slices, 1);
  const double v4 = ptlp::sptlp(a, b, params, slices, 2);
  CHECK(v1 == v2);
  CHECK(v1 == v4);

  const auto c = testsupport::random_signal(rng, a.size(), 1, 2);
  CHECK(ptlp::stlp(a, c, params, slices, 1) == ptlp::stlp(a, c, params, slices, 2));
}

TEST_CASE("slice estimates are consistent as L grows") {
  std::mt19937_64 rng(331);
  const auto a = testsupport::random_signal(rng, 12, 1, 1);
  const auto b = testsupport::random_signal(rng, 15, 1, 1);
  const GroundCostParams params(2.0, 1.0, 0.6);

  auto estimate = [&](std::size_t L, std::uint64_t seed, double& se) {
    auto slices = ptlp::sample_slices(L, 2, seed);
    const auto lift_a = ptlp::lift(a, params), lift_b = ptlp::lift(b, params);
    std::vector<double> vals(L);
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<double> u, v;
      for (const auto& pt : lift_a)
        u.push_back(slices.directions[l][0] * pt[0] + slices.directions[l][1] * pt[1]);
      for (const auto& pt : lift_b)
        v.push_back(slices.directions[l][0] * pt[0] + slices.directions[l][1] * pt[1]);
      vals[l] = ptlp::opt_1d(u, v, params.p, params.lambda, /*sort_inputs=*/true);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(L);
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(L - 1);
    se = std::sqrt(var / static_cast<double>(L));
    return mean;
  };

  double se1 = 0.0, se2 = 0.0;
  const double m1 = estimate(500, 1001, se1);
  const double m2 = estimate(1000, 2002, se2);
  CHECK(std::fabs(m1 - m2) < 3.0 * std::sqrt(se1 * se1 + se2 * se2));
}

TEST_CASE("the slice penalty schedule follows the reference direction") {
  SliceSet slices;
  slices.directions = {{1.0, 0.0}, {0.0, 1.0}, {0.5, std::sqrt(3.0) / 2.0}};
  const std::vector<double> theta0 = {1.0, 0.0};

  const auto scheduled = ptlp::slice_lambda_schedule(theta0, 2.0, slices);
  REQUIRE(scheduled.lambdas.size() == 3);
  CHECK(scheduled.lambdas[0] == 2.0);               // aligned: lambda0
  CHECK(scheduled.lambdas[1] == 2e-6);              // orthogonal: the floor
  CHECK(scheduled.lambdas[2] == Catch::Approx(1.0));  // 60 degrees: cos * lambda0

  CHECK_THROWS_AS(ptlp::slice_lambda_schedule(theta0, 0.0, slices), std::invalid_argument);
  CHECK_THROWS_AS(ptlp::slice_lambda_schedule({0.5, 0.0}, 1.0, slices), std::invalid_argument);
}
