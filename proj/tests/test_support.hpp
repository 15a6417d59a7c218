#pragma once

// Shared generators and independent oracles for the test suites. Oracles
// here must stay independent of the library code paths they check.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ptlp/ptlp.hpp"

namespace testsupport {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline ptlp::DiscreteSignal random_signal(std::mt19937_64& rng, std::size_t m,
                                          std::size_t d, std::size_t k,
                                          double pos_scale = 1.0,
                                          double val_scale = 1.0) {
  std::vector<std::vector<double>> pos(m), val(m);
  for (std::size_t i = 0; i < m; ++i) {
    pos[i].resize(d);
    val[i].resize(k);
    for (auto& c : pos[i]) c = uniform(rng, 0.0, pos_scale);
    for (auto& c : val[i]) c = uniform(rng, -val_scale, val_scale);
  }
  return ptlp::DiscreteSignal(pos, val);
}

// Signal whose positions are drawn from the shared coarse grid
// {0, 0.1, ..., 1.0} (duplicates allowed), so that two draws have common
// atoms; used for the beta -> 0 limit checks.
inline ptlp::DiscreteSignal random_grid_signal(std::mt19937_64& rng, std::size_t m,
                                               std::size_t k) {
  std::vector<std::vector<double>> pos(m), val(m);
  for (std::size_t i = 0; i < m; ++i) {
    pos[i] = {static_cast<double>(rng() % 11) * 0.1};
    val[i].resize(k);
    for (auto& c : val[i]) c = uniform(rng, -1.0, 1.0);
  }
  return ptlp::DiscreteSignal(pos, val);
}

// Verifies the 1-1 structure of an empirical plan: unit masses, no row or
// column used twice, and consistent mass bookkeeping. Returns an empty
// string on success, a description of the violation otherwise.
inline std::string plan_structure_violation(const ptlp::TransportPlan& plan,
                                            std::size_t m, std::size_t n) {
  std::set<std::size_t> rows, cols;
  double mass = 0.0;
  for (const auto& pr : plan.pairs) {
    if (pr.mass != 1.0) return "mass not in {0, 1}";
    if (pr.i >= m || pr.j >= n) return "pair index out of range";
    if (!rows.insert(pr.i).second) return "row used twice";
    if (!cols.insert(pr.j).second) return "column used twice";
    mass += pr.mass;
  }
  if (mass + plan.destroyed_mass != static_cast<double>(m))
    return "matched + destroyed != M";
  if (mass + plan.created_mass != static_cast<double>(n))
    return "matched + created != N";
  return "";
}

// Minimum warping-path cost by explicit path enumeration (forward
// accumulation over steps right/down/diagonal). Oracle for dtw; keep
// lengths <= 5.
inline double dtw_brute(const std::vector<std::vector<double>>& a,
                        const std::vector<std::vector<double>>& b) {
  const std::size_t n = a.size(), m = b.size();
  auto cost = [&](std::size_t i, std::size_t j) {
    double ss = 0.0;
    for (std::size_t c = 0; c < a[i].size(); ++c) {
      const double d = a[i][c] - b[j][c];
      ss += d * d;
    }
    return ss;
  };
  double best = std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, std::size_t i, std::size_t j, double acc) -> void {
    acc += cost(i, j);
    if (i == n - 1 && j == m - 1) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < n) self(self, i + 1, j, acc);
    if (j + 1 < m) self(self, i, j + 1, acc);
    if (i + 1 < n && j + 1 < m) self(self, i + 1, j + 1, acc);
  };
  rec(rec, 0, 0, 0.0);
  return best;
}

inline ptlp::CostMatrix random_cost_matrix(std::mt19937_64& rng, std::size_t m,
                                           std::size_t n, double hi = 10.0) {
  ptlp::CostMatrix cost(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cost.at(i, j) = uniform(rng, 0.0, hi);
  return cost;
}

}  // namespace testsupport
