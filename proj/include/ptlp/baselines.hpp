#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptlp/signal.hpp"

namespace ptlp {

// Plain Lp distance between signals on the same grid:
// (sum_i |f_i - g_i|^p)^(1/p). Requires equal sample counts.
inline double lp_distance(const DiscreteSignal& a, const DiscreteSignal& b, double p) {
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("lp_distance: p must be a finite real >= 1");
  if (a.size() != b.size())
    throw std::invalid_argument("lp_distance: signals must have equal length (fixed grid)");
  if (a.dim_k() != b.dim_k())
    throw std::invalid_argument("lp_distance: signals have mismatched channel count");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    total += detail::block_cost(a.value(i), b.value(i), p);
  return detail::root_p(total, p);
}

// Default local cost for dynamic time warping.
struct SquaredEuclideanCost {
  double operator()(std::span<const double> a, std::span<const double> b) const {
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      ss += d * d;
    }
    return ss;
  }
};

// Dynamic time warping between value sequences: the minimum cost over all
// boundary-anchored, monotone, continuous warping paths, by the standard
// dynamic program over steps {(1,0), (0,1), (1,1)}. Full DP, no band.
template <class Cost = SquaredEuclideanCost>
inline double dtw(const std::vector<std::vector<double>>& a,
                  const std::vector<std::vector<double>>& b, Cost local_cost = {}) {
  if (a.empty() || b.empty()) throw std::invalid_argument("dtw: empty input sequence");
  const std::size_t k = a.front().size();
  for (const auto& row : a)
    if (row.size() != k) throw std::invalid_argument("dtw: inconsistent channel count");
  for (const auto& row : b)
    if (row.size() != k) throw std::invalid_argument("dtw: inconsistent channel count");

  const std::size_t n = a.size(), m = b.size();
  auto cost = [&](std::size_t i, std::size_t j) {
    return local_cost(std::span<const double>(a[i]), std::span<const double>(b[j]));
  };

  std::vector<double> prev(m), cur(m);
  prev[0] = cost(0, 0);
  for (std::size_t j = 1; j < m; ++j) prev[j] = prev[j - 1] + cost(0, j);
  for (std::size_t i = 1; i < n; ++i) {
    cur[0] = prev[0] + cost(i, 0);
    for (std::size_t j = 1; j < m; ++j) {
      const double best = std::min(std::min(prev[j], cur[j - 1]), prev[j - 1]);
      cur[j] = cost(i, j) + best;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

template <class Cost = SquaredEuclideanCost>
inline double dtw(const DiscreteSignal& a, const DiscreteSignal& b, Cost local_cost = {}) {
  if (a.dim_k() != b.dim_k())
    throw std::invalid_argument("dtw: signals have mismatched channel count");
  auto values_of = [](const DiscreteSignal& s) {
    std::vector<std::vector<double>> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto v = s.value(i);
      out[i].assign(v.begin(), v.end());
    }
    return out;
  };
  return dtw(values_of(a), values_of(b), local_cost);
}

}  // namespace ptlp
