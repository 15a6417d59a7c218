#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "ptlp/parallel.hpp"
#include "ptlp/rng.hpp"
#include "ptlp/signal.hpp"

namespace ptlp {

// A set of L unit projection directions on the lifted sphere, with an
// optional per-slice penalty lambda(theta) and the seed that produced the
// directions.
struct SliceSet {
  std::vector<std::vector<double>> directions;  // L x dim, unit norm
  std::vector<double> lambdas;                  // empty until populated
  std::uint64_t seed = 0;

  std::size_t count() const { return directions.size(); }
  std::size_t dim() const { return directions.empty() ? 0 : directions.front().size(); }

  void validate(bool require_lambdas) const {
    if (directions.empty())
      throw std::invalid_argument("SliceSet: at least one direction required");
    const std::size_t d = directions.front().size();
    for (const auto& dir : directions) {
      if (dir.size() != d)
        throw std::invalid_argument("SliceSet: inconsistent direction dimension");
      double ss = 0.0;
      for (double c : dir) ss += c * c;
      if (std::fabs(std::sqrt(ss) - 1.0) > 1e-12)
        throw std::invalid_argument("SliceSet: directions must have unit norm");
    }
    if (require_lambdas) {
      if (lambdas.size() != directions.size())
        throw std::invalid_argument("SliceSet: per-slice lambdas not populated");
      for (double l : lambdas)
        if (!std::isfinite(l) || l <= 0.0)
          throw std::invalid_argument("SliceSet: per-slice lambdas must be > 0");
    }
  }
};

// L i.i.d. uniform directions on S^(dim-1): normalized standard Gaussian
// draws, reproducible from the seed. Lambdas are left empty.
inline SliceSet sample_slices(std::size_t count, std::size_t dim, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_slices: count must be >= 1");
  if (dim == 0) throw std::invalid_argument("sample_slices: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  SliceSet out;
  out.seed = seed;
  out.directions.resize(count);
  for (auto& dir : out.directions) {
    dir.resize(dim);
    double norm = 0.0;
    do {
      double ss = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        dir[c] = detail::standard_normal(rng);
        ss += dir[c] * dir[c];
      }
      norm = std::sqrt(ss);
    } while (norm == 0.0);
    for (double& c : dir) c /= norm;
  }
  return out;
}

namespace detail {

inline void require_sorted(const std::vector<double>& v, const char* who) {
  if (!std::is_sorted(v.begin(), v.end()))
    throw std::invalid_argument(std::string(who) + ": input must be sorted ascending");
}

// Closed-form 1D optimal transport on sorted samples of equal size:
// the monotone coupling sum |u_i - v_i|^p.
inline double ot_1d_sorted(const std::vector<double>& u, const std::vector<double>& v,
                           double p) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    total += pow_p(std::fabs(u[i] - v[i]), p);
  return total;
}

// Exact 1D optimal partial transport on sorted samples via the monotone
// dynamic program
//   dp[i][j] = min(dp[i-1][j] + lambda,
//                  dp[i][j-1] + lambda,
//                  dp[i-1][j-1] + min(|u_i - v_j|^p, 2 lambda))
// with dp[i][0] = i*lambda, dp[0][j] = j*lambda. O(MN) time, O(N) space.
inline double opt_1d_sorted(const std::vector<double>& u, const std::vector<double>& v,
                            double p, double lambda) {
  const std::size_t m = u.size(), n = v.size();
  const double two_lambda = 2.0 * lambda;
  std::vector<double> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<double>(j) * lambda;
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<double>(i) * lambda;
    for (std::size_t j = 1; j <= n; ++j) {
      const double match =
          prev[j - 1] + std::min(pow_p(std::fabs(u[i - 1] - v[j - 1]), p), two_lambda);
      cur[j] = std::min(std::min(prev[j] + lambda, cur[j - 1] + lambda), match);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

inline std::vector<double> project(const std::vector<LiftedPoint>& points,
                                   const std::vector<double>& theta) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double dot = 0.0;
    const auto& pt = points[i];
    for (std::size_t c = 0; c < theta.size(); ++c) dot += theta[c] * pt[c];
    out[i] = dot;
  }
  return out;
}

}  // namespace detail

// 1D optimal transport between sorted equal-length samples. Pass
// sort_inputs = true to have the samples sorted internally.
inline double ot_1d(std::vector<double> u, std::vector<double> v, double p,
                    bool sort_inputs = false) {
  if (u.size() != v.size())
    throw std::invalid_argument("ot_1d: inputs must have equal length");
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("ot_1d: p must be a finite real >= 1");
  if (sort_inputs) {
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
  } else {
    detail::require_sorted(u, "ot_1d");
    detail::require_sorted(v, "ot_1d");
  }
  return detail::ot_1d_sorted(u, v, p);
}

// 1D optimal partial transport between sorted samples, exact via the
// monotone dynamic program.
inline double opt_1d(std::vector<double> u, std::vector<double> v, double p,
                     double lambda, bool sort_inputs = false) {
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("opt_1d: p must be a finite real >= 1");
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw std::invalid_argument("opt_1d: lambda must be finite and > 0");
  if (sort_inputs) {
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
  } else {
    detail::require_sorted(u, "opt_1d");
    detail::require_sorted(v, "opt_1d");
  }
  return detail::opt_1d_sorted(u, v, p, lambda);
}

// Sliced transport-Lp: the equal-weight average over slices of the 1D
// transport value between projected lifted signals. The slice loop is the
// parallel region; per-slice values are reduced in slice order so a fixed
// seed gives bit-identical output for any thread count.
inline double stlp(const DiscreteSignal& a, const DiscreteSignal& b,
                   const GroundCostParams& params, const SliceSet& slices,
                   int threads = 1) {
  params.validate();
  if (!params.finite_beta()) throw std::invalid_argument("stlp: beta must be finite");
  if (a.size() != b.size())
    throw std::invalid_argument("stlp: signals must have equal length (M == N)");
  slices.validate(/*require_lambdas=*/false);
  if (slices.dim() != a.dim_d() + a.dim_k())
    throw std::invalid_argument("stlp: slice dimension must equal d + k");

  const auto lifted_a = lift(a, params);
  const auto lifted_b = lift(b, params);
  const std::size_t n_slices = slices.count();
  std::vector<double> values(n_slices);
  parallel_for(n_slices, threads, [&](std::size_t l) {
    auto u = detail::project(lifted_a, slices.directions[l]);
    auto v = detail::project(lifted_b, slices.directions[l]);
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    values[l] = detail::ot_1d_sorted(u, v, params.p);
  });
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(n_slices);
}

// Sliced partial-transport Lp: as stlp but with the 1D partial solver and
// a per-slice penalty lambda(theta).
inline double sptlp(const DiscreteSignal& a, const DiscreteSignal& b,
                    const GroundCostParams& params, const SliceSet& slices,
                    int threads = 1) {
  params.validate();
  if (!params.finite_beta()) throw std::invalid_argument("sptlp: beta must be finite");
  slices.validate(/*require_lambdas=*/true);
  if (slices.dim() != a.dim_d() + a.dim_k())
    throw std::invalid_argument("sptlp: slice dimension must equal d + k");

  const auto lifted_a = lift(a, params);
  const auto lifted_b = lift(b, params);
  const std::size_t n_slices = slices.count();
  std::vector<double> values(n_slices);
  parallel_for(n_slices, threads, [&](std::size_t l) {
    auto u = detail::project(lifted_a, slices.directions[l]);
    auto v = detail::project(lifted_b, slices.directions[l]);
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    values[l] = detail::opt_1d_sorted(u, v, params.p, slices.lambdas[l]);
  });
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(n_slices);
}

// Fills per-slice penalties from a reference direction: lambda(theta) =
// <theta, theta0> * lambda0, floored at 1e-6 * lambda0 so every slice
// keeps a positive penalty.
inline SliceSet slice_lambda_schedule(const std::vector<double>& theta0, double lambda0,
                                      SliceSet slices) {
  if (!std::isfinite(lambda0) || lambda0 <= 0.0)
    throw std::invalid_argument("slice_lambda_schedule: lambda0 must be > 0");
  slices.validate(/*require_lambdas=*/false);
  if (theta0.size() != slices.dim())
    throw std::invalid_argument("slice_lambda_schedule: theta0 dimension mismatch");
  double ss = 0.0;
  for (double c : theta0) ss += c * c;
  if (std::fabs(std::sqrt(ss) - 1.0) > 1e-9)
    throw std::invalid_argument("slice_lambda_schedule: theta0 must have unit norm");

  const double floor = 1e-6 * lambda0;
  slices.lambdas.resize(slices.count());
  for (std::size_t l = 0; l < slices.count(); ++l) {
    double dot = 0.0;
    for (std::size_t c = 0; c < theta0.size(); ++c)
      dot += slices.directions[l][c] * theta0[c];
    slices.lambdas[l] = std::max(dot * lambda0, floor);
  }
  return slices;
}

}  // namespace ptlp
