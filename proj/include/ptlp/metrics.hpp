#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ptlp/signal.hpp"
#include "ptlp/transport.hpp"

namespace ptlp {

// Outcome of a transport-Lp evaluation. `value` is the p-th-power
// objective; `root_value` = value^(1/p) is the actual distance.
struct MetricResult {
  double value = 0.0;
  double root_value = 0.0;
  TransportPlan plan;
  GroundCostParams params;
};

// Pairwise ground costs between all samples of two signals.
inline CostMatrix lifted_cost_matrix(const DiscreteSignal& a, const DiscreteSignal& b,
                                     const GroundCostParams& params) {
  if (a.dim_d() != b.dim_d() || a.dim_k() != b.dim_k())
    throw std::invalid_argument("lifted_cost_matrix: signals have mismatched dimensions");
  CostMatrix cost(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      cost.at(i, j) = ground_cost(a, i, b, j, params);
  return cost;
}

namespace detail {

inline void transpose_plan(TransportPlan& plan) {
  for (auto& pr : plan.pairs) std::swap(pr.i, pr.j);
  std::swap(plan.destroyed_mass, plan.created_mass);
  std::sort(plan.pairs.begin(), plan.pairs.end(),
            [](const PlanPair& x, const PlanPair& y) { return x.i < y.i; });
}

inline MetricResult make_metric_result(TransportPlan plan, const GroundCostParams& params) {
  MetricResult out;
  out.value = plan.total_cost;
  out.root_value = root_p(plan.total_cost, params.p);
  out.plan = std::move(plan);
  out.params = params;
  return out;
}

// Minimum-cost matching of min(na, nb) pairs on a small capped cost
// matrix; the surplus side is absorbed by zero-cost padding.
inline double forced_partial_match_cost(const std::vector<std::vector<double>>& capped,
                                        std::size_t na, std::size_t nb) {
  if (na == 0 || nb == 0) return 0.0;
  if (na == 1 && nb == 1) return capped[0][0];
  const std::size_t s = std::max(na, nb);
  std::vector<double> flat(s * s, 0.0);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) flat[i * s + j] = capped[i][j];
  const auto row_col = solve_assignment(flat, s);
  double total = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    if (row_col[i] < nb) total += capped[i][row_col[i]];
  return total;
}

}  // namespace detail

// Transport-Lp distance between equal-length signals: balanced optimal
// transport on the lifted ground costs.
inline MetricResult tlp(const DiscreteSignal& a, const DiscreteSignal& b,
                        const GroundCostParams& params) {
  params.validate();
  if (!params.finite_beta())
    throw std::invalid_argument("tlp: beta must be finite");
  if (a.size() != b.size())
    throw std::invalid_argument("tlp: signals must have equal length (M == N)");
  if (signal_less(b, a)) {
    MetricResult r = tlp(b, a, params);
    detail::transpose_plan(r.plan);
    return r;
  }
  return detail::make_metric_result(solve_ot(lifted_cost_matrix(a, b, params)), params);
}

// Partial-transport Lp distance: optimal partial transport on the lifted
// ground costs with creation/destruction penalty lambda.
inline MetricResult ptlp(const DiscreteSignal& a, const DiscreteSignal& b,
                         const GroundCostParams& params) {
  params.validate();
  if (!params.finite_beta())
    throw std::invalid_argument(
        "ptlp: beta must be finite; use ptlp_beta_zero / ptlp_beta_infinity for the limits");
  if (signal_less(b, a)) {
    MetricResult r = ptlp(b, a, params);
    detail::transpose_plan(r.plan);
    return r;
  }
  return detail::make_metric_result(
      solve_opt(lifted_cost_matrix(a, b, params), params.lambda), params);
}

// beta -> 0 limit of the partial-transport Lp objective. Only samples at
// identical positions can pair; each common atom contributes its value
// cost clamped at 2*lambda, every unmatched unit of mass contributes
// lambda. Atom multiplicity is respected; within a repeated position the
// pairing of values is chosen optimally. `position_tolerance` > 0 merges
// positions within that Euclidean distance into one atom.
inline double ptlp_beta_zero(const DiscreteSignal& a, const DiscreteSignal& b,
                             const GroundCostParams& params,
                             double position_tolerance = 0.0) {
  params.validate();
  if (a.dim_d() != b.dim_d() || a.dim_k() != b.dim_k())
    throw std::invalid_argument("ptlp_beta_zero: signals have mismatched dimensions");
  if (position_tolerance < 0.0)
    throw std::invalid_argument("ptlp_beta_zero: tolerance must be >= 0");
  if (signal_less(b, a)) return ptlp_beta_zero(b, a, params, position_tolerance);

  const std::size_t m = a.size(), n = b.size();
  const double two_lambda = 2.0 * params.lambda;

  // Group atom indices by position: exact bit equality by default, or
  // connected components of the within-tolerance relation.
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  if (position_tolerance == 0.0) {
    std::map<std::vector<double>, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_pos;
    for (std::size_t i = 0; i < m; ++i) {
      const auto x = a.position(i);
      by_pos[std::vector<double>(x.begin(), x.end())].first.push_back(i);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto y = b.position(j);
      by_pos[std::vector<double>(y.begin(), y.end())].second.push_back(j);
    }
    groups.reserve(by_pos.size());
    for (auto& [pos, members] : by_pos) groups.push_back(std::move(members));
  } else {
    const std::size_t total = m + n;
    std::vector<std::size_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto pos_of = [&](std::size_t t) {
      return t < m ? a.position(t) : b.position(t - m);
    };
    auto close = [&](std::span<const double> x, std::span<const double> y) {
      double ss = 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) {
        const double d = x[c] - y[c];
        ss += d * d;
      }
      return std::sqrt(ss) <= position_tolerance;
    };
    for (std::size_t s = 0; s < total; ++s)
      for (std::size_t t = s + 1; t < total; ++t)
        if (close(pos_of(s), pos_of(t))) parent[find(s)] = find(t);
    std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_root;
    for (std::size_t t = 0; t < total; ++t) {
      auto& members = by_root[find(t)];
      if (t < m)
        members.first.push_back(t);
      else
        members.second.push_back(t - m);
    }
    groups.reserve(by_root.size());
    for (auto& [root, members] : by_root) groups.push_back(std::move(members));
  }

  double matched_total = 0.0;
  std::size_t matched_count = 0;
  for (const auto& [ai, bj] : groups) {
    const std::size_t na = ai.size(), nb = bj.size();
    if (na == 0 || nb == 0) continue;
    std::vector<std::vector<double>> capped(na, std::vector<double>(nb));
    for (std::size_t r = 0; r < na; ++r)
      for (std::size_t c = 0; c < nb; ++c)
        capped[r][c] = std::min(
            detail::block_cost(a.value(ai[r]), b.value(bj[c]), params.p), two_lambda);
    matched_total += detail::forced_partial_match_cost(capped, na, nb);
    matched_count += std::min(na, nb);
  }
  const double tv = static_cast<double>(m + n - 2 * matched_count);
  return matched_total + params.lambda * tv;
}

// beta -> infinity limit of the partial-transport Lp objective: optimal
// partial transport between the pushed-forward value distributions, i.e.
// positions are ignored entirely.
inline double ptlp_beta_infinity(const DiscreteSignal& a, const DiscreteSignal& b,
                                 const GroundCostParams& params) {
  params.validate();
  if (a.dim_k() != b.dim_k())
    throw std::invalid_argument("ptlp_beta_infinity: signals have mismatched channel count");
  if (signal_less(b, a)) return ptlp_beta_infinity(b, a, params);
  CostMatrix cost(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      cost.at(i, j) = detail::block_cost(a.value(i), b.value(j), params.p);
  return solve_opt(cost, params.lambda).total_cost;
}

}  // namespace ptlp
