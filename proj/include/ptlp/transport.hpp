#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ptlp {

// Dense M x N matrix of nonnegative, finite ground costs. A matrix may
// carry a truncation cap, meaning every entry has been clamped to the cap
// (the 2*lambda rule: pairs costing more than destroy-and-recreate are
// never used).
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static CostMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.front().size();
    CostMatrix out(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != n)
        throw std::invalid_argument("CostMatrix: ragged rows");
      for (std::size_t j = 0; j < n; ++j) out.at(i, j) = rows[i][j];
    }
    out.validate();
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool truncated() const { return cap_.has_value(); }
  double truncation_cap() const { return cap_.value(); }

  // Copy with every entry clamped to `cap`.
  CostMatrix truncated_at(double cap) const {
    if (!std::isfinite(cap) || cap < 0.0)
      throw std::invalid_argument("CostMatrix: truncation cap must be finite and >= 0");
    CostMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      out.data_[i] = std::min(data_[i], cap);
    out.cap_ = cap;
    return out;
  }

  void validate() const {
    for (double c : data_) {
      if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("CostMatrix: entries must be finite and >= 0");
      if (cap_ && c > *cap_)
        throw std::invalid_argument("CostMatrix: entry exceeds truncation cap");
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
  std::optional<double> cap_;
};

// One matched pair of a transport plan. For empirical unit-mass inputs
// every mass is exactly 1.
struct PlanPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 1.0;
};

// A partial transport plan between empirical measures: matched pairs plus
// the destroyed (unmatched source) and created (unmatched target) mass.
struct TransportPlan {
  std::vector<PlanPair> pairs;
  double destroyed_mass = 0.0;
  double created_mass = 0.0;
  double total_cost = 0.0;
};

namespace detail {

// Exact dense linear assignment by shortest augmenting paths with dual
// potentials (Jonker-Volgenant style), O(n^3). `cost` is n x n row-major;
// returns the column assigned to each row. Column index n acts as a
// sentinel for the alternating-path bookkeeping.
inline std::vector<std::size_t> solve_assignment(const std::vector<double>& cost,
                                                 std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> col_row(n + 1, n);  // column -> matched row, n = none
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0), min_reduced(n + 1);
  std::vector<std::size_t> path_prev(n + 1, 0);
  std::vector<char> visited(n + 1, 0);

  for (std::size_t r = 0; r < n; ++r) {
    std::size_t j0 = n;
    col_row[n] = r;
    std::fill(min_reduced.begin(), min_reduced.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[j0] = 1;
      const std::size_t r0 = col_row[j0];
      double delta = kInf;
      std::size_t j1 = n;
      const double* row = cost.data() + r0 * n;
      for (std::size_t j = 0; j < n; ++j) {
        if (visited[j]) continue;
        const double reduced = row[j] - row_pot[r0] - col_pot[j];
        if (reduced < min_reduced[j]) {
          min_reduced[j] = reduced;
          path_prev[j] = j0;
        }
        if (min_reduced[j] < delta) {
          delta = min_reduced[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (visited[j]) {
          row_pot[col_row[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_reduced[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_row[j0] != n);
    while (j0 != n) {
      const std::size_t j1 = path_prev[j0];
      col_row[j0] = col_row[j1];
      j0 = j1;
    }
  }

  std::vector<std::size_t> row_col(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (col_row[j] != n) row_col[col_row[j]] = j;
  return row_col;
}

}  // namespace detail

// Exact balanced optimal transport between empirical unit-mass measures:
// the minimum-cost perfect matching on the cost matrix.
inline TransportPlan solve_ot(const CostMatrix& cost) {
  if (cost.rows() != cost.cols())
    throw std::invalid_argument(
        "solve_ot: cost matrix must be square (M == N); use solve_opt for "
        "unbalanced inputs");
  cost.validate();
  const std::size_t n = cost.rows();
  TransportPlan plan;
  if (n == 0) return plan;

  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = cost.at(i, j);
  const auto row_col = detail::solve_assignment(flat, n);

  plan.pairs.reserve(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    plan.pairs.push_back({i, row_col[i], 1.0});
    total += cost.at(i, row_col[i]);
  }
  plan.total_cost = total;
  return plan;
}

// Exact optimal partial transport between empirical unit-mass measures:
// minimizes sum of matched costs (clamped at 2*lambda) plus lambda per
// unmatched sample. Reduced to a balanced (M+N) x (M+N) assignment where
// each side gains dummy nodes priced at lambda and dummy-dummy moves are
// free. The returned plan never contains a pair costing >= 2*lambda; such
// matches are replaced by destroy-and-create at identical total cost.
inline TransportPlan solve_opt(const CostMatrix& cost, double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw std::invalid_argument("solve_opt: lambda must be finite and > 0");
  cost.validate();
  const std::size_t m = cost.rows(), n = cost.cols();
  const std::size_t s = m + n;
  const double two_lambda = 2.0 * lambda;

  TransportPlan plan;
  if (s == 0) return plan;

  std::vector<double> aug(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      double c;
      if (i < m && j < n)
        c = std::min(cost.at(i, j), two_lambda);
      else if (i < m || j < n)
        c = lambda;  // real <-> dummy
      else
        c = 0.0;  // dummy <-> dummy
      aug[i * s + j] = c;
    }
  }
  const auto row_col = detail::solve_assignment(aug, s);

  double total = 0.0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = row_col[i];
    if (j < n && cost.at(i, j) < two_lambda) {
      plan.pairs.push_back({i, j, 1.0});
      total += cost.at(i, j);
      ++matched;
    }
  }
  total += lambda * static_cast<double>(m + n - 2 * matched);
  plan.total_cost = total;
  plan.destroyed_mass = static_cast<double>(m - matched);
  plan.created_mass = static_cast<double>(n - matched);
  return plan;
}

// Exhaustive minimum over all partial 1-1 matchings of
//   sum of matched raw costs + lambda * (M + N - 2 * matched).
// Test oracle only; capped at 6 x 6.
inline double brute_force_opt(const CostMatrix& cost, double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw std::invalid_argument("brute_force_opt: lambda must be finite and > 0");
  if (cost.rows() > 6 || cost.cols() > 6)
    throw std::invalid_argument("brute_force_opt: instance exceeds the 6 x 6 cap");
  cost.validate();
  const std::size_t m = cost.rows(), n = cost.cols();

  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, std::size_t row, double acc, std::size_t matched) -> void {
    if (row == m) {
      const double value =
          acc + lambda * static_cast<double>(m + n - 2 * matched);
      best = std::min(best, value);
      return;
    }
    self(self, row + 1, acc, matched);  // leave this sample unmatched
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      self(self, row + 1, acc + cost.at(row, j), matched + 1);
      used[j] = 0;
    }
  };
  rec(rec, 0, 0.0, 0);
  return best;
}

}  // namespace ptlp
