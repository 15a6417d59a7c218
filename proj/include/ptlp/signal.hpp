#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ptlp {

// How the spatial weight 1/beta is interpreted: a finite positive value,
// or one of the two limits that dispatch to closed-form distances.
enum class BetaMode { Finite, Zero, Infinity };

// Parameters of the ground cost (1/beta)*|x - y|^p + |f(x) - g(y)|^p and
// the creation/destruction penalty lambda. lambda = 0 is rejected: it
// makes the empty plan optimal everywhere.
struct GroundCostParams {
  double p = 2.0;
  double beta = 1.0;
  double lambda = 1.0;
  BetaMode beta_mode = BetaMode::Finite;

  GroundCostParams() = default;
  GroundCostParams(double p_, double beta_, double lambda_)
      : p(p_), beta(beta_), lambda(lambda_) {
    validate();
  }

  static GroundCostParams beta_zero(double p, double lambda) {
    GroundCostParams out;
    out.p = p;
    out.beta = 0.0;
    out.lambda = lambda;
    out.beta_mode = BetaMode::Zero;
    out.validate();
    return out;
  }

  static GroundCostParams beta_infinity(double p, double lambda) {
    GroundCostParams out;
    out.p = p;
    out.beta = std::numeric_limits<double>::infinity();
    out.lambda = lambda;
    out.beta_mode = BetaMode::Infinity;
    out.validate();
    return out;
  }

  bool finite_beta() const { return beta_mode == BetaMode::Finite; }

  void validate() const {
    if (!std::isfinite(p) || p < 1.0)
      throw std::invalid_argument("GroundCostParams: p must be a finite real >= 1");
    if (beta_mode == BetaMode::Finite && (!std::isfinite(beta) || beta <= 0.0))
      throw std::invalid_argument("GroundCostParams: beta must be finite and > 0");
    if (!std::isfinite(lambda) || lambda <= 0.0)
      throw std::invalid_argument("GroundCostParams: lambda must be > 0");
  }
};

// A discrete multi-channel signal: M sample positions in R^d paired with
// M channel-value vectors in R^k, each sample carrying unit mass.
// Immutable after construction; all operations on it are pure.
class DiscreteSignal {
 public:
  DiscreteSignal(const std::vector<std::vector<double>>& positions,
                 const std::vector<std::vector<double>>& values) {
    if (positions.empty())
      throw std::invalid_argument("DiscreteSignal: at least one sample required");
    if (positions.size() != values.size())
      throw std::invalid_argument("DiscreteSignal: positions and values must have equal length");
    m_ = positions.size();
    d_ = positions.front().size();
    k_ = values.front().size();
    if (d_ == 0) throw std::invalid_argument("DiscreteSignal: positions must have dimension >= 1");
    if (k_ == 0) throw std::invalid_argument("DiscreteSignal: values must have dimension >= 1");
    positions_.reserve(m_ * d_);
    values_.reserve(m_ * k_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (positions[i].size() != d_)
        throw std::invalid_argument("DiscreteSignal: inconsistent position dimension");
      if (values[i].size() != k_)
        throw std::invalid_argument("DiscreteSignal: inconsistent value dimension");
      for (double c : positions[i]) {
        if (!std::isfinite(c)) throw std::invalid_argument("DiscreteSignal: non-finite position coordinate");
        positions_.push_back(c);
      }
      for (double c : values[i]) {
        if (!std::isfinite(c)) throw std::invalid_argument("DiscreteSignal: non-finite value coordinate");
        values_.push_back(c);
      }
    }
  }

  // d = k = 1 convenience constructor.
  static DiscreteSignal univariate(const std::vector<double>& positions,
                                   const std::vector<double>& values) {
    std::vector<std::vector<double>> pos, val;
    pos.reserve(positions.size());
    val.reserve(values.size());
    for (double x : positions) pos.push_back({x});
    for (double v : values) val.push_back({v});
    return DiscreteSignal(pos, val);
  }

  std::size_t size() const { return m_; }
  std::size_t dim_d() const { return d_; }
  std::size_t dim_k() const { return k_; }

  std::span<const double> position(std::size_t i) const {
    return {positions_.data() + i * d_, d_};
  }
  std::span<const double> value(std::size_t i) const {
    return {values_.data() + i * k_, k_};
  }

  std::span<const double> positions_flat() const { return positions_; }
  std::span<const double> values_flat() const { return values_; }

 private:
  std::size_t m_ = 0, d_ = 0, k_ = 0;
  std::vector<double> positions_;  // M x d, row-major
  std::vector<double> values_;     // M x k, row-major
};

namespace detail {

// base^p for base >= 0, with fast paths for the common orders.
inline double pow_p(double base, double p) {
  if (p == 1.0) return base;
  if (p == 2.0) return base * base;
  return std::pow(base, p);
}

// value^(1/p).
inline double root_p(double value, double p) {
  if (p == 1.0) return value;
  if (p == 2.0) return std::sqrt(value);
  return std::pow(value, 1.0 / p);
}

// Euclidean norm of a - b, raised to the p-th power.
inline double block_cost(std::span<const double> a, std::span<const double> b, double p) {
  if (a.size() != b.size())
    throw std::invalid_argument("block_cost: dimension mismatch");
  if (a.size() == 1) return pow_p(std::fabs(a[0] - b[0]), p);
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    ss += d * d;
  }
  if (p == 2.0) return ss;
  return pow_p(std::sqrt(ss), p);
}

}  // namespace detail

// A sample lifted to the graph of its signal: [x * beta^(-1/p) ; f(x)],
// a point in R^(d+k).
using LiftedPoint = std::vector<double>;

// Raises every sample of the signal onto its graph. Undefined at the
// symbolic beta limits.
inline std::vector<LiftedPoint> lift(const DiscreteSignal& s, const GroundCostParams& params) {
  params.validate();
  if (!params.finite_beta())
    throw std::invalid_argument("lift: undefined for symbolic beta limits");
  const double scale = std::pow(params.beta, -1.0 / params.p);
  const std::size_t d = s.dim_d(), k = s.dim_k();
  std::vector<LiftedPoint> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    LiftedPoint& pt = out[i];
    pt.resize(d + k);
    const auto x = s.position(i);
    const auto f = s.value(i);
    for (std::size_t t = 0; t < d; ++t) pt[t] = x[t] * scale;
    for (std::size_t t = 0; t < k; ++t) pt[d + t] = f[t];
  }
  return out;
}

// Ground cost between two (position, value) samples:
//   (1/beta) * |x - y|^p + |f(x) - g(y)|^p
// with Euclidean norms on both blocks. At beta = infinity only the value
// term remains; beta = 0 has no pointwise cost and is rejected here.
inline double ground_cost(std::span<const double> x, std::span<const double> fx,
                          std::span<const double> y, std::span<const double> gy,
                          const GroundCostParams& params) {
  params.validate();
  if (x.size() != y.size() || fx.size() != gy.size())
    throw std::invalid_argument("ground_cost: dimension mismatch");
  if (params.beta_mode == BetaMode::Zero)
    throw std::invalid_argument("ground_cost: undefined at beta = 0; use the limit distance");
  const double value_term = detail::block_cost(fx, gy, params.p);
  if (params.beta_mode == BetaMode::Infinity) return value_term;
  return detail::block_cost(x, y, params.p) / params.beta + value_term;
}

inline double ground_cost(const DiscreteSignal& a, std::size_t i,
                          const DiscreteSignal& b, std::size_t j,
                          const GroundCostParams& params) {
  return ground_cost(a.position(i), a.value(i), b.position(j), b.value(j), params);
}

// Cost between two already-lifted points under the block metric the lift
// realizes: |pos block|_2^p + |value block|_2^p, the first d coordinates
// forming the position block.
inline double lifted_pair_cost(const LiftedPoint& a, const LiftedPoint& b,
                               std::size_t d, double p) {
  if (a.size() != b.size() || d > a.size())
    throw std::invalid_argument("lifted_pair_cost: dimension mismatch");
  const std::span<const double> av(a), bv(b);
  return detail::block_cost(av.subspan(0, d), bv.subspan(0, d), p) +
         detail::block_cost(av.subspan(d), bv.subspan(d), p);
}

// Deterministic total order on signals; used to canonicalize argument
// order so symmetric distances are bit-for-bit symmetric.
inline bool signal_less(const DiscreteSignal& a, const DiscreteSignal& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  if (a.dim_d() != b.dim_d()) return a.dim_d() < b.dim_d();
  if (a.dim_k() != b.dim_k()) return a.dim_k() < b.dim_k();
  const auto ap = a.positions_flat(), bp = b.positions_flat();
  for (std::size_t i = 0; i < ap.size(); ++i)
    if (ap[i] != bp[i]) return ap[i] < bp[i];
  const auto av = a.values_flat(), bv = b.values_flat();
  for (std::size_t i = 0; i < av.size(); ++i)
    if (av[i] != bv[i]) return av[i] < bv[i];
  return false;
}

// Whether two signals are equal as (f, mu) pairs, i.e. their multisets of
// (position, value) atoms coincide exactly.
inline bool same_signal_measure(const DiscreteSignal& a, const DiscreteSignal& b) {
  if (a.size() != b.size() || a.dim_d() != b.dim_d() || a.dim_k() != b.dim_k())
    return false;
  auto atoms = [](const DiscreteSignal& s) {
    std::vector<std::vector<double>> rows(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto& row = rows[i];
      row.reserve(s.dim_d() + s.dim_k());
      for (double c : s.position(i)) row.push_back(c);
      for (double c : s.value(i)) row.push_back(c);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  return atoms(a) == atoms(b);
}

}  // namespace ptlp
