#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptlp/baselines.hpp"
#include "ptlp/dataset.hpp"
#include "ptlp/metrics.hpp"
#include "ptlp/parallel.hpp"
#include "ptlp/sliced.hpp"

namespace ptlp {

// Distance methods exposed by the experiment harness.
enum class Method {
  Lp,
  Dtw,
  Ot,
  Tlp,
  Stlp,
  Ptlp,
  Sptlp,
  PtlpBeta0,
  PtlpBetaInf,
};

inline std::string method_name(Method m) {
  switch (m) {
    case Method::Lp: return "lp";
    case Method::Dtw: return "dtw";
    case Method::Ot: return "ot";
    case Method::Tlp: return "tlp";
    case Method::Stlp: return "stlp";
    case Method::Ptlp: return "ptlp";
    case Method::Sptlp: return "sptlp";
    case Method::PtlpBeta0: return "ptlp_beta0";
    case Method::PtlpBetaInf: return "ptlp_betainf";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  if (name == "lp") return Method::Lp;
  if (name == "dtw") return Method::Dtw;
  if (name == "ot") return Method::Ot;
  if (name == "tlp") return Method::Tlp;
  if (name == "stlp") return Method::Stlp;
  if (name == "ptlp") return Method::Ptlp;
  if (name == "sptlp") return Method::Sptlp;
  if (name == "ptlp_beta0") return Method::PtlpBeta0;
  if (name == "ptlp_betainf") return Method::PtlpBetaInf;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

inline bool method_uses_beta(Method m) {
  return m == Method::Tlp || m == Method::Stlp || m == Method::Ptlp || m == Method::Sptlp;
}

inline bool method_uses_lambda(Method m) {
  return m == Method::Ptlp || m == Method::Sptlp || m == Method::PtlpBeta0 ||
         m == Method::PtlpBetaInf;
}

// Raised when a pair of signals violates a method's precondition (for
// example, lp on ragged lengths). The CLI maps this to exit code 2.
struct MethodPreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Symmetric pairwise-distance table plus the metadata needed to reproduce
// it: method, parameters, slice configuration, and a dataset digest.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // n x n, symmetric, zero diagonal
  std::string method;
  GroundCostParams params;
  std::optional<SliceSet> slices;
  std::string dataset_hash;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

namespace detail {

inline std::uint64_t fnv1a64(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64_add(std::uint64_t h, std::uint64_t v) {
  return fnv1a64(h, &v, sizeof(v));
}

}  // namespace detail

// FNV-1a digest over the dataset's samples and labels, as a hex string.
inline std::string dataset_hash(const LabeledDataset& ds) {
  std::uint64_t h = 1469598103934665603ull;
  h = detail::fnv1a64_add(h, ds.size());
  for (const auto& s : ds.signals) {
    h = detail::fnv1a64_add(h, s.size());
    h = detail::fnv1a64_add(h, s.dim_d());
    h = detail::fnv1a64_add(h, s.dim_k());
    for (double c : s.positions_flat()) h = detail::fnv1a64_add(h, std::bit_cast<std::uint64_t>(c));
    for (double c : s.values_flat()) h = detail::fnv1a64_add(h, std::bit_cast<std::uint64_t>(c));
  }
  for (int label : ds.labels)
    h = detail::fnv1a64_add(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(label)));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Distance between two signals under the chosen method. Transport-family
// methods report the p-th root of the optimal objective so the result is
// a metric; dtw reports the raw warping cost. Symbolic beta on the ptlp
// method dispatches to the matching limit distance.
inline double signal_distance(const DiscreteSignal& a, const DiscreteSignal& b, Method m,
                              const GroundCostParams& params,
                              const SliceSet* slices = nullptr) {
  switch (m) {
    case Method::Lp:
      if (a.size() != b.size())
        throw MethodPreconditionError("lp requires equal signal lengths");
      return lp_distance(a, b, params.p);
    case Method::Dtw:
      return dtw(a, b);
    case Method::Ot: {
      if (a.size() != b.size())
        throw MethodPreconditionError("ot requires equal signal lengths");
      if (a.dim_k() != b.dim_k())
        throw MethodPreconditionError("ot requires equal channel counts");
      CostMatrix cost(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
          cost.at(i, j) = detail::block_cost(a.value(i), b.value(j), params.p);
      return detail::root_p(solve_ot(cost).total_cost, params.p);
    }
    case Method::Tlp:
      if (!params.finite_beta())
        throw MethodPreconditionError("tlp requires finite beta");
      if (a.size() != b.size())
        throw MethodPreconditionError("tlp requires equal signal lengths");
      return tlp(a, b, params).root_value;
    case Method::Stlp:
      if (!params.finite_beta())
        throw MethodPreconditionError("stlp requires finite beta");
      if (a.size() != b.size())
        throw MethodPreconditionError("stlp requires equal signal lengths");
      if (slices == nullptr)
        throw MethodPreconditionError("stlp requires a slice set");
      return detail::root_p(stlp(a, b, params, *slices), params.p);
    case Method::Ptlp:
      switch (params.beta_mode) {
        case BetaMode::Zero:
          return detail::root_p(ptlp_beta_zero(a, b, params), params.p);
        case BetaMode::Infinity:
          return detail::root_p(ptlp_beta_infinity(a, b, params), params.p);
        case BetaMode::Finite:
          return ptlp(a, b, params).root_value;
      }
      return 0.0;
    case Method::Sptlp:
      if (!params.finite_beta())
        throw MethodPreconditionError("sptlp requires finite beta");
      if (slices == nullptr)
        throw MethodPreconditionError("sptlp requires a slice set");
      if (slices->lambdas.empty())
        throw MethodPreconditionError("sptlp requires per-slice lambdas");
      return detail::root_p(sptlp(a, b, params, *slices), params.p);
    case Method::PtlpBeta0:
      return detail::root_p(ptlp_beta_zero(a, b, params), params.p);
    case Method::PtlpBetaInf:
      return detail::root_p(ptlp_beta_infinity(a, b, params), params.p);
  }
  throw std::invalid_argument("signal_distance: unknown method");
}

// Full symmetric pairwise matrix over a dataset. Entries for i < j are
// computed (in parallel) and mirrored; the diagonal is exactly zero. A
// method precondition failure is reported with the offending pair.
inline DistanceMatrix pairwise_matrix(const LabeledDataset& ds, Method m,
                                      const GroundCostParams& params,
                                      const SliceSet* slices = nullptr, int threads = 0) {
  params.validate();
  const std::size_t n = ds.size();
  DistanceMatrix out;
  out.n = n;
  out.values.assign(n * n, 0.0);
  out.method = method_name(m);
  out.params = params;
  if (slices != nullptr) out.slices = *slices;
  out.dataset_hash = dataset_hash(ds);

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  jobs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) jobs.emplace_back(i, j);

  parallel_for(jobs.size(), threads, [&](std::size_t t) {
    const auto [i, j] = jobs[t];
    double d;
    try {
      d = signal_distance(ds.signals[i], ds.signals[j], m, params, slices);
    } catch (const MethodPreconditionError& e) {
      throw MethodPreconditionError("pair (" + std::to_string(i) + ", " +
                                    std::to_string(j) + "): " + e.what());
    }
    out.values[i * n + j] = d;
    out.values[j * n + i] = d;
  });
  return out;
}

// Distances from every signal of `test` to every signal of `train`
// (rows indexed by test items).
inline std::vector<std::vector<double>> cross_distance_matrix(
    const LabeledDataset& test, const LabeledDataset& train, Method m,
    const GroundCostParams& params, const SliceSet* slices = nullptr, int threads = 0) {
  params.validate();
  const std::size_t rows = test.size(), cols = train.size();
  std::vector<std::vector<double>> out(rows, std::vector<double>(cols, 0.0));
  parallel_for(rows * cols, threads, [&](std::size_t t) {
    const std::size_t i = t / cols, j = t % cols;
    try {
      out[i][j] = signal_distance(test.signals[i], train.signals[j], m, params, slices);
    } catch (const MethodPreconditionError& e) {
      throw MethodPreconditionError("test/train pair (" + std::to_string(i) + ", " +
                                    std::to_string(j) + "): " + e.what());
    }
  });
  return out;
}

// 1-nearest-neighbor prediction: each test item takes the label of its
// minimum-distance training item, ties resolved by the lowest train index.
inline std::vector<int> knn_1(const std::vector<std::vector<double>>& test_to_train,
                              const std::vector<int>& train_labels) {
  if (train_labels.empty()) throw std::invalid_argument("knn_1: empty training set");
  std::vector<int> out;
  out.reserve(test_to_train.size());
  for (const auto& row : test_to_train) {
    if (row.size() != train_labels.size())
      throw std::invalid_argument("knn_1: row length does not match training set");
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
      if (row[j] < row[best]) best = j;
    out.push_back(train_labels[best]);
  }
  return out;
}

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw std::invalid_argument("accuracy: size mismatch or empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

// Leave-one-out 1NN accuracy on a precomputed symmetric distance matrix.
inline double leave_one_out_accuracy(const DistanceMatrix& dist,
                                     const std::vector<int>& labels) {
  if (labels.size() != dist.n || dist.n < 2)
    throw std::invalid_argument("leave_one_out_accuracy: bad inputs");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < dist.n; ++i) {
    std::size_t best = dist.n;
    for (std::size_t j = 0; j < dist.n; ++j) {
      if (j == i) continue;
      if (best == dist.n || dist.at(i, j) < dist.at(i, best)) best = j;
    }
    if (labels[best] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(dist.n);
}

// First principal component of the pooled lifted samples of all signals,
// by power iteration on the centered covariance. The sign is fixed so the
// largest-magnitude coordinate is positive; coordinates of the position
// block are then zeroed and the vector renormalized, mirroring how the
// slice schedule concentrates on the value channels.
inline std::vector<double> principal_direction(const LabeledDataset& ds,
                                               const GroundCostParams& params) {
  params.validate();
  if (!params.finite_beta())
    throw std::invalid_argument("principal_direction: beta must be finite");
  if (ds.size() < 2)
    throw std::invalid_argument("principal_direction: at least 2 signals required");

  const std::size_t d = ds.signals.front().dim_d();
  const std::size_t dim = d + ds.signals.front().dim_k();
  std::vector<std::vector<double>> pooled;
  for (const auto& s : ds.signals) {
    if (s.dim_d() + s.dim_k() != dim || s.dim_d() != d)
      throw std::invalid_argument("principal_direction: signals have mismatched dimensions");
    auto lifted = lift(s, params);
    for (auto& pt : lifted) pooled.push_back(std::move(pt));
  }

  std::vector<double> mean(dim, 0.0);
  for (const auto& pt : pooled)
    for (std::size_t c = 0; c < dim; ++c) mean[c] += pt[c];
  for (double& c : mean) c /= static_cast<double>(pooled.size());

  std::vector<double> cov(dim * dim, 0.0);
  for (const auto& pt : pooled)
    for (std::size_t r = 0; r < dim; ++r) {
      const double dr = pt[r] - mean[r];
      for (std::size_t c = 0; c < dim; ++c) cov[r * dim + c] += dr * (pt[c] - mean[c]);
    }
  for (double& c : cov) c /= static_cast<double>(pooled.size());

  double max_col_norm = 0.0;
  std::size_t start_col = 0;
  for (std::size_t c = 0; c < dim; ++c) {
    double ss = 0.0;
    for (std::size_t r = 0; r < dim; ++r) ss += cov[r * dim + c] * cov[r * dim + c];
    if (ss > max_col_norm) {
      max_col_norm = ss;
      start_col = c;
    }
  }
  if (max_col_norm == 0.0)
    throw std::invalid_argument("principal_direction: zero-variance data");

  std::vector<double> v(dim), next(dim);
  for (std::size_t r = 0; r < dim; ++r) v[r] = cov[r * dim + start_col];
  auto normalize = [&](std::vector<double>& x) {
    double ss = 0.0;
    for (double c : x) ss += c * c;
    const double norm = std::sqrt(ss);
    for (double& c : x) c /= norm;
    // fix sign: largest-magnitude coordinate positive
    std::size_t arg = 0;
    for (std::size_t c = 1; c < x.size(); ++c)
      if (std::fabs(x[c]) > std::fabs(x[arg])) arg = c;
    if (x[arg] < 0.0)
      for (double& c : x) c = -c;
  };
  normalize(v);
  for (int iter = 0; iter < 100000; ++iter) {
    for (std::size_t r = 0; r < dim; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) acc += cov[r * dim + c] * v[c];
      next[r] = acc;
    }
    double ss = 0.0;
    for (double c : next) ss += c * c;
    if (ss == 0.0)
      throw std::invalid_argument("principal_direction: power iteration collapsed");
    normalize(next);
    double delta = 0.0;
    for (std::size_t c = 0; c < dim; ++c) delta = std::max(delta, std::fabs(next[c] - v[c]));
    v = next;
    if (delta <= 1e-9) break;
  }

  for (std::size_t c = 0; c < d; ++c) v[c] = 0.0;
  double ss = 0.0;
  for (double c : v) ss += c * c;
  if (ss == 0.0)
    throw std::invalid_argument(
        "principal_direction: principal component lies entirely in the position block");
  const double norm = std::sqrt(ss);
  for (double& c : v) c /= norm;
  return v;
}

// Search grid for beta used by the cross-validated parameter search.
inline std::vector<double> default_beta_grid() {
  return {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1e3, 1e4};
}

// Scale bound for lambda: the maximum distance from the centroid of the
// pooled signal graphs (position and value blocks concatenated as-is).
inline double lifted_cloud_radius(const LabeledDataset& ds, double p) {
  GroundCostParams unit(p, 1.0, 1.0);
  std::vector<std::vector<double>> pooled;
  for (const auto& s : ds.signals) {
    auto lifted = lift(s, unit);
    for (auto& pt : lifted) pooled.push_back(std::move(pt));
  }
  if (pooled.empty()) throw std::invalid_argument("lifted_cloud_radius: empty dataset");
  const std::size_t dim = pooled.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto& pt : pooled)
    for (std::size_t c = 0; c < dim; ++c) mean[c] += pt[c];
  for (double& c : mean) c /= static_cast<double>(pooled.size());
  double radius = 0.0;
  for (const auto& pt : pooled) {
    double ss = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double dd = pt[c] - mean[c];
      ss += dd * dd;
    }
    radius = std::max(radius, std::sqrt(ss));
  }
  return radius;
}

// Ten evenly spaced lambda candidates from 0.1 to the lifted-cloud radius.
inline std::vector<double> default_lambda_grid(const LabeledDataset& ds, double p) {
  const double lo = 0.1;
  const double hi = std::max(lifted_cloud_radius(ds, p), lo + 1e-6);
  std::vector<double> out(10);
  for (std::size_t i = 0; i < 10; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / 9.0;
  return out;
}

// Cross-validated parameter search result. `cv_scores[bi][li]` is the mean
// fold accuracy for (beta_grid[bi], lambda_grid[li]); the best pair is the
// argmax with ties broken toward the smallest index pair.
struct GridSearchReport {
  std::vector<double> beta_grid;
  std::vector<double> lambda_grid;
  std::vector<std::vector<double>> cv_scores;
  double best_beta = 0.0;
  double best_lambda = 0.0;
};

// Stratified k-fold cross-validated 1NN accuracy over a (beta, lambda)
// grid. Folds are assigned by a seeded shuffle within each class; every
// class must have at least `folds` members. For sptlp, each beta gets a
// slice schedule built from the principal direction of the whole dataset.
inline GridSearchReport grid_search(const LabeledDataset& ds, Method m,
                                    std::vector<double> beta_grid,
                                    std::vector<double> lambda_grid, int folds,
                                    std::uint64_t seed, double p = 2.0,
                                    std::size_t n_slices = 50, int threads = 0) {
  if (folds < 2) throw std::invalid_argument("grid_search: folds must be >= 2");
  if (beta_grid.empty()) beta_grid = default_beta_grid();
  if (lambda_grid.empty()) lambda_grid = default_lambda_grid(ds, p);

  // stratified fold assignment
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < ds.size(); ++i) by_label[ds.labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(ds.size(), 0);
  for (auto& [label, members] : by_label) {
    if (members.size() < static_cast<std::size_t>(folds))
      throw std::invalid_argument("grid_search: class " + ds.label_name(label) +
                                  " has fewer members than folds");
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t t = 0; t < members.size(); ++t)
      fold_of[members[t]] = static_cast<int>(t % static_cast<std::size_t>(folds));
  }

  const bool sliced = (m == Method::Stlp || m == Method::Sptlp);
  std::optional<SliceSet> base_slices;
  if (sliced) {
    const std::size_t dim = ds.signals.front().dim_d() + ds.signals.front().dim_k();
    base_slices = sample_slices(n_slices, dim, seed);
  }

  auto cv_accuracy = [&](const DistanceMatrix& dist) {
    double sum = 0.0;
    for (int f = 0; f < folds; ++f) {
      std::vector<std::size_t> val, train;
      for (std::size_t i = 0; i < ds.size(); ++i)
        (fold_of[i] == f ? val : train).push_back(i);
      std::size_t hits = 0;
      for (std::size_t i : val) {
        std::size_t best = train.front();
        for (std::size_t j : train)
          if (dist.at(i, j) < dist.at(i, best)) best = j;
        if (ds.labels[best] == ds.labels[i]) ++hits;
      }
      sum += static_cast<double>(hits) / static_cast<double>(val.size());
    }
    return sum / static_cast<double>(folds);
  };

  GridSearchReport report;
  report.beta_grid = beta_grid;
  report.lambda_grid = lambda_grid;
  report.cv_scores.assign(beta_grid.size(),
                          std::vector<double>(lambda_grid.size(), 0.0));

  double best_score = -1.0;
  for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
    std::optional<std::vector<double>> theta0;
    if (m == Method::Sptlp)
      theta0 = principal_direction(ds, GroundCostParams(p, beta_grid[bi], 1.0));
    std::optional<DistanceMatrix> cached;  // reused when lambda is inert
    for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
      double score;
      if (!method_uses_lambda(m) && cached) {
        score = cv_accuracy(*cached);
      } else {
        GroundCostParams params(p, beta_grid[bi], lambda_grid[li]);
        std::optional<SliceSet> slices;
        if (m == Method::Sptlp)
          slices = slice_lambda_schedule(*theta0, lambda_grid[li], *base_slices);
        else if (m == Method::Stlp)
          slices = base_slices;
        const DistanceMatrix dist =
            pairwise_matrix(ds, m, params, slices ? &*slices : nullptr, threads);
        score = cv_accuracy(dist);
        if (!method_uses_lambda(m)) cached = dist;
      }
      report.cv_scores[bi][li] = score;
      if (score > best_score) {
        best_score = score;
        report.best_beta = beta_grid[bi];
        report.best_lambda = lambda_grid[li];
      }
    }
    if (!method_uses_beta(m) && bi == 0) {
      // remaining betas are inert; copy the first row
      for (std::size_t b2 = 1; b2 < beta_grid.size(); ++b2)
        report.cv_scores[b2] = report.cv_scores[0];
      break;
    }
  }
  return report;
}

}  // namespace ptlp
