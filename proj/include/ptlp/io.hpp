#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ptlp/harness.hpp"

namespace ptlp {

inline nlohmann::json params_to_json(const GroundCostParams& params) {
  nlohmann::json j;
  j["p"] = params.p;
  switch (params.beta_mode) {
    case BetaMode::Finite: j["beta"] = params.beta; break;
    case BetaMode::Zero: j["beta"] = "zero"; break;
    case BetaMode::Infinity: j["beta"] = "inf"; break;
  }
  j["lambda"] = params.lambda;
  return j;
}

inline nlohmann::json slices_to_json(const SliceSet& slices) {
  nlohmann::json j;
  j["count"] = slices.count();
  j["dim"] = slices.dim();
  j["seed"] = slices.seed;
  if (!slices.lambdas.empty()) j["lambdas"] = slices.lambdas;
  return j;
}

// Writes the matrix as CSV rows of full-precision doubles plus a JSON
// metadata sidecar at `path` + ".json".
inline void write_distance_csv(const DistanceMatrix& dist, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::invalid_argument("write_distance_csv: cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < dist.n; ++i) {
    for (std::size_t j = 0; j < dist.n; ++j) {
      if (j) out << ',';
      out << detail::format_double(dist.at(i, j));
    }
    out << '\n';
  }
  out.close();

  nlohmann::json meta;
  meta["method"] = dist.method;
  meta["n"] = dist.n;
  meta["dataset_hash"] = dist.dataset_hash;
  meta["params"] = params_to_json(dist.params);
  if (dist.slices) meta["slices"] = slices_to_json(*dist.slices);
  std::ofstream side(path + ".json");
  if (!side)
    throw std::invalid_argument("write_distance_csv: cannot open sidecar for writing");
  side << meta.dump(2) << '\n';
}

inline nlohmann::json grid_search_report_to_json(const GridSearchReport& report) {
  nlohmann::json j;
  j["beta_grid"] = report.beta_grid;
  j["lambda_grid"] = report.lambda_grid;
  j["cv_scores"] = report.cv_scores;
  j["best_beta"] = report.best_beta;
  j["best_lambda"] = report.best_lambda;
  return j;
}

}  // namespace ptlp
