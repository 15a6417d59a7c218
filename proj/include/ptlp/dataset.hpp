#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptlp/rng.hpp"
#include "ptlp/signal.hpp"

namespace ptlp {

// A collection of labeled signals. Labels are integers; label_names keeps
// the original file tokens for round-tripping and cross-file comparison.
struct LabeledDataset {
  std::vector<DiscreteSignal> signals;
  std::vector<int> labels;
  std::map<int, std::string> label_names;
  std::string name;

  std::size_t size() const { return signals.size(); }

  std::string label_name(int label) const {
    auto it = label_names.find(label);
    return it != label_names.end() ? it->second : std::to_string(label);
  }
};

// A 1-channel signal on the normalized time grid: positions i/(L-1) for a
// row of L values (a single-sample row sits at position 0).
inline DiscreteSignal time_grid_signal(const std::vector<double>& values) {
  if (values.empty())
    throw std::invalid_argument("time_grid_signal: at least one value required");
  const std::size_t n = values.size();
  std::vector<double> positions(n, 0.0);
  if (n > 1)
    for (std::size_t i = 0; i < n; ++i)
      positions[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return DiscreteSignal::univariate(positions, values);
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  auto flush = [&]() {
    // trim surrounding spaces and carriage returns
    std::size_t b = 0, e = field.size();
    while (b < e && (field[b] == ' ' || field[b] == '\r')) ++b;
    while (e > b && (field[e - 1] == ' ' || field[e - 1] == '\r')) --e;
    if (e > b) out.push_back(field.substr(b, e - b));
    field.clear();
  };
  for (char c : line) {
    if (c == '\t' || c == ',')
      flush();
    else
      field.push_back(c);
  }
  flush();
  return out;
}

inline double parse_double(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw std::invalid_argument("load_ucr_tsv: unparsable value '" + token +
                                "' on line " + std::to_string(line_no));
  return value;
}

inline bool parse_int(const std::string& token, long& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Loads a UCR-style TSV/CSV file: one signal per row, label first, values
// after, tab- or comma-separated. Rows may have differing lengths. Integer
// label tokens keep their value; otherwise labels are interned in order of
// first appearance.
inline LabeledDataset load_ucr_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_ucr_tsv: cannot open '" + path + "'");

  std::vector<std::string> label_tokens;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2)
      throw std::invalid_argument("load_ucr_tsv: line " + std::to_string(line_no) +
                                  " has a label but no values");
    label_tokens.push_back(fields.front());
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t f = 1; f < fields.size(); ++f)
      values.push_back(detail::parse_double(fields[f], line_no));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::invalid_argument("load_ucr_tsv: no data rows in '" + path + "'");

  LabeledDataset ds;
  ds.name = path;
  bool all_ints = true;
  std::vector<long> as_int(label_tokens.size());
  for (std::size_t i = 0; i < label_tokens.size(); ++i)
    if (!detail::parse_int(label_tokens[i], as_int[i])) {
      all_ints = false;
      break;
    }
  if (all_ints) {
    for (std::size_t i = 0; i < label_tokens.size(); ++i) {
      const int label = static_cast<int>(as_int[i]);
      ds.labels.push_back(label);
      ds.label_names.emplace(label, label_tokens[i]);
    }
  } else {
    std::map<std::string, int> interned;
    for (const auto& token : label_tokens) {
      auto it = interned.find(token);
      if (it == interned.end()) {
        const int id = static_cast<int>(interned.size());
        it = interned.emplace(token, id).first;
        ds.label_names.emplace(id, token);
      }
      ds.labels.push_back(it->second);
    }
  }
  ds.signals.reserve(rows.size());
  for (const auto& row : rows) ds.signals.push_back(time_grid_signal(row));
  return ds;
}

// Writes a dataset in the same row format (tab-separated). Only 1-channel
// signals are supported; positions are implied by row length.
inline void save_ucr_tsv(const LabeledDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("save_ucr_tsv: cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& s = ds.signals[i];
    if (s.dim_k() != 1)
      throw std::invalid_argument("save_ucr_tsv: only 1-channel signals supported");
    out << ds.label_name(ds.labels[i]);
    for (std::size_t t = 0; t < s.size(); ++t)
      out << '\t' << detail::format_double(s.value(t)[0]);
    out << '\n';
  }
}

namespace detail {

// Gaussian bump with unit peak amplitude.
inline double gauss_bump(double t, double center, double sigma) {
  const double z = (t - center) / sigma;
  return std::exp(-0.5 * z * z);
}

}  // namespace detail

// Two synthetic signal classes on [0, 1], sampled on a uniform grid:
// class 0 is a single positive Gaussian bump (sigma 0.01) at a random
// location, class 1 a positive/negative bump pair (sigma 0.01/sqrt(2))
// offset by +-0.001 around the location. With `noisy`, each signal gains
// a narrow random blip of amplitude +-0.5 plus white noise of scale 0.1.
// Bump amplitudes stay within [0, 1]; output is reproducible per seed.
inline LabeledDataset gen_separability_data(std::size_t n_per_class, bool noisy,
                                            std::uint64_t seed,
                                            std::size_t grid_points = 256) {
  if (n_per_class < 1)
    throw std::invalid_argument("gen_separability_data: n_per_class must be >= 1");
  if (grid_points < 2)
    throw std::invalid_argument("gen_separability_data: grid_points must be >= 2");

  const double sigma0 = 0.01;
  const double sigma1 = 0.01 / std::sqrt(2.0);
  const double sigma_blip = 0.001 * std::sqrt(5.0);

  std::vector<double> grid(grid_points);
  for (std::size_t j = 0; j < grid_points; ++j)
    grid[j] = static_cast<double>(j) / static_cast<double>(grid_points - 1);

  std::mt19937_64 rng(seed);
  auto random_center = [&]() { return 0.98 * detail::uniform01(rng) + 0.01; };

  LabeledDataset ds;
  ds.name = noisy ? "synthetic_noisy" : "synthetic_clean";
  ds.label_names = {{0, "0"}, {1, "1"}};

  auto add_signal = [&](int label) {
    const double x = random_center();
    std::vector<double> values(grid_points);
    for (std::size_t j = 0; j < grid_points; ++j) {
      if (label == 0)
        values[j] = detail::gauss_bump(grid[j], x, sigma0);
      else
        values[j] = detail::gauss_bump(grid[j], x + 0.001, sigma1) -
                    detail::gauss_bump(grid[j], x - 0.001, sigma1);
    }
    if (noisy) {
      const double blip_center = random_center();
      const double alpha = detail::uniform01(rng) < 0.5 ? -0.5 : 0.5;
      for (std::size_t j = 0; j < grid_points; ++j)
        values[j] += alpha * detail::gauss_bump(grid[j], blip_center, sigma_blip) +
                     0.1 * detail::standard_normal(rng);
    }
    ds.signals.push_back(time_grid_signal(values));
    ds.labels.push_back(label);
  };

  for (std::size_t i = 0; i < n_per_class; ++i) add_signal(0);
  for (std::size_t i = 0; i < n_per_class; ++i) add_signal(1);
  return ds;
}

}  // namespace ptlp
