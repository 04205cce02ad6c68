// Copyright 2026 The Discern Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * JSON and CSV serialization. A complex number is a 2-array [re, im],
 * a vector an array of such pairs, a matrix an array of rows. Parsers
 * reject unknown keys and name the offending field.
 */

#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "discern/discrimination.hpp"
#include "discern/linalg.hpp"
#include "discern/optimize.hpp"
#include "discern/sampling.hpp"

namespace discern::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

/// 17 significant digits: lossless round trip for IEEE doubles.
inline std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// 7 significant digits for human-readable summaries.
inline std::string format_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Core types -> JSON
// ---------------------------------------------------------------------------

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Vector& v) {
  json arr = json::array();
  for (std::size_t i = 0; i < v.dim(); ++i) arr.push_back(to_json(v[i]));
  return arr;
}

inline json to_json(const Hermitian& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const char* to_string(DeltaStatus s) {
  switch (s) {
    case DeltaStatus::finite: return "finite";
    case DeltaStatus::infinite: return "infinite";
    default: return "undefined";
  }
}

inline json to_json(const DiscriminationStats& st) {
  json j{{"mean_v", st.mean_v},
         {"mean_w", st.mean_w},
         {"sigma_v", st.sigma_v},
         {"sigma_w", st.sigma_w},
         {"delta_status", to_string(st.status)}};
  j["delta"] = st.status == DeltaStatus::finite ? json(st.delta) : json();
  return j;
}

inline json to_json(const SaturationReport& r) {
  json j{{"stabilizes_subspace", r.stabilizes_subspace},
         {"subspace_residual", r.subspace_residual},
         {"lambda_imag_residual", r.lambda_imag_residual},
         {"lambda_in_hull", r.lambda_in_hull},
         {"saturated", r.saturated},
         {"qmie_gap", r.qmie_gap},
         {"orthogonal_case", r.orthogonal_case},
         {"tolerance", r.tolerance}};
  j["lambda"] = r.orthogonal_case ? json() : to_json(r.lambda);
  return j;
}

inline json to_json(const TrialReport& r) {
  return json{{"n", r.n},
              {"trials", r.trials},
              {"p1", r.p1},
              {"errors", r.errors},
              {"empirical_error", r.empirical_error},
              {"cheb_bound", r.cheb_bound},
              {"seed", r.seed}};
}

inline json to_json(const SearchResult& r) {
  return json{{"best_value", r.best_value},
              {"best_operator", to_json(r.best_operator)},
              {"restarts", r.restarts},
              {"evaluations", r.evaluations},
              {"converged", r.converged}};
}

inline json to_json(const OutcomeDistribution& d) {
  return json{{"values", d.values}, {"probs", d.probs}, {"mean", d.mean},
              {"variance", d.variance}};
}

// ---------------------------------------------------------------------------
// JSON -> core types, with field diagnostics
// ---------------------------------------------------------------------------

inline cplx parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument(where + ": expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Vector parse_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(where + ": expected a non-empty array of [re, im] pairs");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[i] = parse_complex(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

/// Parses a state vector and validates unit norm.
inline Vector parse_state(const json& j, const std::string& where) {
  Vector v = parse_vector(j, where);
  if (!is_unit(v))
    throw std::invalid_argument(where + ": state vector is not unit norm (|psi|^2 = " +
                                format_short(norm(v) * norm(v)) + ")");
  return v;
}

inline Hermitian parse_observable(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(where + ": expected a matrix as an array of rows");
  const std::size_t dim = j.size();
  std::vector<cplx> entries;
  entries.reserve(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string row = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != dim)
      throw std::invalid_argument(row + ": expected a row of " + std::to_string(dim) +
                                  " complex entries");
    for (std::size_t k = 0; k < dim; ++k)
      entries.push_back(parse_complex(j[i][k], row + "[" + std::to_string(k) + "]"));
  }
  try {
    return Hermitian::from_entries(dim, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
}

/// Contents of a problem-input file: any subset of states, observable
/// and priors may be present; the rest comes from command-line flags.
struct InputData {
  std::optional<Vector> v;
  std::optional<Vector> w;
  std::optional<Hermitian> observable;
  std::optional<double> p1;
};

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

inline InputData parse_input(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("input: expected a JSON object");
  reject_unknown_keys(j, {"states", "observable", "priors"}, "input");
  InputData in;
  if (j.contains("states")) {
    const json& s = j["states"];
    if (!s.is_object()) throw std::invalid_argument("input.states: expected an object");
    reject_unknown_keys(s, {"v", "w"}, "input.states");
    if (s.contains("v")) in.v = parse_state(s["v"], "input.states.v");
    if (s.contains("w")) in.w = parse_state(s["w"], "input.states.w");
  }
  if (j.contains("observable"))
    in.observable = parse_observable(j["observable"], "input.observable");
  if (j.contains("priors")) {
    const json& p = j["priors"];
    if (!p.is_object()) throw std::invalid_argument("input.priors: expected an object");
    reject_unknown_keys(p, {"p1"}, "input.priors");
    if (p.contains("p1")) {
      if (!p["p1"].is_number())
        throw std::invalid_argument("input.priors.p1: expected a number");
      in.p1 = p["p1"].get<double>();
      if (!(*in.p1 > 0.0 && *in.p1 < 1.0))
        throw std::invalid_argument("input.priors.p1: must lie in (0,1)");
    }
  }
  return in;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Minimal CSV writer: numeric cells at 17 significant digits.
/// Comment lines ('#' prefixed, e.g. the echoed run configuration)
/// render before the header.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(std::move(header)) {}

  void add_row(const std::vector<double>& cells) {
    if (cells.size() != columns_.size())
      throw std::invalid_argument("csv: row width does not match header");
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i)
      line += format_full(cells[i]) + (i + 1 < cells.size() ? "," : "\n");
    body_ += line;
  }

  /// Row with preformatted cells (integer-valued columns keep all bits).
  void add_row_cells(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
      throw std::invalid_argument("csv: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i)
      body_ += cells[i] + (i + 1 < cells.size() ? "," : "\n");
  }

  void add_comment(const std::string& line) { comments_ += "# " + line + "\n"; }

  std::string text() const {
    std::string header;
    for (std::size_t i = 0; i < columns_.size(); ++i)
      header += columns_[i] + (i + 1 < columns_.size() ? "," : "\n");
    return comments_ + header + body_;
  }

 private:
  std::vector<std::string> columns_;
  std::string comments_;
  std::string body_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Strict CSV parser for the writer's own dialect: '#' comments, one
/// header line, numeric cells.
inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::size_t pos = 0;
  bool header_done = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::size_t c = 0;
    while (true) {
      std::size_t comma = line.find(',', c);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(c));
        break;
      }
      cells.push_back(line.substr(c, comma - c));
      c = comma + 1;
    }
    if (!header_done) {
      table.header = std::move(cells);
      header_done = true;
      continue;
    }
    if (cells.size() != table.header.size())
      throw std::invalid_argument("csv: row width does not match header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& cell : cells) {
      std::size_t consumed = 0;
      double value = std::stod(cell, &consumed);
      if (consumed != cell.size())
        throw std::invalid_argument("csv: malformed numeric cell '" + cell + "'");
      row.push_back(value);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace discern::io
