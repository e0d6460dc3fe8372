// Copyright 2026 The ovlp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OVLP_JSON_IO_HPP
#define OVLP_JSON_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ovlp/optimize.hpp"
#include "ovlp/povm_measure.hpp"
#include "ovlp/qrv.hpp"

namespace ovlp {

using Json = nlohmann::json;

/// Malformed or invalid JSON input; `path()` is a JSON pointer to the
/// offending value.
class JsonError : public DomainError {
 public:
  JsonError(const std::string& path, const std::string& message)
      : DomainError((path.empty() ? std::string("/") : path) + ": " + message), path_(path.empty() ? "/" : path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline std::string child(const std::string& path, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~')
      escaped += "~0";
    else if (c == '/')
      escaped += "~1";
    else
      escaped += c;
  }
  return path + "/" + escaped;
}

inline std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw JsonError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw JsonError(child(path, key), "missing field");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw JsonError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw JsonError(path, "expected a finite number");
  return v;
}

inline Eigen::Index positive_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw JsonError(path, "expected a positive integer");
  return static_cast<Eigen::Index>(j.get<long long>());
}

inline SampleSpace space_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw JsonError(path, "expected a non-empty array of atom labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw JsonError(child(path, i), "atom label must be a string");
    labels.push_back(j[i].get<std::string>());
  }
  try {
    return SampleSpace(std::move(labels));
  } catch (const DomainError& e) {
    throw JsonError(path, e.what());
  }
}

inline Json space_to_json(const SampleSpace& s) { return Json(s.atoms()); }

}  // namespace detail

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dim", m.rows()}, {"entries", std::move(rows)}};
}

/// Entries are [re, im] pairs; a bare number is read as a real entry.
inline Matrix matrix_from_json(const Json& j, const std::string& path = "") {
  const Eigen::Index n = detail::positive_int(detail::field(j, "dim", path), detail::child(path, "dim"));
  const std::string epath = detail::child(path, "entries");
  const Json& rows = detail::field(j, "entries", path);
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
    throw JsonError(epath, "expected " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string rpath = detail::child(epath, static_cast<std::size_t>(i));
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw JsonError(rpath, "expected " + std::to_string(n) + " entries");
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::string cpath = detail::child(rpath, static_cast<std::size_t>(k));
      const Json& c = row[static_cast<std::size_t>(k)];
      if (c.is_number()) {
        m(i, k) = detail::number(c, cpath);
      } else if (c.is_array() && c.size() == 2) {
        m(i, k) = Complex(detail::number(c[0], detail::child(cpath, std::size_t{0})),
                          detail::number(c[1], detail::child(cpath, std::size_t{1})));
      } else {
        throw JsonError(cpath, "expected [re, im] or a number");
      }
    }
  }
  return m;
}

inline Json povm_to_json(const DiscretePOVM& nu) {
  Json effects = Json::object();
  for (std::size_t i = 0; i < nu.atoms(); ++i) effects[nu.space().label(i)] = matrix_to_json(nu.effect(i));
  return {{"space", detail::space_to_json(nu.space())}, {"dim", nu.dim()}, {"effects", std::move(effects)}};
}

/// Reads a list of per-atom matrices keyed by label.
inline std::vector<Matrix> labelled_matrices(const Json& j, const SampleSpace& space, Eigen::Index dim,
                                             const std::string& path) {
  if (!j.is_object()) throw JsonError(path, "expected an object keyed by atom label");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!space.index_of(it.key())) throw JsonError(detail::child(path, it.key()), "label is not in the sample space");
  std::vector<Matrix> out;
  for (const auto& label : space.atoms()) {
    const std::string mpath = detail::child(path, label);
    const auto it = j.find(label);
    if (it == j.end()) throw JsonError(mpath, "missing value for atom");
    Matrix m = matrix_from_json(*it, mpath);
    if (m.rows() != dim) throw JsonError(detail::child(mpath, "dim"), "dimension mismatch (expected " + std::to_string(dim) + ")");
    out.push_back(std::move(m));
  }
  return out;
}

inline DiscretePOVM povm_from_json(const Json& j, const std::string& path = "") {
  const SampleSpace space = detail::space_from_json(detail::field(j, "space", path), detail::child(path, "space"));
  const Eigen::Index dim = detail::positive_int(detail::field(j, "dim", path), detail::child(path, "dim"));
  const std::string epath = detail::child(path, "effects");
  std::vector<Matrix> effects = labelled_matrices(detail::field(j, "effects", path), space, dim, epath);
  const auto violations = validate_povm(space, dim, effects);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw JsonError(v.atom.empty() ? epath : detail::child(epath, v.atom), v.message);
  }
  return DiscretePOVM(space, dim, std::move(effects));
}

inline Json qrv_to_json(const QRV& f) {
  Json values = Json::object();
  for (std::size_t i = 0; i < f.atoms(); ++i) values[f.space().label(i)] = matrix_to_json(f[i]);
  return {{"space", detail::space_to_json(f.space())}, {"dim", f.dim()}, {"values", std::move(values)}};
}

inline QRV qrv_from_json(const Json& j, const std::string& path = "") {
  const SampleSpace space = detail::space_from_json(detail::field(j, "space", path), detail::child(path, "space"));
  const Eigen::Index dim = detail::positive_int(detail::field(j, "dim", path), detail::child(path, "dim"));
  std::vector<Matrix> values = labelled_matrices(detail::field(j, "values", path), space, dim, detail::child(path, "values"));
  return QRV(space, std::move(values));
}

inline Json state_to_json(const DensityOperator& rho) {
  Json j = matrix_to_json(rho.matrix());
  j["role"] = "state";
  return j;
}

inline DensityOperator state_from_json(const Json& j, const std::string& path = "") {
  if (j.is_object() && j.contains("role") && j["role"] != "state")
    throw JsonError(detail::child(path, "role"), "expected \"state\"");
  const Matrix m = matrix_from_json(j, path);
  try {
    return DensityOperator(m);
  } catch (const DomainError& e) {
    throw JsonError(path, e.what());
  }
}

inline Json measure_to_json(const ScalarMeasure& mu) {
  Json w = Json::object();
  for (std::size_t i = 0; i < mu.weights.size(); ++i) w[mu.space.label(i)] = mu.weights[i];
  return {{"space", detail::space_to_json(mu.space)}, {"weights", std::move(w)}};
}

inline ScalarMeasure measure_from_json(const Json& j, const std::string& path = "") {
  ScalarMeasure mu;
  mu.space = detail::space_from_json(detail::field(j, "space", path), detail::child(path, "space"));
  const std::string wpath = detail::child(path, "weights");
  const Json& w = detail::field(j, "weights", path);
  if (!w.is_object()) throw JsonError(wpath, "expected an object keyed by atom label");
  for (auto it = w.begin(); it != w.end(); ++it)
    if (!mu.space.index_of(it.key())) throw JsonError(detail::child(wpath, it.key()), "label is not in the sample space");
  for (const auto& label : mu.space.atoms()) {
    const std::string p = detail::child(wpath, label);
    const auto it = w.find(label);
    if (it == w.end()) throw JsonError(p, "missing weight for atom");
    const double v = detail::number(*it, p);
    if (v < 0.0) throw JsonError(p, "weight must be nonnegative");
    mu.weights.push_back(v);
  }
  return mu;
}

inline Json estimate_to_json(const NormEstimate& e) {
  return {{"lower", e.lower}, {"upper", e.upper}, {"method", e.method}, {"iterations", e.iterations}, {"warning", e.warning}};
}

inline Json config_to_json(const SolverConfig& c) {
  return {{"max_iters", c.max_iters}, {"step_rule", c.step_rule},   {"restarts", c.restarts},
          {"grid_resolution", c.grid_resolution}, {"seed", c.seed}, {"tol", c.tol}};
}

/// Partial configs are allowed; absent fields keep their defaults.
inline SolverConfig config_from_json(const Json& j, const std::string& path = "") {
  if (!j.is_object()) throw JsonError(path, "expected an object");
  SolverConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string p = detail::child(path, it.key());
    const Json& v = *it;
    if (it.key() == "max_iters" || it.key() == "restarts" || it.key() == "grid_resolution") {
      if (!v.is_number_integer()) throw JsonError(p, "expected an integer");
      const int x = v.get<int>();
      (it.key() == "max_iters" ? c.max_iters : it.key() == "restarts" ? c.restarts : c.grid_resolution) = x;
    } else if (it.key() == "seed") {
      if (!v.is_number_unsigned()) throw JsonError(p, "expected a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (it.key() == "tol") {
      c.tol = detail::number(v, p);
    } else if (it.key() == "step_rule") {
      if (!v.is_string()) throw JsonError(p, "expected a string");
      c.step_rule = v.get<std::string>();
    } else {
      throw JsonError(p, "unknown solver option");
    }
  }
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw JsonError(path, e.what());
  }
  return c;
}

/// Parses text, reporting syntax errors with the byte offset.
inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw JsonError("", std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DomainError("cannot open '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

}  // namespace ovlp

#endif  // OVLP_JSON_IO_HPP
