#pragma once

// Core containers (feature matrix, phenotype, networks, gene maps, results)
// and their tab-separated text I/O.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "netsel/detail/tsv.hpp"
#include "netsel/error.hpp"

namespace netsel {

using Index = std::int64_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {

inline std::unordered_map<std::string, Index> index_ids(
    const std::vector<std::string>& ids, const char* what) {
  std::unordered_map<std::string, Index> lookup;
  lookup.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i].empty()) {
      throw Error(ErrorKind::invalid_argument,
                  std::string("empty ") + what + " id at position " +
                      std::to_string(i));
    }
    if (!lookup.emplace(ids[i], static_cast<Index>(i)).second) {
      throw Error(ErrorKind::duplicate_id,
                  std::string("duplicate ") + what + " id '" + ids[i] + "'");
    }
  }
  return lookup;
}

}  // namespace detail

/// Samples x features design matrix with identifiers on both axes.
class FeatureMatrix {
 public:
  FeatureMatrix(std::vector<std::string> sample_ids,
                std::vector<std::string> feature_ids, Matrix values)
      : sample_ids_(std::move(sample_ids)),
        feature_ids_(std::move(feature_ids)),
        values_(std::move(values)) {
    if (values_.rows() != static_cast<Index>(sample_ids_.size()) ||
        values_.cols() != static_cast<Index>(feature_ids_.size())) {
      throw Error(ErrorKind::dimension_mismatch,
                  "value matrix shape does not match id lists");
    }
    if (sample_ids_.size() < 2) {
      throw Error(ErrorKind::invalid_argument, "need at least 2 samples");
    }
    if (feature_ids_.empty()) {
      throw Error(ErrorKind::invalid_argument, "need at least 1 feature");
    }
    detail::index_ids(sample_ids_, "sample");
    detail::index_ids(feature_ids_, "feature");
    if (!values_.allFinite()) {
      throw Error(ErrorKind::non_finite, "feature matrix has non-finite values");
    }
  }

  const std::vector<std::string>& sample_ids() const { return sample_ids_; }
  const std::vector<std::string>& feature_ids() const { return feature_ids_; }
  const Matrix& values() const { return values_; }
  Index n() const { return values_.rows(); }
  Index m() const { return values_.cols(); }

 private:
  std::vector<std::string> sample_ids_;
  std::vector<std::string> feature_ids_;
  Matrix values_;
};

/// Continuous phenotype, one value per sample.
class Phenotype {
 public:
  Phenotype(std::vector<std::string> sample_ids, Vector values)
      : sample_ids_(std::move(sample_ids)), values_(std::move(values)) {
    if (values_.size() != static_cast<Index>(sample_ids_.size())) {
      throw Error(ErrorKind::dimension_mismatch,
                  "phenotype values do not match sample ids");
    }
    if (sample_ids_.empty()) {
      throw Error(ErrorKind::invalid_argument, "empty phenotype");
    }
    detail::index_ids(sample_ids_, "sample");
    if (!values_.allFinite()) {
      throw Error(ErrorKind::non_finite, "phenotype has non-finite values");
    }
    if (values_.maxCoeff() == values_.minCoeff()) {
      throw Error(ErrorKind::constant_phenotype, "all phenotype values equal");
    }
  }

  const std::vector<std::string>& sample_ids() const { return sample_ids_; }
  const Vector& values() const { return values_; }
  Index n() const { return values_.size(); }

 private:
  std::vector<std::string> sample_ids_;
  Vector values_;
};

struct Edge {
  Index u;
  Index v;
  double w;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Index node;
  double w;
};

/// Undirected weighted graph. Edges are stored once with u < v, sorted.
class WeightedNetwork {
 public:
  WeightedNetwork(std::vector<std::string> node_ids, std::vector<Edge> edges)
      : node_ids_(std::move(node_ids)), edges_(std::move(edges)) {
    detail::index_ids(node_ids_, "node");
    const Index count = node_count();
    for (auto& e : edges_) {
      if (e.u < 0 || e.v < 0 || e.u >= count || e.v >= count) {
        throw Error(ErrorKind::unknown_id, "edge endpoint out of range");
      }
      if (e.u == e.v) {
        throw Error(ErrorKind::self_loop,
                    "self-loop on node '" + node_ids_[e.u] + "'");
      }
      if (!(e.w > 0.0) || !std::isfinite(e.w)) {
        throw Error(ErrorKind::non_positive_weight,
                    "edge weight must be positive and finite");
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
        throw Error(ErrorKind::duplicate_edge,
                    "duplicate edge '" + node_ids_[edges_[i].u] + "' - '" +
                        node_ids_[edges_[i].v] + "'");
      }
    }
    build_adjacency();
  }

  /// Network over nodes named "0", "1", ...
  static WeightedNetwork anonymous(Index node_count, std::vector<Edge> edges) {
    std::vector<std::string> ids;
    ids.reserve(node_count);
    for (Index i = 0; i < node_count; ++i) ids.push_back(std::to_string(i));
    return WeightedNetwork(std::move(ids), std::move(edges));
  }

  const std::vector<std::string>& node_ids() const { return node_ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Index node_count() const { return static_cast<Index>(node_ids_.size()); }

  std::span<const Neighbor> neighbors(Index node) const {
    return {adjacency_.data() + offsets_[node],
            adjacency_.data() + offsets_[node + 1]};
  }

  /// Weighted degree D_pp.
  double degree(Index node) const {
    double d = 0.0;
    for (const auto& nb : neighbors(node)) d += nb.w;
    return d;
  }

 private:
  void build_adjacency() {
    const Index count = node_count();
    offsets_.assign(count + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (Index i = 0; i < count; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(2 * edges_.size());
    auto fill = offsets_;
    for (const auto& e : edges_) {
      adjacency_[fill[e.u]++] = {e.v, e.w};
      adjacency_[fill[e.v]++] = {e.u, e.w};
    }
  }

  std::vector<std::string> node_ids_;
  std::vector<Edge> edges_;
  std::vector<Index> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// Many-to-many feature -> gene assignment.
class FeatureGeneMap {
 public:
  using Pair = std::pair<std::string, std::string>;

  explicit FeatureGeneMap(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    std::set<Pair> seen;
    for (const auto& p : pairs_) {
      if (p.first.empty() || p.second.empty()) {
        throw Error(ErrorKind::invalid_argument, "empty feature or gene id");
      }
      if (!seen.insert(p).second) {
        throw Error(ErrorKind::duplicate_id,
                    "duplicate pair '" + p.first + "' -> '" + p.second + "'");
      }
    }
  }

  const std::vector<Pair>& pairs() const { return pairs_; }

 private:
  std::vector<Pair> pairs_;
};

struct SelectionParams {
  double lambda = 0.0;
  double eta = 0.0;
  double mu = 0.0;
};

/// Selected feature indices (ascending) with the objective they attain.
struct SelectionSet {
  std::vector<Index> selected;
  double objective_value = 0.0;
  SelectionParams params;
};

struct CoefficientVector {
  Vector beta;
  double objective_value = 0.0;
  Index iterations = 0;
  bool converged = false;
  /// Objective after each iteration; filled only when requested.
  std::vector<double> trace;
};

/// Indices of nonzero coefficients.
inline std::vector<Index> support(const Vector& beta) {
  std::vector<Index> s;
  for (Index p = 0; p < beta.size(); ++p) {
    if (beta[p] != 0.0) s.push_back(p);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Loading

inline FeatureMatrix load_feature_matrix(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) {
    throw Error(ErrorKind::malformed_header, "file is empty", 1);
  }
  const auto header = detail::split_tabs(lines.front().text);
  const std::size_t header_row = lines.front().number;
  if (header.size() < 2) {
    throw Error(ErrorKind::malformed_header,
                "header needs sample_id and at least one feature", header_row);
  }
  std::vector<std::string> feature_ids;
  std::unordered_set<std::string> seen_features;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) {
      throw Error(ErrorKind::malformed_header, "empty feature id", header_row,
                  c + 1);
    }
    std::string id(header[c]);
    if (!seen_features.insert(id).second) {
      throw Error(ErrorKind::duplicate_id, "duplicate feature id '" + id + "'",
                  header_row, c + 1);
    }
    feature_ids.push_back(std::move(id));
  }

  const std::size_t m = feature_ids.size();
  std::vector<std::string> sample_ids;
  std::vector<double> data;
  std::unordered_set<std::string> seen_samples;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto fields = detail::split_tabs(line.text);
    if (fields.size() != m + 1) {
      throw Error(ErrorKind::ragged_row,
                  "expected " + std::to_string(m + 1) + " fields, found " +
                      std::to_string(fields.size()),
                  line.number);
    }
    std::string id(fields[0]);
    if (id.empty()) {
      throw Error(ErrorKind::invalid_argument, "empty sample id", line.number,
                  1);
    }
    if (!seen_samples.insert(id).second) {
      throw Error(ErrorKind::duplicate_id, "duplicate sample id '" + id + "'",
                  line.number, 1);
    }
    sample_ids.push_back(std::move(id));
    for (std::size_t c = 1; c <= m; ++c) {
      data.push_back(detail::parse_double(fields[c], line.number, c + 1));
    }
  }
  const auto n = static_cast<Index>(sample_ids.size());
  Matrix values(n, static_cast<Index>(m));
  for (Index r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      values(r, static_cast<Index>(c)) = data[r * m + c];
    }
  }
  return FeatureMatrix(std::move(sample_ids), std::move(feature_ids),
                       std::move(values));
}

/// `sample_id<TAB>value`; an optional first line whose value field is not
/// numeric is taken as a header.
inline Phenotype load_phenotype(const std::string& path) {
  const auto lines = detail::read_lines(path);
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = detail::split_tabs(lines[i].text);
    if (fields.size() != 2) {
      throw Error(ErrorKind::ragged_row, "expected 2 fields", lines[i].number);
    }
    if (i == 0 && !detail::try_parse_double(fields[1])) continue;
    ids.emplace_back(fields[0]);
    values.push_back(detail::parse_double(fields[1], lines[i].number, 2));
  }
  return Phenotype(std::move(ids),
                   Eigen::Map<const Vector>(values.data(), values.size()));
}

/// Edge list `id_a<TAB>id_b[<TAB>weight]` over a fixed node universe.
inline WeightedNetwork load_network(const std::string& path,
                                    const std::vector<std::string>& universe) {
  const auto lookup = detail::index_ids(universe, "node");
  std::vector<Edge> edges;
  std::set<std::pair<Index, Index>> seen;
  for (const auto& line : detail::read_lines(path)) {
    const auto fields = detail::split_tabs(line.text);
    if (fields.size() != 2 && fields.size() != 3) {
      throw Error(ErrorKind::ragged_row, "expected 2 or 3 fields", line.number);
    }
    Index ends[2];
    for (int k = 0; k < 2; ++k) {
      const auto it = lookup.find(std::string(fields[k]));
      if (it == lookup.end()) {
        throw Error(ErrorKind::unknown_id,
                    "unknown node '" + std::string(fields[k]) + "'",
                    line.number, k + 1);
      }
      ends[k] = it->second;
    }
    const double w =
        fields.size() == 3 ? detail::parse_double(fields[2], line.number, 3)
                           : 1.0;
    if (ends[0] == ends[1]) {
      throw Error(ErrorKind::self_loop,
                  "self-loop on '" + std::string(fields[0]) + "'", line.number);
    }
    if (!(w > 0.0)) {
      throw Error(ErrorKind::non_positive_weight, "weight must be positive",
                  line.number, 3);
    }
    const auto key = std::minmax(ends[0], ends[1]);
    if (!seen.emplace(key.first, key.second).second) {
      throw Error(ErrorKind::duplicate_edge,
                  "duplicate edge '" + std::string(fields[0]) + "' - '" +
                      std::string(fields[1]) + "'",
                  line.number);
    }
    edges.push_back({key.first, key.second, w});
  }
  return WeightedNetwork(universe, std::move(edges));
}

inline FeatureGeneMap load_mapping(const std::string& path) {
  std::vector<FeatureGeneMap::Pair> pairs;
  for (const auto& line : detail::read_lines(path)) {
    const auto fields = detail::split_tabs(line.text);
    if (fields.size() != 2) {
      throw Error(ErrorKind::ragged_row, "expected 2 fields", line.number);
    }
    pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return FeatureGeneMap(std::move(pairs));
}

// ---------------------------------------------------------------------------
// Writing

inline void write_feature_matrix(const FeatureMatrix& x,
                                 const std::string& path) {
  auto out = detail::open_output(path);
  out << "sample_id";
  for (const auto& id : x.feature_ids()) out << '\t' << id;
  out << '\n';
  for (Index r = 0; r < x.n(); ++r) {
    out << x.sample_ids()[r];
    for (Index c = 0; c < x.m(); ++c) {
      out << '\t' << detail::format_double(x.values()(r, c));
    }
    out << '\n';
  }
}

inline void write_phenotype(const Phenotype& y, const std::string& path) {
  auto out = detail::open_output(path);
  for (Index i = 0; i < y.n(); ++i) {
    out << y.sample_ids()[i] << '\t' << detail::format_double(y.values()[i])
        << '\n';
  }
}

inline void write_network(const WeightedNetwork& g, const std::string& path) {
  auto out = detail::open_output(path);
  for (const auto& e : g.edges()) {
    out << g.node_ids()[e.u] << '\t' << g.node_ids()[e.v] << '\t'
        << detail::format_double(e.w) << '\n';
  }
}

inline void write_beta(const Vector& beta,
                       const std::vector<std::string>& feature_ids,
                       const std::string& path) {
  if (beta.size() != static_cast<Index>(feature_ids.size())) {
    throw Error(ErrorKind::dimension_mismatch, "beta length != feature count");
  }
  auto out = detail::open_output(path);
  for (Index p = 0; p < beta.size(); ++p) {
    out << feature_ids[p] << '\t' << detail::format_double(beta[p]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Alignment

struct Aligned {
  FeatureMatrix x;
  Phenotype y;
  std::vector<std::string> dropped_from_features;
  std::vector<std::string> dropped_from_phenotype;
};

/// Restricts both inputs to their common samples, in the feature matrix's
/// row order.
inline Aligned align(const FeatureMatrix& x, const Phenotype& y) {
  std::unordered_map<std::string, Index> y_rows;
  for (Index i = 0; i < y.n(); ++i) y_rows.emplace(y.sample_ids()[i], i);
  std::unordered_set<std::string> x_ids(x.sample_ids().begin(),
                                        x.sample_ids().end());

  std::vector<Index> keep_x, keep_y;
  std::vector<std::string> ids, dropped_x, dropped_y;
  for (Index r = 0; r < x.n(); ++r) {
    const auto it = y_rows.find(x.sample_ids()[r]);
    if (it == y_rows.end()) {
      dropped_x.push_back(x.sample_ids()[r]);
      continue;
    }
    keep_x.push_back(r);
    keep_y.push_back(it->second);
    ids.push_back(x.sample_ids()[r]);
  }
  for (const auto& id : y.sample_ids()) {
    if (!x_ids.count(id)) dropped_y.push_back(id);
  }
  if (ids.empty()) {
    throw Error(ErrorKind::empty_intersection,
                "features and phenotype share no sample ids");
  }
  Matrix xv(static_cast<Index>(ids.size()), x.m());
  Vector yv(static_cast<Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    xv.row(i) = x.values().row(keep_x[i]);
    yv[i] = y.values()[keep_y[i]];
  }
  return {FeatureMatrix(ids, x.feature_ids(), std::move(xv)),
          Phenotype(ids, std::move(yv)), std::move(dropped_x),
          std::move(dropped_y)};
}

// ---------------------------------------------------------------------------
// Reports

/// Structured result document. Serialized as JSON with sorted keys, so the
/// same report always yields the same bytes.
struct Report {
  std::string method;
  std::map<std::string, double> params;
  std::vector<std::string> selected_ids;
  double objective = 0.0;
  bool converged = true;
  double runtime_ms = 0.0;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const {
    nlohmann::json j = extra;
    j["method"] = method;
    j["params"] = params;
    j["selected_ids"] = selected_ids;
    j["objective"] = objective;
    j["converged"] = converged;
    j["runtime_ms"] = runtime_ms;
    return j;
  }
};

inline std::vector<std::string> ids_of(std::span<const Index> indices,
                                       const std::vector<std::string>& ids) {
  std::vector<Index> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> out;
  out.reserve(sorted.size());
  for (const Index i : sorted) {
    if (i < 0 || i >= static_cast<Index>(ids.size())) {
      throw Error(ErrorKind::invalid_argument, "selected index out of range");
    }
    out.push_back(ids[i]);
  }
  return out;
}

inline Report make_report(std::string method, const SelectionSet& s,
                          const std::vector<std::string>& feature_ids) {
  if (!std::isfinite(s.objective_value)) {
    throw Error(ErrorKind::invalid_argument, "objective is not finite");
  }
  Report r;
  r.method = std::move(method);
  r.params = {{"lambda", s.params.lambda},
              {"eta", s.params.eta},
              {"mu", s.params.mu}};
  r.selected_ids = ids_of(s.selected, feature_ids);
  r.objective = s.objective_value;
  r.converged = true;
  return r;
}

inline Report make_report(std::string method, const CoefficientVector& c,
                          const std::vector<std::string>& feature_ids,
                          std::map<std::string, double> params) {
  if (!c.beta.allFinite() || !std::isfinite(c.objective_value)) {
    throw Error(ErrorKind::invalid_argument, "coefficients are not finite");
  }
  if (c.beta.size() != static_cast<Index>(feature_ids.size())) {
    throw Error(ErrorKind::dimension_mismatch, "beta length != feature count");
  }
  Report r;
  r.method = std::move(method);
  r.params = std::move(params);
  r.selected_ids = ids_of(support(c.beta), feature_ids);
  r.objective = c.objective_value;
  r.converged = c.converged;
  r.extra["iterations"] = c.iterations;
  return r;
}

/// Writes the JSON report to `json_path` and the selected IDs, one per line,
/// to `ids_path`.
inline void write_report(const Report& report, const std::string& json_path,
                         const std::string& ids_path) {
  {
    auto out = detail::open_output(json_path);
    out << report.to_json().dump(2) << '\n';
    if (!out) throw Error(ErrorKind::io, "failed writing '" + json_path + "'");
  }
  auto out = detail::open_output(ids_path);
  for (const auto& id : report.selected_ids) out << id << '\n';
  if (!out) throw Error(ErrorKind::io, "failed writing '" + ids_path + "'");
}

inline void write_report(const Report& report, const std::string& json_path) {
  write_report(report, json_path, json_path + ".ids.txt");
}

}  // namespace netsel
