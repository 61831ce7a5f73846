#pragma once

// Model selection by cross-validated grid search, selection stability
// metrics, and a synthetic planted-module benchmark.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netsel/datamodel.hpp"
#include "netsel/detail/parallel.hpp"
#include "netsel/netreg.hpp"
#include "netsel/relevance.hpp"
#include "netsel/scones.hpp"

namespace netsel {

// ---------------------------------------------------------------------------
// Stability

namespace detail {

inline std::size_t intersection_size(std::vector<Index> a, std::vector<Index> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<Index> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  return common.size();
}

inline std::size_t unique_size(std::vector<Index> a) {
  std::sort(a.begin(), a.end());
  return static_cast<std::size_t>(std::unique(a.begin(), a.end()) - a.begin());
}

}  // namespace detail

/// Mean pairwise consistency (r - k^2/m) / (k - k^2/m) of equal-size sets.
inline double kuncheva_index(const std::vector<std::vector<Index>>& sets, Index m) {
  if (sets.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "need at least two sets");
  }
  const std::size_t k = detail::unique_size(sets.front());
  for (const auto& s : sets) {
    if (detail::unique_size(s) != k) {
      throw Error(ErrorKind::invalid_argument, "sets differ in size");
    }
    for (const Index p : s) {
      if (p < 0 || p >= m) throw Error(ErrorKind::invalid_argument, "index out of range");
    }
  }
  if (k == 0 || static_cast<Index>(k) == m) {
    throw Error(ErrorKind::invalid_argument,
                "consistency index undefined for empty or complete sets");
  }
  const double kk = static_cast<double>(k);
  const double expected = kk * kk / static_cast<double>(m);
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      const double r = static_cast<double>(detail::intersection_size(sets[a], sets[b]));
      total += (r - expected) / (kk - expected);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

struct Stability {
  double jaccard = 0.0;             // mean pairwise |A n B| / |A u B|
  std::optional<double> kuncheva;   // only when all sizes agree and 0 < k < m
  bool all_empty = false;           // jaccard is then defined as 0
};

inline Stability stability_across_folds(const std::vector<std::vector<Index>>& sets,
                                        Index m) {
  if (sets.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "need at least two sets");
  }
  Stability out;
  out.all_empty = std::all_of(sets.begin(), sets.end(),
                              [](const auto& s) { return s.empty(); });
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      const double inter = static_cast<double>(detail::intersection_size(sets[a], sets[b]));
      const double uni = static_cast<double>(detail::unique_size(sets[a]) +
                                             detail::unique_size(sets[b])) - inter;
      total += uni > 0.0 ? inter / uni : 0.0;
      ++pairs;
    }
  }
  out.jaccard = total / static_cast<double>(pairs);
  const std::size_t k = detail::unique_size(sets.front());
  const bool same = std::all_of(sets.begin(), sets.end(), [&](const auto& s) {
    return detail::unique_size(s) == k;
  });
  if (same && k > 0 && static_cast<Index>(k) < m) out.kuncheva = kuncheva_index(sets, m);
  return out;
}

// ---------------------------------------------------------------------------
// Grids

using GridPoint = std::map<std::string, double>;

/// "log:low:high:count" (log-spaced, both ends included) or "v1,v2,...".
/// Returned sorted ascending.
inline std::vector<double> parse_grid_values(const std::string& text) {
  std::vector<double> out;
  const auto number = [&](const std::string& s) {
    const auto v = detail::try_parse_double(s);
    if (!v || !std::isfinite(*v) || *v < 0.0) {
      throw Error(ErrorKind::invalid_argument,
                  "grid value '" + s + "' must be a finite number >= 0");
    }
    return *v;
  };
  if (text.rfind("log:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream in(text.substr(4));
    for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
    if (parts.size() != 3) {
      throw Error(ErrorKind::invalid_argument, "expected log:low:high:count");
    }
    const double low = number(parts[0]), high = number(parts[1]);
    const auto count = detail::try_parse_int(parts[2]);
    if (!count || *count < 1 || !(low > 0.0) || high < low) {
      throw Error(ErrorKind::invalid_argument,
                  "log grid needs 0 < low <= high and count >= 1");
    }
    for (long long k = 0; k < *count; ++k) {
      const double f = *count == 1 ? 0.0 : static_cast<double>(k) / (*count - 1);
      out.push_back(low * std::pow(high / low, f));
    }
  } else {
    std::stringstream in(text);
    for (std::string part; std::getline(in, part, ',');) out.push_back(number(part));
  }
  if (out.empty()) throw Error(ErrorKind::invalid_argument, "empty grid");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// `count` log-spaced values over [center * 1e-2, center * 1e2].
inline std::vector<double> log_grid_around(double center, std::size_t count = 7) {
  if (!(center > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "grid center must be > 0");
  }
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double f = count == 1 ? 0.5 : static_cast<double>(k) / (count - 1);
    out[k] = center * std::pow(10.0, -2.0 + 4.0 * f);
  }
  return out;
}

struct GridSpec {
  std::vector<std::pair<std::string, std::vector<double>>> axes;

  GridSpec& add(std::string name, std::vector<double> values) {
    if (values.empty()) throw Error(ErrorKind::invalid_argument, "empty grid axis");
    for (const double v : values) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::invalid_argument, "grid values must be finite and >= 0");
      }
    }
    std::sort(values.begin(), values.end());
    axes.emplace_back(std::move(name), std::move(values));
    return *this;
  }

  /// Cartesian product; the last axis varies fastest.
  std::vector<GridPoint> points() const {
    std::vector<GridPoint> out{GridPoint{}};
    for (const auto& [name, values] : axes) {
      std::vector<GridPoint> next;
      for (const auto& p : out) {
        for (const double v : values) {
          auto q = p;
          q[name] = v;
          next.push_back(std::move(q));
        }
      }
      out = std::move(next);
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Selectors: map training data and a grid point to one selection per task

using Selector = std::function<std::vector<std::vector<Index>>(
    const std::vector<RegressionTask>&, const GridPoint&)>;

namespace detail {

inline double param(const GridPoint& p, const std::string& name, double fallback) {
  const auto it = p.find(name);
  return it == p.end() ? fallback : it->second;
}

inline RegressionTask centered(const RegressionTask& t) {
  RegressionTask c;
  c.x = t.x.rowwise() - t.x.colwise().mean();
  c.y = t.y.array() - t.y.mean();
  return c;
}

}  // namespace detail

/// SConES on linear SKAT relevance of each training fold. With several tasks
/// and several networks this is Multi-SConES; grid names eta, lambda, mu.
inline Selector scones_selector(std::vector<WeightedNetwork> networks,
                                bool normalize = false) {
  return [networks = std::move(networks), normalize](
             const std::vector<RegressionTask>& tasks, const GridPoint& p) {
    const SconesParams params{detail::param(p, "eta", 0.0),
                              detail::param(p, "lambda", 0.0),
                              detail::param(p, "mu", 0.0)};
    if (tasks.size() == 1) {
      const auto c = skat_linear_score(tasks[0].x, tasks[0].y, normalize);
      return std::vector<std::vector<Index>>{
          scones_select(c, params, networks.front()).selected};
    }
    if (networks.size() != tasks.size()) {
      throw Error(ErrorKind::dimension_mismatch, "need one network per task");
    }
    std::vector<RelevanceVector> c;
    for (const auto& t : tasks) c.push_back(skat_linear_score(t.x, t.y, normalize));
    auto sol = multi_scones_select(c, params, networks);
    std::vector<std::vector<Index>> out;
    for (auto& s : sol.tasks) out.push_back(std::move(s.selected));
    return out;
  };
}

/// Support of a penalized regression fit on centered training data. Grid
/// names lambda, eta, eta1, eta2 override the fields of `base`.
inline Selector regression_selector(PenaltySpec base, SolverConfig cfg = {}) {
  return [base = std::move(base), cfg](const std::vector<RegressionTask>& tasks,
                                       const GridPoint& p) {
    PenaltySpec spec = base;
    spec.lambda = detail::param(p, "lambda", spec.lambda);
    spec.eta = detail::param(p, "eta", spec.eta);
    spec.eta1 = detail::param(p, "eta1", spec.eta1);
    spec.eta2 = detail::param(p, "eta2", spec.eta2);
    std::vector<RegressionTask> c;
    for (const auto& t : tasks) c.push_back(detail::centered(t));
    std::vector<std::vector<Index>> out;
    if (spec.kind == PenaltyKind::mtlasso) {
      for (const auto& f : fit_mtlasso(c, spec.lambda, cfg)) out.push_back(support(f.beta));
      return out;
    }
    for (const auto& t : c) out.push_back(support(fit(t.x, t.y, spec, cfg).beta));
    return out;
  };
}

// ---------------------------------------------------------------------------
// Cross-validated grid search

enum class Criterion { stability, predictivity, product };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::stability: return "stability";
    case Criterion::predictivity: return "predictivity";
    case Criterion::product: return "product";
  }
  return "?";
}

inline Criterion parse_criterion(const std::string& s) {
  for (const auto c : {Criterion::stability, Criterion::predictivity, Criterion::product}) {
    if (s == to_string(c)) return c;
  }
  throw Error(ErrorKind::invalid_argument, "unknown criterion '" + s + "'");
}

struct CvOptions {
  std::size_t folds = 10;
  Criterion criterion = Criterion::product;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  double ridge = 1e-3;
};

struct CvPoint {
  GridPoint params;
  /// fold_selections[f][t]: selection of task t trained without fold f.
  std::vector<std::vector<std::vector<Index>>> fold_selections;
  Stability stability;
  double predictivity = 0.0;
  double mean_selected = 0.0;  // per task, averaged over folds
  bool admissible = false;
  double score = -std::numeric_limits<double>::infinity();
  bool chosen = false;
};

struct CvResult {
  std::vector<CvPoint> points;
  std::size_t chosen = 0;
  std::vector<std::vector<Index>> final_selection;  // refit on all samples
  CvOptions options;

  const CvPoint& best() const { return points[chosen]; }

  nlohmann::json to_json() const {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& p : points) {
      nlohmann::json row;
      row["params"] = p.params;
      row["stability_jaccard"] = p.stability.jaccard;
      row["stability_kuncheva"] =
          p.stability.kuncheva ? nlohmann::json(*p.stability.kuncheva) : nlohmann::json();
      row["all_folds_empty"] = p.stability.all_empty;
      row["predictivity"] = p.predictivity;
      row["mean_selected"] = p.mean_selected;
      row["admissible"] = p.admissible;
      row["score"] = p.admissible ? nlohmann::json(p.score) : nlohmann::json();
      row["chosen"] = p.chosen;
      table.push_back(std::move(row));
    }
    nlohmann::json j;
    j["grid"] = std::move(table);
    j["folds"] = options.folds;
    j["criterion"] = to_string(options.criterion);
    j["seed"] = options.seed;
    j["ridge"] = options.ridge;
    j["admissibility"] = "mean selection size strictly between 0 and the feature count";
    return j;
  }
};

/// Seeded shuffle; sample i of the permutation goes to fold i % folds.
inline std::vector<std::size_t> assign_folds(Index n, std::size_t folds,
                                             std::uint64_t seed) {
  if (folds < 2 || n < static_cast<Index>(2 * folds)) {
    throw Error(ErrorKind::invalid_argument,
                "cross-validation needs folds >= 2 and n >= 2 * folds");
  }
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (Index i = n - 1; i > 0; --i) {  // Fisher-Yates, portable across libraries
    std::uniform_int_distribution<Index> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  std::vector<std::size_t> fold(n);
  for (Index i = 0; i < n; ++i) fold[order[i]] = static_cast<std::size_t>(i) % folds;
  return fold;
}

/// Held-out R^2 of a ridge fit (with intercept) on the selected columns;
/// 0 for an empty selection.
inline double ridge_r2(const RegressionTask& train, const RegressionTask& test,
                       const std::vector<Index>& selected, double ridge) {
  if (selected.empty()) return 0.0;
  const Index k = static_cast<Index>(selected.size());
  Matrix xs(train.x.rows(), k), xt(test.x.rows(), k);
  for (Index j = 0; j < k; ++j) {
    xs.col(j) = train.x.col(selected[j]);
    xt.col(j) = test.x.col(selected[j]);
  }
  const Eigen::RowVectorXd mean = xs.colwise().mean();
  const double y_mean = train.y.mean();
  const Matrix xc = xs.rowwise() - mean;
  const Vector yc = train.y.array() - y_mean;
  Vector beta;
  if (k <= xc.rows()) {
    beta = (xc.transpose() * xc + ridge * Matrix::Identity(k, k)).ldlt().solve(xc.transpose() * yc);
  } else {  // dual form when columns outnumber rows
    const Vector a =
        (xc * xc.transpose() + ridge * Matrix::Identity(xc.rows(), xc.rows())).ldlt().solve(yc);
    beta = xc.transpose() * a;
  }
  const Vector pred = ((xt.rowwise() - mean) * beta).array() + y_mean;
  const double ss_res = (test.y - pred).squaredNorm();
  const double ss_tot = (test.y.array() - test.y.mean()).matrix().squaredNorm();
  if (ss_tot == 0.0) return 0.0;
  return 1.0 - ss_res / ss_tot;
}

namespace detail {

/// Higher score wins; ties go to higher predictivity, then higher stability,
/// then the smaller selection. Remaining ties keep grid order.
inline bool better(const CvPoint& a, const CvPoint& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.predictivity != b.predictivity) return a.predictivity > b.predictivity;
  if (a.stability.jaccard != b.stability.jaccard) {
    return a.stability.jaccard > b.stability.jaccard;
  }
  return a.mean_selected < b.mean_selected;
}

inline RegressionTask take_rows(const RegressionTask& t, const std::vector<Index>& rows) {
  RegressionTask out;
  out.x.resize(static_cast<Index>(rows.size()), t.x.cols());
  out.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Index>(i)) = t.x.row(rows[i]);
    out.y[static_cast<Index>(i)] = t.y[rows[i]];
  }
  return out;
}

}  // namespace detail

/// Runs `select` on every (grid point, training fold), scores each point by
/// selection stability across folds and held-out ridge R^2, and refits the
/// best admissible point on all samples. Points whose mean selection is
/// empty or every feature are not admissible.
inline CvResult cv_grid_search(const std::vector<RegressionTask>& tasks,
                               const Selector& select, const GridSpec& grid,
                               const CvOptions& options = {}) {
  if (tasks.empty()) throw Error(ErrorKind::invalid_argument, "no tasks");
  const Index m = tasks.front().x.cols();
  for (const auto& t : tasks) {
    detail::check_xy(t.x, t.y);
    if (t.x.cols() != m) {
      throw Error(ErrorKind::dimension_mismatch, "tasks differ in feature count");
    }
  }
  const std::size_t nf = options.folds;
  const std::size_t nt = tasks.size();

  // per fold: training and held-out data of every task
  std::vector<std::vector<RegressionTask>> train(nf), test(nf);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto fold = assign_folds(tasks[t].y.size(), nf, options.seed + t);
    for (std::size_t f = 0; f < nf; ++f) {
      std::vector<Index> in, out;
      for (Index i = 0; i < tasks[t].y.size(); ++i) (fold[i] == f ? out : in).push_back(i);
      train[f].push_back(detail::take_rows(tasks[t], in));
      test[f].push_back(detail::take_rows(tasks[t], out));
    }
  }

  CvResult result;
  result.options = options;
  const auto points = grid.points();
  result.points.resize(points.size());
  std::vector<std::vector<std::vector<Index>>> selections(points.size() * nf);
  std::vector<double> r2(points.size() * nf, 0.0);
  detail::parallel_for(
      points.size() * nf,
      [&](std::size_t job) {
        const std::size_t point = job / nf, f = job % nf;
        auto sel = select(train[f], points[point]);
        if (sel.size() != nt) {
          throw Error(ErrorKind::dimension_mismatch, "selector returned wrong task count");
        }
        double total = 0.0;
        for (std::size_t t = 0; t < nt; ++t) {
          total += ridge_r2(train[f][t], test[f][t], sel[t], options.ridge);
        }
        r2[job] = total / static_cast<double>(nt);
        selections[job] = std::move(sel);
      },
      options.threads);

  bool any = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    auto& p = result.points[k];
    p.params = points[k];
    std::vector<std::vector<Index>> flat(nf);  // task t feature j -> t * m + j
    double size = 0.0, pred = 0.0;
    for (std::size_t f = 0; f < nf; ++f) {
      auto& sel = selections[k * nf + f];
      for (std::size_t t = 0; t < nt; ++t) {
        size += static_cast<double>(sel[t].size());
        for (const Index j : sel[t]) flat[f].push_back(static_cast<Index>(t) * m + j);
      }
      pred += r2[k * nf + f];
      p.fold_selections.push_back(std::move(sel));
    }
    p.stability = stability_across_folds(flat, m * static_cast<Index>(nt));
    p.predictivity = pred / static_cast<double>(nf);
    p.mean_selected = size / static_cast<double>(nf * nt);
    p.admissible = p.mean_selected > 0.0 && p.mean_selected < static_cast<double>(m);
    if (!p.admissible) continue;
    switch (options.criterion) {
      case Criterion::stability: p.score = p.stability.jaccard; break;
      case Criterion::predictivity: p.score = p.predictivity; break;
      case Criterion::product:
        p.score = p.stability.jaccard * std::max(p.predictivity, 0.0);
        break;
    }
    if (!any || detail::better(p, result.points[result.chosen])) {
      result.chosen = k;
      any = true;
    }
  }
  if (!any) {
    throw Error(ErrorKind::no_admissible_model,
                "no admissible model: every grid point selects nothing or everything");
  }
  result.points[result.chosen].chosen = true;
  result.final_selection = select(tasks, points[result.chosen]);
  return result;
}

/// Default SConES grid: 7 log-spaced eta and lambda values around the median
/// positive relevance on all samples (and mu too for several tasks).
inline GridSpec default_scones_grid(const std::vector<RegressionTask>& tasks,
                                    bool normalize = false) {
  std::vector<double> positive;
  for (const auto& t : tasks) {
    const auto c = skat_linear_score(t.x, t.y, normalize);
    for (Index p = 0; p < c.size(); ++p) {
      if (c[p] > 0.0) positive.push_back(c[p]);
    }
  }
  if (positive.empty()) {
    throw Error(ErrorKind::invalid_argument, "no feature has positive relevance");
  }
  const auto mid = positive.begin() + static_cast<std::ptrdiff_t>(positive.size() / 2);
  std::nth_element(positive.begin(), mid, positive.end());
  const double q = *mid;
  GridSpec grid;
  grid.add("eta", log_grid_around(q)).add("lambda", log_grid_around(q));
  if (tasks.size() > 1) grid.add("mu", {q * 1e-2, q * 1e-1, q});
  return grid;
}

/// Default regression grid: 7 log-spaced values of the path parameter from
/// lambda_max * 1e-2 up to lambda_max, where the fit first becomes zero.
inline GridSpec default_regression_grid(const std::vector<RegressionTask>& tasks,
                                        const PenaltySpec& spec) {
  double top = 0.0;
  if (spec.kind == PenaltyKind::mtlasso) {
    std::vector<RegressionTask> c;
    for (const auto& t : tasks) c.push_back(detail::centered(t));
    top = mtlasso_lambda_max(c);
  } else {
    for (const auto& t : tasks) {
      const auto c = detail::centered(t);
      top = std::max(top, lambda_max(c.x, c.y, spec));
    }
  }
  if (!(top > 0.0)) throw Error(ErrorKind::invalid_argument, "zero-solution threshold is 0");
  auto values = log_path(top, 7, 1e-2);
  std::reverse(values.begin(), values.end());
  GridSpec grid;
  grid.add(spec.kind == PenaltyKind::grace ? "eta1" : "lambda", std::move(values));
  return grid;
}

// ---------------------------------------------------------------------------
// Synthetic benchmark

enum class GraphKind { grid, scale_free };

inline GraphKind parse_graph_kind(const std::string& s) {
  if (s == "grid") return GraphKind::grid;
  if (s == "scale-free") return GraphKind::scale_free;
  throw Error(ErrorKind::invalid_argument, "unknown graph kind '" + s + "'");
}

/// Nodes on a row-major lattice ceil(sqrt(m)) wide with 4-neighbor edges.
inline std::vector<Edge> grid_edges(Index m) {
  const Index width = std::max<Index>(1, static_cast<Index>(std::ceil(std::sqrt(double(m)))));
  std::vector<Edge> edges;
  for (Index p = 0; p < m; ++p) {
    if ((p + 1) % width != 0 && p + 1 < m) edges.push_back({p, p + 1, 1.0});
    if (p + width < m) edges.push_back({p, p + width, 1.0});
  }
  return edges;
}

/// Preferential attachment: each new node links to `links` distinct earlier
/// nodes chosen with probability proportional to degree.
inline std::vector<Edge> scale_free_edges(Index m, std::mt19937_64& rng, Index links = 2) {
  std::vector<Edge> edges;
  std::vector<Index> ends;  // each node once per incident edge
  for (Index p = 1; p < m; ++p) {
    const Index want = std::min(links, p);
    std::vector<Index> chosen;
    while (static_cast<Index>(chosen.size()) < want) {
      Index q;
      if (ends.empty()) {
        q = std::uniform_int_distribution<Index>(0, p - 1)(rng);
      } else {
        q = ends[std::uniform_int_distribution<std::size_t>(0, ends.size() - 1)(rng)];
      }
      if (std::find(chosen.begin(), chosen.end(), q) == chosen.end()) chosen.push_back(q);
    }
    for (const Index q : chosen) {
      edges.push_back({q, p, 1.0});
      ends.push_back(q);
      ends.push_back(p);
    }
  }
  return edges;
}

struct SyntheticData {
  FeatureMatrix x;
  Phenotype y;
  WeightedNetwork network;
  std::vector<Index> planted;  // ascending
};

/// Standard-normal features, a network of the given kind, a connected planted
/// set of `module_size` features grown by BFS from a random node, and
/// y = effect * sum of planted columns + standard-normal noise.
inline SyntheticData generate_synthetic(Index n, Index m, Index module_size, double effect,
                                        GraphKind kind, std::uint64_t seed) {
  if (n < 2 || m < 1 || module_size < 1 || module_size > m || !(effect >= 0.0)) {
    throw Error(ErrorKind::invalid_argument,
                "need n >= 2, 1 <= module size <= m and effect >= 0");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::string> features(m), samples(n);
  for (Index p = 0; p < m; ++p) features[p] = "f" + std::to_string(p + 1);
  for (Index i = 0; i < n; ++i) samples[i] = "s" + std::to_string(i + 1);
  auto edges = kind == GraphKind::grid ? grid_edges(m) : scale_free_edges(m, rng);
  WeightedNetwork network(features, std::move(edges));

  const auto components = connected_components(network);
  const bool possible = std::any_of(components.begin(), components.end(), [&](const auto& c) {
    return static_cast<Index>(c.size()) >= module_size;
  });
  if (!possible) {
    throw Error(ErrorKind::invalid_argument, "graph has no connected subgraph of that size");
  }
  std::vector<Index> planted;
  std::uniform_int_distribution<Index> start_node(0, m - 1);
  while (static_cast<Index>(planted.size()) < module_size) {
    planted.clear();
    std::vector<char> seen(m, 0);
    std::queue<Index> frontier;
    const Index start = start_node(rng);
    frontier.push(start);
    seen[start] = 1;
    while (!frontier.empty() && static_cast<Index>(planted.size()) < module_size) {
      const Index u = frontier.front();
      frontier.pop();
      planted.push_back(u);
      for (const auto& nb : network.neighbors(u)) {
        if (!seen[nb.node]) {
          seen[nb.node] = 1;
          frontier.push(nb.node);
        }
      }
    }
  }
  std::sort(planted.begin(), planted.end());

  std::normal_distribution<double> normal;
  Matrix x(n, m);
  for (Index p = 0; p < m; ++p) {
    for (Index i = 0; i < n; ++i) x(i, p) = normal(rng);
  }
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    double v = normal(rng);
    for (const Index p : planted) v += effect * x(i, p);
    y[i] = v;
  }
  return {FeatureMatrix(samples, features, std::move(x)), Phenotype(samples, std::move(y)),
          std::move(network), std::move(planted)};
}

/// F1 of `selected` against `truth`; 0 when both are empty.
inline double f1_score(const std::vector<Index>& selected, const std::vector<Index>& truth) {
  const double hit = static_cast<double>(detail::intersection_size(selected, truth));
  const double denom = static_cast<double>(detail::unique_size(selected) +
                                           detail::unique_size(truth));
  return denom > 0.0 ? 2.0 * hit / denom : 0.0;
}

}  // namespace netsel
