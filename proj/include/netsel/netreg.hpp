#pragma once

// Network-regularized least squares.
//
// All single-task losses are the unscaled ||X b - y||^2; the multi-task loss
// weights task t by 1/n_t. Penalties:
//   lasso   lambda |b|_1
//   grace   eta1 |b|_1 + eta2 b'Lb
//   gfl     lambda (sum_{p~q} w_pq |b_p - b_q| + eta |b|_1)
//   ogl     lambda * min { sum_u |v_u|_2 : sum_u v_u = b, supp v_u in G_u }
//   gggl    lambda sum_u sqrt|G_u| |b_Gu|_2 + eta1 |b|_1
//             + (eta2 / 2) sum_{G_u~G_v, p in G_u, q in G_v} W_uv (b_p - b_q)^2
//   mtlasso lambda sum_p |(B_p1, ..., B_pT)|_2
//
// Solvers: coordinate descent (lasso, grace), ADMM (gfl) and monotone FISTA
// with restarts (ogl, gggl, mtlasso).

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "netsel/datamodel.hpp"
#include "netsel/detail/parallel.hpp"
#include "netsel/maxflow.hpp"
#include "netsel/netgraph.hpp"

namespace netsel {

using Groups = std::vector<std::vector<Index>>;

enum class PenaltyKind { lasso, grace, gfl, ogl, gggl, mtlasso };

inline const char* to_string(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::lasso: return "lasso";
    case PenaltyKind::grace: return "grace";
    case PenaltyKind::gfl: return "gfl";
    case PenaltyKind::ogl: return "ogl";
    case PenaltyKind::gggl: return "gggl";
    case PenaltyKind::mtlasso: return "mtlasso";
  }
  return "?";
}

inline PenaltyKind parse_penalty_kind(const std::string& s) {
  for (const auto k : {PenaltyKind::lasso, PenaltyKind::grace, PenaltyKind::gfl,
                       PenaltyKind::ogl, PenaltyKind::gggl, PenaltyKind::mtlasso}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorKind::invalid_argument, "unknown penalty '" + s + "'");
}

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::lasso;
  double lambda = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta = 0.0;
  std::optional<WeightedNetwork> network;
  std::optional<Groups> groups;
  std::optional<WeightedNetwork> gene_network;  // nodes are groups

  void validate(Index m) const {
    for (const double v : {lambda, eta1, eta2, eta}) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::invalid_argument,
                    "penalty weights must be finite and >= 0");
      }
    }
    const auto need = [&](bool ok, const char* what) {
      if (!ok) {
        throw Error(ErrorKind::invalid_argument,
                    std::string(to_string(kind)) + " needs " + what);
      }
    };
    switch (kind) {
      case PenaltyKind::grace:
      case PenaltyKind::gfl:
        need(network.has_value(), "a feature network");
        if (network->node_count() != m) {
          throw Error(ErrorKind::dimension_mismatch,
                      "network node count != feature count");
        }
        break;
      case PenaltyKind::ogl:
        need(groups.has_value(), "groups");
        break;
      case PenaltyKind::gggl:
        need(groups.has_value(), "groups");
        need(gene_network.has_value(), "a gene network");
        break;
      default:
        break;
    }
  }
};

struct SolverConfig {
  Index max_iters = 10000;
  double tol = 1e-8;        // relative objective change
  double admm_rho = 1.0;
  std::uint64_t seed = 0;
  double kkt_tol = 1e-9;    // optimality residual, relative to |grad at 0|
  double admm_tol = 1e-7;   // absolute and relative ADMM residual tolerance
  bool record_trace = false;

  void validate() const {
    if (!(tol > 0.0) || max_iters < 1 || !(admm_rho > 0.0) || !(kkt_tol > 0.0) ||
        !(admm_tol > 0.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "solver config needs tol, admm_rho, kkt_tol, admm_tol > 0 "
                  "and max_iters >= 1");
    }
  }
};

struct RegressionTask {
  Matrix x;
  Vector y;
};

namespace detail {

inline double soft(double v, double t) {
  return v > t ? v - t : (v < -t ? v + t : 0.0);
}

inline void check_xy(const Matrix& x, const Vector& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorKind::dimension_mismatch, "X rows != y length");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw Error(ErrorKind::non_finite, "X and y must be finite");
  }
}

inline void check_beta(const Matrix& x, const Vector& beta) {
  if (x.cols() != beta.size()) {
    throw Error(ErrorKind::dimension_mismatch, "beta length != X columns");
  }
}

/// Validates groups over m features and appends a singleton for each feature
/// no group covers.
inline Groups complete_groups(const Groups& groups, Index m, bool disjoint) {
  std::vector<int> cover(m, 0);
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorKind::invalid_argument, "empty group");
    std::vector<Index> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::invalid_argument, "feature repeated within a group");
    }
    for (const Index p : g) {
      if (p < 0 || p >= m) {
        throw Error(ErrorKind::invalid_argument, "group member out of range");
      }
      if (disjoint && cover[p] > 0) {
        throw Error(ErrorKind::invalid_argument, "groups overlap");
      }
      ++cover[p];
    }
  }
  Groups out = groups;
  for (Index p = 0; p < m; ++p) {
    if (cover[p] == 0) out.push_back({p});
  }
  return out;
}

/// Largest eigenvalue of the (constant) Hessian of a quadratic, from
/// products hv(v) = H v.
template <class HessianProduct>
double power_iteration(Index dim, HessianProduct&& hv, std::uint64_t seed,
                       int iterations = 50) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = normal(rng);
  v.normalize();
  double estimate = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Vector w = hv(v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    estimate = norm;
    v = w / norm;
  }
  return estimate;
}

/// Smooth part + nonsmooth part split for monotone FISTA.
///   smooth(x, grad) -> f(x), writes grad f(x)
///   penalty(x)      -> h(x)
///   prox(v, step)   -> argmin_x h(x) + |x - v|^2 / (2 step)
struct FistaResult {
  Vector x;
  double objective = 0.0;
  Index iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

template <class Smooth, class Penalty, class Prox>
FistaResult fista(Vector x, Smooth&& smooth, Penalty&& penalty, Prox&& prox,
                  const SolverConfig& cfg) {
  const Index dim = x.size();
  Vector grad0(dim), grad(dim);
  smooth(Vector::Zero(dim), grad0);
  const double scale = std::max(1.0, grad0.lpNorm<Eigen::Infinity>());
  const double curvature = power_iteration(
      dim,
      [&](const Vector& v) {
        smooth(v, grad);
        return Vector(grad - grad0);
      },
      cfg.seed);
  double lip = std::max(curvature, 1e-12) / 0.99;

  FistaResult out;
  double fx = smooth(x, grad) + penalty(x);
  Vector y = x, gy(dim), gz(dim), z(dim);
  double t = 1.0;
  for (Index it = 1; it <= cfg.max_iters; ++it) {
    const double fy = smooth(y, gy);
    double fz = 0.0;
    Vector d;
    for (;;) {
      z = prox(y - gy / lip, 1.0 / lip);
      fz = smooth(z, gz);
      d = z - y;
      const double model = fy + gy.dot(d) + 0.5 * lip * d.squaredNorm();
      if (fz <= model + 1e-12 * std::abs(fy)) break;
      lip *= 2.0;
    }
    const double cz = fz + penalty(z);
    const double mapping = lip * d.lpNorm<Eigen::Infinity>();
    const double before = fx;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (cz <= fx) {
      const Vector step = z - x;
      x = z;
      fx = cz;
      y = z + ((t - 1.0) / t_next) * step;
      t = t_next;
    } else {
      y = x;  // restart momentum from the last accepted point
      t = 1.0;
    }
    out.iterations = it;
    if (cfg.record_trace) out.trace.push_back(fx);
    const double change = std::abs(before - fx) / std::max(std::abs(before), 1e-300);
    if (change < cfg.tol && mapping <= cfg.kkt_tol * scale) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  out.objective = fx;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Smooth parts and their gradients

/// ||X b - y||^2, gradient 2 X'(X b - y).
inline double least_squares(const Matrix& x, const Vector& y, const Vector& beta,
                            Vector* grad = nullptr) {
  const Vector r = x * beta - y;
  if (grad) *grad = 2.0 * (x.transpose() * r);
  return r.squaredNorm();
}

/// ||X b - y||^2 + eta2 b'Lb.
inline double grace_smooth(const Matrix& x, const Vector& y, const Vector& beta,
                           double eta2, const WeightedNetwork& g,
                           Vector* grad = nullptr) {
  double value = least_squares(x, y, beta, grad);
  value += eta2 * laplacian_quadratic(beta, g);
  if (grad) *grad += 2.0 * eta2 * laplacian_apply(g, beta);
  return value;
}

/// Sum over gene-network edges (u, v) of W_uv sum_{p in G_u, q in G_v}
/// (b_p - b_q)^2, i.e. half the ordered-pair sum. Groups must be disjoint.
inline double group_graph_quadratic(const Vector& beta, const Groups& groups,
                                    const WeightedNetwork& gene_net,
                                    Vector* grad = nullptr) {
  if (gene_net.node_count() != static_cast<Index>(groups.size())) {
    throw Error(ErrorKind::dimension_mismatch,
                "gene network node count != group count");
  }
  const std::size_t r = groups.size();
  std::vector<double> sum(r, 0.0), sumsq(r, 0.0), size(r, 0.0);
  for (std::size_t u = 0; u < r; ++u) {
    size[u] = static_cast<double>(groups[u].size());
    for (const Index p : groups[u]) {
      sum[u] += beta[p];
      sumsq[u] += beta[p] * beta[p];
    }
  }
  double value = 0.0;
  for (const auto& e : gene_net.edges()) {
    value += e.w * (size[e.v] * sumsq[e.u] + size[e.u] * sumsq[e.v] -
                    2.0 * sum[e.u] * sum[e.v]);
  }
  if (grad) {
    grad->setZero(beta.size());
    // d/db_p for p in G_u: 2 sum_{v~u} W_uv (|G_v| b_p - S_v)
    std::vector<double> weighted_size(r, 0.0), weighted_sum(r, 0.0);
    for (const auto& e : gene_net.edges()) {
      weighted_size[e.u] += e.w * size[e.v];
      weighted_sum[e.u] += e.w * sum[e.v];
      weighted_size[e.v] += e.w * size[e.u];
      weighted_sum[e.v] += e.w * sum[e.u];
    }
    for (std::size_t u = 0; u < r; ++u) {
      for (const Index p : groups[u]) {
        (*grad)[p] = 2.0 * (weighted_size[u] * beta[p] - weighted_sum[u]);
      }
    }
  }
  return std::max(value, 0.0);
}

/// ||X b - y||^2 + eta2 * group_graph_quadratic.
inline double gggl_smooth(const Matrix& x, const Vector& y, const Vector& beta,
                          double eta2, const Groups& groups,
                          const WeightedNetwork& gene_net, Vector* grad = nullptr) {
  double value = least_squares(x, y, beta, grad);
  Vector g;
  value += eta2 * group_graph_quadratic(beta, groups, gene_net, grad ? &g : nullptr);
  if (grad) *grad += eta2 * g;
  return value;
}

/// sum_t (1/n_t) ||X_t b_t - y_t||^2 with B stored m x T.
inline double mtlasso_smooth(const std::vector<RegressionTask>& tasks,
                             const Matrix& coef, Matrix* grad = nullptr) {
  if (coef.cols() != static_cast<Index>(tasks.size())) {
    throw Error(ErrorKind::dimension_mismatch, "coefficient columns != task count");
  }
  if (grad) grad->resize(coef.rows(), coef.cols());
  double value = 0.0;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& task = tasks[t];
    const double inv_n = 1.0 / static_cast<double>(task.y.size());
    const Vector r = task.x * coef.col(t) - task.y;
    value += inv_n * r.squaredNorm();
    if (grad) grad->col(t) = 2.0 * inv_n * (task.x.transpose() * r);
  }
  return value;
}

// ---------------------------------------------------------------------------
// Penalties and objectives

namespace detail {

inline double gfl_penalty(const Vector& beta, double lambda, double eta,
                          const WeightedNetwork& g) {
  double fused = 0.0;
  for (const auto& e : g.edges()) fused += e.w * std::abs(beta[e.u] - beta[e.v]);
  return lambda * (fused + eta * beta.lpNorm<1>());
}

inline double group_norm_sum(const Vector& beta, const Groups& groups) {
  double total = 0.0;
  for (const auto& g : groups) {
    double sq = 0.0;
    for (const Index p : g) sq += beta[p] * beta[p];
    total += std::sqrt(static_cast<double>(g.size())) * std::sqrt(sq);
  }
  return total;
}

}  // namespace detail

/// min sum_u |v_u|_2 over decompositions sum_u v_u = beta with supp v_u in
/// G_u (features outside every group act as singletons). Solved by ADMM on
/// v = w with w restricted to the affine set of exact decompositions.
inline double overlapping_group_norm(const Vector& beta, const Groups& groups,
                                     Index max_iters = 20000, double tol = 1e-13) {
  const Groups all = detail::complete_groups(groups, beta.size(), false);
  std::vector<Index> offset(all.size() + 1, 0);
  for (std::size_t u = 0; u < all.size(); ++u) {
    offset[u + 1] = offset[u] + static_cast<Index>(all[u].size());
  }
  const Index len = offset.back();
  std::vector<double> cover(beta.size(), 0.0);
  for (const auto& g : all) {
    for (const Index p : g) cover[p] += 1.0;
  }
  const auto project = [&](const Vector& v) {
    Vector sums = Vector::Zero(beta.size());
    for (std::size_t u = 0; u < all.size(); ++u) {
      for (std::size_t k = 0; k < all[u].size(); ++k) sums[all[u][k]] += v[offset[u] + k];
    }
    Vector w = v;
    for (std::size_t u = 0; u < all.size(); ++u) {
      for (std::size_t k = 0; k < all[u].size(); ++k) {
        const Index p = all[u][k];
        w[offset[u] + k] += (beta[p] - sums[p]) / cover[p];
      }
    }
    return w;
  };
  const auto norms = [&](const Vector& v) {
    double total = 0.0;
    for (std::size_t u = 0; u < all.size(); ++u) {
      total += v.segment(offset[u], offset[u + 1] - offset[u]).norm();
    }
    return total;
  };
  const double scale = std::max(beta.norm(), 1e-300);
  const double rho = 1.0 / scale;
  Vector w = project(Vector::Zero(len)), v = w, dual = Vector::Zero(len);
  double best = norms(w);
  for (Index it = 0; it < max_iters; ++it) {
    const Vector target = w - dual;
    for (std::size_t u = 0; u < all.size(); ++u) {
      const Index n = offset[u + 1] - offset[u];
      const auto block = target.segment(offset[u], n);
      const double norm = block.norm();
      const double keep = norm > 1.0 / rho ? 1.0 - 1.0 / (rho * norm) : 0.0;
      v.segment(offset[u], n) = keep * block;
    }
    const Vector w_old = w;
    w = project(v + dual);
    dual += v - w;
    best = std::min(best, norms(w));
    const double primal = (v - w).norm(), change = rho * (w - w_old).norm();
    if (primal <= tol * scale && change <= tol) break;
  }
  return best;
}

/// ||X b - y||^2 plus the penalty of `spec`.
inline double objective(const Matrix& x, const Vector& y, const Vector& beta,
                        const PenaltySpec& spec) {
  detail::check_xy(x, y);
  detail::check_beta(x, beta);
  spec.validate(beta.size());
  const double loss = least_squares(x, y, beta);
  switch (spec.kind) {
    case PenaltyKind::lasso:
      return loss + spec.lambda * beta.lpNorm<1>();
    case PenaltyKind::grace:
      return loss + spec.eta1 * beta.lpNorm<1>() +
             spec.eta2 * laplacian_quadratic(beta, *spec.network);
    case PenaltyKind::gfl:
      return loss + detail::gfl_penalty(beta, spec.lambda, spec.eta, *spec.network);
    case PenaltyKind::ogl:
      return loss + spec.lambda * overlapping_group_norm(beta, *spec.groups);
    case PenaltyKind::gggl: {
      const Groups all = detail::complete_groups(*spec.groups, beta.size(), true);
      const Groups named(all.begin(), all.begin() + spec.groups->size());
      return loss + spec.lambda * detail::group_norm_sum(beta, all) +
             spec.eta1 * beta.lpNorm<1>() +
             spec.eta2 * group_graph_quadratic(beta, named, *spec.gene_network);
    }
    case PenaltyKind::mtlasso:
      throw Error(ErrorKind::invalid_argument,
                  "mtlasso objective takes a list of tasks");
  }
  return loss;
}

/// sum_t (1/n_t)||X_t b_t - y_t||^2 + lambda sum_p |B_p.|_2.
inline double mtlasso_objective(const std::vector<RegressionTask>& tasks,
                                const Matrix& coef, double lambda) {
  return mtlasso_smooth(tasks, coef) + lambda * coef.rowwise().norm().sum();
}

// ---------------------------------------------------------------------------
// Coordinate descent: lasso and grace

namespace detail {

inline CoefficientVector coordinate_descent(const Matrix& x, const Vector& y,
                                            double l1, double eta2,
                                            const WeightedNetwork* g,
                                            const SolverConfig& cfg,
                                            const Vector* warm) {
  cfg.validate();
  check_xy(x, y);
  const Index m = x.cols();
  if (g && g->node_count() != m) {
    throw Error(ErrorKind::dimension_mismatch, "network node count != feature count");
  }
  if (!(l1 >= 0.0) || !(eta2 >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "penalty weights must be >= 0");
  }
  const bool graph = g && eta2 > 0.0;
  const Vector col_sq = x.colwise().squaredNorm();
  Vector degree = Vector::Zero(m);
  if (graph) {
    for (const auto& e : g->edges()) {
      degree[e.u] += e.w;
      degree[e.v] += e.w;
    }
  }
  const auto value = [&](const Vector& b, const Vector& r) {
    double v = r.squaredNorm() + l1 * b.lpNorm<1>();
    if (graph) v += eta2 * laplacian_quadratic(b, *g);
    return v;
  };

  if (warm) check_beta(x, *warm);
  const double top = (2.0 * (x.transpose() * y)).lpNorm<Eigen::Infinity>();
  if (l1 >= top) {
    // zero satisfies the optimality conditions exactly
    CoefficientVector zero;
    zero.beta = Vector::Zero(m);
    zero.objective_value = y.squaredNorm();
    zero.converged = true;
    if (cfg.record_trace) zero.trace.push_back(zero.objective_value);
    return zero;
  }
  Vector beta = warm ? *warm : Vector::Zero(m);
  Vector r = y - x * beta;
  const double scale = std::max(1.0, top);

  // one exact coordinate minimization; returns |change|
  const auto update = [&](Index p) {
    const double denom = col_sq[p] + (graph ? eta2 * degree[p] : 0.0);
    const double old = beta[p];
    double rho = x.col(p).dot(r) + col_sq[p] * old;
    if (graph) {
      for (const auto& nb : g->neighbors(p)) rho += eta2 * nb.w * beta[nb.node];
    }
    const double next = denom > 0.0 ? soft(rho, 0.5 * l1) / denom : 0.0;
    if (next != old) {
      r.noalias() -= (next - old) * x.col(p);
      beta[p] = next;
    }
    return std::abs(next - old) * std::sqrt(std::max(denom, 0.0));
  };

  CoefficientVector out;
  double current = value(beta, r);
  std::vector<Index> active;
  for (Index it = 1; it <= cfg.max_iters; ++it) {
    for (Index p = 0; p < m; ++p) update(p);
    // settle the active set before the next full sweep
    active.clear();
    for (Index p = 0; p < m; ++p) {
      if (beta[p] != 0.0) active.push_back(p);
    }
    for (int pass = 0; pass < 1000 && !active.empty(); ++pass) {
      double largest = 0.0;
      for (const Index p : active) largest = std::max(largest, update(p));
      if (largest <= 1e-3 * cfg.kkt_tol * scale) break;
    }
    r = y - x * beta;
    const double next = value(beta, r);
    const double change = std::abs(current - next) / std::max(std::abs(current), 1e-300);
    current = next;
    out.iterations = it;
    if (cfg.record_trace) out.trace.push_back(current);

    Vector grad = -2.0 * (x.transpose() * r);
    if (graph) grad += 2.0 * eta2 * laplacian_apply(*g, beta);
    double residual = 0.0;
    for (Index p = 0; p < m; ++p) {
      const double e = beta[p] != 0.0
                           ? std::abs(grad[p] + l1 * (beta[p] > 0 ? 1.0 : -1.0))
                           : std::max(std::abs(grad[p]) - l1, 0.0);
      residual = std::max(residual, e);
    }
    if (change < cfg.tol && residual <= cfg.kkt_tol * scale) {
      out.converged = true;
      break;
    }
  }
  out.beta = std::move(beta);
  out.objective_value = current;
  return out;
}

}  // namespace detail

/// Lasso by cyclic coordinate descent. With lambda = 0 and m > n the
/// minimizer is not unique; any one is returned.
inline CoefficientVector fit_lasso(const Matrix& x, const Vector& y, double lambda,
                                   const SolverConfig& cfg = {},
                                   const Vector* warm = nullptr) {
  return detail::coordinate_descent(x, y, lambda, 0.0, nullptr, cfg, warm);
}

inline CoefficientVector fit_grace(const Matrix& x, const Vector& y, double lambda1,
                                   double lambda2, const WeightedNetwork& g,
                                   const SolverConfig& cfg = {},
                                   const Vector* warm = nullptr) {
  return detail::coordinate_descent(x, y, lambda1, lambda2, &g, cfg, warm);
}

// ---------------------------------------------------------------------------
// Generalized fused lasso by ADMM

/// Splits z = D b with D stacking one difference row per edge and the
/// identity. The returned coefficients are the (exactly sparse) identity copy.
inline CoefficientVector fit_gfl(const Matrix& x, const Vector& y, double lambda,
                                 double eta, const WeightedNetwork& g,
                                 const SolverConfig& cfg = {},
                                 const Vector* warm = nullptr) {
  cfg.validate();
  detail::check_xy(x, y);
  const Index m = x.cols();
  if (g.node_count() != m) {
    throw Error(ErrorKind::dimension_mismatch, "network node count != feature count");
  }
  if (!(lambda >= 0.0) || !(eta >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "lambda and eta must be >= 0");
  }
  const auto& edges = g.edges();
  const Index ne = static_cast<Index>(edges.size());

  const auto apply_d = [&](const Vector& b) {
    Vector z(ne + m);
    for (Index e = 0; e < ne; ++e) z[e] = b[edges[e].u] - b[edges[e].v];
    z.tail(m) = b;
    return z;
  };
  const auto apply_dt = [&](const Vector& z) {
    Vector b = z.tail(m);
    for (Index e = 0; e < ne; ++e) {
      b[edges[e].u] += z[e];
      b[edges[e].v] -= z[e];
    }
    return b;
  };
  Matrix dtd = Matrix::Identity(m, m);
  for (const auto& e : edges) {
    dtd(e.u, e.u) += 1.0;
    dtd(e.v, e.v) += 1.0;
    dtd(e.u, e.v) -= 1.0;
    dtd(e.v, e.u) -= 1.0;
  }
  const Matrix gram = 2.0 * (x.transpose() * x);
  const Vector xty = 2.0 * (x.transpose() * y);

  double rho = cfg.admm_rho;
  Eigen::LLT<Matrix> chol(gram + rho * dtd);
  Vector beta = warm ? *warm : Vector::Zero(m);
  detail::check_beta(x, beta);
  Vector z = apply_d(beta), u = Vector::Zero(ne + m);
  const double root_p = std::sqrt(static_cast<double>(ne + m));
  const double root_n = std::sqrt(static_cast<double>(m));
  const double eps = cfg.admm_tol;

  CoefficientVector out;
  for (Index it = 1; it <= cfg.max_iters; ++it) {
    beta = chol.solve(xty + rho * apply_dt(z - u));
    const Vector db = apply_d(beta);
    const Vector z_old = z;
    const Vector target = db + u;
    for (Index e = 0; e < ne; ++e) {
      z[e] = detail::soft(target[e], lambda * edges[e].w / rho);
    }
    for (Index p = 0; p < m; ++p) {
      z[ne + p] = detail::soft(target[ne + p], lambda * eta / rho);
    }
    u += db - z;

    const double primal = (db - z).norm();
    const double dual = rho * apply_dt(z - z_old).norm();
    const double eps_primal = root_p * eps + eps * std::max(db.norm(), z.norm());
    const double eps_dual = root_n * eps + eps * rho * apply_dt(u).norm();
    out.iterations = it;
    if (cfg.record_trace) {
      const Vector b = z.tail(m);
      out.trace.push_back(least_squares(x, y, b) +
                          detail::gfl_penalty(b, lambda, eta, g));
    }
    if (primal < eps_primal && dual < eps_dual) {
      out.converged = true;
      break;
    }
    if (it % 10 == 0) {
      double factor = 1.0;
      if (primal > 10.0 * dual) factor = 2.0;
      if (dual > 10.0 * primal) factor = 0.5;
      if (factor != 1.0) {
        rho *= factor;
        u /= factor;
        chol.compute(gram + rho * dtd);
      }
    }
  }
  out.beta = z.tail(m);
  out.objective_value =
      least_squares(x, y, out.beta) + detail::gfl_penalty(out.beta, lambda, eta, g);
  return out;
}

// ---------------------------------------------------------------------------
// Overlapping group lasso (latent decomposition)

struct OglFit {
  CoefficientVector coef;
  Groups groups;              // as given, then implicit singletons
  std::vector<Vector> parts;  // parts[u][k] is the share of groups[u][k]
};

inline OglFit fit_ogl(const Matrix& x, const Vector& y, double lambda,
                      const Groups& groups, const SolverConfig& cfg = {}) {
  cfg.validate();
  detail::check_xy(x, y);
  if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_argument, "lambda must be >= 0");
  const Index m = x.cols();
  OglFit fit;
  fit.groups = detail::complete_groups(groups, m, false);
  const auto& all = fit.groups;
  std::vector<Index> offset(all.size() + 1, 0);
  for (std::size_t u = 0; u < all.size(); ++u) {
    offset[u + 1] = offset[u] + static_cast<Index>(all[u].size());
  }
  const Index len = offset.back();
  const auto combine = [&](const Vector& v) {
    Vector b = Vector::Zero(m);
    for (std::size_t u = 0; u < all.size(); ++u) {
      for (std::size_t k = 0; k < all[u].size(); ++k) b[all[u][k]] += v[offset[u] + k];
    }
    return b;
  };
  const auto smooth = [&](const Vector& v, Vector& grad) {
    Vector g;
    const double f = least_squares(x, y, combine(v), &g);
    grad.resize(len);
    for (std::size_t u = 0; u < all.size(); ++u) {
      for (std::size_t k = 0; k < all[u].size(); ++k) grad[offset[u] + k] = g[all[u][k]];
    }
    return f;
  };
  const auto penalty = [&](const Vector& v) {
    double total = 0.0;
    for (std::size_t u = 0; u < all.size(); ++u) {
      total += v.segment(offset[u], offset[u + 1] - offset[u]).norm();
    }
    return lambda * total;
  };
  const auto prox = [&](const Vector& v, double step) {
    Vector out(len);
    for (std::size_t u = 0; u < all.size(); ++u) {
      const Index n = offset[u + 1] - offset[u];
      const double norm = v.segment(offset[u], n).norm();
      const double keep = norm > step * lambda ? 1.0 - step * lambda / norm : 0.0;
      out.segment(offset[u], n) = keep * v.segment(offset[u], n);
    }
    return out;
  };
  auto r = detail::fista(Vector::Zero(len), smooth, penalty, prox, cfg);
  fit.coef.beta = combine(r.x);
  fit.coef.objective_value = r.objective;
  fit.coef.iterations = r.iterations;
  fit.coef.converged = r.converged;
  fit.coef.trace = std::move(r.trace);
  for (std::size_t u = 0; u < all.size(); ++u) {
    fit.parts.push_back(r.x.segment(offset[u], offset[u + 1] - offset[u]));
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Graph-guided group lasso

/// `groups` must be disjoint; features outside every group become singleton
/// groups with no gene-network neighbors. `lambda_group` scales the
/// sqrt|G|-weighted group norms.
inline CoefficientVector fit_gggl(const Matrix& x, const Vector& y, double eta1,
                                  double eta2, const Groups& groups,
                                  const WeightedNetwork& gene_net, double lambda_group,
                                  const SolverConfig& cfg = {},
                                  const Vector* warm = nullptr) {
  cfg.validate();
  detail::check_xy(x, y);
  const Index m = x.cols();
  if (!(eta1 >= 0.0) || !(eta2 >= 0.0) || !(lambda_group >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "penalty weights must be >= 0");
  }
  if (gene_net.node_count() != static_cast<Index>(groups.size())) {
    throw Error(ErrorKind::dimension_mismatch, "gene network node count != group count");
  }
  const Groups all = detail::complete_groups(groups, m, true);
  const auto smooth = [&](const Vector& b, Vector& grad) {
    return gggl_smooth(x, y, b, eta2, groups, gene_net, &grad);
  };
  const auto penalty = [&](const Vector& b) {
    return lambda_group * detail::group_norm_sum(b, all) + eta1 * b.lpNorm<1>();
  };
  const auto prox = [&](const Vector& v, double step) {
    Vector out(m);
    for (Index p = 0; p < m; ++p) out[p] = detail::soft(v[p], step * eta1);
    for (const auto& g : all) {
      double sq = 0.0;
      for (const Index p : g) sq += out[p] * out[p];
      const double norm = std::sqrt(sq);
      const double t = step * lambda_group * std::sqrt(static_cast<double>(g.size()));
      const double keep = norm > t ? 1.0 - t / norm : 0.0;
      for (const Index p : g) out[p] *= keep;
    }
    return out;
  };
  Vector start = warm ? *warm : Vector::Zero(m);
  detail::check_beta(x, start);
  auto r = detail::fista(std::move(start), smooth, penalty, prox, cfg);
  CoefficientVector out;
  out.beta = std::move(r.x);
  out.objective_value = r.objective;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.trace = std::move(r.trace);
  return out;
}

// ---------------------------------------------------------------------------
// Multi-task lasso

/// One CoefficientVector per task; objective, iterations and convergence are
/// those of the joint problem.
inline std::vector<CoefficientVector> fit_mtlasso(
    const std::vector<RegressionTask>& tasks, double lambda,
    const SolverConfig& cfg = {}) {
  cfg.validate();
  if (tasks.empty()) throw Error(ErrorKind::invalid_argument, "no tasks");
  if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_argument, "lambda must be >= 0");
  const Index m = tasks.front().x.cols();
  for (const auto& t : tasks) {
    detail::check_xy(t.x, t.y);
    if (t.x.cols() != m) {
      throw Error(ErrorKind::dimension_mismatch, "tasks differ in feature count");
    }
  }
  const Index nt = static_cast<Index>(tasks.size());
  const auto as_matrix = [&](const Vector& v) {
    return Eigen::Map<const Matrix>(v.data(), m, nt);
  };
  const auto smooth = [&](const Vector& v, Vector& grad) {
    Matrix g;
    const double f = mtlasso_smooth(tasks, as_matrix(v), &g);
    grad = Eigen::Map<const Vector>(g.data(), g.size());
    return f;
  };
  const auto penalty = [&](const Vector& v) {
    return lambda * as_matrix(v).rowwise().norm().sum();
  };
  const auto prox = [&](const Vector& v, double step) {
    Matrix b = as_matrix(v);
    for (Index p = 0; p < m; ++p) {
      const double norm = b.row(p).norm();
      const double keep = norm > step * lambda ? 1.0 - step * lambda / norm : 0.0;
      b.row(p) *= keep;
    }
    return Vector(Eigen::Map<const Vector>(b.data(), b.size()));
  };
  auto r = detail::fista(Vector::Zero(m * nt), smooth, penalty, prox, cfg);
  std::vector<CoefficientVector> out(tasks.size());
  for (Index t = 0; t < nt; ++t) {
    out[t].beta = r.x.segment(t * m, m);
    out[t].objective_value = r.objective;
    out[t].iterations = r.iterations;
    out[t].converged = r.converged;
    out[t].trace = r.trace;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Zero-solution thresholds and paths

/// Smallest lambda with beta = 0 optimal for the gfl penalty at fixed eta.
/// beta = 0 is optimal iff the gradient 2X'y can be routed as a flow with
/// per-edge capacity lambda*w and per-node slack lambda*eta to a free ground
/// node; feasibility is monotone in lambda, so it is bisected with max-flow.
inline double gfl_lambda_max(const Matrix& x, const Vector& y, double eta,
                             const WeightedNetwork& g) {
  detail::check_xy(x, y);
  const Vector demand = 2.0 * (x.transpose() * y);
  const Index m = demand.size();
  if (g.node_count() != m) {
    throw Error(ErrorKind::dimension_mismatch, "network node count != feature count");
  }
  const double peak = demand.lpNorm<Eigen::Infinity>();
  if (peak == 0.0) return 0.0;
  const auto feasible = [&](double lambda) {
    STGraph st(m + 1);
    double supply = 0.0, ground = 0.0;
    for (Index p = 0; p < m; ++p) {
      if (demand[p] > 0.0) {
        st.source_cap[p] = demand[p];
        supply += demand[p];
      } else {
        st.sink_cap[p] = -demand[p];
      }
      ground -= demand[p];
      if (eta > 0.0) st.arcs.push_back({p, m, lambda * eta});
    }
    if (ground > 0.0) {
      st.source_cap[m] = ground;
      supply += ground;
    } else {
      st.sink_cap[m] = -ground;
    }
    for (const auto& e : g.edges()) st.arcs.push_back({e.u, e.v, lambda * e.w});
    return max_flow_min_cut(st).flow_value >= supply * (1.0 - 1e-12);
  };
  double hi = peak / std::max(eta, 1e-300);
  if (eta == 0.0) {
    hi = peak;
    for (int k = 0; k < 200 && !feasible(hi); ++k) hi *= 2.0;
    if (!feasible(hi)) {
      throw Error(ErrorKind::invalid_argument,
                  "zero is never optimal for gfl with eta = 0 on this network");
    }
  }
  double lo = 0.0;
  for (int k = 0; k < 100 && hi - lo > 1e-13 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Zero-solution threshold of the path parameter of `spec`: lambda for every
/// kind except grace, whose path runs over eta1.
inline double lambda_max(const Matrix& x, const Vector& y, const PenaltySpec& spec) {
  detail::check_xy(x, y);
  spec.validate(x.cols());
  const Vector grad = 2.0 * (x.transpose() * y);
  switch (spec.kind) {
    case PenaltyKind::lasso:
    case PenaltyKind::grace:
      return grad.lpNorm<Eigen::Infinity>();
    case PenaltyKind::gfl:
      return gfl_lambda_max(x, y, spec.eta, *spec.network);
    case PenaltyKind::ogl: {
      double best = 0.0;
      for (const auto& g : detail::complete_groups(*spec.groups, x.cols(), false)) {
        double sq = 0.0;
        for (const Index p : g) sq += grad[p] * grad[p];
        best = std::max(best, std::sqrt(sq));
      }
      return best;
    }
    case PenaltyKind::gggl: {
      double best = 0.0;
      for (const auto& g : detail::complete_groups(*spec.groups, x.cols(), true)) {
        double sq = 0.0;
        for (const Index p : g) {
          const double s = detail::soft(grad[p], spec.eta1);
          sq += s * s;
        }
        best = std::max(best, std::sqrt(sq / static_cast<double>(g.size())));
      }
      return best;
    }
    case PenaltyKind::mtlasso:
      break;
  }
  throw Error(ErrorKind::invalid_argument, "mtlasso threshold takes a list of tasks");
}

inline double mtlasso_lambda_max(const std::vector<RegressionTask>& tasks) {
  if (tasks.empty()) throw Error(ErrorKind::invalid_argument, "no tasks");
  const Index m = tasks.front().x.cols();
  Matrix g(m, static_cast<Index>(tasks.size()));
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (tasks[t].x.cols() != m) {
      throw Error(ErrorKind::dimension_mismatch, "tasks differ in feature count");
    }
    g.col(t) = (2.0 / static_cast<double>(tasks[t].y.size())) *
               (tasks[t].x.transpose() * tasks[t].y);
  }
  return g.rowwise().norm().maxCoeff();
}

/// `count` log-spaced values from `top` down to top * ratio.
inline std::vector<double> log_path(double top, std::size_t count = 30,
                                    double ratio = 1e-3) {
  if (!(top >= 0.0) || count == 0 || !(ratio > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "bad path specification");
  }
  std::vector<double> out(count, top);
  for (std::size_t k = 1; k < count; ++k) {
    out[k] = top * std::pow(ratio, static_cast<double>(k) / static_cast<double>(count - 1));
  }
  return out;
}

inline double path_value(const PenaltySpec& spec) {
  return spec.kind == PenaltyKind::grace ? spec.eta1 : spec.lambda;
}

inline PenaltySpec with_path_value(PenaltySpec spec, double value) {
  (spec.kind == PenaltyKind::grace ? spec.eta1 : spec.lambda) = value;
  return spec;
}

/// Single-task fit of `spec`. `warm` is ignored for ogl, whose iterate lives
/// in the latent space.
inline CoefficientVector fit(const Matrix& x, const Vector& y, const PenaltySpec& spec,
                             const SolverConfig& cfg = {},
                             const Vector* warm = nullptr) {
  spec.validate(x.cols());
  switch (spec.kind) {
    case PenaltyKind::lasso:
      return fit_lasso(x, y, spec.lambda, cfg, warm);
    case PenaltyKind::grace:
      return fit_grace(x, y, spec.eta1, spec.eta2, *spec.network, cfg, warm);
    case PenaltyKind::gfl:
      return fit_gfl(x, y, spec.lambda, spec.eta, *spec.network, cfg, warm);
    case PenaltyKind::ogl:
      return fit_ogl(x, y, spec.lambda, *spec.groups, cfg).coef;
    case PenaltyKind::gggl:
      return fit_gggl(x, y, spec.eta1, spec.eta2, *spec.groups, *spec.gene_network,
                      spec.lambda, cfg, warm);
    case PenaltyKind::mtlasso:
      break;
  }
  throw Error(ErrorKind::invalid_argument, "use fit_mtlasso for multi-task data");
}

struct PathResult {
  std::vector<double> values;
  std::vector<CoefficientVector> fits;
  bool warm_started = false;
};

/// Fits along `values` of the path parameter. One thread runs sequentially
/// with warm starts; more threads run cold starts in parallel, so the result
/// does not depend on scheduling.
inline PathResult fit_path(const Matrix& x, const Vector& y, const PenaltySpec& spec,
                           std::vector<double> values, const SolverConfig& cfg = {},
                           unsigned threads = 1) {
  PathResult out;
  out.values = std::move(values);
  out.fits.resize(out.values.size());
  if (threads == 1) {
    out.warm_started = spec.kind != PenaltyKind::ogl;
    const Vector* warm = nullptr;
    for (std::size_t k = 0; k < out.values.size(); ++k) {
      out.fits[k] = fit(x, y, with_path_value(spec, out.values[k]), cfg, warm);
      warm = &out.fits[k].beta;
    }
  } else {
    detail::parallel_for(
        out.values.size(),
        [&](std::size_t k) {
          out.fits[k] = fit(x, y, with_path_value(spec, out.values[k]), cfg);
        },
        threads);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Groups file: group_id <TAB> feature_id

struct NamedGroups {
  std::vector<std::string> group_ids;  // first-appearance order
  Groups groups;
};

inline NamedGroups load_groups(const std::string& path,
                               const std::vector<std::string>& feature_ids) {
  const auto features = detail::index_ids(feature_ids, "feature");
  NamedGroups out;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& line : detail::read_lines(path)) {
    const auto fields = detail::split_tabs(line.text);
    if (fields.size() != 2) {
      throw Error(ErrorKind::ragged_row, path + ": expected 2 fields", line.number, 0);
    }
    const std::string f[2] = {std::string(fields[0]), std::string(fields[1])};
    const auto it = features.find(f[1]);
    if (it == features.end()) {
      throw Error(ErrorKind::unknown_id, path + ": unknown feature '" + f[1] + "'",
                  line.number, 2);
    }
    auto [slot, fresh] = index.emplace(f[0], out.groups.size());
    if (fresh) {
      out.group_ids.push_back(f[0]);
      out.groups.emplace_back();
    }
    auto& members = out.groups[slot->second];
    if (std::find(members.begin(), members.end(), it->second) != members.end()) {
      throw Error(ErrorKind::duplicate_id,
                  path + ": feature '" + f[1] + "' repeated in group '" + f[0] + "'",
                  line.number, 2);
    }
    members.push_back(it->second);
  }
  return out;
}

}  // namespace netsel
