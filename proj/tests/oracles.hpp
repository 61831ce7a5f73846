#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the solver code paths it checks.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "netsel/datamodel.hpp"
#include "netsel/maxflow.hpp"

namespace netsel::testing {

inline Matrix dense_laplacian(const WeightedNetwork& g) {
  const Index n = g.node_count();
  Matrix w = Matrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    w(e.u, e.v) = e.w;
    w(e.v, e.u) = e.w;
  }
  Matrix l = -w;
  for (Index i = 0; i < n; ++i) l(i, i) = w.row(i).sum();
  return l;
}

/// Erdos-Renyi style graph with edge probability `density`, weights in
/// [0.1, 2).
inline WeightedNetwork random_network(Index n, double density,
                                      std::mt19937_64& rng,
                                      bool unit_weights = false) {
  std::bernoulli_distribution coin(density);
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  std::vector<Edge> edges;
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v, unit_weights ? 1.0 : weight(rng)});
    }
  }
  return WeightedNetwork::anonymous(n, std::move(edges));
}

inline std::vector<Index> mask_to_set(std::uint64_t mask, Index m) {
  std::vector<Index> s;
  for (Index p = 0; p < m; ++p) {
    if (mask >> p & 1U) s.push_back(p);
  }
  return s;
}

/// Single-task penalized relevance of a subset given as a bitmask.
inline double subset_objective(const Vector& c, double eta, double lambda,
                               const WeightedNetwork& g, std::uint64_t mask) {
  double value = 0.0;
  for (Index p = 0; p < c.size(); ++p) {
    if (mask >> p & 1U) value += c[p] - eta;
  }
  for (const auto& e : g.edges()) {
    const bool a = mask >> e.u & 1U;
    const bool b = mask >> e.v & 1U;
    if (a != b) value -= lambda * e.w;
  }
  return value;
}

struct BruteForceResult {
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
};

inline BruteForceResult brute_force_scones(const Vector& c, double eta,
                                           double lambda,
                                           const WeightedNetwork& g) {
  BruteForceResult r;
  const std::uint64_t count = std::uint64_t{1} << c.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const double v = subset_objective(c, eta, lambda, g, mask);
    if (v > r.best) {
      r.best = v;
      r.mask = mask;
    }
  }
  return r;
}

/// Minimum s/t cut capacity by enumerating all source sides.
inline double exhaustive_min_cut(const STGraph& g) {
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << g.node_count;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double cap = 0.0;
    for (Index p = 0; p < g.node_count; ++p) {
      // p on source side cuts p->t, on sink side cuts s->p
      cap += (mask >> p & 1U) ? g.sink_cap[p] : g.source_cap[p];
    }
    for (const auto& a : g.arcs) {
      if (((mask >> a.u) & 1U) != ((mask >> a.v) & 1U)) cap += a.cap;
    }
    best = std::min(best, cap);
  }
  return best;
}

/// Exhaustive multi-task optimum over (2^m)^T selections.
inline double brute_force_multi_scones(const std::vector<Vector>& c, double eta,
                                       double lambda, double mu,
                                       const std::vector<WeightedNetwork>& g) {
  const auto tasks = c.size();
  const Index m = c.front().size();
  const std::uint64_t subsets = std::uint64_t{1} << m;
  std::vector<std::vector<double>> single(tasks, std::vector<double>(subsets));
  for (std::size_t t = 0; t < tasks; ++t) {
    for (std::uint64_t s = 0; s < subsets; ++s) {
      single[t][s] = subset_objective(c[t], eta, lambda, g[t], s);
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> pick(tasks, 0);
  while (true) {
    double v = 0.0;
    for (std::size_t t = 0; t < tasks; ++t) v += single[t][pick[t]];
    for (std::size_t u = 0; u < tasks; ++u) {
      for (std::size_t w = u + 1; w < tasks; ++w) {
        v -= mu * std::popcount(pick[u] ^ pick[w]);
      }
    }
    best = std::max(best, v);
    std::size_t t = 0;
    while (t < tasks && ++pick[t] == subsets) pick[t++] = 0;
    if (t == tasks) break;
  }
  return best;
}

}  // namespace netsel::testing
