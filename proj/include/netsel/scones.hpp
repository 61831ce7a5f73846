#pragma once

// Penalized-relevance selection by graph cuts.
//
// Single task maximizes
//     sum_{p in S} c_p - eta |S| - lambda * cut(S)
// and the multi-task variant adds -mu * sum_{u<v} |S_u symdiff S_v| over
// per-task selections. Both are solved exactly as one s/t minimum cut.

#include <cmath>
#include <string>
#include <vector>

#include "netsel/datamodel.hpp"
#include "netsel/detail/kahan.hpp"
#include "netsel/maxflow.hpp"
#include "netsel/netgraph.hpp"
#include "netsel/relevance.hpp"

namespace netsel {

struct SconesParams {
  double eta = 0.0;     // price per selected feature
  double lambda = 0.0;  // price per unit of cut edge weight
  double mu = 0.0;      // price per cross-task disagreement

  void validate() const {
    if (!(eta >= 0.0) || !(lambda >= 0.0) || !(mu >= 0.0) ||
        !std::isfinite(eta) || !std::isfinite(lambda) || !std::isfinite(mu)) {
      throw Error(ErrorKind::invalid_argument,
                  "eta, lambda and mu must be finite and >= 0");
    }
  }
};

/// Source arc c_p - eta for c_p > eta, sink arc eta - c_p for c_p < eta,
/// and lambda * W_pq both ways per network edge.
inline STGraph build_st_graph(const RelevanceVector& c,
                              const SconesParams& params,
                              const WeightedNetwork& g) {
  params.validate();
  if (c.size() != g.node_count()) {
    throw Error(ErrorKind::dimension_mismatch,
                "relevance length != network node count");
  }
  STGraph st(c.size());
  for (Index p = 0; p < c.size(); ++p) {
    const double d = c[p] - params.eta;
    if (d > 0.0) {
      st.source_cap[p] = d;
    } else if (d < 0.0) {
      st.sink_cap[p] = -d;
    }
  }
  if (params.lambda > 0.0) {
    st.arcs.reserve(g.edges().size());
    for (const auto& e : g.edges()) {
      st.arcs.push_back({e.u, e.v, params.lambda * e.w});
    }
  }
  return st;
}

/// Objective evaluated from its definition.
inline double scones_objective(const RelevanceVector& c,
                               const SconesParams& params,
                               const WeightedNetwork& g,
                               std::span<const Index> selected) {
  detail::CompensatedSum total;
  for (const Index p : selected) total.add(c[p] - params.eta);
  if (params.lambda != 0.0) total.add(-params.lambda * cut_value(selected, g));
  return total.value();
}

struct SconesSolution {
  SelectionSet selection;
  double flow_value = 0.0;
};

inline SconesSolution scones_solve(const RelevanceVector& c,
                                   const SconesParams& params,
                                   const WeightedNetwork& g) {
  const STGraph st = build_st_graph(c, params, g);
  MinCut cut = max_flow_min_cut(st);
  SconesSolution out;
  out.flow_value = cut.flow_value;
  out.selection.selected = std::move(cut.source_side);
  out.selection.params = {params.lambda, params.eta, 0.0};
  out.selection.objective_value =
      scones_objective(c, params, g, out.selection.selected);
  return out;
}

inline SelectionSet scones_select(const RelevanceVector& c,
                                  const SconesParams& params,
                                  const WeightedNetwork& g) {
  return scones_solve(c, params, g).selection;
}

/// sum_p max(c_p - eta, 0): the objective upper bound that the min cut is
/// subtracted from.
inline double scones_positive_part(const RelevanceVector& c, double eta) {
  detail::CompensatedSum s;
  for (Index p = 0; p < c.size(); ++p) s.add(std::max(c[p] - eta, 0.0));
  return s.value();
}

// ---------------------------------------------------------------------------
// Multi-task

struct MultiSconesSolution {
  /// Per-task selections; objective_value holds that task's own term.
  std::vector<SelectionSet> tasks;
  /// Full objective including the cross-task coupling.
  double objective_value = 0.0;
  double flow_value = 0.0;
};

namespace detail {

inline Index check_tasks(const std::vector<RelevanceVector>& c,
                         const std::vector<WeightedNetwork>& g) {
  if (c.empty()) throw Error(ErrorKind::invalid_argument, "no tasks");
  if (c.size() != g.size()) {
    throw Error(ErrorKind::dimension_mismatch,
                "relevance and network task counts differ");
  }
  const Index m = c.front().size();
  for (std::size_t t = 0; t < c.size(); ++t) {
    if (c[t].size() != m || g[t].node_count() != m) {
      throw Error(ErrorKind::dimension_mismatch,
                  "task " + std::to_string(t) + " has a different feature count");
    }
  }
  return m;
}

inline std::size_t symmetric_difference_size(const std::vector<Index>& a,
                                             const std::vector<Index>& b) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      ++count;
      ++i;
    } else if (i == a.size() || b[j] < a[i]) {
      ++count;
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace detail

inline double multi_scones_objective(
    const std::vector<RelevanceVector>& c, const SconesParams& params,
    const std::vector<WeightedNetwork>& g,
    const std::vector<std::vector<Index>>& selected) {
  detail::check_tasks(c, g);
  if (selected.size() != c.size()) {
    throw Error(ErrorKind::dimension_mismatch, "one selection per task");
  }
  detail::CompensatedSum total;
  for (std::size_t t = 0; t < c.size(); ++t) {
    total.add(scones_objective(c[t], params, g[t], selected[t]));
  }
  for (std::size_t u = 0; u < selected.size(); ++u) {
    for (std::size_t v = u + 1; v < selected.size(); ++v) {
      total.add(-params.mu * static_cast<double>(detail::symmetric_difference_size(
                                 selected[u], selected[v])));
    }
  }
  return total.value();
}

/// Augmented graph over (task, feature) nodes, node index t * m + p, with
/// mu-capacity arc pairs joining each feature across every task pair.
inline STGraph build_multi_st_graph(const std::vector<RelevanceVector>& c,
                                    const SconesParams& params,
                                    const std::vector<WeightedNetwork>& g) {
  params.validate();
  const Index m = detail::check_tasks(c, g);
  const auto tasks = static_cast<Index>(c.size());
  STGraph st(m * tasks);
  for (Index t = 0; t < tasks; ++t) {
    const STGraph single = build_st_graph(c[t], params, g[t]);
    for (Index p = 0; p < m; ++p) {
      st.source_cap[t * m + p] = single.source_cap[p];
      st.sink_cap[t * m + p] = single.sink_cap[p];
    }
    for (const auto& a : single.arcs) {
      st.arcs.push_back({t * m + a.u, t * m + a.v, a.cap});
    }
  }
  if (params.mu > 0.0) {
    for (Index p = 0; p < m; ++p) {
      for (Index u = 0; u < tasks; ++u) {
        for (Index v = u + 1; v < tasks; ++v) {
          st.arcs.push_back({u * m + p, v * m + p, params.mu});
        }
      }
    }
  }
  return st;
}

inline MultiSconesSolution multi_scones_select(
    const std::vector<RelevanceVector>& c, const SconesParams& params,
    const std::vector<WeightedNetwork>& g) {
  const STGraph st = build_multi_st_graph(c, params, g);
  const Index m = c.front().size();
  const MinCut cut = max_flow_min_cut(st);

  MultiSconesSolution out;
  out.flow_value = cut.flow_value;
  out.tasks.resize(c.size());
  for (const Index node : cut.source_side) {
    out.tasks[node / m].selected.push_back(node % m);
  }
  std::vector<std::vector<Index>> sets;
  for (std::size_t t = 0; t < c.size(); ++t) {
    auto& s = out.tasks[t];
    s.params = {params.lambda, params.eta, params.mu};
    s.objective_value = scones_objective(c[t], params, g[t], s.selected);
    sets.push_back(s.selected);
  }
  out.objective_value = multi_scones_objective(c, params, g, sets);
  return out;
}

}  // namespace netsel
