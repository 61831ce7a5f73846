#pragma once

// Greedy dense-module search on a gene network scored by gene z-scores.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "netsel/datamodel.hpp"
#include "netsel/detail/parallel.hpp"
#include "netsel/relevance.hpp"

namespace netsel {

struct Module {
  std::vector<Index> genes;  // ascending node indices
  double score = 0.0;
};

/// Z_m = sum(z) / sqrt(k).
inline double module_score(std::span<const double> z) {
  if (z.empty()) {
    throw Error(ErrorKind::invalid_argument, "module is empty");
  }
  double sum = 0.0;
  for (const double v : z) sum += v;
  return sum / std::sqrt(static_cast<double>(z.size()));
}

struct ModuleSearchParams {
  double growth = 0.1;  // r
  int max_depth = 2;
  unsigned threads = 0;
};

namespace detail {

inline bool accepts_growth(double old_score, double new_score, double r) {
  return old_score > 0.0 ? new_score > old_score * (1.0 + r)
                         : new_score > old_score;
}

/// One greedy run from `seed`. Candidates are nodes adjacent to the module
/// and within `max_depth` hops of the seed.
inline Module grow_module(const WeightedNetwork& g, const Vector& z, Index seed,
                          double r, int max_depth) {
  // hop distances from the seed, limited to max_depth
  std::unordered_map<Index, int> ball{{seed, 0}};
  std::vector<Index> frontier{seed};
  for (int depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
    std::vector<Index> next;
    for (const Index u : frontier) {
      for (const auto& nb : g.neighbors(u)) {
        if (ball.emplace(nb.node, depth).second) next.push_back(nb.node);
      }
    }
    frontier = std::move(next);
  }

  std::vector<Index> members{seed};
  std::unordered_map<Index, char> in_module{{seed, 1}};
  double sum = z[seed];
  double score = z[seed];
  while (true) {
    Index best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const Index u : members) {
      for (const auto& nb : g.neighbors(u)) {
        const Index c = nb.node;
        if (in_module.count(c) || !ball.count(c)) continue;
        const double s =
            (sum + z[c]) / std::sqrt(static_cast<double>(members.size() + 1));
        if (s > best_score || (s == best_score && c < best)) {
          best = c;
          best_score = s;
        }
      }
    }
    if (best < 0 || !accepts_growth(score, best_score, r)) break;
    members.push_back(best);
    in_module.emplace(best, 1);
    sum += z[best];
    score = best_score;
  }
  std::sort(members.begin(), members.end());
  std::vector<double> zs;
  zs.reserve(members.size());
  for (const Index p : members) zs.push_back(z[p]);
  return {std::move(members), module_score(zs)};
}

}  // namespace detail

/// One module per seed gene, deduplicated, sorted by score descending with
/// ties broken by the lexicographically smaller gene set.
inline std::vector<Module> greedy_module_search(
    const WeightedNetwork& g, const Vector& z,
    const ModuleSearchParams& params = {}) {
  if (z.size() != g.node_count()) {
    throw Error(ErrorKind::dimension_mismatch, "z length != gene count");
  }
  if (!(params.growth >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "growth factor must be >= 0");
  }
  if (params.max_depth < 1) {
    throw Error(ErrorKind::invalid_argument, "max_depth must be >= 1");
  }
  const auto count = static_cast<std::size_t>(g.node_count());
  std::vector<Module> per_seed(count);
  detail::parallel_for(
      count,
      [&](std::size_t seed) {
        per_seed[seed] = detail::grow_module(g, z, static_cast<Index>(seed),
                                             params.growth, params.max_depth);
      },
      params.threads);

  std::map<std::vector<Index>, double> unique;
  for (auto& m : per_seed) unique.emplace(std::move(m.genes), m.score);
  std::vector<Module> out;
  out.reserve(unique.size());
  for (auto& [genes, score] : unique) out.push_back({genes, score});
  std::stable_sort(out.begin(), out.end(), [](const Module& a, const Module& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.genes < b.genes;
  });
  return out;
}

/// Scores looked up by gene id; every network node needs a score.
inline std::vector<Module> greedy_module_search(
    const WeightedNetwork& g, const GeneScores& scores,
    const ModuleSearchParams& params = {}) {
  std::unordered_map<std::string, double> lookup;
  for (std::size_t i = 0; i < scores.gene_ids.size(); ++i) {
    lookup.emplace(scores.gene_ids[i], scores.z_scores[i]);
  }
  Vector z(g.node_count());
  for (Index k = 0; k < g.node_count(); ++k) {
    const auto it = lookup.find(g.node_ids()[k]);
    if (it == lookup.end()) {
      throw Error(ErrorKind::unknown_id,
                  "no z-score for gene '" + g.node_ids()[k] + "'");
    }
    z[k] = it->second;
  }
  return greedy_module_search(g, z, params);
}

/// `rank<TAB>score<TAB>gene_ids(comma-separated)`, rank starting at 1.
inline void write_modules(const std::vector<Module>& modules,
                          const WeightedNetwork& g, const std::string& path) {
  auto out = detail::open_output(path);
  for (std::size_t i = 0; i < modules.size(); ++i) {
    out << (i + 1) << '\t' << detail::format_double(modules[i].score) << '\t';
    for (std::size_t k = 0; k < modules[i].genes.size(); ++k) {
      if (k) out << ',';
      out << g.node_ids()[modules[i].genes[k]];
    }
    out << '\n';
  }
}

}  // namespace netsel
