#pragma once

// Graph algebra over WeightedNetwork and construction of feature-level
// networks from genomic positions and a gene interaction network.

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "netsel/datamodel.hpp"

namespace netsel {

/// beta' L beta with L = D - W, i.e. the sum over edges of w * (b_u - b_v)^2.
inline double laplacian_quadratic(const Vector& beta, const WeightedNetwork& g) {
  if (beta.size() != g.node_count()) {
    throw Error(ErrorKind::dimension_mismatch,
                "beta length != network node count");
  }
  double total = 0.0;
  for (const auto& e : g.edges()) {
    const double d = beta[e.u] - beta[e.v];
    total += e.w * d * d;
  }
  return total;
}

/// Sum of W_pq (b_p - b_q)^2 over ordered pairs: twice laplacian_quadratic.
inline double laplacian_ordered_pair_sum(const Vector& beta,
                                         const WeightedNetwork& g) {
  return 2.0 * laplacian_quadratic(beta, g);
}

/// L * beta without forming L.
inline Vector laplacian_apply(const WeightedNetwork& g, const Vector& beta) {
  if (beta.size() != g.node_count()) {
    throw Error(ErrorKind::dimension_mismatch,
                "beta length != network node count");
  }
  Vector out = Vector::Zero(beta.size());
  for (const auto& e : g.edges()) {
    const double d = e.w * (beta[e.u] - beta[e.v]);
    out[e.u] += d;
    out[e.v] -= d;
  }
  return out;
}

/// Total weight of edges with exactly one endpoint in `selected`.
inline double cut_value(std::span<const Index> selected,
                        const WeightedNetwork& g) {
  std::vector<char> in(g.node_count(), 0);
  for (const Index p : selected) {
    if (p < 0 || p >= g.node_count()) {
      throw Error(ErrorKind::invalid_argument, "node index out of range");
    }
    in[p] = 1;
  }
  double total = 0.0;
  for (const auto& e : g.edges()) {
    if (in[e.u] != in[e.v]) total += e.w;
  }
  return total;
}

/// Components, each sorted ascending, ordered by smallest member.
inline std::vector<std::vector<Index>> connected_components(
    const WeightedNetwork& g) {
  const Index count = g.node_count();
  std::vector<char> seen(count, 0);
  std::vector<std::vector<Index>> components;
  std::vector<Index> stack;
  for (Index start = 0; start < count; ++start) {
    if (seen[start]) continue;
    std::vector<Index> comp;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const auto& nb : g.neighbors(u)) {
        if (!seen[nb.node]) {
          seen[nb.node] = 1;
          stack.push_back(nb.node);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

// ---------------------------------------------------------------------------
// Feature network construction

struct FeaturePosition {
  std::string feature_id;
  std::string chromosome;
  long long position = 0;
};

struct GeneInterval {
  std::string gene_id;
  std::string chromosome;
  long long start = 0;
  long long end = 0;
};

using GenomicPositions = std::vector<FeaturePosition>;
using GeneIntervals = std::vector<GeneInterval>;

enum class NetworkMode { sequence, gene, interaction };

inline NetworkMode parse_network_mode(const std::string& s) {
  if (s == "sequence") return NetworkMode::sequence;
  if (s == "gene") return NetworkMode::gene;
  if (s == "interaction") return NetworkMode::interaction;
  throw Error(ErrorKind::invalid_argument, "unknown network mode '" + s + "'");
}

inline constexpr long long kDefaultWindow = 10'000;

namespace detail {

inline void check_positions(const GenomicPositions& pos) {
  std::unordered_set<std::string> seen;
  for (const auto& fp : pos) {
    if (fp.position < 0) {
      throw Error(ErrorKind::invalid_argument,
                  "negative position for '" + fp.feature_id + "'");
    }
    if (!seen.insert(fp.feature_id).second) {
      throw Error(ErrorKind::duplicate_id,
                  "feature '" + fp.feature_id + "' positioned twice");
    }
  }
}

inline void check_genes(const GeneIntervals& genes) {
  std::unordered_set<std::string> seen;
  for (const auto& g : genes) {
    if (g.start > g.end) {
      throw Error(ErrorKind::invalid_argument,
                  "gene '" + g.gene_id + "' has start > end");
    }
    if (!seen.insert(g.gene_id).second) {
      throw Error(ErrorKind::duplicate_id, "gene '" + g.gene_id + "' twice");
    }
  }
}

}  // namespace detail

/// For each gene (in input order), the feature indices whose position falls
/// in [start - window, end + window] on the same chromosome, ascending.
inline std::vector<std::vector<Index>> map_features_to_genes(
    const GenomicPositions& pos, const GeneIntervals& genes, long long window) {
  if (window < 0) {
    throw Error(ErrorKind::invalid_argument, "window must be >= 0");
  }
  detail::check_positions(pos);
  detail::check_genes(genes);

  // per chromosome: (position, feature index), sorted
  std::map<std::string, std::vector<std::pair<long long, Index>>> by_chrom;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    by_chrom[pos[i].chromosome].emplace_back(pos[i].position,
                                             static_cast<Index>(i));
  }
  for (auto& [chrom, v] : by_chrom) std::sort(v.begin(), v.end());

  std::vector<std::vector<Index>> members(genes.size());
  for (std::size_t gi = 0; gi < genes.size(); ++gi) {
    const auto it = by_chrom.find(genes[gi].chromosome);
    if (it == by_chrom.end()) continue;
    const auto& v = it->second;
    const long long lo = genes[gi].start - window;
    const long long hi = genes[gi].end + window;
    auto first = std::lower_bound(
        v.begin(), v.end(), std::pair{lo, std::numeric_limits<Index>::min()});
    for (auto f = first; f != v.end() && f->first <= hi; ++f) {
      members[gi].push_back(f->second);
    }
    std::sort(members[gi].begin(), members[gi].end());
  }
  return members;
}

/// Feature network over `pos` (node order = input order), all edges weight 1.
///   sequence:    consecutive features along each chromosome
///   gene:        sequence + a clique per gene
///   interaction: gene + all feature pairs across each gene-network edge
inline WeightedNetwork build_feature_network(const GenomicPositions& pos,
                                             const GeneIntervals& genes,
                                             const WeightedNetwork& gene_net,
                                             long long window,
                                             NetworkMode mode) {
  const auto members = map_features_to_genes(pos, genes, window);

  std::unordered_map<std::string, Index> gene_index;
  for (std::size_t gi = 0; gi < genes.size(); ++gi) {
    gene_index.emplace(genes[gi].gene_id, static_cast<Index>(gi));
  }
  std::vector<Index> net_to_gene(gene_net.node_count());
  for (Index k = 0; k < gene_net.node_count(); ++k) {
    const auto it = gene_index.find(gene_net.node_ids()[k]);
    if (it == gene_index.end()) {
      throw Error(ErrorKind::unknown_id, "gene network node '" +
                                             gene_net.node_ids()[k] +
                                             "' has no interval");
    }
    net_to_gene[k] = it->second;
  }

  const auto m = static_cast<Index>(pos.size());
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  const auto add = [&](Index a, Index b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    const auto key = static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(m) +
                     static_cast<std::uint64_t>(b);
    if (seen.insert(key).second) edges.push_back({a, b, 1.0});
  };

  std::map<std::string, std::vector<std::pair<long long, Index>>> by_chrom;
  for (Index i = 0; i < m; ++i) {
    by_chrom[pos[i].chromosome].emplace_back(pos[i].position, i);
  }
  for (auto& [chrom, v] : by_chrom) {
    std::sort(v.begin(), v.end());
    for (std::size_t k = 1; k < v.size(); ++k) add(v[k - 1].second, v[k].second);
  }

  if (mode != NetworkMode::sequence) {
    for (const auto& mem : members) {
      for (std::size_t a = 0; a < mem.size(); ++a) {
        for (std::size_t b = a + 1; b < mem.size(); ++b) add(mem[a], mem[b]);
      }
    }
  }
  if (mode == NetworkMode::interaction) {
    for (const auto& e : gene_net.edges()) {
      for (const Index a : members[net_to_gene[e.u]]) {
        for (const Index b : members[net_to_gene[e.v]]) add(a, b);
      }
    }
  }

  std::vector<std::string> ids;
  ids.reserve(pos.size());
  for (const auto& fp : pos) ids.push_back(fp.feature_id);
  return WeightedNetwork(std::move(ids), std::move(edges));
}

/// `feature_id<TAB>chrom<TAB>pos`, optional header line.
inline GenomicPositions load_positions(const std::string& path) {
  GenomicPositions out;
  const auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = detail::split_tabs(lines[i].text);
    if (f.size() != 3) {
      throw Error(ErrorKind::ragged_row, "expected 3 fields", lines[i].number);
    }
    const auto p = detail::try_parse_int(f[2]);
    if (!p) {
      if (i == 0) continue;
      throw Error(ErrorKind::non_numeric, "bad position", lines[i].number, 3);
    }
    out.push_back({std::string(f[0]), std::string(f[1]), *p});
  }
  return out;
}

/// `gene_id<TAB>chrom<TAB>start<TAB>end`, optional header line.
inline GeneIntervals load_genes(const std::string& path) {
  GeneIntervals out;
  const auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = detail::split_tabs(lines[i].text);
    if (f.size() != 4) {
      throw Error(ErrorKind::ragged_row, "expected 4 fields", lines[i].number);
    }
    const auto s = detail::try_parse_int(f[2]);
    const auto e = detail::try_parse_int(f[3]);
    if (!s || !e) {
      if (i == 0) continue;
      throw Error(ErrorKind::non_numeric, "bad interval", lines[i].number,
                  s ? 4 : 3);
    }
    out.push_back({std::string(f[0]), std::string(f[1]), *s, *e});
  }
  return out;
}

}  // namespace netsel
