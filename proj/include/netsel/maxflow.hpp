#pragma once

// s/t max-flow / min-cut on graphs whose nodes carry at most one terminal arc
// and whose internal arcs come in symmetric pairs.
//
// The solver follows Boykov & Kolmogorov: two search trees grown from the
// terminals, augmentation along the found path, and adoption of orphans with
// timestamp/distance heuristics. Capacities are doubles; residuals at or
// below kSaturated are treated as zero.

#include <algorithm>
#include <deque>
#include <limits>
#include <vector>

#include "netsel/datamodel.hpp"
#include "netsel/detail/kahan.hpp"

namespace netsel {

/// Arc pair u <-> v carrying `cap` in both directions.
struct PairArc {
  Index u;
  Index v;
  double cap;
};

struct STGraph {
  Index node_count = 0;
  std::vector<double> source_cap;  // s -> p
  std::vector<double> sink_cap;    // p -> t
  std::vector<PairArc> arcs;

  explicit STGraph(Index nodes = 0)
      : node_count(nodes), source_cap(nodes, 0.0), sink_cap(nodes, 0.0) {}

  void validate() const {
    if (static_cast<Index>(source_cap.size()) != node_count ||
        static_cast<Index>(sink_cap.size()) != node_count) {
      throw Error(ErrorKind::dimension_mismatch, "terminal capacity length");
    }
    for (Index p = 0; p < node_count; ++p) {
      if (!(source_cap[p] >= 0.0) || !(sink_cap[p] >= 0.0) ||
          !std::isfinite(source_cap[p]) || !std::isfinite(sink_cap[p])) {
        throw Error(ErrorKind::invalid_argument,
                    "terminal capacities must be finite and >= 0");
      }
      if (source_cap[p] > 0.0 && sink_cap[p] > 0.0) {
        throw Error(ErrorKind::invalid_argument,
                    "node has both terminal arcs");
      }
    }
    for (const auto& a : arcs) {
      if (a.u < 0 || a.v < 0 || a.u >= node_count || a.v >= node_count ||
          a.u == a.v) {
        throw Error(ErrorKind::invalid_argument, "bad internal arc");
      }
      if (!(a.cap >= 0.0) || !std::isfinite(a.cap)) {
        throw Error(ErrorKind::invalid_argument,
                    "arc capacities must be finite and >= 0");
      }
    }
  }
};

struct MinCut {
  double flow_value = 0.0;
  /// Non-terminal nodes reachable from s in the final residual graph,
  /// ascending. This is the smallest source side among all minimum cuts.
  std::vector<Index> source_side;
};

inline constexpr double kSaturated = 1e-12;

namespace detail {

class BkMaxflow {
 public:
  explicit BkMaxflow(const STGraph& g) : n_(g.node_count) {
    const auto arc_count = 2 * g.arcs.size();
    head_.resize(arc_count);
    rcap_.resize(arc_count);
    std::vector<Index> degree(n_ + 1, 0);
    for (const auto& a : g.arcs) {
      ++degree[a.u + 1];
      ++degree[a.v + 1];
    }
    for (Index i = 0; i < n_; ++i) degree[i + 1] += degree[i];
    first_ = degree;
    out_.resize(arc_count);
    auto fill = degree;
    for (std::size_t k = 0; k < g.arcs.size(); ++k) {
      const auto& a = g.arcs[k];
      const Index fwd = static_cast<Index>(2 * k);
      head_[fwd] = a.v;
      head_[fwd + 1] = a.u;
      rcap_[fwd] = a.cap;
      rcap_[fwd + 1] = a.cap;
      out_[fill[a.u]++] = fwd;
      out_[fill[a.v]++] = fwd + 1;
    }
    tr_cap_.resize(n_);
    for (Index i = 0; i < n_; ++i) tr_cap_[i] = g.source_cap[i] - g.sink_cap[i];
  }

  MinCut solve() {
    init_trees();
    Index current = kNone;
    while (true) {
      Index i = kNone;
      if (current != kNone) {
        i = current;
        active_[i] = 0;
        if (parent_[i] == kNone) i = kNone;
      }
      if (i == kNone) {
        i = next_active();
        if (i == kNone) break;
      }

      Index middle = kNone;  // arc from a source-tree node to a sink-tree node
      if (!is_sink_[i]) {
        for (Index k = first_[i]; k < first_[i + 1]; ++k) {
          const Index a = out_[k];
          if (rcap_[a] <= 0.0) continue;
          const Index j = head_[a];
          if (parent_[j] == kNone) {
            is_sink_[j] = 0;
            parent_[j] = sister(a);
            ts_[j] = ts_[i];
            dist_[j] = dist_[i] + 1;
            set_active(j);
          } else if (is_sink_[j]) {
            middle = a;
            break;
          } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
            parent_[j] = sister(a);
            ts_[j] = ts_[i];
            dist_[j] = dist_[i] + 1;
          }
        }
      } else {
        for (Index k = first_[i]; k < first_[i + 1]; ++k) {
          const Index a = out_[k];
          if (rcap_[sister(a)] <= 0.0) continue;
          const Index j = head_[a];
          if (parent_[j] == kNone) {
            is_sink_[j] = 1;
            parent_[j] = sister(a);
            ts_[j] = ts_[i];
            dist_[j] = dist_[i] + 1;
            set_active(j);
          } else if (!is_sink_[j]) {
            middle = sister(a);
            break;
          } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
            parent_[j] = sister(a);
            ts_[j] = ts_[i];
            dist_[j] = dist_[i] + 1;
          }
        }
      }

      ++time_;
      if (middle != kNone) {
        active_[i] = 1;  // keep growing from i next round
        current = i;
        augment(middle);
        while (!orphans_.empty()) {
          const Index o = orphans_.front();
          orphans_.pop_front();
          if (is_sink_[o]) {
            process_orphan<true>(o);
          } else {
            process_orphan<false>(o);
          }
        }
      } else {
        current = kNone;
      }
    }
    return {flow_.value(), residual_source_side()};
  }

 private:
  static constexpr Index kNone = -1;
  static constexpr Index kTerminal = -2;
  static constexpr Index kOrphan = -3;
  static constexpr long kInfiniteDist = std::numeric_limits<long>::max();

  static Index sister(Index a) { return a ^ 1; }

  void init_trees() {
    parent_.assign(n_, kNone);
    is_sink_.assign(n_, 0);
    active_.assign(n_, 0);
    ts_.assign(n_, 0);
    dist_.assign(n_, 0);
    time_ = 0;
    for (Index i = 0; i < n_; ++i) {
      if (tr_cap_[i] > kSaturated) {
        is_sink_[i] = 0;
      } else if (tr_cap_[i] < -kSaturated) {
        is_sink_[i] = 1;
      } else {
        tr_cap_[i] = 0.0;
        continue;
      }
      parent_[i] = kTerminal;
      dist_[i] = 1;
      set_active(i);
    }
  }

  void set_active(Index i) {
    if (!active_[i]) {
      active_[i] = 1;
      queue_.push_back(i);
    }
  }

  Index next_active() {
    while (!queue_.empty()) {
      const Index i = queue_.front();
      queue_.pop_front();
      active_[i] = 0;
      if (parent_[i] != kNone) return i;
    }
    return kNone;
  }

  void set_orphan(Index i) {
    parent_[i] = kOrphan;
    orphans_.push_back(i);
  }

  void augment(Index middle) {
    // bottleneck along s -> ... -> tail(middle) -> head(middle) -> ... -> t
    double b = rcap_[middle];
    Index i = head_[sister(middle)];
    while (parent_[i] != kTerminal) {
      const Index a = parent_[i];
      b = std::min(b, rcap_[sister(a)]);
      i = head_[a];
    }
    b = std::min(b, tr_cap_[i]);
    i = head_[middle];
    while (parent_[i] != kTerminal) {
      const Index a = parent_[i];
      b = std::min(b, rcap_[a]);
      i = head_[a];
    }
    b = std::min(b, -tr_cap_[i]);

    push(sister(middle), middle, b);

    i = head_[sister(middle)];
    while (parent_[i] != kTerminal) {
      const Index a = parent_[i];
      const Index next = head_[a];
      if (push(a, sister(a), b)) set_orphan(i);
      i = next;
    }
    tr_cap_[i] -= b;
    if (tr_cap_[i] <= kSaturated) {
      tr_cap_[i] = 0.0;
      set_orphan(i);
    }

    i = head_[middle];
    while (parent_[i] != kTerminal) {
      const Index a = parent_[i];
      const Index next = head_[a];
      if (push(sister(a), a, b)) set_orphan(i);
      i = next;
    }
    tr_cap_[i] += b;
    if (tr_cap_[i] >= -kSaturated) {
      tr_cap_[i] = 0.0;
      set_orphan(i);
    }
    flow_.add(b);
  }

  /// Shifts b units of residual capacity; true if `to_decrease` saturated.
  bool push(Index to_increase, Index to_decrease, double b) {
    rcap_[to_increase] += b;
    rcap_[to_decrease] -= b;
    if (rcap_[to_decrease] <= kSaturated) {
      rcap_[to_decrease] = 0.0;
      return true;
    }
    return false;
  }

  /// Finds a new parent for orphan i within its own tree, or frees it.
  template <bool kSinkTree>
  void process_orphan(Index i) {
    Index best_arc = kNone;
    long best_dist = kInfiniteDist;
    for (Index k = first_[i]; k < first_[i + 1]; ++k) {
      const Index a0 = out_[k];
      // residual capacity toward i (source tree) or away from i (sink tree)
      const double cap = kSinkTree ? rcap_[a0] : rcap_[sister(a0)];
      if (cap <= 0.0) continue;
      Index j = head_[a0];
      if (static_cast<bool>(is_sink_[j]) != kSinkTree || parent_[j] == kNone) {
        continue;
      }
      long d = 0;
      while (true) {
        if (ts_[j] == time_) {
          d += dist_[j];
          break;
        }
        const Index a = parent_[j];
        ++d;
        if (a == kTerminal) {
          ts_[j] = time_;
          dist_[j] = 1;
          break;
        }
        if (a == kOrphan) {
          d = kInfiniteDist;
          break;
        }
        j = head_[a];
      }
      if (d < kInfiniteDist) {
        if (d < best_dist) {
          best_arc = a0;
          best_dist = d;
        }
        for (j = head_[a0]; ts_[j] != time_; j = head_[parent_[j]]) {
          ts_[j] = time_;
          dist_[j] = d--;
        }
      }
    }

    if (best_arc != kNone) {
      parent_[i] = best_arc;
      ts_[i] = time_;
      dist_[i] = best_dist + 1;
      return;
    }
    parent_[i] = kNone;
    for (Index k = first_[i]; k < first_[i + 1]; ++k) {
      const Index a0 = out_[k];
      const Index j = head_[a0];
      const Index a = parent_[j];
      if (static_cast<bool>(is_sink_[j]) != kSinkTree || a == kNone) continue;
      const double cap = kSinkTree ? rcap_[a0] : rcap_[sister(a0)];
      if (cap > 0.0) set_active(j);
      if (a != kTerminal && a != kOrphan && head_[a] == i) set_orphan(j);
    }
  }

  std::vector<Index> residual_source_side() const {
    std::vector<char> seen(n_, 0);
    std::vector<Index> stack;
    for (Index i = 0; i < n_; ++i) {
      if (tr_cap_[i] > 0.0) {
        seen[i] = 1;
        stack.push_back(i);
      }
    }
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index k = first_[u]; k < first_[u + 1]; ++k) {
        const Index a = out_[k];
        const Index v = head_[a];
        if (!seen[v] && rcap_[a] > 0.0) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    std::vector<Index> side;
    for (Index i = 0; i < n_; ++i) {
      if (seen[i]) side.push_back(i);
    }
    return side;
  }

  Index n_;
  std::vector<Index> first_;
  std::vector<Index> out_;
  std::vector<Index> head_;
  std::vector<double> rcap_;
  std::vector<double> tr_cap_;

  std::vector<Index> parent_;
  std::vector<char> is_sink_;
  std::vector<char> active_;
  std::vector<long> ts_;
  std::vector<long> dist_;
  long time_ = 0;
  std::deque<Index> queue_;
  std::deque<Index> orphans_;
  CompensatedSum flow_;
};

}  // namespace detail

/// Maximum s/t flow and the minimal minimum cut. Deterministic for a given
/// arc order.
inline MinCut max_flow_min_cut(const STGraph& g) {
  g.validate();
  return detail::BkMaxflow(g).solve();
}

}  // namespace netsel
