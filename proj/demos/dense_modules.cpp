// Greedy module search on a small gene network with one enriched clique.

#include <iostream>
#include <random>

#include "netsel/modsearch.hpp"

int main() {
  using namespace netsel;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise;
  std::bernoulli_distribution link(0.1);

  const Index genes = 30;
  std::vector<Edge> edges;
  for (Index u = 0; u < genes; ++u) {
    for (Index v = u + 1; v < genes; ++v) {
      if ((u < 4 && v < 4) || link(rng)) edges.push_back({u, v, 1.0});
    }
  }
  const auto g = WeightedNetwork::anonymous(genes, std::move(edges));
  Vector z(genes);
  for (Index k = 0; k < genes; ++k) z[k] = k < 4 ? 4.0 : noise(rng);

  const auto modules = greedy_module_search(g, z);
  for (std::size_t r = 0; r < std::min<std::size_t>(3, modules.size()); ++r) {
    std::cout << '#' << r + 1 << " score " << modules[r].score << ":";
    for (const Index k : modules[r].genes) std::cout << ' ' << g.node_ids()[k];
    std::cout << '\n';
  }
}
