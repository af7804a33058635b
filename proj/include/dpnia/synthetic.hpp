#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dpnia/error.hpp"
#include "dpnia/graph.hpp"

namespace dpnia {

enum class GraphFamily { ErdosRenyi, PreferentialAttachment };

inline std::string to_string(GraphFamily f) {
  return f == GraphFamily::ErdosRenyi ? "er" : "pa";
}

inline std::optional<GraphFamily> parse_family(std::string_view name) {
  if (name == "er" || name == "erdos-renyi") return GraphFamily::ErdosRenyi;
  if (name == "pa" || name == "preferential-attachment") return GraphFamily::PreferentialAttachment;
  return std::nullopt;
}

struct SyntheticSpec {
  GraphFamily family = GraphFamily::PreferentialAttachment;
  std::size_t nodes = 500;
  double avg_degree = 6.0;
  double overlap = 0.8;  // fraction of nodes with a known counterpart
  double noise = 0.1;    // per-layer independent edge deletion probability
  std::uint64_t seed = 0;
};

namespace detail {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

inline EdgeList erdos_renyi(std::size_t n, double avg_degree, std::mt19937_64& rng) {
  EdgeList edges;
  if (n < 2) return edges;
  const double p = std::clamp(avg_degree / static_cast<double>(n - 1), 0.0, 1.0);
  std::bernoulli_distribution coin(p);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  return edges;
}

// Barabasi-Albert growth: each new node attaches to `m` distinct existing
// nodes chosen proportionally to degree.
inline EdgeList preferential_attachment(std::size_t n, double avg_degree, std::mt19937_64& rng) {
  EdgeList edges;
  const auto m = static_cast<std::size_t>(std::max(1.0, std::round(avg_degree / 2.0)));
  if (n <= m) return erdos_renyi(n, static_cast<double>(n), rng);
  std::vector<NodeId> endpoints;
  for (NodeId a = 0; a <= m; ++a)
    for (NodeId b = a + 1; b <= m; ++b) {
      edges.emplace_back(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  std::vector<NodeId> chosen;
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    chosen.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (chosen.size() < m) {
      NodeId t = endpoints[pick(rng)];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (NodeId t : chosen) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

}  // namespace detail

// Samples a base graph, copies it into both layers (layer-2 indices shuffled),
// deletes each edge independently per layer with probability `noise`, and
// returns every overlapping node's identity correspondence in `phi` (psi is
// left empty for the caller to split).
inline MultiplexInstance generate_synthetic_multiplex(const SyntheticSpec& spec) {
  const auto overlapping =
      static_cast<std::size_t>(std::floor(spec.overlap * static_cast<double>(spec.nodes) + 0.5));
  if (!(spec.overlap > 0.0 && spec.overlap <= 1.0)) throw ConfigError("overlap must lie in (0, 1]");
  if (!(spec.noise >= 0.0 && spec.noise < 1.0)) throw ConfigError("noise must lie in [0, 1)");
  if (overlapping < 4) throw ConfigError("overlap * nodes must be at least 4 to split inter-links");

  std::mt19937_64 rng(spec.seed);
  const auto base = spec.family == GraphFamily::ErdosRenyi
                        ? detail::erdos_renyi(spec.nodes, spec.avg_degree, rng)
                        : detail::preferential_attachment(spec.nodes, spec.avg_degree, rng);

  std::vector<NodeId> order(spec.nodes);
  for (NodeId v = 0; v < spec.nodes; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<NodeId> in_layer2(spec.nodes);

  MultiplexInstance inst;
  for (NodeId v = 0; v < spec.nodes; ++v) inst.g1.add_node("a" + std::to_string(v));
  for (NodeId k = 0; k < spec.nodes; ++k) in_layer2[order[k]] = inst.g2.add_node("b" + std::to_string(order[k]));

  std::bernoulli_distribution drop(spec.noise);
  for (auto [a, b] : base)
    if (!drop(rng)) inst.g1.add_edge(a, b);
  for (auto [a, b] : base)
    if (!drop(rng)) inst.g2.add_edge(in_layer2[a], in_layer2[b]);

  std::vector<NodeId> members(spec.nodes);
  for (NodeId v = 0; v < spec.nodes; ++v) members[v] = v;
  std::shuffle(members.begin(), members.end(), rng);
  members.resize(overlapping);
  std::sort(members.begin(), members.end());
  for (NodeId v : members) inst.phi.push_back({v, in_layer2[v]});
  inst.validate();
  return inst;
}

}  // namespace dpnia
