#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dpnia/dpnia.hpp"

namespace dpnia::testing {

inline NodeId id(const SocialNetwork& net, const std::string& label) { return *net.find(label); }

// Toy instance: layer 1 edges a4a1 a4a2 a4a3 a5a1 a5a2, layer 2 edges b4b1
// b4b2 b5b1 b5b2 b6b1, phi = (a1,b1) (a2,b2) (a3,b3). a6 and b3 are isolated.
// Labels a1..a6 / b1..b6 map to indices 0..5.
inline MultiplexInstance toy() {
  MultiplexInstance inst;
  for (int i = 1; i <= 6; ++i) inst.g1.add_node("a" + std::to_string(i));
  for (int i = 1; i <= 6; ++i) inst.g2.add_node("b" + std::to_string(i));
  auto e1 = [&](int x, int y) { inst.g1.add_edge(x - 1, y - 1); };
  auto e2 = [&](int x, int y) { inst.g2.add_edge(x - 1, y - 1); };
  e1(4, 1), e1(4, 2), e1(4, 3), e1(5, 1), e1(5, 2);
  e2(4, 1), e2(4, 2), e2(5, 1), e2(5, 2), e2(6, 1);
  inst.phi = {{0, 0}, {1, 1}, {2, 2}};
  inst.validate();
  return inst;
}

inline SocialNetwork random_network(std::size_t n, double p, std::mt19937_64& rng, char prefix) {
  SocialNetwork net;
  for (std::size_t v = 0; v < n; ++v) net.add_node(prefix + std::to_string(v));
  std::bernoulli_distribution coin(p);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (coin(rng)) net.add_edge(a, b);
  return net;
}

// Two independent random layers with a random partial matching split into
// `observed` phi pairs and `held_out` psi pairs.
inline MultiplexInstance random_instance(std::mt19937_64& rng, std::size_t n1, std::size_t n2, double p,
                                         std::size_t observed, std::size_t held_out = 0) {
  MultiplexInstance inst;
  inst.g1 = random_network(n1, p, rng, 'a');
  inst.g2 = random_network(n2, p, rng, 'b');
  std::vector<NodeId> left(n1), right(n2);
  for (NodeId v = 0; v < n1; ++v) left[v] = v;
  for (NodeId v = 0; v < n2; ++v) right[v] = v;
  std::shuffle(left.begin(), left.end(), rng);
  std::shuffle(right.begin(), right.end(), rng);
  const std::size_t k = std::min({observed + held_out, n1, n2});
  for (std::size_t i = 0; i < k; ++i) (i < observed ? inst.phi : inst.psi).push_back({left[i], right[i]});
  inst.validate();
  return inst;
}

// Oracle: |C(u1,u2)| by scanning every observed pair against both adjacency
// relations, independent of neighbor-list traversal order.
inline std::size_t brute_common(const MultiplexInstance& inst, NodeId u1, NodeId u2) {
  std::size_t c = 0;
  for (const auto& p : inst.phi)
    if (inst.g1.has_edge(u1, p.first) && inst.g2.has_edge(u2, p.second)) ++c;
  return c;
}

inline std::size_t brute_matched(const MultiplexInstance& inst, Layer layer, NodeId u) {
  std::size_t c = 0;
  for (const auto& p : inst.phi)
    if (inst.layer(layer).has_edge(u, layer == Layer::First ? p.first : p.second)) ++c;
  return c;
}

inline bool is_matched(const MultiplexInstance& inst, Layer layer, NodeId u) {
  return std::any_of(inst.phi.begin(), inst.phi.end(),
                     [&](const NodePair& p) { return (layer == Layer::First ? p.first : p.second) == u; });
}

inline std::vector<NodeId> brute_unmatched(const MultiplexInstance& inst, Layer layer) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < inst.layer(layer).node_count(); ++v)
    if (!is_matched(inst, layer, v)) out.push_back(v);
  return out;
}

// max over unmatched candidates of the other layer of |C|.
inline std::size_t brute_max_common(const MultiplexInstance& inst, Layer layer, NodeId u) {
  std::size_t best = 0;
  for (NodeId c : brute_unmatched(inst, other(layer)))
    best = std::max(best, layer == Layer::First ? brute_common(inst, u, c) : brute_common(inst, c, u));
  return best;
}

// True when the pre-existing part of `after` is edge-identical to `before`.
inline bool preserves_original(const SocialNetwork& before, const SocialNetwork& after) {
  if (after.node_count() < before.node_count()) return false;
  for (NodeId v = 0; v < before.node_count(); ++v) {
    if (before.label(v) != after.label(v)) return false;
    std::vector<NodeId> kept;
    for (NodeId w : after.neighbors(v))
      if (w < before.node_count()) kept.push_back(w);
    auto orig = before.neighbors(v);
    if (!std::equal(kept.begin(), kept.end(), orig.begin(), orig.end())) return false;
  }
  return true;
}

// Oracle per-node budget: maxC + 1 when a matched neighbor is left over.
inline std::size_t brute_budget(const MultiplexInstance& inst, Layer layer, NodeId u) {
  const auto m = brute_matched(inst, layer, u);
  const auto c = brute_max_common(inst, layer, u);
  return c + (m > c ? 1 : 0);
}

// Oracle NC of a node set: observed pairs whose `layer` endpoint is adjacent
// to every member.
inline std::size_t brute_set_common(const MultiplexInstance& inst, Layer layer, const std::vector<NodeId>& set) {
  std::size_t c = 0;
  for (const auto& p : inst.phi) {
    const NodeId end = layer == Layer::First ? p.first : p.second;
    if (std::all_of(set.begin(), set.end(), [&](NodeId u) { return inst.layer(layer).has_edge(u, end); })) ++c;
  }
  return c;
}

// Largest subset of attackable `layer` nodes (budget in [1, cap]) whose NC
// covers its largest member budget, by enumerating every subset.
inline std::size_t brute_max_feasible_set(const MultiplexInstance& inst, Layer layer, std::size_t cap) {
  std::vector<NodeId> pool;
  std::vector<std::size_t> budget;
  for (NodeId u : brute_unmatched(inst, layer)) {
    const auto b = brute_budget(inst, layer, u);
    if (b >= 1 && b <= cap) {
      pool.push_back(u);
      budget.push_back(b);
    }
  }
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << pool.size()); ++mask) {
    std::vector<NodeId> set;
    std::size_t required = 0;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask >> i & 1) {
        set.push_back(pool[i]);
        required = std::max(required, budget[i]);
      }
    if (set.size() > best && brute_set_common(inst, layer, set) >= required) best = set.size();
  }
  return best;
}

// Calls f(subset) for every k-subset of `items`.
template <class F>
void for_each_subset(const std::vector<NodeId>& items, std::size_t k, F&& f) {
  std::vector<NodeId> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (pick.size() == k) {
      f(pick);
      return;
    }
    for (std::size_t i = from; i + (k - pick.size()) <= items.size(); ++i) {
      pick.push_back(items[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
}

// CN score between target u (in `target`) and a fresh node injected into the
// other layer with the given anchors: observed pairs adjacent to u on the
// target side whose other endpoint is an anchor.
inline std::size_t injected_cn(const MultiplexInstance& inst, Layer target, NodeId u, const std::vector<NodeId>& anchors) {
  std::size_t c = 0;
  for (const auto& p : inst.phi) {
    const NodeId here = target == Layer::First ? p.first : p.second;
    const NodeId there = target == Layer::First ? p.second : p.first;
    if (inst.layer(target).has_edge(u, here) && std::find(anchors.begin(), anchors.end(), there) != anchors.end()) ++c;
  }
  return c;
}

}  // namespace dpnia::testing
