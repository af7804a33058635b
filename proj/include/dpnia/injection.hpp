#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpnia/error.hpp"
#include "dpnia/graph.hpp"

namespace dpnia {

using Link = std::pair<NodeId, NodeId>;

// Per-layer accounting of injected nodes and the links charged to the budget.
struct LayerLedger {
  std::size_t original_nodes = 0;
  std::size_t budget = 0;
  std::vector<NodeId> injected;
  std::vector<Link> attack_links;    // (injected, pre-existing); charged
  std::vector<Link> internal_links;  // (injected, injected); free

  bool is_injected(NodeId node) const noexcept { return node >= original_nodes; }
  std::size_t used() const noexcept { return attack_links.size(); }
  std::size_t remaining() const noexcept { return budget - used(); }
};

class InjectionLedger {
 public:
  InjectionLedger() = default;
  InjectionLedger(const MultiplexInstance& inst, std::size_t budget1, std::size_t budget2) {
    layers_[0].original_nodes = inst.g1.node_count();
    layers_[0].budget = budget1;
    layers_[1].original_nodes = inst.g2.node_count();
    layers_[1].budget = budget2;
  }

  LayerLedger& operator[](Layer l) { return layers_[slot(l)]; }
  const LayerLedger& operator[](Layer l) const { return layers_[slot(l)]; }

  std::size_t total_used() const noexcept { return layers_[0].used() + layers_[1].used(); }

 private:
  std::array<LayerLedger, 2> layers_{};
};

// Appends a fresh node to `net` linked to every anchor. Links to pre-existing
// nodes are charged against the layer budget; links to previously injected
// nodes are recorded but free. On BudgetExceeded the network is untouched.
inline NodeId inject_node(SocialNetwork& net, InjectionLedger& ledger, Layer layer,
                          std::span<const NodeId> anchors, std::string label = {}) {
  auto& book = ledger[layer];
  std::vector<NodeId> targets(anchors.begin(), anchors.end());
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (NodeId a : targets)
    if (!net.contains(a)) throw Error("anchor " + std::to_string(a) + " does not exist");

  const auto charged = static_cast<std::size_t>(
      std::count_if(targets.begin(), targets.end(), [&](NodeId a) { return !book.is_injected(a); }));
  if (charged > book.remaining()) throw BudgetExceeded(charged, book.remaining());

  if (label.empty()) {
    std::size_t k = book.injected.size();
    do {
      label = "inj" + to_string(layer) + "_" + std::to_string(k++);
    } while (net.find(label));
  }
  const NodeId fresh = net.add_node(std::move(label));
  book.injected.push_back(fresh);
  for (NodeId a : targets) {
    net.add_edge(fresh, a);
    if (book.is_injected(a))
      book.internal_links.emplace_back(fresh, a);
    else
      book.attack_links.emplace_back(fresh, a);
  }
  return fresh;
}

}  // namespace dpnia
