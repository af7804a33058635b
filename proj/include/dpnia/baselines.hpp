#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dpnia/alignment.hpp"
#include "dpnia/graph.hpp"
#include "dpnia/injection.hpp"
#include "dpnia/plan.hpp"

namespace dpnia {

// Heuristic injection attacks. LPSlike and GPSlike adapt link-selection
// attacks to injection: endpoints of selected intra-links become anchors.
// Their weights (matched-neighbor product, sampled by restarting one-step
// walks; degree product, taken greedily) are this library's definitions, not
// reproductions of the original link-perturbation methods.
enum class Strategy { Random, Uniform, ALDN, ASDN, AMN, AUMN, LPSlike, GPSlike };

inline constexpr Strategy kAllStrategies[] = {Strategy::Random, Strategy::Uniform, Strategy::ALDN,
                                              Strategy::ASDN,   Strategy::AMN,     Strategy::AUMN,
                                              Strategy::LPSlike, Strategy::GPSlike};

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Random: return "Random";
    case Strategy::Uniform: return "Uniform";
    case Strategy::ALDN: return "ALDN";
    case Strategy::ASDN: return "ASDN";
    case Strategy::AMN: return "AMN";
    case Strategy::AUMN: return "AUMN";
    case Strategy::LPSlike: return "LPSlike";
    case Strategy::GPSlike: return "GPSlike";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) {
  for (auto s : kAllStrategies)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

struct BaselineConfig {
  Strategy strategy = Strategy::Random;
  std::size_t injected_nodes = 1;
  std::size_t degree = 1;  // target links per injected node
  std::uint64_t seed = 0;

  std::size_t budget() const noexcept { return injected_nodes * degree; }
};

namespace detail {

using AnchorLists = std::vector<std::vector<NodeId>>;

inline void check_config(const BaselineConfig& cfg) {
  if (cfg.injected_nodes < 1) throw ConfigError("baseline needs at least one injected node");
  if (cfg.degree < 1) throw ConfigError("baseline degree must be at least 1");
}

// Existing node sequence t = 0,1,2,... fed to injected node t / degree.
inline AnchorLists cyclic_assignment(const std::vector<NodeId>& order, const BaselineConfig& cfg) {
  AnchorLists lists(cfg.injected_nodes);
  if (order.empty()) return lists;
  const std::size_t per_node = std::min(cfg.degree, order.size());
  std::size_t t = 0;
  for (auto& list : lists)
    for (std::size_t k = 0; k < per_node; ++k) list.push_back(order[t++ % order.size()]);
  return lists;
}

inline std::vector<NodeId> matched_mask_nodes(const MultiplexInstance& inst, Layer layer, bool matched) {
  const MatchState state(inst);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < inst.layer(layer).node_count(); ++v)
    if (state.matched(layer, v) == matched) out.push_back(v);
  return out;
}

inline AnchorLists random_anchors(const SocialNetwork& net, const BaselineConfig& cfg, std::mt19937_64& rng) {
  AnchorLists lists(cfg.injected_nodes);
  const std::size_t n = net.node_count();
  if (n == 0) return lists;
  const double p = std::min(1.0, static_cast<double>(cfg.degree) / static_cast<double>(n));
  std::bernoulli_distribution coin(p);
  std::size_t spent = 0;
  for (auto& list : lists)
    for (NodeId v = 0; v < n && spent < cfg.budget(); ++v)
      if (coin(rng)) {
        list.push_back(v);
        ++spent;
      }
  return lists;
}

inline AnchorLists sampled_anchors(std::vector<NodeId> pool, const BaselineConfig& cfg, std::mt19937_64& rng) {
  AnchorLists lists(cfg.injected_nodes);
  for (auto& list : lists) std::sample(pool.begin(), pool.end(), std::back_inserter(list), cfg.degree, rng);
  return lists;
}

inline AnchorLists degree_ordered_anchors(const SocialNetwork& net, const BaselineConfig& cfg, bool descending) {
  std::vector<NodeId> order(net.node_count());
  for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return descending ? net.degree(a) > net.degree(b) : net.degree(a) < net.degree(b);
  });
  return cyclic_assignment(order, cfg);
}

inline std::vector<std::size_t> matched_neighbor_counts(const MultiplexInstance& inst, Layer layer) {
  const MatchState state(inst);
  const auto& net = inst.layer(layer);
  std::vector<std::size_t> counts(net.node_count(), 0);
  for (NodeId v = 0; v < net.node_count(); ++v)
    for (NodeId w : net.neighbors(v))
      if (state.matched(layer, w)) ++counts[v];
  return counts;
}

inline void add_endpoint(std::vector<NodeId>& list, NodeId v, std::size_t limit) {
  if (list.size() < limit && std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
}

inline AnchorLists lps_like_anchors(const MultiplexInstance& inst, Layer layer, const BaselineConfig& cfg,
                                    std::mt19937_64& rng) {
  const auto& net = inst.layer(layer);
  const auto matched = matched_neighbor_counts(inst, layer);
  std::vector<NodeId> starts;
  for (NodeId v = 0; v < net.node_count(); ++v)
    if (net.degree(v) > 0) starts.push_back(v);
  AnchorLists lists(cfg.injected_nodes);
  if (starts.empty()) return lists;
  const std::size_t limit = std::min(cfg.degree, net.node_count());
  std::uniform_int_distribution<std::size_t> pick_start(0, starts.size() - 1);
  std::vector<double> weights;
  for (auto& list : lists) {
    const std::size_t max_steps = 50 * limit + 100;
    for (std::size_t step = 0; step < max_steps && list.size() < limit; ++step) {
      const NodeId from = starts[pick_start(rng)];
      const auto nbrs = net.neighbors(from);
      weights.assign(nbrs.size(), 0.0);
      double total = 0.0;
      for (std::size_t i = 0; i < nbrs.size(); ++i)
        total += weights[i] = static_cast<double>(matched[from] * matched[nbrs[i]]);
      if (total <= 0.0) std::fill(weights.begin(), weights.end(), 1.0);
      std::discrete_distribution<std::size_t> pick_edge(weights.begin(), weights.end());
      const NodeId to = nbrs[pick_edge(rng)];
      add_endpoint(list, from, limit);
      add_endpoint(list, to, limit);
    }
  }
  return lists;
}

inline AnchorLists gps_like_anchors(const SocialNetwork& net, const BaselineConfig& cfg) {
  auto edges = net.edges();
  std::stable_sort(edges.begin(), edges.end(), [&](const Link& a, const Link& b) {
    return net.degree(a.first) * net.degree(a.second) > net.degree(b.first) * net.degree(b.second);
  });
  std::vector<NodeId> stream;
  stream.reserve(edges.size() * 2);
  for (auto [x, y] : edges) {
    stream.push_back(x);
    stream.push_back(y);
  }
  AnchorLists lists(cfg.injected_nodes);
  if (stream.empty()) return lists;
  const std::size_t limit = std::min(cfg.degree, net.node_count());
  std::size_t cursor = 0;
  for (auto& list : lists)
    for (std::size_t scanned = 0; scanned < stream.size() && list.size() < limit; ++scanned)
      add_endpoint(list, stream[cursor++ % stream.size()], limit);
  return lists;
}

inline AnchorLists choose_baseline_anchors(const MultiplexInstance& inst, Layer layer,
                                           const BaselineConfig& cfg) {
  std::mt19937_64 rng(cfg.seed * 2 + (layer == Layer::First ? 0 : 1));
  const auto& net = inst.layer(layer);
  switch (cfg.strategy) {
    case Strategy::Random: return random_anchors(net, cfg, rng);
    case Strategy::Uniform: {
      std::vector<NodeId> order(net.node_count());
      for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
      return cyclic_assignment(order, cfg);
    }
    case Strategy::ALDN: return degree_ordered_anchors(net, cfg, true);
    case Strategy::ASDN: return degree_ordered_anchors(net, cfg, false);
    case Strategy::AMN: return sampled_anchors(matched_mask_nodes(inst, layer, true), cfg, rng);
    case Strategy::AUMN: return sampled_anchors(matched_mask_nodes(inst, layer, false), cfg, rng);
    case Strategy::LPSlike: return lps_like_anchors(inst, layer, cfg, rng);
    case Strategy::GPSlike: return gps_like_anchors(net, cfg);
  }
  return {};
}

}  // namespace detail

// Injects `cfg.injected_nodes` nodes into each selected layer, each linked to
// at most `cfg.degree` existing nodes, with a per-layer budget of
// injected_nodes * degree. Anchors are chosen on the unperturbed instance.
inline AttackOutcome attack_baseline(const MultiplexInstance& inst, const BaselineConfig& cfg,
                                     bool attack_layer1, bool attack_layer2) {
  detail::check_config(cfg);
  AttackOutcome out{inst,
                    InjectionLedger(inst, attack_layer1 ? cfg.budget() : 0, attack_layer2 ? cfg.budget() : 0),
                    {},
                    false};
  for (Layer layer : {Layer::Second, Layer::First}) {
    if (!(layer == Layer::First ? attack_layer1 : attack_layer2)) continue;
    for (auto& anchors : detail::choose_baseline_anchors(inst, layer, cfg)) {
      AttackInstruction step;
      step.layer = layer;
      step.anchors = std::move(anchors);
      std::sort(step.anchors.begin(), step.anchors.end());
      step.injected = inject_node(out.instance.layer(layer), out.ledger, layer, step.anchors);
      out.plan.steps.push_back(std::move(step));
    }
  }
  return out;
}

inline AttackOutcome attack_random(const MultiplexInstance& inst, BaselineConfig cfg, Layer layer) {
  cfg.strategy = Strategy::Random;
  return attack_baseline(inst, cfg, layer == Layer::First, layer == Layer::Second);
}
inline AttackOutcome attack_uniform(const MultiplexInstance& inst, BaselineConfig cfg, Layer layer) {
  cfg.strategy = Strategy::Uniform;
  return attack_baseline(inst, cfg, layer == Layer::First, layer == Layer::Second);
}
inline AttackOutcome attack_aldn(const MultiplexInstance& inst, BaselineConfig cfg, Layer layer) {
  cfg.strategy = Strategy::ALDN;
  return attack_baseline(inst, cfg, layer == Layer::First, layer == Layer::Second);
}
inline AttackOutcome attack_asdn(const MultiplexInstance& inst, BaselineConfig cfg, Layer layer) {
  cfg.strategy = Strategy::ASDN;
  return attack_baseline(inst, cfg, layer == Layer::First, layer == Layer::Second);
}
inline AttackOutcome attack_amn(const MultiplexInstance& inst, BaselineConfig cfg, Layer layer) {
  cfg.strategy = Strategy::AMN;
  return attack_baseline(inst, cfg, layer == Layer::First, layer == Layer::Second);
}
inline AttackOutcome attack_aumn(const MultiplexInstance& inst, BaselineConfig cfg, Layer layer) {
  cfg.strategy = Strategy::AUMN;
  return attack_baseline(inst, cfg, layer == Layer::First, layer == Layer::Second);
}
inline AttackOutcome attack_lps_like(const MultiplexInstance& inst, BaselineConfig cfg, Layer layer) {
  cfg.strategy = Strategy::LPSlike;
  return attack_baseline(inst, cfg, layer == Layer::First, layer == Layer::Second);
}
inline AttackOutcome attack_gps_like(const MultiplexInstance& inst, BaselineConfig cfg, Layer layer) {
  cfg.strategy = Strategy::GPSlike;
  return attack_baseline(inst, cfg, layer == Layer::First, layer == Layer::Second);
}

}  // namespace dpnia
