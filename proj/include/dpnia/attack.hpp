#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <list>
#include <memory>
#include <unordered_map>
#include <vector>

#include "dpnia/bitvector.hpp"
#include "dpnia/graph.hpp"
#include "dpnia/injection.hpp"
#include "dpnia/plan.hpp"

namespace dpnia {

// Matched-neighbor indicator vectors of every unmatched node of one layer.
// Bit `a` of a node's vector is set iff that layer's endpoint of the a-th
// observed pair (in phi order) is adjacent to the node.
struct MatchedNeighborVectors {
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

  Layer layer = Layer::First;
  std::vector<NodeId> nodes;
  std::vector<BitVector> bits;
  std::vector<std::uint32_t> position;

  bool has(NodeId node) const { return node < position.size() && position[node] != kAbsent; }
  const BitVector& of(NodeId node) const {
    if (!has(node)) throw Error("node " + std::to_string(node) + " has no matched-neighbor vector");
    return bits[position[node]];
  }
};

inline MatchedNeighborVectors build_layer_vectors(const MultiplexInstance& inst, Layer layer) {
  const auto& net = inst.layer(layer);
  MatchedNeighborVectors out;
  out.layer = layer;
  std::vector<bool> matched(net.node_count(), false);
  for (const auto& p : inst.phi) matched[layer == Layer::First ? p.first : p.second] = true;
  out.position.assign(net.node_count(), MatchedNeighborVectors::kAbsent);
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (matched[v]) continue;
    out.position[v] = static_cast<std::uint32_t>(out.nodes.size());
    out.nodes.push_back(v);
  }
  out.bits.assign(out.nodes.size(), BitVector(inst.phi.size()));
  for (std::size_t a = 0; a < inst.phi.size(); ++a) {
    const NodeId endpoint = layer == Layer::First ? inst.phi[a].first : inst.phi[a].second;
    for (NodeId u : net.neighbors(endpoint))
      if (out.has(u)) out.bits[out.position[u]].set(a);
  }
  return out;
}

struct VectorPair {
  MatchedNeighborVectors first;
  MatchedNeighborVectors second;

  const MatchedNeighborVectors& operator[](Layer l) const { return l == Layer::First ? first : second; }
};

inline VectorPair build_vectors(const MultiplexInstance& inst) {
  return {build_layer_vectors(inst, Layer::First), build_layer_vectors(inst, Layer::Second)};
}

// Common-matched-neighbor counts between all unmatched layer-1 (rows) and
// layer-2 (cols) nodes: entry (i,k) = popcount(e_i AND e_k).
struct CmnMatrix {
  std::vector<NodeId> rows;
  std::vector<NodeId> cols;
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> row_max;
  std::vector<std::uint32_t> col_max;

  std::uint32_t at(std::size_t i, std::size_t k) const { return counts[i * cols.size() + k]; }
};

inline CmnMatrix cmn_matrix(const MatchedNeighborVectors& first, const MatchedNeighborVectors& second) {
  if (first.layer != Layer::First || second.layer != Layer::Second)
    throw Error("cmn_matrix expects layer-1 rows and layer-2 columns");
  CmnMatrix m{first.nodes, second.nodes, {}, {}, {}};
  m.counts.assign(m.rows.size() * m.cols.size(), 0);
  m.row_max.assign(m.rows.size(), 0);
  m.col_max.assign(m.cols.size(), 0);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (first.bits[i].none()) continue;
    for (std::size_t k = 0; k < m.cols.size(); ++k) {
      const auto c = static_cast<std::uint32_t>(and_count(first.bits[i], second.bits[k]));
      m.counts[i * m.cols.size() + k] = c;
      m.row_max[i] = std::max(m.row_max[i], c);
      m.col_max[k] = std::max(m.col_max[k], c);
    }
  }
  return m;
}

// How cheaply a node's alignment can be disrupted; delta weighs the
// matched-minus-common gap against the size of the best existing match.
inline double vulnerability(std::size_t matched, std::size_t max_common, double delta) {
  const auto m = static_cast<double>(matched);
  const auto c = static_cast<double>(max_common);
  return delta * (m - c) / (m + 1.0) + (1.0 - delta) / (c + 1.0);
}

// Minimum anchors an injected node needs to outscore (or, when every matched
// neighbor is already common, tie) the best existing candidate.
inline std::size_t per_node_budget(std::size_t matched, std::size_t max_common) {
  return max_common + (matched > max_common ? 1 : 0);
}

struct TargetProfile {
  NodeId node = kNoNode;
  std::uint32_t matched = 0;
  std::uint32_t max_common = 0;
  double vulnerability = 0.0;
  std::uint32_t budget = 0;
};

// Per-node view of the target layer used by the set search.
struct TargetTable {
  Layer layer = Layer::First;
  const MatchedNeighborVectors* vectors = nullptr;
  std::vector<TargetProfile> profiles;  // parallel to vectors->nodes

  const TargetProfile& profile(NodeId node) const { return profiles[vectors->position[node]]; }
  const BitVector& bits(NodeId node) const { return vectors->of(node); }
};

inline TargetTable profile_targets(const VectorPair& vectors, const CmnMatrix& cmn, Layer target,
                                   double delta) {
  TargetTable t;
  t.layer = target;
  t.vectors = &vectors[target];
  const auto& maxima = target == Layer::First ? cmn.row_max : cmn.col_max;
  t.profiles.reserve(t.vectors->nodes.size());
  for (std::size_t i = 0; i < t.vectors->nodes.size(); ++i) {
    TargetProfile p;
    p.node = t.vectors->nodes[i];
    p.matched = static_cast<std::uint32_t>(t.vectors->bits[i].count());
    p.max_common = maxima[i];
    p.vulnerability = vulnerability(p.matched, p.max_common, delta);
    p.budget = static_cast<std::uint32_t>(per_node_budget(p.matched, p.max_common));
    t.profiles.push_back(p);
  }
  return t;
}

// A group of same-layer unmatched nodes attacked by one injected node.
struct TargetSet {
  std::vector<NodeId> members;  // sorted
  BitVector common;             // AND of members' vectors
  std::size_t common_count = 0;
  std::size_t required = 0;     // max per-node budget over members
  std::vector<NodeId> anchors;  // filled once selected

  bool feasible() const noexcept { return common_count >= required; }
  std::size_t size() const noexcept { return members.size(); }
};

inline TargetSet singleton_set(const TargetTable& table, NodeId node) {
  TargetSet s;
  s.members = {node};
  s.common = table.bits(node);
  s.common_count = s.common.count();
  s.required = table.profile(node).budget;
  return s;
}

inline TargetSet set_cmn(const TargetTable& table, const TargetSet& base, NodeId extend) {
  if (std::binary_search(base.members.begin(), base.members.end(), extend))
    throw Error("node " + std::to_string(extend) + " is already in the target set");
  TargetSet s;
  s.members = base.members;
  s.members.insert(std::lower_bound(s.members.begin(), s.members.end(), extend), extend);
  s.common = base.common & table.bits(extend);
  s.common_count = s.common.count();
  s.required = std::max<std::size_t>(base.required, table.profile(extend).budget);
  return s;
}

// Memo of computed target sets keyed by their sorted member list, bounded by
// `capacity` entries with least-recently-used eviction.
class TargetSetCache {
 public:
  using Ptr = std::shared_ptr<const TargetSet>;

  TargetSetCache(const TargetTable& table, std::size_t capacity)
      : table_(table), capacity_(std::max<std::size_t>(capacity, 1)) {}

  Ptr singleton(NodeId node) {
    std::vector<NodeId> key{node};
    if (auto hit = lookup(key)) return hit;
    return insert(std::move(key), singleton_set(table_, node));
  }

  Ptr extend(const TargetSet& base, NodeId node) {
    std::vector<NodeId> key = base.members;
    key.insert(std::lower_bound(key.begin(), key.end(), node), node);
    if (auto hit = lookup(key)) return hit;
    return insert(std::move(key), set_cmn(table_, base, node));
  }

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  std::size_t size() const noexcept { return map_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<NodeId>& key) const noexcept {
      std::uint64_t h = 1469598103934665603ull;
      for (NodeId v : key) h = (h ^ v) * 1099511628211ull;
      return static_cast<std::size_t>(h);
    }
  };
  struct Entry {
    Ptr set;
    std::list<std::vector<NodeId>>::iterator pos;
  };

  Ptr lookup(const std::vector<NodeId>& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    ++hits_;
    order_.splice(order_.begin(), order_, it->second.pos);
    return it->second.set;
  }

  Ptr insert(std::vector<NodeId> key, TargetSet set) {
    ++misses_;
    if (map_.size() >= capacity_) {
      map_.erase(order_.back());
      order_.pop_back();
    }
    order_.push_front(key);
    auto ptr = std::make_shared<const TargetSet>(std::move(set));
    map_.emplace(std::move(key), Entry{ptr, order_.begin()});
    return ptr;
  }

  const TargetTable& table_;
  std::size_t capacity_;
  std::list<std::vector<NodeId>> order_;
  std::unordered_map<std::vector<NodeId>, Entry, KeyHash> map_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

struct SearchOptions {
  double delta = 0.5;
  std::size_t max_links_per_node = std::numeric_limits<std::size_t>::max();
  std::size_t max_injected = std::numeric_limits<std::size_t>::max();
  std::size_t memo_capacity = std::size_t{1} << 18;
  // Set extensions allowed per selected set before settling for the best
  // found so far.
  std::size_t max_expansions = 2'000'000;
  // Identical injected nodes per selected set. One node moves each covered
  // target's counterpart down a single rank; `depth` nodes move it `depth`
  // ranks, so a P@N-oriented attack sets depth = N.
  std::size_t depth = 1;
  // Skip targets whose best achievable injected score only ties the best
  // existing candidate (|M| = maxC). Under index tie-breaking an injected
  // node never wins such a tie.
  bool strict_only = false;
};

struct SearchResult {
  std::vector<TargetSet> sets;
  std::size_t depth = 1;  // injected nodes per set
  std::size_t expansions = 0;
  bool exhaustive = true;
};

// Precomputed vectors and CMN matrix for one instance; shared by both layers'
// searches.
struct AttackContext {
  VectorPair vectors;
  CmnMatrix cmn;

  explicit AttackContext(const MultiplexInstance& inst)
      : vectors(build_vectors(inst)), cmn(cmn_matrix(vectors.first, vectors.second)) {}
};

namespace detail {

// Branch-and-bound search for the largest feasible target set over `pool`,
// which is ordered by descending vulnerability; the first one found wins ties.
class MaxSetSearch {
 public:
  MaxSetSearch(const TargetTable& table, TargetSetCache& cache, std::size_t cap,
               std::size_t max_expansions)
      : table_(table), cache_(cache), cap_(cap), max_expansions_(max_expansions) {}

  TargetSetCache::Ptr run(const std::vector<NodeId>& pool) {
    for (std::size_t i = 0; i < pool.size() && !truncated_; ++i) {
      if (best_ && pool.size() - i <= best_->size()) break;
      auto start = cache_.singleton(pool[i]);
      if (!start->feasible() || start->required > cap_) continue;
      consider(start);
      dfs(start, compatible(*start, pool, i + 1));
    }
    return best_;
  }

  std::size_t expansions() const noexcept { return expansions_; }
  bool truncated() const noexcept { return truncated_; }

 private:
  std::vector<NodeId> compatible(const TargetSet& s, const std::vector<NodeId>& from,
                                 std::size_t begin) const {
    std::vector<NodeId> out;
    for (std::size_t j = begin; j < from.size(); ++j) {
      const auto need = std::max<std::size_t>(s.required, table_.profile(from[j]).budget);
      if (need <= cap_ && and_count(s.common, table_.bits(from[j])) >= need) out.push_back(from[j]);
    }
    return out;
  }

  void consider(const TargetSetCache::Ptr& s) {
    if (!best_ || s->size() > best_->size()) best_ = s;
  }

  void dfs(const TargetSetCache::Ptr& s, const std::vector<NodeId>& candidates) {
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
      const std::size_t reach = s->size() + (candidates.size() - idx);
      if (reach <= best_->size()) return;
      if (++expansions_ > max_expansions_) {
        truncated_ = true;
        return;
      }
      auto grown = cache_.extend(*s, candidates[idx]);
      if (!grown->feasible() || grown->required > cap_) continue;
      consider(grown);
      dfs(grown, compatible(*grown, candidates, idx + 1));
      if (truncated_) return;
    }
  }

  const TargetTable& table_;
  TargetSetCache& cache_;
  std::size_t cap_;
  std::size_t max_expansions_;
  std::size_t expansions_ = 0;
  bool truncated_ = false;
  TargetSetCache::Ptr best_;
};

// Correspondents (in the injection layer) of the set's common matched
// neighbors, highest degree first, ties by index.
inline std::vector<NodeId> choose_anchors(const MultiplexInstance& inst, Layer target,
                                          const TargetSet& set) {
  const Layer injection = other(target);
  const auto& net = inst.layer(injection);
  std::vector<NodeId> pool;
  set.common.for_each_set([&](std::size_t a) {
    pool.push_back(injection == Layer::First ? inst.phi[a].first : inst.phi[a].second);
  });
  std::sort(pool.begin(), pool.end(), [&](NodeId x, NodeId y) {
    if (net.degree(x) != net.degree(y)) return net.degree(x) > net.degree(y);
    return x < y;
  });
  pool.resize(std::min(pool.size(), set.required));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace detail

// Descending vulnerability, ascending index on ties.
inline std::vector<TargetProfile> attack_order(const TargetTable& table) {
  auto order = table.profiles;
  std::sort(order.begin(), order.end(), [](const TargetProfile& a, const TargetProfile& b) {
    if (a.vulnerability != b.vulnerability) return a.vulnerability > b.vulnerability;
    return a.node < b.node;
  });
  return order;
}

// Selects disjoint target sets of `target`-layer nodes, largest first, until
// the injection-layer budget (or the injected-node allowance) runs out. Each
// set is charged required * depth links; nodes with zero per-node budget are
// never targeted.
inline SearchResult dp_search(const MultiplexInstance& inst, const AttackContext& ctx, Layer target,
                              std::size_t budget, const SearchOptions& opts = {}) {
  if (opts.depth < 1) throw ConfigError("search depth must be at least 1");
  SearchResult result;
  result.depth = opts.depth;
  if (budget == 0 || inst.phi.empty()) return result;
  const auto table = profile_targets(ctx.vectors, ctx.cmn, target, opts.delta);
  const auto order = attack_order(table);
  TargetSetCache cache(table, opts.memo_capacity);
  std::vector<bool> covered(inst.layer(target).node_count(), false);
  std::size_t residual = budget;

  while ((result.sets.size() + 1) * opts.depth <= opts.max_injected) {
    const std::size_t cap = std::min(residual / opts.depth, opts.max_links_per_node);
    std::vector<NodeId> pool;
    for (const auto& p : order)
      if (!covered[p.node] && p.budget >= 1 && p.budget <= cap && (!opts.strict_only || p.budget > p.max_common))
        pool.push_back(p.node);
    if (pool.empty()) break;

    detail::MaxSetSearch search(table, cache, cap, opts.max_expansions);
    auto best = search.run(pool);
    result.expansions += search.expansions();
    if (search.truncated()) result.exhaustive = false;
    if (!best) break;

    TargetSet chosen = *best;
    chosen.anchors = detail::choose_anchors(inst, target, chosen);
    residual -= chosen.required * opts.depth;
    for (NodeId u : chosen.members) covered[u] = true;
    result.sets.push_back(std::move(chosen));
  }
  return result;
}

inline SearchResult dp_search(const MultiplexInstance& inst, Layer target, std::size_t budget,
                              const SearchOptions& opts = {}) {
  return dp_search(inst, AttackContext(inst), target, budget, opts);
}

struct DpniaOptions {
  std::size_t budget1 = 0;  // links injected into layer 1 (targets layer-2 nodes)
  std::size_t budget2 = 0;  // links injected into layer 2 (targets layer-1 nodes)
  SearchOptions search;
};

// Runs the set search for every layer with positive budget on the unperturbed
// instance, then injects `depth` nodes per selected set into a copy.
inline AttackOutcome execute_dpnia(const MultiplexInstance& inst, const DpniaOptions& opts) {
  AttackOutcome out{inst, InjectionLedger(inst, opts.budget1, opts.budget2), {}, false};
  if (opts.budget1 == 0 && opts.budget2 == 0) return out;
  const AttackContext ctx(inst);
  for (Layer injection : {Layer::Second, Layer::First}) {
    const std::size_t budget = injection == Layer::First ? opts.budget1 : opts.budget2;
    if (budget == 0) continue;
    const Layer target = other(injection);
    auto found = dp_search(inst, ctx, target, budget, opts.search);
    for (auto& set : found.sets)
      for (std::size_t copy = 0; copy < found.depth; ++copy) {
        AttackInstruction step;
        step.layer = injection;
        step.anchors = set.anchors;
        step.covered = set.members;
        step.injected = inject_node(out.instance.layer(injection), out.ledger, injection, step.anchors);
        out.plan.steps.push_back(std::move(step));
      }
  }
  out.budget_insufficient = out.plan.steps.empty();
  return out;
}

}  // namespace dpnia
