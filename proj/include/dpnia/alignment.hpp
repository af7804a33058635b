#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dpnia/graph.hpp"

namespace dpnia {

// Neighborhood-based alignment scorers.
//   CN:   |C(u1,u2)|
//   FRUI: |C| + |C| / min(deg u1, deg u2)
//   IDP:  sum over (v1,v2) in C of 1 / (ln(deg v1 + 1) * ln(deg v2 + 1))
enum class Method { CN, FRUI, IDP };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::CN: return "CN";
    case Method::FRUI: return "FRUI";
    case Method::IDP: return "IDP";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
  if (name == "CN") return Method::CN;
  if (name == "FRUI") return Method::FRUI;
  if (name == "IDP") return Method::IDP;
  return std::nullopt;
}

// Correspondence lookup for the currently matched pairs. Nodes beyond the
// sizes seen at construction (e.g. injected later) count as unmatched.
class MatchState {
 public:
  MatchState() = default;
  explicit MatchState(const MultiplexInstance& inst) {
    partner_[0].assign(inst.g1.node_count(), kNoNode);
    partner_[1].assign(inst.g2.node_count(), kNoNode);
    for (const auto& p : inst.phi) commit(p);
  }

  NodeId partner(Layer l, NodeId node) const noexcept {
    const auto& side = partner_[slot(l)];
    return node < side.size() ? side[node] : kNoNode;
  }
  bool matched(Layer l, NodeId node) const noexcept { return partner(l, node) != kNoNode; }

  void commit(NodePair p) {
    grow(partner_[0], p.first);
    grow(partner_[1], p.second);
    partner_[0][p.first] = p.second;
    partner_[1][p.second] = p.first;
  }

 private:
  static void grow(std::vector<NodeId>& v, NodeId node) {
    if (node >= v.size()) v.resize(node + 1, kNoNode);
  }

  std::array<std::vector<NodeId>, 2> partner_;
};

inline std::vector<NodeId> matched_neighbors(const MultiplexInstance& inst, const MatchState& state,
                                             Layer layer, NodeId node) {
  std::vector<NodeId> out;
  for (NodeId v : inst.layer(layer).neighbors(node))
    if (state.matched(layer, v)) out.push_back(v);
  return out;
}

inline std::vector<NodeId> matched_neighbors(const MultiplexInstance& inst, Layer layer, NodeId node) {
  return matched_neighbors(inst, MatchState(inst), layer, node);
}

inline std::vector<NodeId> unmatched_nodes(const MultiplexInstance& inst, const MatchState& state,
                                           Layer layer) {
  std::vector<NodeId> out;
  const auto n = static_cast<NodeId>(inst.layer(layer).node_count());
  for (NodeId v = 0; v < n; ++v)
    if (!state.matched(layer, v)) out.push_back(v);
  return out;
}

// All matched pairs (v1, v2) with v1 adjacent to u1 and v2 adjacent to u2.
inline PairList common_matched_neighbors(const MultiplexInstance& inst, const MatchState& state,
                                         NodeId u1, NodeId u2) {
  PairList out;
  for (NodeId v1 : inst.g1.neighbors(u1)) {
    NodeId v2 = state.partner(Layer::First, v1);
    if (v2 != kNoNode && inst.g2.has_edge(v2, u2)) out.push_back({v1, v2});
  }
  return out;
}

inline PairList common_matched_neighbors(const MultiplexInstance& inst, NodeId u1, NodeId u2) {
  return common_matched_neighbors(inst, MatchState(inst), u1, u2);
}

inline double degree_penalty(std::size_t deg1, std::size_t deg2) {
  return 1.0 / (std::log(static_cast<double>(deg1) + 1.0) * std::log(static_cast<double>(deg2) + 1.0));
}

inline double frui_score(std::size_t common, std::size_t deg1, std::size_t deg2) {
  if (common == 0) return 0.0;
  const auto c = static_cast<double>(common);
  return c + c / static_cast<double>(std::min(deg1, deg2));
}

// Pairwise score by explicit enumeration of common matched neighbors.
inline double score_pair(const MultiplexInstance& inst, const MatchState& state, Method method,
                         NodeId u1, NodeId u2) {
  const auto common = common_matched_neighbors(inst, state, u1, u2);
  switch (method) {
    case Method::CN: return static_cast<double>(common.size());
    case Method::FRUI: return frui_score(common.size(), inst.g1.degree(u1), inst.g2.degree(u2));
    case Method::IDP: {
      double sum = 0.0;
      for (const auto& p : common) sum += degree_penalty(inst.g1.degree(p.first), inst.g2.degree(p.second));
      return sum;
    }
  }
  return 0.0;
}

inline double score_cn(const MultiplexInstance& inst, NodeId u1, NodeId u2) {
  return score_pair(inst, MatchState(inst), Method::CN, u1, u2);
}
inline double score_frui(const MultiplexInstance& inst, NodeId u1, NodeId u2) {
  return score_pair(inst, MatchState(inst), Method::FRUI, u1, u2);
}
inline double score_idp(const MultiplexInstance& inst, NodeId u1, NodeId u2) {
  return score_pair(inst, MatchState(inst), Method::IDP, u1, u2);
}

// Scores one query against every node of the other layer by pushing counts
// through the query's matched neighbors. Entries for matched candidates are
// zero; callers filter them.
inline std::vector<double> score_against_all(const MultiplexInstance& inst, const MatchState& state,
                                             Method method, Layer query_layer, NodeId query) {
  const auto& home = inst.layer(query_layer);
  const auto& away = inst.layer(other(query_layer));
  std::vector<std::uint32_t> counts(away.node_count(), 0);
  std::vector<double> penalty(method == Method::IDP ? away.node_count() : 0, 0.0);
  for (NodeId v : home.neighbors(query)) {
    NodeId p = state.partner(query_layer, v);
    if (p == kNoNode) continue;
    const double w = method == Method::IDP ? degree_penalty(home.degree(v), away.degree(p)) : 0.0;
    for (NodeId cand : away.neighbors(p)) {
      if (state.matched(other(query_layer), cand)) continue;
      ++counts[cand];
      if (method == Method::IDP) penalty[cand] += w;
    }
  }
  std::vector<double> scores(away.node_count(), 0.0);
  for (NodeId c = 0; c < scores.size(); ++c) {
    switch (method) {
      case Method::CN: scores[c] = counts[c]; break;
      case Method::FRUI: scores[c] = frui_score(counts[c], home.degree(query), away.degree(c)); break;
      case Method::IDP: scores[c] = penalty[c]; break;
    }
  }
  return scores;
}

struct Candidate {
  NodeId node;
  double score;
};

// Descending score, ascending node index on ties.
struct RankedCandidates {
  Layer query_layer = Layer::First;
  NodeId query = kNoNode;
  std::vector<Candidate> ranking;
};

inline bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.node < b.node;
}

inline RankedCandidates rank_candidates(const MultiplexInstance& inst, const MatchState& state,
                                        Method method, Layer query_layer, NodeId query) {
  RankedCandidates out{query_layer, query, {}};
  const auto scores = score_against_all(inst, state, method, query_layer, query);
  const Layer away = other(query_layer);
  for (NodeId c = 0; c < scores.size(); ++c)
    if (!state.matched(away, c)) out.ranking.push_back({c, scores[c]});
  std::sort(out.ranking.begin(), out.ranking.end(), ranks_before);
  return out;
}

inline RankedCandidates rank_candidates(const MultiplexInstance& inst, Method method,
                                        Layer query_layer, NodeId query) {
  return rank_candidates(inst, MatchState(inst), method, query_layer, query);
}

enum class AlignMode { RankedOnly, IterativeGreedy };
enum class QuerySides { First, Second, Both };

// One held-out correspondence evaluated from one side. `rank` is the 1-based
// position of the true counterpart; `negatives` is the number of other
// candidates in the pool.
struct RankedQuery {
  Layer layer = Layer::First;
  NodeId query = kNoNode;
  NodeId truth = kNoNode;
  std::size_t rank = 0;
  std::size_t negatives = 0;
};

struct MatchResult {
  PairList predicted;
  std::vector<RankedQuery> queries;
  std::size_t iterations = 0;
};

namespace detail {

inline RankedQuery rank_truth(const MultiplexInstance& inst, const MatchState& state, Method method,
                              Layer layer, NodeId query, NodeId truth) {
  const auto scores = score_against_all(inst, state, method, layer, query);
  const Layer away = other(layer);
  const Candidate target{truth, scores[truth]};
  std::size_t ahead = 0, pool = 0;
  for (NodeId c = 0; c < scores.size(); ++c) {
    if (state.matched(away, c)) continue;
    ++pool;
    if (c != truth && ranks_before({c, scores[c]}, target)) ++ahead;
  }
  return {layer, query, truth, ahead + 1, pool - 1};
}

struct Accum {
  std::uint32_t count = 0;
  double penalty = 0.0;
};

struct HeapEntry {
  double score;
  std::uint32_t row;
  std::uint32_t col;
};

struct HeapOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.score != b.score) return a.score < b.score;
    if (a.row != b.row) return a.row > b.row;
    return a.col > b.col;
  }
};

// Repeatedly commits the globally best unmatched pair; committed pairs become
// matched neighbors for the remaining ones.
inline MatchResult greedy_align(const MultiplexInstance& inst, Method method) {
  MatchState state(inst);
  const auto rows = unmatched_nodes(inst, state, Layer::First);
  const auto cols = unmatched_nodes(inst, state, Layer::Second);
  constexpr auto kDead = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> row_of(inst.g1.node_count(), kDead), col_of(inst.g2.node_count(), kDead);
  for (std::uint32_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = i;
  for (std::uint32_t k = 0; k < cols.size(); ++k) col_of[cols[k]] = k;

  std::vector<std::unordered_map<std::uint32_t, Accum>> acc(rows.size());
  auto score_of = [&](std::uint32_t i, std::uint32_t k, const Accum& a) {
    switch (method) {
      case Method::CN: return static_cast<double>(a.count);
      case Method::FRUI: return frui_score(a.count, inst.g1.degree(rows[i]), inst.g2.degree(cols[k]));
      case Method::IDP: return a.penalty;
    }
    return 0.0;
  };
  auto credit = [&](NodeId v1, NodeId v2, auto&& touched) {
    const double w = degree_penalty(inst.g1.degree(v1), inst.g2.degree(v2));
    for (NodeId x1 : inst.g1.neighbors(v1)) {
      const auto i = row_of[x1];
      if (i == kDead) continue;
      for (NodeId x2 : inst.g2.neighbors(v2)) {
        const auto k = col_of[x2];
        if (k == kDead) continue;
        auto& a = acc[i][k];
        ++a.count;
        a.penalty += w;
        touched(i, k);
      }
    }
  };

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap;
  for (const auto& p : inst.phi) credit(p.first, p.second, [](auto, auto) {});
  for (std::uint32_t i = 0; i < rows.size(); ++i)
    for (const auto& [k, a] : acc[i]) heap.push({score_of(i, k, a), i, k});

  MatchResult result;
  std::size_t live_rows = rows.size(), live_cols = cols.size();
  while (!heap.empty() && live_rows > 0 && live_cols > 0) {
    const auto top = heap.top();
    heap.pop();
    const NodeId u1 = rows[top.row], u2 = cols[top.col];
    if (row_of[u1] == kDead || col_of[u2] == kDead) continue;
    if (top.score <= 0.0 || score_of(top.row, top.col, acc[top.row][top.col]) != top.score) continue;
    row_of[u1] = kDead;
    col_of[u2] = kDead;
    --live_rows;
    --live_cols;
    acc[top.row].clear();
    state.commit({u1, u2});
    result.predicted.push_back({u1, u2});
    ++result.iterations;
    credit(u1, u2, [&](std::uint32_t i, std::uint32_t k) {
      heap.push({score_of(i, k, acc[i][k]), i, k});
    });
  }
  return result;
}

}  // namespace detail

inline std::vector<RankedQuery> rank_held_out(const MultiplexInstance& inst, Method method,
                                              QuerySides sides = QuerySides::Both) {
  const MatchState state(inst);
  std::vector<RankedQuery> out;
  for (const auto& p : inst.psi) {
    if (sides != QuerySides::Second)
      out.push_back(detail::rank_truth(inst, state, method, Layer::First, p.first, p.second));
    if (sides != QuerySides::First)
      out.push_back(detail::rank_truth(inst, state, method, Layer::Second, p.second, p.first));
  }
  return out;
}

// RankedOnly ranks every held-out correspondence against the frozen observed
// set. IterativeGreedy produces one-to-one predictions for unmatched nodes.
inline MatchResult align(const MultiplexInstance& inst, Method method, AlignMode mode,
                         QuerySides sides = QuerySides::Both) {
  if (mode == AlignMode::IterativeGreedy) return detail::greedy_align(inst, method);
  MatchResult result;
  result.queries = rank_held_out(inst, method, sides);
  return result;
}

}  // namespace dpnia
