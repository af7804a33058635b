#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "dpnia/alignment.hpp"
#include "dpnia/graph.hpp"

namespace dpnia {

// Ranking metrics take 1-based ranks of the true counterparts, one per
// evaluated query. An empty rank list has no defined value.

inline std::optional<double> precision_at_n(std::span<const std::size_t> ranks, std::size_t n) {
  if (ranks.empty()) return std::nullopt;
  const auto hits = std::count_if(ranks.begin(), ranks.end(), [n](std::size_t r) { return r <= n; });
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

inline std::optional<double> map_score(std::span<const std::size_t> ranks) {
  if (ranks.empty()) return std::nullopt;
  double sum = 0.0;
  for (auto r : ranks) sum += 1.0 / static_cast<double>(r);
  return sum / static_cast<double>(ranks.size());
}

// (m_n + 1 - r) / m_n averaged over queries, with a common negative count.
inline std::optional<double> auc_score(std::span<const std::size_t> ranks, std::size_t negatives) {
  if (ranks.empty() || negatives == 0) return std::nullopt;
  double sum = 0.0;
  for (auto r : ranks)
    sum += static_cast<double>(negatives + 1 - std::min(r, negatives + 1)) / static_cast<double>(negatives);
  return sum / static_cast<double>(ranks.size());
}

// Same, with each query carrying its own candidate-pool size.
inline std::optional<double> auc_score(std::span<const RankedQuery> queries) {
  if (queries.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& q : queries) {
    if (q.negatives == 0) {
      sum += 1.0;  // sole candidate; cannot be misranked
      continue;
    }
    const auto r = std::min(q.rank, q.negatives + 1);
    sum += static_cast<double>(q.negatives + 1 - r) / static_cast<double>(q.negatives);
  }
  return sum / static_cast<double>(queries.size());
}

inline std::vector<std::size_t> ranks_of(std::span<const RankedQuery> queries) {
  std::vector<std::size_t> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(q.rank);
  return out;
}

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline PrecisionRecall f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  PrecisionRecall out;
  if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (out.precision + out.recall > 0.0)
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

inline PrecisionRecall precision_recall_f1(std::span<const NodePair> predicted, std::span<const NodePair> truth) {
  const std::set<NodePair> gold(truth.begin(), truth.end());
  std::size_t tp = 0;
  for (const auto& p : predicted) tp += gold.contains(p) ? 1 : 0;
  return f1_from_counts(tp, predicted.size() - tp, gold.size() - tp);
}

}  // namespace dpnia
