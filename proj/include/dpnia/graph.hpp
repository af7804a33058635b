#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpnia/error.hpp"

namespace dpnia {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class Layer : std::uint8_t { First = 1, Second = 2 };

constexpr Layer other(Layer layer) noexcept {
  return layer == Layer::First ? Layer::Second : Layer::First;
}

constexpr std::size_t slot(Layer layer) noexcept {
  return layer == Layer::First ? 0 : 1;
}

inline std::string to_string(Layer layer) { return layer == Layer::First ? "1" : "2"; }

// One undirected layer. Nodes are dense indices 0..n-1 with unique external
// labels; neighbor lists stay sorted and free of self-loops and duplicates.
class SocialNetwork {
 public:
  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId node) const { return adjacency_[node]; }
  std::size_t degree(NodeId node) const { return adjacency_[node].size(); }
  bool contains(NodeId node) const noexcept { return node < adjacency_.size(); }

  bool has_edge(NodeId a, NodeId b) const {
    if (!contains(a) || !contains(b)) return false;
    const auto& row = adjacency_[a];
    return std::binary_search(row.begin(), row.end(), b);
  }

  const std::string& label(NodeId node) const { return labels_[node]; }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeId add_node(std::string label) {
    if (index_.contains(label)) throw Error("duplicate node label '" + label + "'");
    const auto id = static_cast<NodeId>(adjacency_.size());
    index_.emplace(label, id);
    labels_.push_back(std::move(label));
    adjacency_.emplace_back();
    return id;
  }

  NodeId intern(std::string_view label) {
    if (auto id = find(label)) return *id;
    return add_node(std::string(label));
  }

  // Returns false when the edge is a self-loop or already present.
  bool add_edge(NodeId a, NodeId b) {
    if (!contains(a) || !contains(b)) throw Error("edge endpoint out of range");
    if (a == b) return false;
    auto& row_a = adjacency_[a];
    auto pos_a = std::lower_bound(row_a.begin(), row_a.end(), b);
    if (pos_a != row_a.end() && *pos_a == b) return false;
    row_a.insert(pos_a, b);
    auto& row_b = adjacency_[b];
    row_b.insert(std::lower_bound(row_b.begin(), row_b.end(), a), a);
    ++edges_;
    return true;
  }

  // Each undirected edge once, as (smaller, larger) in index order.
  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edges_);
    for (NodeId a = 0; a < adjacency_.size(); ++a)
      for (NodeId b : adjacency_[a])
        if (a < b) out.emplace_back(a, b);
    return out;
  }

  friend bool operator==(const SocialNetwork& x, const SocialNetwork& y) {
    return x.labels_ == y.labels_ && x.adjacency_ == y.adjacency_;
  }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::size_t edges_ = 0;
};

// Same labels and the same labelled edge set, regardless of index order.
inline bool equivalent(const SocialNetwork& x, const SocialNetwork& y) {
  if (x.node_count() != y.node_count() || x.edge_count() != y.edge_count()) return false;
  for (NodeId a = 0; a < x.node_count(); ++a) {
    auto mapped = y.find(x.label(a));
    if (!mapped || y.degree(*mapped) != x.degree(a)) return false;
    for (NodeId b : x.neighbors(a)) {
      auto other_end = y.find(x.label(b));
      if (!other_end || !y.has_edge(*mapped, *other_end)) return false;
    }
  }
  return true;
}

struct LoadStats {
  std::size_t lines = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

struct LoadedNetwork {
  SocialNetwork network;
  LoadStats stats;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Splits a data line into exactly two labels; nullopt for blank/comment lines.
// A token starting with '#' opens a trailing comment.
inline std::optional<std::pair<std::string, std::string>> split_pair_line(
    std::string_view raw, const std::string& source, std::size_t line_no) {
  for (std::size_t at = raw.find('#'); at != std::string_view::npos; at = raw.find('#', at + 1))
    if (at == 0 || raw[at - 1] == ' ' || raw[at - 1] == '\t') {
      raw = raw.substr(0, at);
      break;
    }
  auto line = trim(raw);
  if (line.empty() || line.front() == '#') return std::nullopt;
  std::istringstream fields{std::string(line)};
  std::string a, b, extra;
  if (!(fields >> a >> b)) throw ParseError(source, line_no, "expected two labels");
  if (fields >> extra) throw ParseError(source, line_no, "unexpected third field '" + extra + "'");
  return std::make_pair(std::move(a), std::move(b));
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

// Reads a whitespace-separated edge list. Labels get dense indices in order of
// first appearance, after any `seed_labels`. Self-loops and repeated edges are
// dropped and counted.
inline LoadedNetwork read_edge_list(std::istream& in, const std::string& source = "<stream>",
                                    std::span<const std::string> seed_labels = {}) {
  LoadedNetwork out;
  for (const auto& label : seed_labels) out.network.intern(label);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto fields = detail::split_pair_line(raw, source, line_no);
    if (!fields) continue;
    ++out.stats.lines;
    if (fields->first == fields->second) {
      ++out.stats.self_loops;
      continue;
    }
    NodeId a = out.network.intern(fields->first);
    NodeId b = out.network.intern(fields->second);
    if (!out.network.add_edge(a, b)) ++out.stats.duplicates;
  }
  return out;
}

inline LoadedNetwork load_edge_list(const std::string& path,
                                    std::span<const std::string> seed_labels = {}) {
  auto in = detail::open_input(path);
  return read_edge_list(in, path, seed_labels);
}

inline void write_edge_list(const SocialNetwork& net, std::ostream& out) {
  for (auto [a, b] : net.edges()) out << net.label(a) << ' ' << net.label(b) << '\n';
}

inline void save_edge_list(const SocialNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_edge_list(net, out);
  if (!out) throw Error("write failed for '" + path + "'");
}

// An inter-link; `first` lives in layer 1 and `second` in layer 2.
struct NodePair {
  NodeId first = kNoNode;
  NodeId second = kNoNode;

  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

using PairList = std::vector<NodePair>;

// Throws MatchingError unless `pairs` is a one-to-one partial matching.
inline void check_one_to_one(const PairList& pairs, std::size_t n1, std::size_t n2) {
  std::vector<bool> seen1(n1, false), seen2(n2, false);
  for (const auto& p : pairs) {
    if (p.first >= n1 || p.second >= n2) throw MatchingError("inter-link endpoint out of range");
    if (seen1[p.first]) throw MatchingError("duplicate left endpoint " + std::to_string(p.first));
    if (seen2[p.second]) throw MatchingError("duplicate right endpoint " + std::to_string(p.second));
    seen1[p.first] = seen2[p.second] = true;
  }
}

inline PairList read_interlinks(std::istream& in, const SocialNetwork& g1,
                                const SocialNetwork& g2, const std::string& source = "<stream>") {
  PairList pairs;
  std::vector<bool> seen1(g1.node_count(), false), seen2(g2.node_count(), false);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto fields = detail::split_pair_line(raw, source, line_no);
    if (!fields) continue;
    auto a = g1.find(fields->first);
    if (!a) throw ParseError(source, line_no, "unknown layer-1 label '" + fields->first + "'");
    auto b = g2.find(fields->second);
    if (!b) throw ParseError(source, line_no, "unknown layer-2 label '" + fields->second + "'");
    if (seen1[*a]) throw ParseError(source, line_no, "duplicate left endpoint '" + fields->first + "'");
    if (seen2[*b]) throw ParseError(source, line_no, "duplicate right endpoint '" + fields->second + "'");
    seen1[*a] = seen2[*b] = true;
    pairs.push_back({*a, *b});
  }
  return pairs;
}

inline PairList load_interlinks(const std::string& path, const SocialNetwork& g1,
                                const SocialNetwork& g2) {
  auto in = detail::open_input(path);
  return read_interlinks(in, g1, g2, path);
}

// Variant for files written from networks with isolated nodes: labels absent
// from the edge lists are added to the layer as isolated nodes instead of
// being rejected.
inline PairList load_interlinks_extending(const std::string& path, SocialNetwork& g1, SocialNetwork& g2) {
  auto in = detail::open_input(path);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto fields = detail::split_pair_line(raw, path, line_no)) {
      g1.intern(fields->first);
      g2.intern(fields->second);
    }
  }
  return load_interlinks(path, g1, g2);
}

inline void write_interlinks(const PairList& pairs, const SocialNetwork& g1,
                             const SocialNetwork& g2, std::ostream& out) {
  for (const auto& p : pairs) out << g1.label(p.first) << ' ' << g2.label(p.second) << '\n';
}

struct InterlinkSplit {
  PairList observed;  // training inter-links
  PairList held_out;  // test inter-links
};

// Seeded random partition; the observed side gets round(fraction * N) pairs,
// halves rounding toward it, clamped so both sides stay non-empty.
inline InterlinkSplit split_interlinks(const PairList& pairs, double train_fraction,
                                       std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("train fraction must lie strictly between 0 and 1");
  if (pairs.size() < 2) throw Error("need at least two inter-links to split");
  PairList shuffled = pairs;
  std::sort(shuffled.begin(), shuffled.end());
  std::mt19937_64 rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto train = static_cast<std::size_t>(std::floor(train_fraction * shuffled.size() + 0.5));
  train = std::clamp<std::size_t>(train, 1, shuffled.size() - 1);
  InterlinkSplit split;
  split.observed.assign(shuffled.begin(), shuffled.begin() + train);
  split.held_out.assign(shuffled.begin() + train, shuffled.end());
  std::sort(split.observed.begin(), split.observed.end());
  std::sort(split.held_out.begin(), split.held_out.end());
  return split;
}

// Two layers plus observed (phi) and held-out (psi) correspondences.
struct MultiplexInstance {
  SocialNetwork g1;
  SocialNetwork g2;
  PairList phi;
  PairList psi;

  SocialNetwork& layer(Layer l) { return l == Layer::First ? g1 : g2; }
  const SocialNetwork& layer(Layer l) const { return l == Layer::First ? g1 : g2; }

  void validate() const {
    PairList all = phi;
    all.insert(all.end(), psi.begin(), psi.end());
    check_one_to_one(all, g1.node_count(), g2.node_count());
  }
};

inline MultiplexInstance make_instance(SocialNetwork g1, SocialNetwork g2, PairList phi,
                                       PairList psi = {}) {
  MultiplexInstance inst{std::move(g1), std::move(g2), std::move(phi), std::move(psi)};
  inst.validate();
  return inst;
}

}  // namespace dpnia
