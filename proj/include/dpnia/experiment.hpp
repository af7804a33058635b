#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpnia/alignment.hpp"
#include "dpnia/attack.hpp"
#include "dpnia/baselines.hpp"
#include "dpnia/graph.hpp"
#include "dpnia/metrics.hpp"
#include "dpnia/synthetic.hpp"

namespace dpnia {

inline constexpr const char* kNoAttack = "none";
inline constexpr const char* kDpnia = "DPNIA";

// Which layers receive injected nodes.
enum class AttackSides { First, Second, Both };

inline std::string to_string(AttackSides s) {
  switch (s) {
    case AttackSides::First: return "1";
    case AttackSides::Second: return "2";
    case AttackSides::Both: return "both";
  }
  return "?";
}

inline std::optional<AttackSides> parse_sides(std::string_view s) {
  if (s == "1") return AttackSides::First;
  if (s == "2") return AttackSides::Second;
  if (s == "both") return AttackSides::Both;
  return std::nullopt;
}

inline std::optional<QuerySides> parse_query_sides(std::string_view s) {
  if (s == "1") return QuerySides::First;
  if (s == "2") return QuerySides::Second;
  if (s == "both") return QuerySides::Both;
  return std::nullopt;
}

inline std::string to_string(QuerySides s) {
  return s == QuerySides::First ? "1" : s == QuerySides::Second ? "2" : "both";
}

struct DatasetPaths {
  std::string name;
  std::string edges1;
  std::string edges2;
  std::string interlinks;
};

inline const std::vector<std::string>& all_metric_names() {
  static const std::vector<std::string> names{"P@N", "MAP", "AUC", "Precision", "Recall", "F1"};
  return names;
}

struct ExperimentConfig {
  std::optional<DatasetPaths> dataset;
  std::optional<SyntheticSpec> synthetic;
  std::vector<Method> scorers{Method::CN, Method::FRUI, Method::IDP};
  std::vector<std::string> attacks{kNoAttack, kDpnia};
  std::vector<std::size_t> injected_nodes{200};
  std::vector<std::size_t> degrees{200};
  std::vector<AttackSides> sides{AttackSides::Both};
  std::vector<std::size_t> at_n{30};
  std::vector<std::string> metrics = all_metric_names();
  double delta = 0.5;
  double train_fraction = 0.9;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  QuerySides query_sides = QuerySides::Both;
  bool dpnia_limit_injected = false;  // cap DPNIA's injected nodes at injected_nodes
  std::size_t dpnia_max_expansions = 2'000'000;
  std::size_t dpnia_depth = 1;  // injected nodes stacked per target set
  bool dpnia_strict = false;    // skip tie-only targets
  std::string output;
  std::string format = "tabular";

  bool wants(const std::string& metric) const {
    return std::find(metrics.begin(), metrics.end(), metric) != metrics.end();
  }

  std::string dataset_name() const {
    if (dataset) return dataset->name.empty() ? "dataset" : dataset->name;
    if (synthetic)
      return "synthetic-" + to_string(synthetic->family) + "-n" + std::to_string(synthetic->nodes);
    return "none";
  }

  void validate() const {
    if (dataset.has_value() == synthetic.has_value())
      throw ConfigError("exactly one of 'dataset' and 'synthetic' must be given");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (scorers.empty() || attacks.empty() || injected_nodes.empty() || degrees.empty() || sides.empty())
      throw ConfigError("sweep lists must be non-empty");
    for (const auto& a : attacks)
      if (a != kNoAttack && a != kDpnia && !parse_strategy(a)) throw ConfigError("unknown attack '" + a + "'");
    for (const auto& m : metrics)
      if (std::find(all_metric_names().begin(), all_metric_names().end(), m) == all_metric_names().end())
        throw ConfigError("unknown metric '" + m + "'");
    if (wants("P@N") && at_n.empty()) throw ConfigError("at_n must be non-empty when P@N is requested");
    for (auto n : at_n)
      if (n < 1) throw ConfigError("at_n entries must be at least 1");
    for (auto k : injected_nodes)
      if (k < 1) throw ConfigError("injected_nodes entries must be at least 1");
    for (auto d : degrees)
      if (d < 1) throw ConfigError("degrees entries must be at least 1");
    if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train_fraction must lie in (0, 1)");
    if (dpnia_depth < 1) throw ConfigError("dpnia_depth must be at least 1");
    if (format != "tabular" && format != "structured") throw ConfigError("format must be tabular or structured");
  }
};

namespace detail {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace detail

// Reads the JSON experiment document; keys mirror ExperimentConfig fields.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      cfg.dataset = DatasetPaths{detail::get_or<std::string>(d, "name", ""), d.at("edges1").get<std::string>(),
                                 d.at("edges2").get<std::string>(), d.at("interlinks").get<std::string>()};
    }
    if (j.contains("synthetic")) {
      const auto& s = j.at("synthetic");
      SyntheticSpec spec;
      auto family = detail::get_or<std::string>(s, "family", "pa");
      auto parsed = parse_family(family);
      if (!parsed) throw ConfigError("unknown graph family '" + family + "'");
      spec.family = *parsed;
      spec.nodes = detail::get_or<std::size_t>(s, "nodes", spec.nodes);
      spec.avg_degree = detail::get_or<double>(s, "avg_degree", spec.avg_degree);
      spec.overlap = detail::get_or<double>(s, "overlap", spec.overlap);
      spec.noise = detail::get_or<double>(s, "noise", spec.noise);
      spec.seed = detail::get_or<std::uint64_t>(s, "seed", spec.seed);
      cfg.synthetic = spec;
    }
    if (j.contains("scorers")) {
      cfg.scorers.clear();
      for (const auto& name : j.at("scorers")) {
        auto m = parse_method(name.get<std::string>());
        if (!m) throw ConfigError("unknown scorer '" + name.get<std::string>() + "'");
        cfg.scorers.push_back(*m);
      }
    }
    cfg.attacks = detail::get_or(j, "attacks", cfg.attacks);
    cfg.injected_nodes = detail::get_or(j, "injected_nodes", cfg.injected_nodes);
    cfg.degrees = detail::get_or(j, "degrees", cfg.degrees);
    if (j.contains("sides")) {
      cfg.sides.clear();
      for (const auto& s : j.at("sides")) {
        auto v = parse_sides(s.get<std::string>());
        if (!v) throw ConfigError("unknown attack side '" + s.get<std::string>() + "'");
        cfg.sides.push_back(*v);
      }
    }
    cfg.at_n = detail::get_or(j, "at_n", cfg.at_n);
    cfg.metrics = detail::get_or(j, "metrics", cfg.metrics);
    cfg.delta = detail::get_or(j, "delta", cfg.delta);
    cfg.train_fraction = detail::get_or(j, "train_fraction", cfg.train_fraction);
    cfg.trials = detail::get_or(j, "trials", cfg.trials);
    cfg.seed = detail::get_or(j, "seed", cfg.seed);
    if (j.contains("query_sides")) {
      auto q = parse_query_sides(j.at("query_sides").get<std::string>());
      if (!q) throw ConfigError("query_sides must be 1, 2 or both");
      cfg.query_sides = *q;
    }
    cfg.dpnia_limit_injected = detail::get_or(j, "dpnia_limit_injected", cfg.dpnia_limit_injected);
    cfg.dpnia_max_expansions = detail::get_or(j, "dpnia_max_expansions", cfg.dpnia_max_expansions);
    cfg.dpnia_depth = detail::get_or(j, "dpnia_depth", cfg.dpnia_depth);
    cfg.dpnia_strict = detail::get_or(j, "dpnia_strict", cfg.dpnia_strict);
    cfg.output = detail::get_or(j, "output", cfg.output);
    cfg.format = detail::get_or(j, "format", cfg.format);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

struct ResultRow {
  std::string dataset;
  std::string scorer;
  std::string attack;
  std::size_t nodes = 0;
  std::size_t degree = 0;
  std::string sides;
  std::string metric;
  std::optional<std::size_t> n;  // only for P@N
  double mean = 0.0;
  std::vector<double> trials;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;

  const ResultRow* find(std::string_view scorer, std::string_view attack, std::size_t nodes,
                        std::size_t degree, std::string_view sides, std::string_view metric,
                        std::optional<std::size_t> n = std::nullopt) const {
    for (const auto& r : rows)
      if (r.scorer == scorer && r.attack == attack && r.nodes == nodes && r.degree == degree &&
          r.sides == sides && r.metric == metric && r.n == n)
        return &r;
    return nullptr;
  }
};

// Metric values for one evaluated instance and scorer, keyed "P@30", "MAP", ...
using MetricValues = std::map<std::string, double>;

inline MetricValues evaluate_instance(const MultiplexInstance& inst, Method scorer, const ExperimentConfig& cfg) {
  MetricValues out;
  const auto queries = rank_held_out(inst, scorer, cfg.query_sides);
  const auto ranks = ranks_of(queries);
  auto value = [](std::optional<double> v) { return v.value_or(std::numeric_limits<double>::quiet_NaN()); };
  if (cfg.wants("P@N"))
    for (auto n : cfg.at_n) out["P@" + std::to_string(n)] = value(precision_at_n(ranks, n));
  if (cfg.wants("MAP")) out["MAP"] = value(map_score(ranks));
  if (cfg.wants("AUC")) out["AUC"] = value(auc_score(queries));
  if (cfg.wants("Precision") || cfg.wants("Recall") || cfg.wants("F1")) {
    const auto greedy = align(inst, scorer, AlignMode::IterativeGreedy);
    const auto prf = precision_recall_f1(greedy.predicted, inst.psi);
    if (cfg.wants("Precision")) out["Precision"] = prf.precision;
    if (cfg.wants("Recall")) out["Recall"] = prf.recall;
    if (cfg.wants("F1")) out["F1"] = prf.f1;
  }
  return out;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline MultiplexInstance trial_instance(const ExperimentConfig& cfg, std::size_t trial,
                                        const std::optional<MultiplexInstance>& loaded) {
  MultiplexInstance base;
  if (cfg.synthetic) {
    SyntheticSpec spec = *cfg.synthetic;
    spec.seed = spec.seed + trial;
    base = generate_synthetic_multiplex(spec);
  } else {
    base = *loaded;
  }
  PairList pool = base.phi;
  pool.insert(pool.end(), base.psi.begin(), base.psi.end());
  auto split = split_interlinks(pool, cfg.train_fraction, cfg.seed + trial);
  base.phi = std::move(split.observed);
  base.psi = std::move(split.held_out);
  return base;
}

inline MultiplexInstance load_dataset(const DatasetPaths& paths) {
  MultiplexInstance inst;
  inst.g1 = load_edge_list(paths.edges1).network;
  inst.g2 = load_edge_list(paths.edges2).network;
  inst.phi = load_interlinks_extending(paths.interlinks, inst.g1, inst.g2);
  return inst;
}

}  // namespace detail

struct AttackCell {
  std::size_t nodes = 0;
  std::size_t degree = 0;
  AttackSides sides = AttackSides::Both;
};

// Applies one named attack to an instance under a sweep cell's budget: each
// attacked layer receives nodes * degree links.
inline AttackOutcome apply_attack(const MultiplexInstance& inst, const std::string& attack, const AttackCell& cell,
                                  const ExperimentConfig& cfg, std::uint64_t seed) {
  const bool layer1 = cell.sides != AttackSides::Second;
  const bool layer2 = cell.sides != AttackSides::First;
  const std::size_t budget = cell.nodes * cell.degree;
  if (attack == kNoAttack) return AttackOutcome{inst, InjectionLedger(inst, 0, 0), {}, false};
  if (attack == kDpnia) {
    DpniaOptions opts;
    opts.budget1 = layer1 ? budget : 0;
    opts.budget2 = layer2 ? budget : 0;
    opts.search.delta = cfg.delta;
    opts.search.max_links_per_node = cell.degree;
    if (cfg.dpnia_limit_injected) opts.search.max_injected = cell.nodes;
    opts.search.max_expansions = cfg.dpnia_max_expansions;
    opts.search.depth = cfg.dpnia_depth;
    opts.search.strict_only = cfg.dpnia_strict;
    return execute_dpnia(inst, opts);
  }
  auto strategy = parse_strategy(attack);
  if (!strategy) throw ConfigError("unknown attack '" + attack + "'");
  BaselineConfig bc{*strategy, cell.nodes, cell.degree, seed};
  return attack_baseline(inst, bc, layer1, layer2);
}

// Runs every (cell, attack, scorer) combination over all trials and averages
// per metric. Rows follow the order nodes > degree > sides > attack > scorer >
// metric.
inline ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<MultiplexInstance> loaded;
  if (cfg.dataset) loaded = detail::load_dataset(*cfg.dataset);

  std::vector<AttackCell> cells;
  for (auto k : cfg.injected_nodes)
    for (auto d : cfg.degrees)
      for (auto s : cfg.sides) cells.push_back({k, d, s});

  // values[cell][attack][scorer][metric] -> per-trial list
  std::vector<std::vector<std::vector<std::map<std::string, std::vector<double>>>>> values(
      cells.size(), std::vector<std::vector<std::map<std::string, std::vector<double>>>>(
                        cfg.attacks.size(), std::vector<std::map<std::string, std::vector<double>>>(cfg.scorers.size())));

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto base = detail::trial_instance(cfg, t, loaded);
    std::vector<MetricValues> original(cfg.scorers.size());
    bool have_original = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      for (std::size_t a = 0; a < cfg.attacks.size(); ++a) {
        const auto& attack = cfg.attacks[a];
        if (attack == kNoAttack) {
          if (!have_original) {
            for (std::size_t s = 0; s < cfg.scorers.size(); ++s)
              original[s] = evaluate_instance(base, cfg.scorers[s], cfg);
            have_original = true;
          }
          for (std::size_t s = 0; s < cfg.scorers.size(); ++s)
            for (const auto& [metric, v] : original[s]) values[c][a][s][metric].push_back(v);
          continue;
        }
        const auto seed = detail::mix_seed(cfg.seed ^ detail::mix_seed(t * 1000003ull + c * 1009ull + a));
        const auto outcome = apply_attack(base, attack, cells[c], cfg, seed);
        for (std::size_t s = 0; s < cfg.scorers.size(); ++s)
          for (const auto& [metric, v] : evaluate_instance(outcome.instance, cfg.scorers[s], cfg))
            values[c][a][s][metric].push_back(v);
      }
    }
  }

  ResultTable table;
  const auto dataset = cfg.dataset_name();
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t a = 0; a < cfg.attacks.size(); ++a)
      for (std::size_t s = 0; s < cfg.scorers.size(); ++s) {
        auto emit = [&](const std::string& metric, const std::string& key, std::optional<std::size_t> n) {
          ResultRow row{dataset, to_string(cfg.scorers[s]), cfg.attacks[a], cells[c].nodes, cells[c].degree,
                        to_string(cells[c].sides), metric, n, 0.0, values[c][a][s][key]};
          double sum = 0.0;
          for (double v : row.trials) sum += v;
          row.mean = sum / static_cast<double>(row.trials.size());
          table.rows.push_back(std::move(row));
        };
        for (const auto& metric : cfg.metrics) {
          if (metric == "P@N") {
            for (auto n : cfg.at_n) emit("P@N", "P@" + std::to_string(n), n);
          } else {
            emit(metric, metric, std::nullopt);
          }
        }
      }
  return table;
}

// ---- report I/O ----

inline constexpr const char* kReportHeader = "dataset,scorer,attack,nodes,degree,sides,metric,N,mean,trials";

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("<report>", line, "bad number '" + std::string(s) + "'");
  return v;
}

inline std::size_t parse_size(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("<report>", line, "bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

inline void write_tabular(const ResultTable& table, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const auto& r : table.rows) {
    out << r.dataset << ',' << r.scorer << ',' << r.attack << ',' << r.nodes << ',' << r.degree << ','
        << r.sides << ',' << r.metric << ',' << (r.n ? std::to_string(*r.n) : "") << ','
        << detail::format_double(r.mean) << ',';
    for (std::size_t i = 0; i < r.trials.size(); ++i) out << (i ? ";" : "") << detail::format_double(r.trials[i]);
    out << '\n';
  }
}

inline ResultTable read_tabular(std::istream& in) {
  ResultTable table;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || detail::trim(line) != kReportHeader)
    throw ParseError("<report>", 1, "missing report header");
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> f;
    std::istringstream ss(std::string(detail::trim(line)));
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() == 9) f.emplace_back();
    if (f.size() != 10) throw ParseError("<report>", line_no, "expected 10 fields");
    ResultRow r;
    r.dataset = f[0];
    r.scorer = f[1];
    r.attack = f[2];
    r.nodes = detail::parse_size(f[3], line_no);
    r.degree = detail::parse_size(f[4], line_no);
    r.sides = f[5];
    r.metric = f[6];
    if (!f[7].empty()) r.n = detail::parse_size(f[7], line_no);
    r.mean = detail::parse_double(f[8], line_no);
    std::istringstream ts(f[9]);
    for (std::string v; std::getline(ts, v, ';');) r.trials.push_back(detail::parse_double(v, line_no));
    table.rows.push_back(std::move(r));
  }
  return table;
}

inline nlohmann::json to_json(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json j{{"dataset", r.dataset}, {"scorer", r.scorer}, {"attack", r.attack},
                     {"nodes", r.nodes},     {"degree", r.degree}, {"sides", r.sides},
                     {"metric", r.metric},   {"mean", r.mean},     {"trials", r.trials}};
    j["N"] = r.n ? nlohmann::json(*r.n) : nlohmann::json(nullptr);
    rows.push_back(std::move(j));
  }
  return nlohmann::json{{"columns", {"dataset", "scorer", "attack", "nodes", "degree", "sides", "metric", "N",
                                     "mean", "trials"}},
                        {"rows", rows}};
}

inline ResultTable from_json(const nlohmann::json& j) {
  ResultTable table;
  for (const auto& row : j.at("rows")) {
    ResultRow r;
    r.dataset = row.at("dataset").get<std::string>();
    r.scorer = row.at("scorer").get<std::string>();
    r.attack = row.at("attack").get<std::string>();
    r.nodes = row.at("nodes").get<std::size_t>();
    r.degree = row.at("degree").get<std::size_t>();
    r.sides = row.at("sides").get<std::string>();
    r.metric = row.at("metric").get<std::string>();
    if (!row.at("N").is_null()) r.n = row.at("N").get<std::size_t>();
    r.mean = row.at("mean").get<double>();
    r.trials = row.at("trials").get<std::vector<double>>();
    table.rows.push_back(std::move(r));
  }
  return table;
}

inline void emit_report(const ResultTable& table, const std::string& path, const std::string& format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report '" + path + "'");
  if (format == "structured")
    out << to_json(table).dump(2) << '\n';
  else if (format == "tabular")
    write_tabular(table, out);
  else
    throw ConfigError("unknown report format '" + format + "'");
  if (!out) throw Error("write failed for '" + path + "'");
}

inline ResultTable read_report(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open report '" + path + "'");
  if (format == "structured") return from_json(nlohmann::json::parse(in));
  return read_tabular(in);
}

}  // namespace dpnia
