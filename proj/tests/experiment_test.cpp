#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dpnia/experiment.hpp"
#include "support.hpp"

using namespace dpnia;
using nlohmann::json;

namespace {

json small_config() {
  return json{{"synthetic", {{"family", "pa"}, {"nodes", 60}, {"avg_degree", 6}, {"overlap", 0.8}, {"noise", 0.1}, {"seed", 3}}},
              {"scorers", {"CN", "FRUI"}},
              {"attacks", {"none", "DPNIA", "Random"}},
              {"injected_nodes", {2}},
              {"degrees", {5, 10}},
              {"sides", {"1", "both"}},
              {"at_n", {1, 5}},
              {"trials", 3},
              {"seed", 11}};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dpnia_exp_" + name);
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const auto cfg = parse_config(small_config());
  EXPECT_EQ(cfg.scorers.size(), 2u);
  EXPECT_EQ(cfg.trials, 3u);
  EXPECT_EQ(cfg.delta, 0.5);
  EXPECT_EQ(cfg.train_fraction, 0.9);
  EXPECT_EQ(cfg.metrics, all_metric_names());
  EXPECT_EQ(cfg.dataset_name(), "synthetic-pa-n60");
  EXPECT_EQ(cfg.sides, (std::vector<AttackSides>{AttackSides::First, AttackSides::Both}));
}

TEST(Config, Errors) {
  auto bad = [](auto mutate) {
    auto j = small_config();
    mutate(j);
    return j;
  };
  EXPECT_THROW(parse_config(bad([](json& j) { j.erase("synthetic"); })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) {
                 j["dataset"] = {{"edges1", "x"}, {"edges2", "y"}, {"interlinks", "z"}};
               })),
               ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["scorers"] = {"SOIDP"}; })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["attacks"] = {"EDA"}; })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["metrics"] = {"NDCG"}; })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["trials"] = 0; })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["delta"] = 1.5; })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["train_fraction"] = 1.0; })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["degrees"] = json::array(); })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["sides"] = {"3"}; })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["trials"] = "ten"; })), ConfigError);
  EXPECT_THROW(parse_config(bad([](json& j) { j["format"] = "xml"; })), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Run, RowCountIsFactorial) {
  const auto cfg = parse_config(small_config());
  const auto table = run_experiment(cfg);
  // Metrics: two P@N entries plus MAP, AUC, Precision, Recall, F1.
  const std::size_t metric_rows = 2 + 5;
  const std::size_t cells = 1 * 2 * 2;
  EXPECT_EQ(table.rows.size(), cfg.scorers.size() * cfg.attacks.size() * metric_rows * cells);
  for (const auto& r : table.rows) {
    ASSERT_EQ(r.trials.size(), 3u);
    double sum = 0.0;
    for (double v : r.trials) sum += v;
    EXPECT_DOUBLE_EQ(r.mean, sum / 3.0);
    EXPECT_EQ(r.metric == "P@N", r.n.has_value());
  }
}

TEST(Run, NoneOnlyConfigGivesNoneRows) {
  auto j = small_config();
  j["attacks"] = {"none"};
  const auto table = run_experiment(parse_config(j));
  ASSERT_FALSE(table.rows.empty());
  for (const auto& r : table.rows) EXPECT_EQ(r.attack, "none");
}

TEST(Run, NoneRowEqualsDirectEvaluation) {
  const auto cfg = parse_config(small_config());
  const auto table = run_experiment(cfg);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto inst = detail::trial_instance(cfg, t, std::nullopt);
    for (Method m : cfg.scorers) {
      const auto direct = evaluate_instance(inst, m, cfg);
      const auto* p5 = table.find(to_string(m), "none", 2, 5, "both", "P@N", 5);
      const auto* map = table.find(to_string(m), "none", 2, 10, "1", "MAP");
      ASSERT_NE(p5, nullptr);
      ASSERT_NE(map, nullptr);
      EXPECT_EQ(p5->trials[t], direct.at("P@5"));
      EXPECT_EQ(map->trials[t], direct.at("MAP"));
    }
  }
}

TEST(Run, ZeroBudgetAttackIsIdentity) {
  const auto cfg = parse_config(small_config());
  const auto inst = detail::trial_instance(cfg, 0, std::nullopt);
  DpniaOptions opts;
  const auto out = execute_dpnia(inst, opts);
  for (Method m : cfg.scorers) EXPECT_EQ(evaluate_instance(out.instance, m, cfg), evaluate_instance(inst, m, cfg));
}

TEST(Run, Deterministic) {
  const auto cfg = parse_config(small_config());
  EXPECT_EQ(run_experiment(cfg), run_experiment(cfg));
}

TEST(Report, TabularRoundTrip) {
  const auto table = run_experiment(parse_config(small_config()));
  std::stringstream ss;
  write_tabular(table, ss);
  std::string header;
  std::getline(std::istringstream(ss.str()), header);
  EXPECT_EQ(header, kReportHeader);
  EXPECT_EQ(read_tabular(ss), table);
}

TEST(Report, StructuredRoundTrip) {
  const auto table = run_experiment(parse_config(small_config()));
  EXPECT_EQ(from_json(json::parse(to_json(table).dump())), table);
}

TEST(Report, FilesRoundTripAndEmptyTable) {
  const auto table = run_experiment(parse_config(small_config()));
  for (std::string format : {"tabular", "structured"}) {
    const auto path = temp_file("report." + format).string();
    emit_report(table, path, format);
    EXPECT_EQ(read_report(path, format), table);
    emit_report(ResultTable{}, path, format);
    EXPECT_EQ(read_report(path, format), ResultTable{});
  }
  const auto path = temp_file("empty.csv").string();
  emit_report(ResultTable{}, path, "tabular");
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  EXPECT_EQ(body.str(), std::string(kReportHeader) + "\n");
  EXPECT_THROW(emit_report(table, "/nonexistent/dir/report.csv", "tabular"), Error);
}

TEST(Report, NanSurvivesTabular) {
  ResultTable t;
  t.rows.push_back({"d", "CN", "none", 1, 1, "both", "AUC", std::nullopt, std::nan(""), {std::nan(""), 0.5}});
  std::stringstream ss;
  write_tabular(t, ss);
  const auto back = read_tabular(ss);
  ASSERT_EQ(back.rows.size(), 1u);
  EXPECT_TRUE(std::isnan(back.rows[0].mean));
  EXPECT_EQ(back.rows[0].trials[1], 0.5);
}

TEST(Report, MalformedTabular) {
  std::istringstream wrong_header("a,b,c\n");
  EXPECT_THROW(read_tabular(wrong_header), ParseError);
  std::istringstream short_row(std::string(kReportHeader) + "\nd,CN,none,1\n");
  EXPECT_THROW(read_tabular(short_row), ParseError);
}

TEST(Synthetic, NoNoiseGivesIdenticalLayers) {
  SyntheticSpec spec;
  spec.nodes = 80;
  spec.noise = 0.0;
  spec.seed = 4;
  const auto inst = generate_synthetic_multiplex(spec);
  EXPECT_EQ(inst.g1.edge_count(), inst.g2.edge_count());
  // Map layer-2 labels back through the shared name suffix.
  for (auto [a, b] : inst.g1.edges()) {
    const auto x = inst.g2.find("b" + inst.g1.label(a).substr(1));
    const auto y = inst.g2.find("b" + inst.g1.label(b).substr(1));
    EXPECT_TRUE(inst.g2.has_edge(*x, *y));
  }
}

TEST(Synthetic, FullOverlapCoversEveryNode) {
  SyntheticSpec spec;
  spec.nodes = 50;
  spec.overlap = 1.0;
  const auto inst = generate_synthetic_multiplex(spec);
  EXPECT_EQ(inst.phi.size(), 50u);
}

TEST(Synthetic, DeterministicAndValidated) {
  SyntheticSpec spec;
  spec.nodes = 100;
  spec.seed = 8;
  const auto a = generate_synthetic_multiplex(spec);
  const auto b = generate_synthetic_multiplex(spec);
  EXPECT_TRUE(equivalent(a.g1, b.g1));
  EXPECT_TRUE(equivalent(a.g2, b.g2));
  EXPECT_EQ(a.phi, b.phi);
  spec.nodes = 4;
  spec.overlap = 0.5;
  EXPECT_THROW(generate_synthetic_multiplex(spec), ConfigError);
  spec.family = GraphFamily::ErdosRenyi;
  spec.nodes = 60;
  EXPECT_NO_THROW(generate_synthetic_multiplex(spec));
}
