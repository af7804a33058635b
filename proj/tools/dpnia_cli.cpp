#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpnia/dpnia.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string output;
  std::string format;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> scorers;
  std::vector<std::string> attacks;
  std::vector<std::size_t> injected_nodes;
  std::vector<std::size_t> degrees;
  std::vector<std::string> sides;
  std::vector<std::size_t> at_n;
  std::vector<std::string> metrics;
  double delta = 0.0;
  double train_fraction = 0.0;
  std::string query_sides;
  bool limit_injected = false;
  std::size_t depth = 1;
  bool strict = false;
};

// Flags that were given on the command line replace the config file's keys.
void apply_overrides(nlohmann::json& j, const CLI::App& cmd, const Overrides& o) {
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--output")) j["output"] = o.output;
  if (given("--format")) j["format"] = o.format;
  if (given("--trials")) j["trials"] = o.trials;
  if (given("--seed")) j["seed"] = o.seed;
  if (given("--scorers")) j["scorers"] = o.scorers;
  if (given("--attacks")) j["attacks"] = o.attacks;
  if (given("--injected-nodes")) j["injected_nodes"] = o.injected_nodes;
  if (given("--degrees")) j["degrees"] = o.degrees;
  if (given("--sides")) j["sides"] = o.sides;
  if (given("--at-n")) j["at_n"] = o.at_n;
  if (given("--metrics")) j["metrics"] = o.metrics;
  if (given("--delta")) j["delta"] = o.delta;
  if (given("--train-fraction")) j["train_fraction"] = o.train_fraction;
  if (given("--query-sides")) j["query_sides"] = o.query_sides;
  if (given("--limit-injected")) j["dpnia_limit_injected"] = o.limit_injected;
  if (given("--depth")) j["dpnia_depth"] = o.depth;
  if (given("--strict")) j["dpnia_strict"] = o.strict;
}

int cmd_run(const std::string& config_path, const CLI::App& cmd, const Overrides& o) {
  std::ifstream in(config_path);
  if (!in) throw dpnia::ConfigError("cannot open config '" + config_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw dpnia::ConfigError(config_path + ": " + e.what());
  }
  apply_overrides(j, cmd, o);
  const auto cfg = dpnia::parse_config(j);
  const auto table = dpnia::run_experiment(cfg);
  if (cfg.output.empty()) {
    if (cfg.format == "structured")
      std::cout << dpnia::to_json(table).dump(2) << '\n';
    else
      dpnia::write_tabular(table, std::cout);
  } else {
    dpnia::emit_report(table, cfg.output, cfg.format);
    std::cerr << "wrote " << table.rows.size() << " rows to " << cfg.output << '\n';
  }
  return 0;
}

dpnia::MultiplexInstance load_instance(const std::string& e1, const std::string& e2, const std::string& links) {
  dpnia::MultiplexInstance inst;
  inst.g1 = dpnia::load_edge_list(e1).network;
  inst.g2 = dpnia::load_edge_list(e2).network;
  inst.phi = dpnia::load_interlinks_extending(links, inst.g1, inst.g2);
  return inst;
}

void write_file(const fs::path& path, auto&& writer) {
  std::ofstream out(path);
  if (!out) throw dpnia::Error("cannot write '" + path.string() + "'");
  writer(out);
  if (!out) throw dpnia::Error("write failed for '" + path.string() + "'");
}

struct AttackArgs {
  std::string edges1, edges2, interlinks, out_dir;
  std::string attack = "DPNIA";
  std::size_t nodes = 200;
  std::size_t degree = 1;
  std::string sides = "both";
  double delta = 0.5;
  std::uint64_t seed = 0;
  bool limit_injected = false;
  std::size_t depth = 1;
  bool strict = false;
};

int cmd_attack(const AttackArgs& a) {
  const auto inst = load_instance(a.edges1, a.edges2, a.interlinks);
  auto sides = dpnia::parse_sides(a.sides);
  if (!sides) throw dpnia::ConfigError("--sides must be 1, 2 or both");
  dpnia::ExperimentConfig cfg;
  cfg.delta = a.delta;
  cfg.dpnia_limit_injected = a.limit_injected;
  cfg.dpnia_depth = a.depth;
  cfg.dpnia_strict = a.strict;
  const auto outcome = dpnia::apply_attack(inst, a.attack, {a.nodes, a.degree, *sides}, cfg, a.seed);

  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  write_file(dir / "layer1.edges", [&](std::ostream& o) { dpnia::write_edge_list(outcome.instance.g1, o); });
  write_file(dir / "layer2.edges", [&](std::ostream& o) { dpnia::write_edge_list(outcome.instance.g2, o); });
  write_file(dir / "interlinks.txt", [&](std::ostream& o) {
    dpnia::write_interlinks(outcome.instance.phi, outcome.instance.g1, outcome.instance.g2, o);
  });
  write_file(dir / "plan.tsv", [&](std::ostream& o) { dpnia::write_plan(outcome.plan, outcome.instance, o); });

  std::cout << "injected " << outcome.plan.steps.size() << " nodes, links layer1="
            << outcome.ledger[dpnia::Layer::First].used() << " layer2=" << outcome.ledger[dpnia::Layer::Second].used()
            << ", covered targets " << outcome.plan.covered_count() << '\n';
  if (outcome.budget_insufficient) std::cout << "budget-insufficient: no target set fits the budget\n";
  return 0;
}

struct EvalArgs {
  std::string edges1, edges2, observed, held_out;
  std::vector<std::string> scorers{"CN", "FRUI", "IDP"};
  std::vector<std::size_t> at_n{30};
  std::string query_sides = "both";
};

int cmd_eval(const EvalArgs& a) {
  auto inst = load_instance(a.edges1, a.edges2, a.observed);
  inst.psi = dpnia::load_interlinks_extending(a.held_out, inst.g1, inst.g2);
  inst.validate();
  dpnia::ExperimentConfig cfg;
  cfg.at_n = a.at_n;
  auto q = dpnia::parse_query_sides(a.query_sides);
  if (!q) throw dpnia::ConfigError("--query-sides must be 1, 2 or both");
  cfg.query_sides = *q;
  std::cout << "scorer,metric,value\n";
  for (const auto& name : a.scorers) {
    auto m = dpnia::parse_method(name);
    if (!m) throw dpnia::ConfigError("unknown scorer '" + name + "'");
    for (const auto& [metric, v] : dpnia::evaluate_instance(inst, *m, cfg))
      std::cout << name << ',' << metric << ',' << v << '\n';
  }
  return 0;
}

struct GenArgs {
  dpnia::SyntheticSpec spec;
  std::string family = "pa";
  std::string out_dir;
};

int cmd_gen(GenArgs a) {
  auto family = dpnia::parse_family(a.family);
  if (!family) throw dpnia::ConfigError("unknown graph family '" + a.family + "'");
  a.spec.family = *family;
  const auto inst = dpnia::generate_synthetic_multiplex(a.spec);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  write_file(dir / "layer1.edges", [&](std::ostream& o) { dpnia::write_edge_list(inst.g1, o); });
  write_file(dir / "layer2.edges", [&](std::ostream& o) { dpnia::write_edge_list(inst.g2, o); });
  write_file(dir / "interlinks.txt",
             [&](std::ostream& o) { dpnia::write_interlinks(inst.phi, inst.g1, inst.g2, o); });
  std::cout << "layer1: " << inst.g1.node_count() << " nodes, " << inst.g1.edge_count() << " edges; layer2: "
            << inst.g2.node_count() << " nodes, " << inst.g2.edge_count() << " edges; " << inst.phi.size()
            << " inter-links\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node injection attacks on structural network alignment"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides over;
  auto* run = app.add_subcommand("run", "Run a configured experiment sweep and emit a report");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--output", over.output, "Report path (stdout when empty)");
  run->add_option("--format", over.format, "tabular or structured");
  run->add_option("--trials", over.trials);
  run->add_option("--seed", over.seed);
  run->add_option("--scorers", over.scorers)->delimiter(',');
  run->add_option("--attacks", over.attacks)->delimiter(',');
  run->add_option("--injected-nodes", over.injected_nodes)->delimiter(',');
  run->add_option("--degrees", over.degrees)->delimiter(',');
  run->add_option("--sides", over.sides)->delimiter(',');
  run->add_option("--at-n", over.at_n)->delimiter(',');
  run->add_option("--metrics", over.metrics)->delimiter(',');
  run->add_option("--delta", over.delta);
  run->add_option("--train-fraction", over.train_fraction);
  run->add_option("--query-sides", over.query_sides);
  run->add_flag("--limit-injected", over.limit_injected, "Cap DPNIA's injected nodes at the node count");
  run->add_option("--depth", over.depth, "DPNIA injected nodes stacked per target set");
  run->add_flag("--strict", over.strict, "DPNIA skips targets it can only tie");

  AttackArgs attack_args;
  auto* attack = app.add_subcommand("attack", "Apply one attack and write the perturbed instance and plan");
  attack->add_option("--edges1", attack_args.edges1)->required()->check(CLI::ExistingFile);
  attack->add_option("--edges2", attack_args.edges2)->required()->check(CLI::ExistingFile);
  attack->add_option("--interlinks", attack_args.interlinks, "Observed inter-links")
      ->required()
      ->check(CLI::ExistingFile);
  attack->add_option("--attack", attack_args.attack, "DPNIA or a baseline strategy name")->capture_default_str();
  attack->add_option("--nodes", attack_args.nodes, "Injected nodes (budget = nodes * degree)")->capture_default_str();
  attack->add_option("--degree", attack_args.degree, "Links per injected node")->capture_default_str();
  attack->add_option("--sides", attack_args.sides, "1, 2 or both")->capture_default_str();
  attack->add_option("--delta", attack_args.delta, "Vulnerability trade-off")->capture_default_str();
  attack->add_option("--seed", attack_args.seed, "Seed for randomized baselines")->capture_default_str();
  attack->add_flag("--limit-injected", attack_args.limit_injected);
  attack->add_option("--depth", attack_args.depth, "DPNIA injected nodes stacked per target set")
      ->capture_default_str();
  attack->add_flag("--strict", attack_args.strict, "DPNIA skips targets it can only tie");
  attack->add_option("--out-dir", attack_args.out_dir)->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Score an instance with held-out correspondences");
  eval->add_option("--edges1", eval_args.edges1)->required()->check(CLI::ExistingFile);
  eval->add_option("--edges2", eval_args.edges2)->required()->check(CLI::ExistingFile);
  eval->add_option("--observed", eval_args.observed)->required()->check(CLI::ExistingFile);
  eval->add_option("--held-out", eval_args.held_out)->required()->check(CLI::ExistingFile);
  eval->add_option("--scorers", eval_args.scorers, "")->capture_default_str()->delimiter(',');
  eval->add_option("--at-n", eval_args.at_n, "")->capture_default_str()->delimiter(',');
  eval->add_option("--query-sides", eval_args.query_sides, "")->capture_default_str();

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic two-layer instance");
  gen->add_option("--family", gen_args.family, "er or pa")->capture_default_str();
  gen->add_option("--nodes", gen_args.spec.nodes, "")->capture_default_str();
  gen->add_option("--avg-degree", gen_args.spec.avg_degree, "")->capture_default_str();
  gen->add_option("--overlap", gen_args.spec.overlap, "")->capture_default_str();
  gen->add_option("--noise", gen_args.spec.noise, "")->capture_default_str();
  gen->add_option("--seed", gen_args.spec.seed, "")->capture_default_str();
  gen->add_option("--out-dir", gen_args.out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(config_path, *run, over);
    if (*attack) return cmd_attack(attack_args);
    if (*eval) return cmd_eval(eval_args);
    if (*gen) return cmd_gen(gen_args);
  } catch (const dpnia::ParseError& e) {
    std::cerr << "dpnia_cli: parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dpnia_cli: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
