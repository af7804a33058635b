#pragma once

#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpnia/graph.hpp"
#include "dpnia/injection.hpp"

namespace dpnia {

// One injected node: where it lives, what it links to, and which existing
// unmatched nodes (in the other layer) it is meant to displace.
struct AttackInstruction {
  Layer layer = Layer::Second;
  NodeId injected = kNoNode;
  std::vector<NodeId> anchors;
  std::vector<NodeId> covered;
};

struct AttackPlan {
  std::vector<AttackInstruction> steps;

  std::size_t cost(Layer l) const {
    std::size_t c = 0;
    for (const auto& s : steps)
      if (s.layer == l) c += s.anchors.size();
    return c;
  }
  // Distinct covered nodes; stacked copies of one set count once.
  std::size_t covered_count() const {
    std::set<std::pair<Layer, NodeId>> seen;
    for (const auto& s : steps)
      for (NodeId u : s.covered) seen.emplace(other(s.layer), u);
    return seen.size();
  }
};

struct AttackOutcome {
  MultiplexInstance instance;
  InjectionLedger ledger;
  AttackPlan plan;
  bool budget_insufficient = false;
};

// Plan report: one tab-separated record per injected node,
//   layer <TAB> injected label <TAB> anchor labels <TAB> covered labels
// with space-separated label lists. Labels refer to the perturbed instance.
inline void write_plan(const AttackPlan& plan, const MultiplexInstance& perturbed, std::ostream& out) {
  out << "# layer\tinjected\tanchors\tcovered\n";
  for (const auto& s : plan.steps) {
    const auto& home = perturbed.layer(s.layer);
    const auto& away = perturbed.layer(other(s.layer));
    out << to_string(s.layer) << '\t' << home.label(s.injected) << '\t';
    for (std::size_t i = 0; i < s.anchors.size(); ++i) out << (i ? " " : "") << home.label(s.anchors[i]);
    out << '\t';
    for (std::size_t i = 0; i < s.covered.size(); ++i) out << (i ? " " : "") << away.label(s.covered[i]);
    out << '\n';
  }
}

// Re-applies a plan report to an unperturbed instance.
inline AttackOutcome replay_plan(const MultiplexInstance& original, std::istream& in,
                                 std::size_t budget1, std::size_t budget2,
                                 const std::string& source = "<plan>") {
  AttackOutcome out{original, InjectionLedger(original, budget1, budget2), {}, false};
  std::string raw;
  std::size_t line_no = 0;
  auto split_labels = [](const std::string& field) {
    std::vector<std::string> labels;
    std::istringstream ss(field);
    for (std::string s; ss >> s;) labels.push_back(s);
    return labels;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ss{std::string(line)};
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() == 3) fields.emplace_back();
    if (fields.size() != 4) throw ParseError(source, line_no, "expected 4 tab-separated fields");
    AttackInstruction step;
    if (fields[0] == "1") step.layer = Layer::First;
    else if (fields[0] == "2") step.layer = Layer::Second;
    else throw ParseError(source, line_no, "layer must be 1 or 2");
    auto& home = out.instance.layer(step.layer);
    const auto& away = out.instance.layer(other(step.layer));
    for (const auto& l : split_labels(fields[2])) {
      auto id = home.find(l);
      if (!id) throw ParseError(source, line_no, "unknown anchor '" + l + "'");
      step.anchors.push_back(*id);
    }
    for (const auto& l : split_labels(fields[3])) {
      auto id = away.find(l);
      if (!id) throw ParseError(source, line_no, "unknown covered node '" + l + "'");
      step.covered.push_back(*id);
    }
    step.injected = inject_node(home, out.ledger, step.layer, step.anchors, fields[1]);
    out.plan.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace dpnia
