#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dpnia/baselines.hpp"
#include "support.hpp"

using namespace dpnia;
namespace t = dpnia::testing;

namespace {

MultiplexInstance star_instance(std::size_t leaves) {
  MultiplexInstance inst;
  for (std::size_t v = 0; v <= leaves; ++v) {
    inst.g1.add_node("a" + std::to_string(v));
    inst.g2.add_node("b" + std::to_string(v));
  }
  for (NodeId v = 1; v <= leaves; ++v) {
    inst.g1.add_edge(0, v);
    inst.g2.add_edge(0, v);
  }
  inst.phi = {{1, 1}};
  inst.validate();
  return inst;
}

BaselineConfig config(Strategy s, std::size_t nodes, std::size_t degree, std::uint64_t seed = 1) {
  BaselineConfig c;
  c.strategy = s;
  c.injected_nodes = nodes;
  c.degree = degree;
  c.seed = seed;
  return c;
}

std::vector<std::vector<NodeId>> anchors_of(const AttackOutcome& out) {
  std::vector<std::vector<NodeId>> a;
  for (const auto& s : out.plan.steps) a.push_back(s.anchors);
  return a;
}

}  // namespace

TEST(Baseline, NamesRoundTrip) {
  for (auto s : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_FALSE(parse_strategy("EDA").has_value());
}

TEST(Baseline, RejectsEmptyConfig) {
  const auto inst = t::toy();
  EXPECT_THROW(attack_random(inst, config(Strategy::Random, 0, 1), Layer::First), ConfigError);
  EXPECT_THROW(attack_random(inst, config(Strategy::Random, 1, 0), Layer::First), ConfigError);
}

TEST(Random, FullProbabilityLinksEverything) {
  const auto inst = t::toy();
  const auto out = attack_random(inst, config(Strategy::Random, 1, 6), Layer::Second);
  ASSERT_EQ(out.plan.steps.size(), 1u);
  EXPECT_EQ(out.plan.steps[0].anchors, (std::vector<NodeId>{0, 1, 2, 3, 4, 5}));
}

TEST(Random, HardStopAtBudget) {
  std::mt19937_64 rng(1);
  const auto inst = t::random_instance(rng, 50, 50, 0.1, 10);
  const auto out = attack_random(inst, config(Strategy::Random, 4, 10, 9), Layer::First);
  EXPECT_LE(out.ledger[Layer::First].used(), 40u);
}

TEST(Uniform, RoundRobinOnFiveNodes) {
  MultiplexInstance inst;
  for (int v = 0; v < 5; ++v) {
    inst.g1.add_node("a" + std::to_string(v));
    inst.g2.add_node("b" + std::to_string(v));
  }
  inst.phi = {{0, 0}};
  const auto out = attack_uniform(inst, config(Strategy::Uniform, 2, 2), Layer::First);
  EXPECT_EQ(anchors_of(out), (std::vector<std::vector<NodeId>>{{0, 1}, {2, 3}}));
  const auto wrap = attack_uniform(inst, config(Strategy::Uniform, 3, 2), Layer::First);
  EXPECT_EQ(anchors_of(wrap), (std::vector<std::vector<NodeId>>{{0, 1}, {2, 3}, {0, 4}}));
  const auto full = attack_uniform(inst, config(Strategy::Uniform, 2, 5), Layer::First);
  for (const auto& a : anchors_of(full)) EXPECT_EQ(a, (std::vector<NodeId>{0, 1, 2, 3, 4}));
}

TEST(DegreeOrdered, StarGraph) {
  const auto inst = star_instance(4);
  const auto aldn = attack_aldn(inst, config(Strategy::ALDN, 1, 1), Layer::First);
  EXPECT_EQ(anchors_of(aldn), (std::vector<std::vector<NodeId>>{{0}}));
  const auto asdn = attack_asdn(inst, config(Strategy::ASDN, 1, 1), Layer::First);
  EXPECT_EQ(anchors_of(asdn), (std::vector<std::vector<NodeId>>{{1}}));
}

TEST(DegreeOrdered, AldnAndAsdnAreReversedDegreeSequences) {
  std::mt19937_64 rng(6);
  const auto inst = t::random_instance(rng, 20, 20, 0.2, 5);
  const std::size_t n = inst.g1.node_count();
  const auto aldn = attack_aldn(inst, config(Strategy::ALDN, n, 1), Layer::First);
  const auto asdn = attack_asdn(inst, config(Strategy::ASDN, n, 1), Layer::First);
  std::vector<std::size_t> desc, asc;
  std::set<NodeId> seen;
  for (const auto& s : aldn.plan.steps) {
    desc.push_back(inst.g1.degree(s.anchors[0]));
    seen.insert(s.anchors[0]);
  }
  for (const auto& s : asdn.plan.steps) asc.push_back(inst.g1.degree(s.anchors[0]));
  std::reverse(asc.begin(), asc.end());
  EXPECT_EQ(desc, asc);
  EXPECT_EQ(seen.size(), n);
}

TEST(DegreeOrdered, AldnSequenceNonIncreasing) {
  std::mt19937_64 rng(2);
  const auto inst = t::random_instance(rng, 40, 40, 0.15, 10);
  const auto out = attack_aldn(inst, config(Strategy::ALDN, 8, 1), Layer::Second);
  for (std::size_t i = 1; i < out.plan.steps.size(); ++i)
    EXPECT_GE(inst.g2.degree(out.plan.steps[i - 1].anchors[0]), inst.g2.degree(out.plan.steps[i].anchors[0]));
}

TEST(MatchedPools, AmnAndAumn) {
  std::mt19937_64 rng(3);
  const auto inst = t::random_instance(rng, 40, 40, 0.1, 12);
  const auto amn = attack_amn(inst, config(Strategy::AMN, 3, 5), Layer::First);
  const auto aumn = attack_aumn(inst, config(Strategy::AUMN, 3, 5), Layer::First);
  for (const auto& s : amn.plan.steps) {
    EXPECT_EQ(s.anchors.size(), 5u);
    for (NodeId a : s.anchors) EXPECT_TRUE(t::is_matched(inst, Layer::First, a));
  }
  for (const auto& s : aumn.plan.steps) {
    EXPECT_EQ(s.anchors.size(), 5u);
    for (NodeId a : s.anchors) EXPECT_FALSE(t::is_matched(inst, Layer::First, a));
  }
  const auto small = attack_amn(inst, config(Strategy::AMN, 1, 30), Layer::First);
  EXPECT_EQ(small.plan.steps[0].anchors.size(), 12u);
}

TEST(LinkScored, GpsBudgetTwoTakesOneLink) {
  const auto inst = t::toy();
  const auto out = attack_gps_like(inst, config(Strategy::GPSlike, 1, 2), Layer::First);
  ASSERT_EQ(out.plan.steps.size(), 1u);
  const auto& a = out.plan.steps[0].anchors;
  ASSERT_EQ(a.size(), 2u);
  EXPECT_TRUE(inst.g1.has_edge(a[0], a[1]));
  // Heaviest degree product in layer 1 is a4-a1 (3 * 2).
  EXPECT_EQ(a, (std::vector<NodeId>{0, 3}));
}

TEST(LinkScored, GpsPrefersHighestMatchedPair) {
  // Two hubs joined by one link; weights coincide with matched-neighbor counts.
  MultiplexInstance inst;
  for (int v = 0; v < 8; ++v) {
    inst.g1.add_node("a" + std::to_string(v));
    inst.g2.add_node("b" + std::to_string(v));
  }
  inst.g1.add_edge(0, 1);
  for (NodeId v : {2, 3, 4}) inst.g1.add_edge(0, v);
  for (NodeId v : {5, 6, 7}) inst.g1.add_edge(1, v);
  inst.phi = {{2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}};
  const auto out = attack_gps_like(inst, config(Strategy::GPSlike, 1, 2), Layer::First);
  EXPECT_EQ(out.plan.steps[0].anchors, (std::vector<NodeId>{0, 1}));
}

TEST(LinkScored, LpsAnchorsAreEndpointsAndDistinct) {
  std::mt19937_64 rng(4);
  const auto inst = t::random_instance(rng, 30, 30, 0.2, 10);
  const auto out = attack_lps_like(inst, config(Strategy::LPSlike, 3, 6, 5), Layer::Second);
  for (const auto& s : out.plan.steps) {
    EXPECT_LE(s.anchors.size(), 6u);
    EXPECT_EQ(std::set<NodeId>(s.anchors.begin(), s.anchors.end()).size(), s.anchors.size());
    for (NodeId a : s.anchors) EXPECT_GT(inst.g2.degree(a), 0u);
  }
}

TEST(BaselineProperty, LedgerContractAndDeterminism) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 5; ++round) {
    const auto inst = t::random_instance(rng, 35, 35, 0.15, 10);
    for (auto s : kAllStrategies) {
      const auto cfg = config(s, 3, 4, 100 + round);
      const auto a = attack_baseline(inst, cfg, true, true);
      const auto b = attack_baseline(inst, cfg, true, true);
      for (Layer l : {Layer::First, Layer::Second}) {
        EXPECT_TRUE(t::preserves_original(inst.layer(l), a.instance.layer(l))) << to_string(s);
        EXPECT_LE(a.ledger[l].used(), cfg.budget()) << to_string(s);
        EXPECT_TRUE(a.ledger[l].internal_links.empty());
        EXPECT_TRUE(equivalent(a.instance.layer(l), b.instance.layer(l))) << to_string(s);
      }
      EXPECT_EQ(anchors_of(a), anchors_of(b));
    }
  }
}

TEST(BaselineProperty, OneSidedLeavesOtherLayer) {
  const auto inst = t::toy();
  const auto out = attack_uniform(inst, config(Strategy::Uniform, 2, 2), Layer::Second);
  EXPECT_TRUE(equivalent(inst.g1, out.instance.g1));
  EXPECT_EQ(out.instance.g2.node_count(), 8u);
}
