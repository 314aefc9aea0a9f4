#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "sbpairs/error.hpp"
#include "sbpairs/oracle.hpp"
#include "sbpairs/verify.hpp"

using namespace sbpairs;
using fixtures::cycle_vars;

namespace {

EdgeVars edges(int n, std::initializer_list<std::pair<int, int>> list) {
  EdgeVars x(n);
  for (auto [i, j] : list) x.set(i, j);
  return x;
}

// Direct edge 1 -> 2 misses the threshold; the bypass through 3 passes.
MarketGraph bypass_graph() {
  MarketGraph g(3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) g.set(i, j, 0.004);
  g.set(1, 2, -0.001);
  g.set(1, 3, -0.002);
  g.set(3, 2, -0.003);
  return g;
}

}  // namespace

TEST(Decode, DirectAndBypassCycles) {
  const auto d = decode(edges(3, {{0, 1}, {1, 2}, {2, 0}}));
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d.path.nodes, (std::vector<int>{0, 1, 2, 0}));
  EXPECT_EQ(d.path.pair(), (Pair{1, 2}));
  EXPECT_TRUE(d.path.is_direct());

  const auto b = decode(cycle_vars(3, {0, 1, 3, 2, 0}));
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b.path.pair(), (Pair{1, 2}));
  EXPECT_EQ(b.path.interior_size(), 3);
}

TEST(Decode, ExcludedShapes) {
  EXPECT_EQ(decode(edges(3, {{1, 2}, {2, 3}, {3, 1}})).reason, Reason::no_dummy_cycle);
  EXPECT_EQ(decode(edges(3, {{0, 1}, {1, 0}, {2, 3}, {3, 2}})).reason, Reason::split_cycles);
  EXPECT_EQ(decode(edges(3, {{0, 1}, {1, 0}})).reason, Reason::opposite_edge);
  EXPECT_EQ(decode(EdgeVars(3)).reason, Reason::empty);
  EXPECT_EQ(decode(edges(3, {{0, 1}, {0, 2}, {1, 0}, {2, 0}})).reason, Reason::degree_violation);
  EXPECT_EQ(decode(edges(3, {{0, 1}, {1, 2}})).reason, Reason::flow_imbalance);
}

TEST(Judge, ThresholdAndTabu) {
  MarketGraph g(2);
  g.set(1, 2, -0.02);
  const auto d = decode(cycle_vars(2, {0, 1, 2, 0}), g);
  TabuList tabu(2);
  EXPECT_EQ(judge(d, g, tabu, -0.01).outcome, Outcome::tradable);
  const auto v = judge(d, g, tabu, -0.05);
  EXPECT_EQ(v.outcome, Outcome::below_threshold);
  EXPECT_EQ(v.reason, Reason::above_threshold);
  EXPECT_DOUBLE_EQ(v.weight_sum, -0.02);
  tabu.add({1, 2});
  EXPECT_EQ(judge(d, g, tabu, -0.01).reason, Reason::tabu_pair);
  EXPECT_EQ(judge(decode(EdgeVars(2), g), g, tabu, -0.01).outcome, Outcome::invalid);
}

TEST(Judge, BypassSumsInteriorEdges) {
  const auto g = bypass_graph();
  const auto d = decode(cycle_vars(3, {0, 1, 3, 2, 0}), g);
  EXPECT_DOUBLE_EQ(d.path.weight_sum, g(1, 3) + g(3, 2));
  EXPECT_EQ(judge(d, g, TabuList(3), -0.002).outcome, Outcome::tradable);
  EXPECT_EQ(judge(decode(cycle_vars(3, {0, 1, 2, 0}), g), g, TabuList(3), -0.002).outcome,
            Outcome::below_threshold);
}

TEST(Oracle, CycleCounts) {
  const auto r2 = enumerate_cycles(MarketGraph(2), TabuList(2));
  EXPECT_EQ(r2.count, 2u);
  std::set<std::vector<int>> seen;
  for (const auto& c : r2.ranked) seen.insert(c.nodes);
  EXPECT_TRUE(seen.count({0, 1, 2, 0}));
  EXPECT_TRUE(seen.count({0, 2, 1, 0}));

  EXPECT_EQ(enumerate_cycles(MarketGraph(3), TabuList(3)).count, 12u);
  EXPECT_EQ(enumerate_cycles(MarketGraph(4), TabuList(4)).count, 12u + 24u + 24u);
  EXPECT_EQ(enumerate_cycles(MarketGraph(4), TabuList(4), 2).count, 12u);
}

TEST(Oracle, TabuSkipsOnlyThatOrientation) {
  TabuList tabu(3);
  tabu.add({1, 2});
  const auto r = enumerate_cycles(bypass_graph(), tabu);
  EXPECT_EQ(r.count, 10u);
  bool passes_edge = false;
  for (const auto& c : r.ranked) {
    EXPECT_NE(c.pair(), (Pair{1, 2}));
    for (std::size_t k = 0; k + 1 < c.nodes.size(); ++k) passes_edge |= c.nodes[k] == 1 && c.nodes[k + 1] == 2;
  }
  EXPECT_TRUE(passes_edge);  // 0 > 3 > 1 > 2 > 0 is still a bypass for (3, 2)
}

TEST(Oracle, OptimalPairExamples) {
  MarketGraph pos(3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) pos.set(i, j, 0.001);
  EXPECT_FALSE(optimal_pair(pos, TabuList(3), -0.002));

  const auto bypass = optimal_pair(bypass_graph(), TabuList(3), -0.002);
  ASSERT_TRUE(bypass);
  EXPECT_EQ(bypass->nodes, (std::vector<int>{0, 1, 3, 2, 0}));
  EXPECT_LT(bypass->weight_sum, bypass_graph()(1, 2));

  MarketGraph strong = pos;
  strong.set(2, 1, -0.05);
  const auto direct = optimal_pair(strong, TabuList(3), -0.002);
  ASSERT_TRUE(direct);
  EXPECT_EQ(direct->nodes, (std::vector<int>{0, 2, 1, 0}));
}

TEST(Oracle, RankedOrderIsStable) {
  const auto r = enumerate_cycles(MarketGraph(3), TabuList(3), 0, 5);
  EXPECT_EQ(r.count, 12u);
  ASSERT_EQ(r.ranked.size(), 5u);
  for (std::size_t k = 1; k < r.ranked.size(); ++k) EXPECT_LT(r.ranked[k - 1].nodes, r.ranked[k].nodes);
}

TEST(Oracle, EnumeratedCyclesHaveZeroPenalty) {
  std::mt19937_64 rng(4);
  auto q = make_problem(fixtures::random_graph(4, rng), TabuList(4));
  q.tabu.add({2, 3});
  for (const auto& c : enumerate_cycles(q.graph, q.tabu).ranked) {
    const auto x = cycle_vars(4, c.nodes);
    EXPECT_EQ(eval_penalty(q, x), 0.0);
    EXPECT_NEAR(eval_cost(q, x), c.weight_sum, 1e-12);
  }
}

TEST(Oracle, TooLargeThrows) {
  try {
    enumerate_cycles(MarketGraph(kOracleMaxStocks + 1), TabuList(kOracleMaxStocks + 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::universe_too_large);
  }
}

TEST(CycleCover, SubtourCanUndercutTheBestDummyCycle) {
  // Two stock 3-cycles are far cheaper than any cycle through the dummy node.
  MarketGraph g(3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) g.set(i, j, 0.01);
  g.set(1, 2, -0.03);
  g.set(2, 3, -0.03);
  g.set(3, 1, -0.03);
  const auto cover = min_cycle_cover(g);
  EXPECT_NEAR(cover.weight, -0.09, 1e-12);
  EXPECT_FALSE(cover.single_dummy_cycle());
  const auto best = enumerate_cycles(g, TabuList(3)).best;
  ASSERT_TRUE(best);
  EXPECT_GT(best->weight_sum, cover.weight);
  EXPECT_EQ(eval_penalty(make_problem(g, TabuList(3)), cycle_vars(3, {1, 2, 3, 1})), 0.0);
}
