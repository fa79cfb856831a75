#include <gtest/gtest.h>

#include "corpus.hpp"
#include "slsvm/universal_swarm.hpp"

namespace slsvm::swarm {
namespace {

using testing::load_machine;

mpcp::TileSet macc_tiles() { return mpcp::compile(tm::normalize(load_machine("m_acc")), {"1"}); }

std::uint32_t child_with_tile(const TileTree& t, std::uint32_t v, mpcp::TileIndex tile) {
  auto [f, l] = t.children(v);
  for (auto c = f; c < l; ++c) {
    if (t.tile(c) == tile) return c;
  }
  ADD_FAILURE() << "no child with tile " << tile;
  return 0;
}

TEST(TileTree, FreshTreeHoldsTheInitialTile) {
  auto set = macc_tiles();
  auto t = TileTree::fresh(set);
  EXPECT_EQ(t.size(), 2U);
  EXPECT_EQ(t.children(0), (std::pair<std::uint32_t, std::uint32_t>{1, 2}));
  EXPECT_EQ(t.tile(1), 0U);
  EXPECT_FALSE(t.expanded(1));
}

TEST(AcoIteration, OneAntOnFreshTree) {
  auto set = macc_tiles();
  Rng rng(1);
  auto t = aco_iteration(TileTree::fresh(set), set, 1, rng, true);
  EXPECT_TRUE(t.legal(1));
  EXPECT_DOUBLE_EQ(t.pheromone(1), 1.0);
  ASSERT_TRUE(t.expanded(1));
  auto [f, l] = t.children(1);
  EXPECT_EQ(l - f, set.count - 1);
}

TEST(TileTree, LegalChildIsReinforcedAndExpanded) {
  auto set = macc_tiles();
  Rng rng(1);
  auto t = aco_iteration(TileTree::fresh(set), set, 1, rng, true);
  const auto c = child_with_tile(t, 1, 5);
  t.settle(set, c, true);
  EXPECT_TRUE(t.legal(c));
  EXPECT_DOUBLE_EQ(t.pheromone(c), 1.0);
  EXPECT_DOUBLE_EQ(t.pheromone(1), 2.0);
  EXPECT_TRUE(t.expanded(c));
  EXPECT_EQ(t.max_depth(), 2U);
}

TEST(TileTree, IllegalChildIsBlockedWithoutReinforcement) {
  auto set = macc_tiles();
  Rng rng(1);
  auto t = aco_iteration(TileTree::fresh(set), set, 1, rng, true);
  const auto c = child_with_tile(t, 1, 2);
  const auto before = t.size();
  t.settle(set, c, true);
  EXPECT_FALSE(t.legal(c));
  EXPECT_TRUE(t.blocked(c));
  EXPECT_DOUBLE_EQ(t.pheromone(c), 0.0);
  EXPECT_DOUBLE_EQ(t.pheromone(1), 1.0);
  EXPECT_EQ(t.size(), before);

  auto open = aco_iteration(TileTree::fresh(set), set, 1, rng, true);
  const auto d = child_with_tile(open, 1, 2);
  open.settle(set, d, false);
  EXPECT_FALSE(open.blocked(d));
  EXPECT_FALSE(open.legal(d));
}

TEST(TileTree, BlockingEveryChildKillsTheParent) {
  auto set = macc_tiles();
  Rng rng(1);
  auto t = aco_iteration(TileTree::fresh(set), set, 1, rng, true);
  auto [f, l] = t.children(1);
  for (auto c = f; c < l; ++c) {
    if (t.tile(c) != 5) t.settle(set, c, true);
  }
  EXPECT_FALSE(t.dead());
  EXPECT_FALSE(t.blocked(1));
}

TEST(TileTree, WalkAvoidsBlockedChildren) {
  auto set = macc_tiles();
  Rng rng(1);
  auto t = aco_iteration(TileTree::fresh(set), set, 1, rng, true);
  auto [f, l] = t.children(1);
  for (auto c = f; c < l; ++c) {
    if (t.tile(c) != 5 && t.tile(c) != 6) t.settle(set, c, true);
  }
  for (int k = 0; k < 50; ++k) {
    auto leaf = t.walk(rng);
    EXPECT_TRUE(t.tile(leaf) == 5 || t.tile(leaf) == 6);
  }
}

TEST(AcoRun, MAccMatchesOracle) {
  auto m = load_machine("m_acc");
  AcoOptions opt;
  opt.ants = 4;
  opt.seed = 5;
  auto r = aco_run_universal(tm::normalize(m), {"1"}, 2000, opt);
  ASSERT_EQ(r.outcome, uga::Outcome::kAccepted);
  EXPECT_EQ(*r.history, tm::simulate(m, {"1"}, 100));
  EXPECT_NE(r.extra_stats.find("max_depth="), std::string::npos);
}

TEST(AcoRun, ZeroTransitionAcceptorIsQuick) {
  auto n = tm::normalize(load_machine("accept0"));
  auto depth = mpcp::brute_force_mpcp(mpcp::compile(n, {}), 10)->size();
  AcoOptions opt;
  opt.seed = 1;
  auto r = aco_run_universal(n, {}, 200, opt);
  ASSERT_EQ(r.outcome, uga::Outcome::kAccepted);
  EXPECT_EQ(r.best.size(), depth);
  EXPECT_LT(r.stats.generations, 100U);
}

TEST(AcoRun, ZeroAntsRejected) {
  AcoOptions opt;
  opt.ants = 0;
  EXPECT_THROW(aco_run_universal(tm::normalize(load_machine("m_acc")), {"1"}, 10, opt), ValidationError);
}

TEST(AcoRun, PheromoneNeverDecreases) {
  auto n = tm::normalize(load_machine("succ"));
  std::optional<TileTree> prev;
  std::size_t checked = 0;
  AcoOptions opt;
  opt.seed = 2;
  opt.observer = [&](const std::vector<RuleApplication>&, const State<AcoTraits>& s) {
    if (!s.has_fpw()) return;
    const TileTree& t = s.fpw();
    if (prev) {
      ASSERT_GE(t.size(), prev->size());
      for (std::uint32_t v = 0; v < prev->size(); ++v) ASSERT_GE(t.pheromone(v), prev->pheromone(v));
      ++checked;
    }
    prev = t;
  };
  auto r = aco_run_universal(n, {"1", "1"}, 3000, opt);
  EXPECT_EQ(r.outcome, uga::Outcome::kAccepted);
  EXPECT_GT(checked, 10U);
}

TEST(AcoRun, LoopMachineKeepsDeepening) {
  auto n = tm::normalize(load_machine("loop"));
  const std::size_t tiles = mpcp::compile(n, {}).count;
  std::vector<std::uint32_t> depth;  // after every simulate
  AcoOptions opt;
  opt.seed = 3;
  opt.observer = [&](const std::vector<RuleApplication>& apps, const State<AcoTraits>& s) {
    for (const auto& a : apps) {
      if (a.rule == "simulate") depth.push_back(s.fpw().max_depth());
    }
  };
  auto r = aco_run_universal(n, {}, 2000, opt);
  EXPECT_EQ(r.outcome, uga::Outcome::kBudgetExhausted);
  ASSERT_GT(depth.size(), tiles);
  for (std::size_t i = 0; i + tiles - 2 < depth.size(); ++i) {
    EXPECT_GT(depth[i + tiles - 2], depth[i]) << "window at iteration " << i;
  }
}

TEST(AcoRun, SimulateInsideEvaluate) {
  AcoOptions opt;
  opt.seed = 4;
  auto r = aco_run_universal(tm::normalize(load_machine("m_acc")), {"1"}, 100, opt);
  std::size_t n = 0;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (r.trace[i].rule != "evaluate") continue;
    ASSERT_LT(i + 1, r.trace.size());
    EXPECT_EQ(r.trace[i + 1].rule, "simulate");
    ++n;
  }
  EXPECT_GT(n, 1U);
}

TEST(PsoRun, MAccMatchesOracle) {
  auto m = load_machine("m_acc");
  PsoOptions opt;
  opt.particles = 8;
  opt.seed = 2;
  auto r = pso_run_universal(tm::normalize(m), {"1"}, 2000, opt);
  ASSERT_EQ(r.outcome, uga::Outcome::kAccepted);
  EXPECT_EQ(*r.history, tm::simulate(m, {"1"}, 100));
}

TEST(PsoRun, SingleParticleAgreesWithGa) {
  auto n = tm::normalize(load_machine("m_acc"));
  PsoOptions opt;
  opt.particles = 1;
  opt.seed = 7;
  auto pso = pso_run_universal(n, {"1"}, 2000, opt);
  auto ga = uga::run_universal(n, {"1"}, uga::Mode::kStochastic, uga::Variant::kFullHistory, 2000,
                               uga::RunOptions{7, {}, {}});
  EXPECT_EQ(pso.outcome, ga.outcome);
  EXPECT_EQ(pso.outcome, uga::Outcome::kAccepted);
}

TEST(PsoRun, ZeroParticlesRejected) {
  PsoOptions opt;
  opt.particles = 0;
  EXPECT_THROW(pso_run_universal(tm::normalize(load_machine("m_acc")), {"1"}, 10, opt), ValidationError);
}

TEST(PsoRun, BestNeverShrinksAndStaysViable) {
  auto n = tm::normalize(load_machine("parity"));
  std::int64_t last = 0;
  PsoOptions opt;
  opt.seed = 5;
  opt.observer = [&](const std::vector<RuleApplication>& apps, const State<PsoTraits>& s) {
    if (apps.back().rule != "evaluate") return;
    EXPECT_GE(s.fpw(), last);
    last = s.fpw();
    EXPECT_EQ(static_cast<std::int64_t>(s.best().size()), s.fpw());
    EXPECT_TRUE(mpcp::is_viable(*s.prob(), s.best()));
  };
  auto r = pso_run_universal(n, {"0", "1", "1", "0"}, 5000, opt);
  EXPECT_EQ(r.outcome, uga::Outcome::kAccepted);
}

TEST(PsoRun, DivertAimMoveExpansion) {
  PsoOptions opt;
  opt.seed = 1;
  auto r = pso_run_universal(tm::normalize(load_machine("succ")), {"1"}, 500, opt);
  std::size_t n = 0;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (r.trace[i].rule != "next-generation") continue;
    ASSERT_LT(i + 3, r.trace.size());
    EXPECT_EQ(r.trace[i + 1].rule, "divert");
    EXPECT_EQ(r.trace[i + 2].rule, "aim");
    EXPECT_EQ(r.trace[i + 3].rule, "move");
    ++n;
  }
  EXPECT_GT(n, 0U);
}

TEST(SwarmRuns, StuckMachine) {
  auto n = tm::normalize(load_machine("stuck"));
  EXPECT_EQ(aco_run_universal(n, {"0"}, 2000).outcome, uga::Outcome::kStuck);
  EXPECT_EQ(pso_run_universal(n, {"0"}, 2000).outcome, uga::Outcome::kStuck);
}

}  // namespace
}  // namespace slsvm::swarm
