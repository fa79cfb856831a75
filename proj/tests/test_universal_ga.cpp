#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "corpus.hpp"
#include "slsvm/universal_ga.hpp"

namespace slsvm::uga {
namespace {

using testing::load_machine;

constexpr mpcp::TileIndex kQ01 = 5;  // (q0 1, 1 qf) in the M_acc tile set
const mpcp::TileSeq kMAccSolution{0, 5, 4, 6, 4, 1};

struct MAcc {
  std::shared_ptr<const tm::TuringMachine> machine =
      std::make_shared<const tm::TuringMachine>(tm::normalize(load_machine("m_acc")));
  Input input{machine, {"1"}, {}};

  UgaState after_set_problem() const {
    UgaState s;
    s.set_extra(uga_init(Algorithm{14, Mode::kDeterministic, Variant::kFullHistory}));
    auto [prob, x] = uga_set_problem(input, s);
    s.set_prob(prob).set_extra(x);
    return s;
  }
};

std::size_t falses(const Extra& x) { return std::count(x.eligible.begin(), x.eligible.end(), false); }

TEST(UgaInit, AllTilesEligible) {
  for (std::size_t n : {14U, 2U}) {
    auto x = uga_init(Algorithm{n, Mode::kStochastic, Variant::kFullHistory});
    EXPECT_EQ(x.eligible.size(), n);
    EXPECT_EQ(falses(x), 0U);
  }
  auto t = uga_init(Algorithm{14, Mode::kDeterministic, Variant::kTrimmed});
  EXPECT_EQ(t.skip_offset(), 0);
  EXPECT_EQ(falses(t), 0U);
}

TEST(UgaSetProblem, CompilesTheTileSet) {
  MAcc m;
  auto s = m.after_set_problem();
  EXPECT_EQ(s.prob()->count, 14U);
}

TEST(UgaSetProblem, RejectsUnnormalizedMachine) {
  UgaState s;
  auto raw = std::make_shared<const tm::TuringMachine>(load_machine("eraser"));
  s.set_extra(uga_init(Algorithm{14, Mode::kDeterministic, Variant::kFullHistory}));
  EXPECT_THROW(uga_set_problem(Input{raw, {"a"}, {}}, s), UnnormalizedMachine);
}

TEST(UgaGenerate, TwoTilesAndOneBlacklisted) {
  MAcc m;
  auto s = m.after_set_problem();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    auto [sols, x] = uga_generate(s, rng, Mode::kStochastic);
    ASSERT_EQ(sols.size(), 2U);
    EXPECT_EQ(sols[0], 0U);
    EXPECT_NE(sols[1], 0U);
    EXPECT_EQ(falses(x), 1U);
    EXPECT_FALSE(x.eligible[sols[1]]);
  }
}

// A seed that draws the correct second tile straight away: found by
// scanning seeds 0..99 with this generator.
TEST(UgaGenerate, SeedForcingTheTransitionTile) {
  MAcc m;
  auto s = m.after_set_problem();
  std::optional<std::uint64_t> found;
  for (std::uint64_t seed = 0; seed < 100 && !found; ++seed) {
    Rng rng(seed);
    if (uga_generate(s, rng, Mode::kStochastic).first[1] == kQ01) found = seed;
  }
  ASSERT_TRUE(found);
  Rng rng(*found);
  auto [sols, x] = uga_generate(s, rng, Mode::kStochastic);
  s.set_sols(sols).set_extra(x);
  EXPECT_EQ(uga_aeval(s, Variant::kFullHistory).first, 2);
}

TEST(UgaSelectCross, Identity) {
  MAcc m;
  auto s = m.after_set_problem();
  s.set_sols({0, 3});
  EXPECT_EQ(uga_select(s).first, s.sols());
  EXPECT_EQ(uga_cross(s).first, s.sols());
  EXPECT_EQ(falses(uga_cross(s).second), falses(s.extra()));
}

TEST(UgaAeval, FirstEvaluation) {
  MAcc m;
  auto s = m.after_set_problem();
  auto wrong = s;
  Extra x = s.extra();
  x.eligible[2] = false;
  wrong.set_sols({0, 2}).set_extra(x);
  auto [f1, x1] = uga_aeval(wrong, Variant::kFullHistory);
  EXPECT_EQ(f1, 1);
  EXPECT_EQ(x1.eligible, x.eligible);

  auto right = s;
  x = s.extra();
  x.eligible[kQ01] = false;
  right.set_sols({0, kQ01}).set_extra(x);
  auto [f2, x2] = uga_aeval(right, Variant::kFullHistory);
  EXPECT_EQ(f2, 2);
  EXPECT_EQ(falses(x2), 0U);
}

// Drives aeval/beval along a fixed tile sequence as the run would.
UgaState evaluate_prefix(UgaState s, const mpcp::TileSeq& seq) {
  s.set_sols({seq[0], seq[1]});
  for (std::size_t k = 2;; ++k) {
    auto [f, x] = uga_aeval(s, Variant::kFullHistory);
    s.set_fpw(f).set_extra(x);
    auto [b, y] = uga_beval(s, Variant::kFullHistory);
    s.set_best(b).set_extra(y);
    if (k == seq.size()) return s;
    auto sols = s.best();
    sols.push_back(seq[k]);
    s.set_sols(sols);
  }
}

TEST(UgaAeval, FullSolutionScoresSix) {
  MAcc m;
  auto s = evaluate_prefix(m.after_set_problem(), kMAccSolution);
  EXPECT_EQ(s.fpw(), 6);
  EXPECT_EQ(s.best(), kMAccSolution);
  EXPECT_TRUE(s.prob()->is_closing(s.best().back()));
  EXPECT_TRUE(uga_stop(s, Variant::kFullHistory));
}

TEST(UgaBeval, KeepsTheFirstFpwTiles) {
  MAcc m;
  auto s = m.after_set_problem();
  s.set_sols({0, kQ01}).set_fpw(2);
  EXPECT_EQ(uga_beval(s, Variant::kFullHistory).first, (mpcp::TileSeq{0, kQ01}));
  s.set_sols({0, 3}).set_fpw(1);
  EXPECT_EQ(uga_beval(s, Variant::kFullHistory).first, (mpcp::TileSeq{0}));
}

TEST(UgaStop, NeedsClosingLastTile) {
  MAcc m;
  auto s = evaluate_prefix(m.after_set_problem(), {0, 5, 4, 6, 4});
  EXPECT_EQ(s.fpw(), 5);
  EXPECT_FALSE(uga_stop(s, Variant::kFullHistory));  // last tile is (#, #)
}

TEST(UgaMutate, WrongLastTileIsReplaced) {
  MAcc m;
  auto s = m.after_set_problem();
  Rng rng(3);
  Extra x = s.extra();
  x.eligible[2] = false;
  s.set_sols({0, 2}).set_extra(x).set_fpw(1).set_best({0});
  std::size_t eligible_before = 14 - 1 - falses(x);  // tile 0 is never drawn
  EXPECT_EQ(eligible_before, 12U);
  auto [sols, y] = uga_mutate(s, rng, Mode::kStochastic);
  ASSERT_EQ(sols.size(), 2U);
  EXPECT_NE(sols[1], 2U);
  EXPECT_NE(sols[1], 0U);
  EXPECT_EQ(falses(y), 2U);
}

TEST(UgaMutate, CorrectIndividualGrows) {
  MAcc m;
  auto s = m.after_set_problem();
  Rng rng(3);
  s.set_sols({0, kQ01}).set_fpw(2).set_best({0, kQ01});
  auto [sols, y] = uga_mutate(s, rng, Mode::kStochastic);
  EXPECT_EQ(sols.size(), 3U);
  EXPECT_EQ(falses(y), 1U);
}

TEST(UgaMutate, PigeonholeLeavesTheUniqueExtension) {
  MAcc m;
  auto s = m.after_set_problem();
  Rng rng(17);
  s.set_sols({0, 2}).set_fpw(1).set_best({0});
  Extra x = s.extra();
  x.eligible[2] = false;
  s.set_extra(x);
  // N - 2 wrong draws at most, then only the right tile is left.
  for (int k = 0; k < 12; ++k) {
    auto [sols, y] = uga_mutate(s, rng, Mode::kStochastic);
    s.set_sols(sols).set_extra(y);
    if (sols[1] == kQ01) return;
  }
  FAIL() << "the transition tile was never drawn";
}

TEST(UgaMutate, ExhaustedBlacklistThrows) {
  MAcc m;
  auto s = m.after_set_problem();
  Rng rng(1);
  Extra x = s.extra();
  std::fill(x.eligible.begin(), x.eligible.end(), false);
  s.set_sols({0, 2}).set_fpw(1).set_best({0}).set_extra(x);
  EXPECT_THROW(uga_mutate(s, rng, Mode::kStochastic), ExhaustedBlacklist);
}

TEST(RunUniversal, MAccDeterministic) {
  auto m = load_machine("m_acc");
  auto r = run_universal(tm::normalize(m), {"1"}, Mode::kDeterministic, Variant::kFullHistory, 1000);
  ASSERT_EQ(r.outcome, Outcome::kAccepted);
  ASSERT_TRUE(r.history);
  EXPECT_EQ(tm::render_history(*r.history), tm::render_history(tm::simulate(m, {"1"}, 100)));
  EXPECT_EQ(r.best, kMAccSolution);
  EXPECT_LE(r.stats.attempts_max, 12U);
  EXPECT_EQ(r.stats.line().rfind("generations=", 0), 0U);
}

TEST(RunUniversal, MAccGolden) {
  auto r = run_universal(tm::normalize(load_machine("m_acc")), {"1"}, Mode::kDeterministic,
                         Variant::kFullHistory, 1000);
  const auto path = testing::data_path("golden/m_acc_ga_det.trace");
  if (std::getenv("SLSVM_UPDATE_GOLDEN")) {
    std::ofstream(path) << render_trace(r.trace);
    GTEST_SKIP() << "rewrote " << path;
  }
  EXPECT_EQ(render_trace(r.trace), testing::read_file(path));
}

TEST(RunUniversal, RuleBudgetMatchesGenerations) {
  auto n = tm::normalize(load_machine("loop"));
  auto r = run_universal(n, {}, Mode::kDeterministic, Variant::kFullHistory, 50);
  EXPECT_EQ(r.outcome, Outcome::kBudgetExhausted);
  EXPECT_EQ(r.stats.generations, 50U);
  EXPECT_EQ(r.trace.size(), rule_budget(50));
}

TEST(RunUniversal, LoopFitnessNeverDecreasesAndKeepsClimbing) {
  auto n = tm::normalize(load_machine("loop"));
  const std::size_t g = 2000;
  auto r = run_universal(n, {}, Mode::kDeterministic, Variant::kFullHistory, g);
  EXPECT_EQ(r.outcome, Outcome::kBudgetExhausted);
  for (std::size_t i = 1; i < r.stats.fitness.size(); ++i) EXPECT_GE(r.stats.fitness[i], r.stats.fitness[i - 1]);
  const auto n_tiles = static_cast<std::int64_t>(r.tiles->count);
  EXPECT_GE(r.stats.fitness.back(), static_cast<std::int64_t>(g) / (n_tiles - 2));
  EXPECT_GT(r.stats.fitness.back(), r.stats.fitness.front());
}

TEST(RunUniversal, NoFinalStateNeverStops) {
  auto n = tm::normalize(load_machine("no_final"));
  auto r = run_universal(n, {"1", "1"}, Mode::kStochastic, Variant::kFullHistory, 300, RunOptions{4, {}, {}});
  EXPECT_NE(r.outcome, Outcome::kAccepted);
}

TEST(RunUniversal, StuckMachineRunsOutOfTiles) {
  auto r = run_universal(tm::normalize(load_machine("stuck")), {"0"}, Mode::kDeterministic,
                         Variant::kFullHistory, 1000);
  EXPECT_EQ(r.outcome, Outcome::kStuck);
}

// Every evaluate leaves a viable verified prefix whose closed segments
// decode to a prefix of the oracle history.
TEST(RunUniversal, PrefixCorrectnessAfterEveryEvaluate) {
  for (const auto& e : testing::accepting_corpus()) {
    auto n = tm::normalize(e.machine);
    auto oracle = tm::simulate(n, e.word, 1000);
    std::size_t evaluates = 0;
    RunOptions opt;
    opt.seed = 11;
    opt.observer = [&](const std::vector<RuleApplication>& apps, const UgaState& s) {
      if (apps.back().rule != "evaluate") return;
      ++evaluates;
      const auto& set = *s.prob();
      ASSERT_EQ(static_cast<std::int64_t>(s.best().size()), s.fpw());
      ASSERT_TRUE(mpcp::is_viable(set, s.best()));
      auto b = mpcp::view(set, s.best()).b;
      std::size_t k = 0;
      mpcp::Word seg;
      bool open = false;
      for (char32_t c : b) {
        if (c != set.separator) {
          seg.push_back(c);
          continue;
        }
        if (open) {
          ASSERT_LT(k, oracle.configurations.size());
          auto c = mpcp::decode_configuration(set, seg);
          EXPECT_EQ(c, oracle.configurations[k]) << e.name;
          ++k;
          if (n.is_final(c.state)) break;  // the rest is consumption
        }
        open = true;
        seg.clear();
      }
    };
    auto r = run_universal(n, e.word, Mode::kStochastic, Variant::kFullHistory, 20000, opt);
    EXPECT_EQ(r.outcome, Outcome::kAccepted) << e.name;
    EXPECT_GT(evaluates, 0U);
  }
}

TEST(RunUniversal, StochasticVerdictsAndAttemptBound) {
  for (const auto& e : testing::accepting_corpus()) {
    auto n = tm::normalize(e.machine);
    auto oracle = tm::simulate(n, e.word, 1000);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto r = run_universal(n, e.word, Mode::kStochastic, Variant::kFullHistory, 20000, RunOptions{seed, {}, {}});
      ASSERT_EQ(r.outcome, Outcome::kAccepted) << e.name << " seed " << seed;
      EXPECT_EQ(*r.history, oracle) << e.name;
      EXPECT_LE(r.stats.attempts_max, r.tiles->count - 2) << e.name;
      EXPECT_TRUE(mpcp::is_complete(*r.tiles, r.best));
    }
  }
}

TEST(RunUniversal, TrimmedAgreesWithFullHistory) {
  for (const auto& e : testing::accepting_corpus()) {
    auto n = tm::normalize(e.machine);
    auto full = run_universal(n, e.word, Mode::kDeterministic, Variant::kFullHistory, 20000);
    auto trim = run_universal(n, e.word, Mode::kDeterministic, Variant::kTrimmed, 20000);
    ASSERT_EQ(full.outcome, trim.outcome) << e.name;
    ASSERT_TRUE(trim.final_config) << e.name;
    EXPECT_EQ(*trim.final_config, full.history->configurations.back()) << e.name;
    EXPECT_FALSE(trim.history);
    EXPECT_LE(trim.stats.peak_len, full.stats.peak_len);
  }
}

TEST(RunUniversal, ExpansionOrderInTrace) {
  auto r = run_universal(tm::normalize(load_machine("succ")), {"1"}, Mode::kStochastic, Variant::kFullHistory,
                         500, RunOptions{2, {}, {}});
  std::size_t n = 0;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (r.trace[i].rule != "next-generation") continue;
    ASSERT_LT(i + 3, r.trace.size());
    EXPECT_EQ(r.trace[i + 1].rule, "selection");
    EXPECT_EQ(r.trace[i + 2].rule, "crossover");
    EXPECT_EQ(r.trace[i + 3].rule, "mutation");
    ++n;
  }
  EXPECT_EQ(n, r.stats.generations);
}

TEST(RunUniversal, DeterministicForEqualSeeds) {
  auto n = tm::normalize(load_machine("parity"));
  auto a = run_universal(n, {"0", "1", "1"}, Mode::kStochastic, Variant::kFullHistory, 5000, RunOptions{9, {}, {}});
  auto b = run_universal(n, {"0", "1", "1"}, Mode::kStochastic, Variant::kFullHistory, 5000, RunOptions{9, {}, {}});
  EXPECT_EQ(render_trace(a.trace), render_trace(b.trace));
  EXPECT_EQ(a.best, b.best);
}

}  // namespace
}  // namespace slsvm::uga
