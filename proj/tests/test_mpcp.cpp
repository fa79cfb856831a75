#include <gtest/gtest.h>

#include "corpus.hpp"
#include "slsvm/mpcp.hpp"
#include "slsvm/universal_ga.hpp"

namespace slsvm::mpcp {
namespace {

using testing::load_machine;

TileSet compile_named(const std::string& name, const std::vector<tm::Symbol>& word) {
  return compile(tm::normalize(load_machine(name)), word);
}

// (#, #q01#), (q01, 1qf), (#, #), (1qf, qf), (#, #), (qf##, #)
const TileSeq kMAccSolution{0, 5, 4, 6, 4, 1};

TEST(Compile, MAccHasFourteenTiles) {
  auto set = compile_named("m_acc", {"1"});
  EXPECT_EQ(set.count, 14U);
  EXPECT_EQ(set.tiles.size(), 14U);
  EXPECT_EQ(set.spell(set[0].top), "#");
  EXPECT_EQ(set.spell(set[0].bottom), "# q0 1 #");
  EXPECT_EQ(set.spell(set[1].top), "qf # #");
  EXPECT_EQ(set.spell(set[1].bottom), "#");
  EXPECT_EQ(set.spell(set[5].top), "q0 1");
  EXPECT_EQ(set.spell(set[5].bottom), "1 qf");
  EXPECT_EQ(set.spell(set[6].top), "1 qf");
  EXPECT_EQ(set.spell(set[6].bottom), "qf");
  EXPECT_EQ(set.closing, (std::vector<TileIndex>{1}));
  EXPECT_TRUE(set.is_closing(1));
  EXPECT_FALSE(set.is_closing(4));
}

TEST(Compile, RenderHeader) {
  auto text = render_tiles(compile_named("m_acc", {"1"}));
  EXPECT_EQ(text.substr(0, text.find('\n')), "tiles: 14");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 15);
}

TEST(Compile, TileCountFormula) {
  for (const auto& e : testing::full_corpus()) {
    auto n = tm::normalize(e.machine);
    EXPECT_EQ(compile(n, e.word).count, expected_tile_count(n)) << e.name;
  }
  for (int k : {2, 4, 8}) {
    auto n = tm::normalize(tm::parse_tm(testing::sweeper_text(k)));
    EXPECT_EQ(compile(n, {"a", "1", "1", "b"}).count, expected_tile_count(n)) << k;
  }
}

TEST(Compile, RequiresNormalizedMachine) {
  EXPECT_THROW(compile(load_machine("eraser"), {"a"}), UnnormalizedMachine);
  EXPECT_THROW(compile(tm::normalize(load_machine("m_acc")), {"0"}), ValidationError);
}

TEST(Compile, EmptyInputStartsOnBlank) {
  auto set = compile_named("accept0", {});
  EXPECT_EQ(set.spell(set[0].bottom), "# q0 _ #");
}

TEST(Compile, NoFinalStatesMeansNoClosingTiles) {
  auto set = compile_named("no_final", {"1"});
  EXPECT_TRUE(set.closing.empty());
  EXPECT_FALSE(brute_force_mpcp(set, 30));
}

TEST(PartialSolution, Examples) {
  auto set = compile_named("m_acc", {"1"});
  EXPECT_TRUE(is_partial_solution(set, TileSeq{0}));
  EXPECT_FALSE(is_partial_solution(set, TileSeq{0, 2}));
  EXPECT_TRUE(is_partial_solution(set, kMAccSolution));
  EXPECT_TRUE(is_complete(set, kMAccSolution));
  EXPECT_FALSE(is_complete(set, TileSeq{0, 5}));
}

TEST(Remainder, AdvanceAgreesWithConcatenation) {
  auto set = compile_named("m_acc", {"1"});
  Word r;
  for (std::size_t k = 0; k < kMAccSolution.size(); ++k) {
    auto next = mpcp::advance(r, set[kMAccSolution[k]]);
    ASSERT_TRUE(next);
    r = *next;
    auto direct = remainder(set, std::span(kMAccSolution).first(k + 1));
    ASSERT_TRUE(direct);
    EXPECT_EQ(r, *direct);
  }
  EXPECT_TRUE(r.empty());
  EXPECT_TRUE(mpcp::advance(r, set[2]));   // (1, 1) on a = b
  EXPECT_FALSE(mpcp::advance(r, set[1]));  // qf # # over #
}

TEST(Viability, CopyIntoStateDeadEnds) {
  // After [0, 5, 4] the remainder is "1 qf #". Copying the 1 keeps the
  // prefix property but leaves "qf # 1", which no tile can start.
  auto set = compile_named("m_acc", {"1"});
  EXPECT_TRUE(is_partial_solution(set, TileSeq{0, 5, 4, 2}));
  EXPECT_FALSE(is_viable(set, TileSeq{0, 5, 4, 2}));
  EXPECT_TRUE(is_viable(set, TileSeq{0, 5, 4, 6}));
  EXPECT_TRUE(is_viable(set, kMAccSolution));
}

TEST(UniqueExtension, MAcc) {
  auto set = compile_named("m_acc", {"1"});
  EXPECT_EQ(unique_extension(set, TileSeq{0}), 5U);
  EXPECT_EQ(unique_extension(set, TileSeq{0, 5}), 4U);
  EXPECT_THROW(unique_extension(set, kMAccSolution), NoExtension);
  EXPECT_THROW(unique_extension(set, TileSeq{0, 2}), PreconditionViolation);
}

TEST(BruteForce, MAcc) {
  auto set = compile_named("m_acc", {"1"});
  EXPECT_EQ(brute_force_mpcp(set, 10), kMAccSolution);
  EXPECT_FALSE(brute_force_mpcp(set, 1));
  EXPECT_FALSE(brute_force_mpcp(set, 5));
}

TEST(BruteForce, ZeroTransitionAcceptor) {
  auto set = compile_named("accept0", {});
  auto sol = brute_force_mpcp(set, 6);
  ASSERT_TRUE(sol);
  EXPECT_TRUE(is_complete(set, *sol));
  EXPECT_TRUE(set.is_closing(sol->back()));
  auto h = uga::decode_history(set, *sol);
  EXPECT_EQ(h.configurations.size(), 1U);
}

// Every prefix of a shortest solution has exactly one viable extension,
// and following it reproduces the solution.
TEST(UniqueExtension, AlongBruteForcedSolutions) {
  for (const auto& e : testing::accepting_corpus()) {
    auto set = compile(tm::normalize(e.machine), e.word);
    auto sol = brute_force_mpcp(set, 40);
    if (!sol) continue;  // too deep for brute force
    for (std::size_t k = 1; k < sol->size(); ++k) {
      auto ext = unique_extension(set, std::span(*sol).first(k));
      ASSERT_TRUE(ext) << e.name << " prefix " << k;
      EXPECT_EQ(*ext, (*sol)[k]) << e.name << " prefix " << k;
    }
  }
}

TEST(Decode, Segments) {
  auto set = compile_named("m_acc", {"1"});
  auto c = decode_configuration(set, set[5].bottom);
  EXPECT_EQ(c.render(), "1 qf _");
  EXPECT_THROW(decode_configuration(set, set[2].bottom), MalformedSegment);
  EXPECT_THROW(decode_configuration(set, Word{*set.id("q0"), *set.id("qf")}), MalformedSegment);
  EXPECT_THROW(decode_configuration(set, Word{set.separator}), MalformedSegment);
}

TEST(Decode, HistoryMatchesOracle) {
  auto m = tm::normalize(load_machine("m_acc"));
  auto set = compile(m, {"1"});
  auto h = uga::decode_history(set, kMAccSolution);
  EXPECT_EQ(tm::render_history(h), tm::render_history(tm::simulate(m, {"1"}, 10)));
  EXPECT_THROW(uga::decode_history(set, TileSeq{0, 5, 4}), PreconditionViolation);
}

}  // namespace
}  // namespace slsvm::mpcp
