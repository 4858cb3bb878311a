#include <gtest/gtest.h>

#include <random>

#include "gen.hpp"
#include "tslsynth/automata.hpp"

using namespace tslsynth;

namespace {

const std::vector<std::string> kProps{"a", "b", "c"};

bool is_nnf(const Ltl& f) {
  switch (f.op()) {
    case LtlOp::Not:
      return f.child().op() == LtlOp::Prop;
    case LtlOp::Prop:
    case LtlOp::True:
    case LtlOp::False:
      return true;
    default:
      for (std::size_t i = 0; i < f.arity(); ++i) {
        if (!is_nnf(f.child(i))) return false;
      }
      return true;
  }
}

std::vector<Letter> random_letters(std::mt19937_64& rng, std::size_t n, std::size_t vars) {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng() % (Letter{1} << vars));
  return out;
}

}  // namespace

TEST(Nba, CanonicalSizes) {
  Ltl a = Ltl::prop("a");
  Nba g = ltl_to_nba(Ltl::globally(a), {"a"});
  EXPECT_EQ(g.size(), 1u);
  EXPECT_TRUE(nba_accepts(g, LassoWord{{}, {{"a"}}}));
  EXPECT_FALSE(nba_accepts(g, LassoWord{{{"a"}, {"a"}}, {{}}}));
  Nba f = ltl_to_nba(Ltl::finally(a), {"a"});
  EXPECT_EQ(f.size(), 2u);
  EXPECT_TRUE(nba_accepts(f, LassoWord{{{}, {}}, {{}, {"a"}}}));
  EXPECT_FALSE(nba_accepts(f, LassoWord{{}, {{}}}));
}

TEST(Nba, MembershipMatchesLassoSemantics) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 150; ++k) {
    Ltl f = testgen::random_ltl(rng, 4, kProps);
    Nba nba = ltl_to_nba(f, kProps);
    for (int j = 0; j < 50; ++j) {
      LassoWord w = testgen::random_word(rng, kProps);
      ASSERT_EQ(nba_accepts(nba, w), testgen::LassoOracle(w).holds(f)) << to_string(f);
    }
  }
}

TEST(Nba, PropGuard) {
  std::vector<std::string> many;
  for (int i = 0; i < 21; ++i) many.push_back("p" + std::to_string(i));
  EXPECT_THROW(ltl_to_nba(Ltl::conj({Ltl::prop("p0")}), many), Error);
  NbaOptions tiny;
  tiny.max_states = 1;
  EXPECT_THROW(ltl_to_nba(Ltl::until(Ltl::prop("a"), Ltl::prop("b")), kProps, tiny),
               BudgetExceeded);
}

TEST(Nnf, PreservesMeaning) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 500; ++k) {
    Ltl f = testgen::random_ltl(rng, 4, kProps);
    Ltl n = nnf(f);
    EXPECT_TRUE(is_nnf(n)) << to_string(n);
    for (int j = 0; j < 10; ++j) {
      LassoWord w = testgen::random_word(rng, kProps);
      EXPECT_EQ(ltl_lasso_holds(w, n), ltl_lasso_holds(w, f)) << to_string(f);
    }
  }
}

TEST(CubeCover, DisjointAndExact) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 300; ++k) {
    const std::size_t vars = 1 + rng() % 5;
    std::set<Letter> set;
    for (Letter l : random_letters(rng, rng() % (std::size_t{1} << vars), vars)) set.insert(l);
    auto cubes = cube_cover({set.begin(), set.end()}, vars);
    for (Letter l = 0; l < (Letter{1} << vars); ++l) {
      std::size_t hits = 0;
      for (const auto& c : cubes) hits += c.matches(l);
      EXPECT_EQ(hits, set.count(l) ? 1u : 0u);
    }
  }
  EXPECT_EQ(cube_cover({0, 1, 2, 3}, 2).size(), 1u);
  EXPECT_TRUE(cube_cover({}, 3).empty());
}

TEST(Counting, ZeroBoundSinksOnFirstViolation) {
  Ltl a = Ltl::prop("a");
  Nba neg = ltl_to_nba(Ltl::lnot(Ltl::globally(a)), {"a"});
  CountingAutomaton aut(neg, 0, 1000);
  int q = aut.initial();
  for (int i = 0; i < 5; ++i) {
    q = aut.step(q, 1);
    ASSERT_NE(q, CountingAutomaton::kSink);
  }
  EXPECT_EQ(aut.step(q, 0), CountingAutomaton::kSink);
}

TEST(Counting, NoAcceptingVisitsNeverSinks) {
  Nba nba = ltl_to_nba(Ltl::finally(Ltl::prop("a")), {"a"});
  CountingAutomaton aut(nba, 0, 1000);
  int q = aut.initial();
  for (int i = 0; i < 50; ++i) {
    q = aut.step(q, 0);
    ASSERT_NE(q, CountingAutomaton::kSink);
  }
}

TEST(Counting, SafeLanguageGrowsWithBound) {
  std::mt19937_64 rng(34);
  for (int k = 0; k < 60; ++k) {
    Ltl f = testgen::random_ltl(rng, 3, kProps);
    Nba nba = ltl_to_nba(f, kProps);
    std::vector<CountingAutomaton> auts;
    for (int b = 0; b < 4; ++b) auts.emplace_back(nba, b, 100000);
    for (int j = 0; j < 30; ++j) {
      auto word = random_letters(rng, 12, kProps.size());
      std::vector<bool> safe;
      for (auto& aut : auts) {
        int q = aut.initial();
        for (Letter l : word) {
          if (q != CountingAutomaton::kSink) q = aut.step(q, l);
        }
        safe.push_back(q != CountingAutomaton::kSink);
      }
      for (std::size_t b = 0; b + 1 < safe.size(); ++b) {
        EXPECT_TRUE(!safe[b] || safe[b + 1]) << to_string(f);
      }
    }
  }
}
