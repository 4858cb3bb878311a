#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "gen.hpp"
#include "tslsynth/encoding.hpp"
#include "tslsynth/syntax.hpp"

using namespace tslsynth;

namespace {

FunctionTerm sig(const std::string& s) { return FunctionTerm::signal(s); }
FunctionTerm app(const std::string& f, std::vector<FunctionTerm> args = {}) {
  return FunctionTerm::apply(f, std::move(args));
}
Formula pred(const std::string& p, std::vector<FunctionTerm> args = {}) {
  return Formula::pred(PredicateTerm{p, std::move(args)});
}
Formula upd(const std::string& s, FunctionTerm t) { return Formula::upd(UpdateTerm{s, t}); }

bool core_only(const Formula& f) {
  switch (f.op()) {
    case Op::Pred:
    case Op::Upd:
    case Op::True:
      return true;
    case Op::Not:
    case Op::Next:
      return core_only(f.child());
    case Op::And:
    case Op::Until:
      return core_only(f.lhs()) && core_only(f.rhs());
    default:
      return false;
  }
}

// Textbook semantics of every TSL operator with atoms read as propositions.
bool direct(const Formula& f, const LassoWord& w, std::size_t i) {
  const std::size_t p = w.prefix.size(), l = w.loop.size();
  auto norm = [&](std::size_t j) { return j < p ? j : p + (j - p) % l; };
  auto until = [&](const Formula& a, const Formula& b) {
    for (std::size_t j = i; j <= i + p + l; ++j) {
      if (direct(b, w, norm(j))) return true;
      if (!direct(a, w, norm(j))) return false;
    }
    return false;
  };
  auto always = [&](const Formula& a) {
    for (std::size_t j = i; j <= i + p + l; ++j) {
      if (!direct(a, w, norm(j))) return false;
    }
    return true;
  };
  switch (f.op()) {
    case Op::Pred:
      return w.at(i).count(term_prop_id(f.predicate())) > 0;
    case Op::Upd:
      return w.at(i).count(term_prop_id(f.update())) > 0;
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Not:
      return !direct(f.child(), w, i);
    case Op::And:
      return direct(f.lhs(), w, i) && direct(f.rhs(), w, i);
    case Op::Or:
      return direct(f.lhs(), w, i) || direct(f.rhs(), w, i);
    case Op::Implies:
      return !direct(f.lhs(), w, i) || direct(f.rhs(), w, i);
    case Op::Iff:
      return direct(f.lhs(), w, i) == direct(f.rhs(), w, i);
    case Op::Next:
      return direct(f.child(), w, norm(i + 1));
    case Op::Until:
      return until(f.lhs(), f.rhs());
    case Op::Release:
      // b holds up to and including the first a, or forever
      for (std::size_t j = i; j <= i + p + l; ++j) {
        if (!direct(f.rhs(), w, norm(j))) return false;
        if (direct(f.lhs(), w, norm(j))) return true;
      }
      return true;
    case Op::Finally:
      return until(Formula::tt(), f.child());
    case Op::Globally:
      return always(f.child());
    case Op::WeakUntil:
      return until(f.lhs(), f.rhs()) || always(f.lhs());
    case Op::AsSoonAs:
      // a must hold the first time b holds
      for (std::size_t j = i; j <= i + p + l; ++j) {
        if (direct(f.rhs(), w, norm(j))) return direct(f.lhs(), w, norm(j));
      }
      return true;
  }
  return false;
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::vector<std::string> out;
  for (const auto& p : predicate_terms(f)) out.push_back(term_prop_id(p));
  for (const auto& u : update_terms(f)) out.push_back(term_prop_id(u));
  return out;
}

}  // namespace

TEST(Parse, UpdateUnderGlobally) {
  auto ps = parse_spec("G ([MP <- pause(MP)])");
  EXPECT_EQ(ps.formula, Globally(upd("MP", app("pause", {sig("MP")}))));
  EXPECT_EQ(ps.symbols.outputs, std::set<std::string>{"MP"});
  EXPECT_EQ(ps.symbols.functions.at("pause"), 1u);
  EXPECT_TRUE(ps.symbols.inputs.empty());
}

TEST(Parse, TrueHasEmptySymbols) {
  auto ps = parse_spec("true");
  EXPECT_EQ(ps.formula.op(), Op::True);
  EXPECT_TRUE(ps.symbols.empty());
}

TEST(Parse, ButtonClassification) {
  auto ps = parse_spec("G (event(click) -> [count <- increment(count)])");
  EXPECT_EQ(ps.symbols.inputs, std::set<std::string>{"click"});
  EXPECT_EQ(ps.symbols.outputs, std::set<std::string>{"count"});
  EXPECT_EQ(ps.symbols.predicates.at("event"), 1u);
  EXPECT_EQ(ps.symbols.functions.at("increment"), 1u);
}

TEST(Parse, Precedence) {
  Formula a = pred("a"), b = pred("b"), c = pred("c");
  EXPECT_EQ(parse_formula("a() && b() || c()"), Or(And(a, b), c));
  EXPECT_EQ(parse_formula("a() || b() && c()"), Or(a, And(b, c)));
  EXPECT_EQ(parse_formula("a() -> b() -> c()"), Implies(a, Implies(b, c)));
  EXPECT_EQ(parse_formula("a() <-> b() <-> c()"), Iff(Iff(a, b), c));
  EXPECT_EQ(parse_formula("a() U b() U c()"), Until(a, Until(b, c)));
  EXPECT_EQ(parse_formula("a() U b() && c()"), And(Until(a, b), c));
  EXPECT_EQ(parse_formula("!a() U b()"), Until(Not(a), b));
  EXPECT_EQ(parse_formula("G F a()"), Globally(Finally(a)));
  EXPECT_EQ(parse_formula("X a() -> b() <-> c()"), Iff(Implies(Next(a), b), c));
}

TEST(Parse, TemporalLettersAreNamesInTerms) {
  auto ps = parse_spec("[G <- F(X, U())]");
  EXPECT_EQ(ps.formula, upd("G", app("F", {sig("X"), app("U")})));
  EXPECT_EQ(ps.symbols.inputs, std::set<std::string>{"X"});
  EXPECT_EQ(ps.symbols.functions.at("U"), 0u);
}

TEST(Parse, Sections) {
  auto ps = parse_spec("assume { G !a(i); } guarantee { G [x <- f(x)]; G b(x); }");
  Formula ga = Globally(Not(pred("a", {sig("i")})));
  Formula g1 = Globally(upd("x", app("f", {sig("x")})));
  Formula g2 = Globally(pred("b", {sig("x")}));
  EXPECT_EQ(ps.formula, Implies(ga, And(g1, g2)));
}

TEST(Parse, CommentsAreSkipped) {
  auto ps = parse_spec("// heading\nG [x <- f(x)]; // trailing\n");
  EXPECT_EQ(ps.formula, Globally(upd("x", app("f", {sig("x")}))));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_spec("G [x_y <- f(x)]"), LexError);
  EXPECT_THROW(parse_spec("G ([x <- f(x)]"), ParseError);
  EXPECT_THROW(parse_spec("G x"), ParseError);
  EXPECT_THROW(parse_spec("p(f(x)) && f(x)"), KindConflict);
  EXPECT_THROW(parse_spec("p(f(x)) && [x <- f(x, x)]"), ArityConflict);
  EXPECT_THROW(parse_spec(""), ParseError);
  EXPECT_THROW(parse_spec("[f(x) <- x]"), ParseError);
  try {
    parse_spec("a() &&\n  && b()");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Parse, ReadingAnUpdatedSignalIsNotAConflict) {
  auto ps = parse_spec("[x <- f(x)] && p(x)");
  EXPECT_EQ(ps.symbols.outputs, std::set<std::string>{"x"});
  EXPECT_TRUE(ps.symbols.inputs.empty());
}

TEST(Classify, MusicPlayer) {
  auto ps = parse_spec(
      "G (leaveApp(Sys) && musicPlaying(MP) -> [MP <- pause(MP)]);"
      "G (resumeApp(Sys) -> [MP <- play(Tr, trackPos(MP))])");
  EXPECT_EQ(ps.symbols.inputs, (std::set<std::string>{"Sys", "Tr"}));
  EXPECT_EQ(ps.symbols.outputs, std::set<std::string>{"MP"});
  EXPECT_EQ(ps.symbols.predicates.size(), 3u);
  EXPECT_EQ(ps.symbols.functions,
            (std::map<std::string, std::size_t>{{"pause", 1}, {"play", 2}, {"trackPos", 1}}));
}

TEST(Desugar, Examples) {
  Formula p = pred("p");
  EXPECT_EQ(desugar(Finally(p)), Until(Formula::tt(), p));
  EXPECT_EQ(desugar(Globally(p)), Not(Until(Formula::tt(), Not(p))));
  Formula a = pred("a"), b = pred("b");
  EXPECT_EQ(desugar(AsSoonAs(a, b)), desugar(WeakUntil(Not(b), And(b, a))));
  EXPECT_TRUE(is_core(desugar(Release(a, b))));
}

TEST(SubformulaCount, Basics) {
  Formula p = pred("p", {sig("s")});
  EXPECT_EQ(subformula_count(p), 1u);
  EXPECT_EQ(subformula_count(Not(p)), 2u);
  EXPECT_EQ(subformula_count(And(p, Not(p))), 4u);
}

TEST(Pretty, Atoms) {
  EXPECT_EQ(pretty(upd("x", app("f", {sig("x")}))), "[x <- f(x)]");
  EXPECT_EQ(pretty(pred("p")), "p()");
  EXPECT_EQ(pretty(And(pred("a"), Or(pred("b"), pred("c")))), "a() && (b() || c())");
}

TEST(SyntaxProperty, PrettyRoundTrip) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 2000; ++k) {
    Formula f = testgen::random_formula(rng, 1 + k % 5);
    ASSERT_EQ(parse_formula(pretty(f)), f) << pretty(f);
    Formula d = desugar(f);
    ASSERT_EQ(parse_formula(pretty(d)), d) << pretty(d);
  }
}

TEST(SyntaxProperty, DesugarIsCoreAndIdempotent) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 2000; ++k) {
    Formula f = testgen::random_formula(rng, 1 + k % 5);
    Formula d = desugar(f);
    ASSERT_TRUE(core_only(d)) << pretty(d);
    ASSERT_TRUE(is_core(d));
    ASSERT_EQ(desugar(d), d);
  }
}

TEST(SyntaxProperty, DesugarPreservesMeaning) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 600; ++k) {
    Formula f = testgen::random_formula(rng, 1 + k % 4);
    const auto props = atoms_of(f);
    Ltl core = to_ltl(desugar(f));
    for (int n = 0; n < 10; ++n) {
      LassoWord w = testgen::random_word(rng, props.empty() ? std::vector<std::string>{"z"} : props);
      ASSERT_EQ(ltl_lasso_holds(w, core), direct(f, w, 0)) << pretty(f);
    }
  }
}

TEST(SyntaxProperty, ClassifyIgnoresConjunctOrder) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 300; ++k) {
    std::vector<Formula> parts;
    for (int j = 0; j < 4; ++j) parts.push_back(testgen::random_formula(rng, 2));
    SymbolTable first = classify(conjunction(parts));
    std::shuffle(parts.begin(), parts.end(), rng);
    ASSERT_EQ(classify(conjunction(parts)), first);
    ASSERT_EQ(classify(conjunction(parts)), classify(conjunction(parts)));
  }
}

TEST(SyntaxProperty, SizeGrowsWithConjuncts) {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 300; ++k) {
    Formula f = testgen::random_formula(rng, 3);
    Formula g = testgen::random_formula(rng, 2);
    ASSERT_GE(subformula_count(f), 1u);
    ASSERT_GT(subformula_count(And(f, g)), subformula_count(f));
  }
}
