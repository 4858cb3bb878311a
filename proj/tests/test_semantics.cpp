#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "gen.hpp"
#include "tslsynth/semantics.hpp"

using namespace tslsynth;

namespace {

FunctionTerm sig(const std::string& s) { return FunctionTerm::signal(s); }
FunctionTerm app(const std::string& f, std::vector<FunctionTerm> args = {}) {
  return FunctionTerm::apply(f, std::move(args));
}
FunctionTerm init(const std::string& s) { return app(kInitMarker, {sig(s)}); }

SymbolTable table(std::set<std::string> inputs, std::set<std::string> outputs) {
  SymbolTable t;
  t.inputs = std::move(inputs);
  t.outputs = std::move(outputs);
  return t;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

LassoComputation button_trace(const std::vector<int>& clicks, bool faithful) {
  LassoComputation comp;
  for (std::size_t t = 0; t < clicks.size(); ++t) {
    const bool bump = faithful ? clicks[t] != 0 : t == 0;
    comp.prefix.push_back({{"count", bump ? app("increment", {sig("count")}) : sig("count")},
                           {"display", app("render", {sig("count")})}});
  }
  comp.loop.push_back({{"count", sig("count")}, {"display", app("render", {sig("count")})}});
  return comp;
}

Interpretation clicking(const std::vector<int>& clicks) {
  Interpretation in = builtin_interpretation(3);
  in.inputs["click"] = [clicks](std::size_t t) -> Value {
    return std::int64_t(t < clicks.size() ? clicks[t] : 0);
  };
  return in;
}

}  // namespace

TEST(Eta, OneUnfolding) {
  LassoComputation comp{{}, {{{"s", app("f", {sig("s")})}}}};
  auto syms = table({}, {"s"});
  EXPECT_EQ(eval_term(comp, syms, 1, sig("s")), app("f", {init("s")}));
  EXPECT_EQ(eval_term(comp, syms, 0, sig("s")), init("s"));
  EXPECT_EQ(eval_term(comp, syms, 2, sig("s")), app("f", {app("f", {init("s")})}));
}

TEST(Eta, InputIsItself) {
  LassoComputation comp{{}, {{{"s", sig("s")}}}};
  auto syms = table({"i"}, {"s"});
  for (std::size_t t : {0u, 1u, 7u}) EXPECT_EQ(eval_term(comp, syms, t, sig("i")), sig("i"));
}

TEST(Eta, IdentityChain) {
  LassoComputation comp{{{{"s", sig("s")}}}, {{{"s", sig("s")}}}};
  EXPECT_EQ(eval_term(comp, table({}, {"s"}), 2, sig("s")), init("s"));
}

TEST(Eta, EarlierInputsCarryTimeStamps) {
  LassoComputation comp{{}, {{{"s", app("f", {sig("i")})}}}};
  auto syms = table({"i"}, {"s"});
  EXPECT_EQ(eval_term(comp, syms, 3, sig("s")), app("f", {sig("i@2")}));
  Interpretation in = builtin_interpretation();
  in.inputs["i"] = [](std::size_t t) -> Value { return std::int64_t(t * 10); };
  in.functions["f"] = [](const std::vector<Value>& a) -> Value { return a[0]; };
  EXPECT_EQ(concretize(eval_term(comp, syms, 3, sig("s")), in, 3), Value(std::int64_t(20)));
}

TEST(Eta, PredicateArguments) {
  LassoComputation comp{{}, {{{"x", app("g", {sig("x"), sig("i")})}}}};
  auto p = eval_term(comp, table({"i"}, {"x"}), 1, PredicateTerm{"p", {sig("x")}});
  EXPECT_EQ(p, (PredicateTerm{"p", {app("g", {init("x"), sig("i@0")})}}));
}

TEST(Eta, TerminatesOnLongHorizons) {
  std::mt19937_64 rng(11);
  auto syms = table({"i"}, {"x", "y"});
  for (int k = 0; k < 20; ++k) {
    LassoComputation comp;
    auto linear = [&](const std::string& s) {
      const std::vector<FunctionTerm> choices{sig(s), app("f", {sig(s)}), app("g", {sig(s), sig("i")}),
                                              app("k"), sig("i")};
      return choices[rng() % choices.size()];
    };
    auto step = [&] { return ComputationStep{{"x", linear("x")}, {"y", linear("y")}}; };
    for (std::size_t j = rng() % 3; j > 0; --j) comp.prefix.push_back(step());
    for (std::size_t j = 1 + rng() % 3; j > 0; --j) comp.loop.push_back(step());
    EXPECT_NO_THROW(eval_term(comp, syms, 1000, sig("x")));
  }
}

TEST(Holds, SyntacticUpdates) {
  auto syms = table({}, {"x"});
  Interpretation in = builtin_interpretation();
  LassoComputation same{{}, {{{"x", sig("x")}}}};
  EXPECT_TRUE(tsl_holds(same, syms, in, desugar(parse_formula("G [x <- x]"))));
  LassoComputation other{{}, {{{"x", app("g", {sig("x")})}}}};
  EXPECT_FALSE(tsl_holds(other, syms, in, parse_formula("[x <- f(x)]")));
}

TEST(Holds, UpdateAtomsNeverCallTheInterpretation) {
  std::mt19937_64 rng(5);
  auto syms = table({"i"}, {"x", "y"});
  for (int k = 0; k < 200; ++k) {
    Formula f = testgen::random_formula(rng, 3);
    if (!predicate_terms(f).empty()) continue;
    LassoComputation comp;
    for (std::size_t j = 0; j < 1 + rng() % 3; ++j) {
      comp.loop.push_back({{"x", testgen::random_term(rng, 1, {"x", "i"})},
                           {"y", testgen::random_term(rng, 1, {"y", "i"})}});
    }
    std::size_t calls = 0;
    Interpretation in = builtin_interpretation();
    in.call_counter = &calls;
    tsl_holds(comp, syms, in, desugar(f));
    EXPECT_EQ(calls, 0u) << pretty(f);
  }
}

TEST(Holds, ButtonTraceSatisfiesIntroSpec) {
  auto ps = parse_spec(slurp(std::string(TSLSYNTH_CORPUS) + "/button.tsl"));
  const std::vector<int> clicks{0, 1, 1, 0, 1, 0, 0, 1, 0, 0};
  Formula f = desugar(ps.formula);
  EXPECT_TRUE(tsl_holds(button_trace(clicks, true), ps.symbols, clicking(clicks), f));
  EXPECT_FALSE(tsl_holds(button_trace(clicks, false), ps.symbols, clicking(clicks), f));
}

TEST(Holds, StrictModeReportsUndecided) {
  auto syms = table({}, {"x"});
  syms.predicates["eq0"] = 1;
  syms.functions["increment"] = 1;
  LassoComputation comp{{}, {{{"x", app("increment", {sig("x")})}}}};
  Interpretation in = builtin_interpretation();
  in.inits["x"] = std::int64_t(1);
  Formula f = desugar(parse_formula("F eq0(x)"));
  EXPECT_FALSE(tsl_holds(comp, syms, in, f));
  HoldsOptions strict;
  strict.strict = true;
  EXPECT_THROW(tsl_holds(comp, syms, in, f, strict), UndecidedWithinHorizon);
  EXPECT_TRUE(tsl_holds(comp, syms, in, desugar(parse_formula("G !eq0(x)"))));
}

TEST(Holds, PredicateHistory) {
  auto syms = table({}, {"x"});
  LassoComputation comp{{}, {{{"x", app("decrement", {sig("x")})}}}};
  Interpretation in = builtin_interpretation();
  in.inits["x"] = std::int64_t(3);
  HoldsOptions wide;
  wide.horizon = 8;
  EXPECT_TRUE(tsl_holds(comp, syms, in, desugar(parse_formula("X X X eq0(x)")), wide));
  EXPECT_FALSE(tsl_holds(comp, syms, in, desugar(parse_formula("X X eq0(x)")), wide));
  EXPECT_FALSE(tsl_holds(comp, syms, in, desugar(parse_formula("X X X eq0(x)"))));
}

TEST(Holds, Errors) {
  auto syms = table({}, {"x"});
  LassoComputation comp{{}, {{{"x", sig("x")}}}};
  Interpretation bare;
  EXPECT_THROW(tsl_holds(comp, syms, bare, parse_formula("p(x)")), MissingInterpretation);
  Interpretation in = builtin_interpretation();
  in.predicates["p"] = [](const std::vector<Value>&) -> Value { return std::int64_t(1); };
  EXPECT_THROW(tsl_holds(comp, syms, in, parse_formula("p(x)")), NonBoolean);
}

TEST(LassoHolds, Examples) {
  Ltl a = Ltl::prop("a");
  LassoWord always{{}, {{"a"}}};
  EXPECT_TRUE(ltl_lasso_holds(always, Ltl::globally(a)));
  LassoWord late{{{}}, {{"a"}}};
  EXPECT_FALSE(ltl_lasso_holds(late, a));
  EXPECT_TRUE(ltl_lasso_holds(late, Ltl::next(a)));
  LassoWord blink{{}, {{"a"}, {}}};
  EXPECT_TRUE(ltl_lasso_holds(blink, Ltl::globally(Ltl::finally(a))));
  EXPECT_FALSE(ltl_lasso_holds(blink, Ltl::finally(Ltl::globally(a))));
}

TEST(LassoHolds, AgreesWithUnrollingOracle) {
  std::mt19937_64 rng(21);
  const std::vector<std::string> props{"a", "b"};
  for (int k = 0; k < 1000; ++k) {
    Ltl f = testgen::random_ltl(rng, 4, props);
    LassoWord w = testgen::random_word(rng, props);
    EXPECT_EQ(ltl_lasso_holds(w, f), testgen::LassoOracle(w).holds(f)) << to_string(f);
  }
}

TEST(Builtin, Examples) {
  Interpretation in = builtin_interpretation();
  EXPECT_EQ(in.apply_function("increment", {std::int64_t(4)}), Value(std::int64_t(5)));
  EXPECT_TRUE(in.apply_predicate("eq0", {std::int64_t(0)}));
  EXPECT_FALSE(in.apply_predicate("eq0", {std::int64_t(2)}));
  Value up = in.apply_function("MOVEUP", {});
  EXPECT_TRUE(std::holds_alternative<Token>(up));
  EXPECT_EQ(up, in.apply_function("MOVEUP", {}));
  EXPECT_NE(up, in.apply_function("MOVEDOWN", {}));
  EXPECT_EQ(in.init("count"), Value(std::int64_t(0)));
}

TEST(Builtin, RepeatedEvaluationIsPure) {
  std::mt19937_64 rng(2);
  const std::vector<std::string> fns{"increment", "decrement", "add", "render", "f", "MOVEUP"};
  const std::vector<std::string> preds{"eq0", "eq", "lt", "gt", "event", "p"};
  for (int k = 0; k < 500; ++k) {
    Interpretation in = builtin_interpretation(rng());
    std::vector<Value> args;
    for (std::size_t j = rng() % 3; j > 0; --j) {
      if (rng() % 2) args.push_back(std::int64_t(rng() % 7));
      else args.push_back(in.apply_function("k", {std::int64_t(rng() % 3)}));
    }
    const auto& f = fns[rng() % fns.size()];
    const auto& p = preds[rng() % preds.size()];
    EXPECT_EQ(in.apply_function(f, args), in.apply_function(f, args));
    EXPECT_EQ(in.apply_predicate(p, args), in.apply_predicate(p, args));
  }
}
