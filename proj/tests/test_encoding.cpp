#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gen.hpp"
#include "tslsynth/encoding.hpp"

using namespace tslsynth;
namespace fs = std::filesystem;

namespace {

FunctionTerm sig(const std::string& s) { return FunctionTerm::signal(s); }
FunctionTerm app(const std::string& f, std::vector<FunctionTerm> args = {}) {
  return FunctionTerm::apply(f, std::move(args));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<fs::path> corpus_files() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(TSLSYNTH_CORPUS)) {
    if (e.path().extension() == ".tsl") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FunctionTerm tricky_term(std::mt19937_64& rng, int depth) {
  static const std::vector<std::string> names{"l", "r", "c", "u", "eq", "x", "lr", "ceq"};
  const std::string& name = names[rng() % names.size()];
  if (depth <= 0 || rng() % 3 == 0) return rng() % 2 ? sig(name) : app(name);
  std::vector<FunctionTerm> args;
  for (std::size_t i = 1 + rng() % 3; i > 0; --i) args.push_back(tricky_term(rng, depth - 1));
  return app(name, std::move(args));
}

std::size_t count_op(const Formula& f, Op op) {
  std::size_t n = f.op() == op;
  if (is_unary(f.op())) n += count_op(f.child(), op);
  if (is_binary(f.op())) n += count_op(f.lhs(), op) + count_op(f.rhs(), op);
  return n;
}

std::size_t list_items(const std::string& tlsf, const std::string& section) {
  auto start = tlsf.find(section + " {");
  auto end = tlsf.find('}', start);
  std::size_t n = 0;
  for (auto i = start; i < end; ++i) n += tlsf[i] == ';';
  return n;
}

}  // namespace

TEST(Mangle, Examples) {
  EXPECT_EQ(term_prop_id(PredicateTerm{"p", {sig("x")}}), "p_l_x_r_");
  EXPECT_EQ(term_prop_id(UpdateTerm{"x", sig("x")}), "u_x_eq_x");
  UpdateTerm play{"MP", app("play", {sig("Tr"), app("trackPos", {sig("MP")})})};
  EXPECT_EQ(term_prop_id(play), "u_MP_eq_play_l_Tr_c_trackPos_l_MP_r__r_");
  EXPECT_EQ(unmangle("u_MP_eq_play_l_Tr_c_trackPos_l_MP_r__r_"), TermRef(play));
  EXPECT_EQ(mangle(app("k")), "k_l__r_");
}

TEST(Mangle, InjectiveAndReversible) {
  std::mt19937_64 rng(41);
  std::set<FunctionTerm> terms;
  while (terms.size() < 10000) terms.insert(tricky_term(rng, 3));
  std::set<std::string> ids;
  for (const auto& t : terms) {
    UpdateTerm u{"c", t};
    PredicateTerm p{"eq", {t, sig("r")}};
    ids.insert(term_prop_id(u));
    ASSERT_EQ(unmangle(term_prop_id(u)), TermRef(u)) << pretty(u);
    ASSERT_EQ(unmangle(term_prop_id(p)), TermRef(p)) << pretty(p);
  }
  EXPECT_EQ(ids.size(), terms.size());
}

TEST(Mangle, RejectsMalformedIds) {
  EXPECT_THROW(unmangle("p_l_x"), Error);
  EXPECT_THROW(unmangle("u_x_eq_"), Error);
  EXPECT_THROW(unmangle("f_l_a_r__r_"), Error);
}

TEST(Encode, SingleSignal) {
  auto ps = parse_spec("G [x <- f(x)]");
  auto spec = encode(ps.formula, ps.symbols);
  EXPECT_TRUE(spec.inputs.empty());
  ASSERT_EQ(spec.groups.size(), 1u);
  const auto& g = spec.groups[0];
  EXPECT_EQ(g.signal, "x");
  ASSERT_EQ(g.props.size(), 2u);
  EXPECT_EQ(g.props[g.identity_index].id, "u_x_eq_x");
  Ltl fx = Ltl::prop("u_x_eq_f_l_x_r_"), id = Ltl::prop("u_x_eq_x");
  Ltl expected = Ltl::land(
      Ltl::globally(fx),
      Ltl::globally(Ltl::lor(Ltl::land(fx, Ltl::lnot(id)), Ltl::land(id, Ltl::lnot(fx)))));
  std::mt19937_64 rng(42);
  const std::vector<std::string> props{"u_x_eq_f_l_x_r_", "u_x_eq_x"};
  for (int k = 0; k < 500; ++k) {
    auto w = testgen::random_word(rng, props);
    EXPECT_EQ(ltl_lasso_holds(w, spec.formula()), ltl_lasso_holds(w, expected));
  }
}

TEST(Encode, NoOutputs) {
  auto ps = parse_spec("assume { p(); } guarantee { }");
  EXPECT_THROW(encode(ps.formula, ps.symbols), NoOutputs);
  EncodeOptions loose;
  loose.require_outputs = false;
  EXPECT_NO_THROW(encode(ps.formula, ps.symbols, loose));
}

TEST(Encode, PropCountsOnCorpus) {
  for (const auto& file : corpus_files()) {
    auto ps = parse_spec(slurp(file));
    auto spec = encode(ps.formula, ps.symbols);
    std::set<PredicateTerm> preds;
    for (const auto& p : predicate_terms(ps.formula)) preds.insert(p);
    std::set<std::string> outs;
    for (const auto& u : update_terms(ps.formula)) outs.insert(term_prop_id(u));
    for (const auto& s : ps.symbols.outputs) outs.insert(term_prop_id(UpdateTerm{s, sig(s)}));
    EXPECT_EQ(spec.inputs.size(), preds.size()) << file;
    EXPECT_EQ(spec.output_ids().size(), outs.size()) << file;
    EXPECT_EQ(spec.groups.size(), ps.symbols.outputs.size()) << file;
    for (const auto& g : spec.groups) {
      EXPECT_EQ(g.props[g.identity_index].id, term_prop_id(UpdateTerm{g.signal, sig(g.signal)}));
    }
    const auto inputs = spec.input_ids();
    std::set<std::string> in_ids(inputs.begin(), inputs.end());
    for (const auto& o : spec.output_ids()) EXPECT_FALSE(in_ids.count(o));
  }
}

TEST(Encode, BodyIsAtomSubstitution) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 300; ++k) {
    Formula f = testgen::random_formula(rng, 3);
    if (update_terms(f).empty()) continue;
    SymbolTable syms;
    syms.inputs = {"i"};
    syms.outputs = {"x", "y"};
    auto spec = encode(f, syms);
    std::vector<std::string> props = spec.input_ids();
    for (const auto& o : spec.output_ids()) props.push_back(o);
    for (int j = 0; j < 10; ++j) {
      auto w = testgen::random_word(rng, props);
      EXPECT_EQ(ltl_lasso_holds(w, spec.body), ltl_lasso_holds(w, to_ltl(f))) << pretty(f);
      EXPECT_EQ(ltl_lasso_holds(w, spec.formula()),
                ltl_lasso_holds(w, spec.body) && ltl_lasso_holds(w, spec.constraint));
    }
  }
}

TEST(Encode, ConstraintMeansExactlyOne) {
  auto ps = parse_spec(slurp(fs::path(TSLSYNTH_CORPUS) / "button.tsl"));
  auto spec = encode(ps.formula, ps.symbols);
  std::mt19937_64 rng(44);
  auto props = spec.output_ids();
  std::size_t satisfied = 0;
  for (int k = 0; k < 3000; ++k) {
    auto w = testgen::random_word(rng, props, 2, 2);
    bool every = true;
    for (std::size_t t = 0; t < w.size(); ++t) {
      for (const auto& g : spec.groups) {
        std::size_t on = 0;
        for (const auto& p : g.props) on += w.at(t).count(p.id);
        every = every && on == 1;
      }
    }
    satisfied += every;
    EXPECT_EQ(ltl_lasso_holds(w, spec.constraint), every);
  }
  EXPECT_GT(satisfied, 0u);
}

TEST(Purity, Examples) {
  SymbolTable one;
  one.predicates = {{"p", 1}};
  one.functions = {{"X", 0}};
  auto ps = parse_formula("(p(X()) -> G p(X())) && (!p(X()) -> G !p(X()))");
  EXPECT_EQ(purity_assumptions(one), ps);
  EXPECT_EQ(purity_assumptions(SymbolTable{}).op(), Op::True);
  SymbolTable two;
  two.predicates = {{"p", 1}, {"q", 1}, {"r", 2}};
  two.functions = {{"X", 0}, {"Y", 0}, {"f", 1}};
  EXPECT_EQ(count_op(purity_assumptions(two), Op::Implies), 8u);
  Formula body = parse_formula("[x <- f(x)]");
  EXPECT_EQ(assume_purity(body, SymbolTable{}), body);
  EXPECT_EQ(assume_purity(body, one), Implies(ps, body));
}

TEST(Tlsf, Counts) {
  auto x = parse_spec("G [x <- f(x)]");
  auto tx = export_tlsf(encode(x.formula, x.symbols), "x");
  EXPECT_EQ(list_items(tx, "INPUTS"), 0u);
  EXPECT_EQ(list_items(tx, "OUTPUTS"), 2u);
  auto b = parse_spec(slurp(fs::path(TSLSYNTH_CORPUS) / "button.tsl"));
  auto tb = export_tlsf(encode(b.formula, b.symbols), "button");
  EXPECT_EQ(list_items(tb, "INPUTS"), 1u);
  EXPECT_EQ(list_items(tb, "OUTPUTS"), 4u);
  EXPECT_NE(tb.find("SEMANTICS:   Mealy"), std::string::npos);
  EXPECT_NE(tb.find("TITLE:       \"button\""), std::string::npos);
}

TEST(Tlsf, IdsAreLowerCaseAndDistinct) {
  for (const auto& file : corpus_files()) {
    auto ps = parse_spec(slurp(file));
    auto ids = tlsf_ids(encode(ps.formula, ps.symbols));
    std::set<std::string> seen;
    for (const auto& [from, to] : ids) {
      EXPECT_TRUE(seen.insert(to).second) << to;
      ASSERT_FALSE(to.empty());
      EXPECT_TRUE(std::islower(static_cast<unsigned char>(to[0]))) << to;
      for (char c : to) EXPECT_TRUE(std::islower(c) || std::isdigit(c) || c == '_') << to;
    }
  }
}
