#include "tslsynth/transforms.hpp"

#include <functional>
#include <set>

#include "json.hpp"

namespace tslsynth {

namespace {

using TermMap = std::function<FunctionTerm(const FunctionTerm&)>;

Formula map_terms(const Formula& f, const TermMap& fn,
                  const std::function<Formula(const PredicateTerm&)>& pred) {
  switch (f.op()) {
    case Op::Pred:
      return pred(f.predicate());
    case Op::Upd:
      return Formula::upd(UpdateTerm{f.update().signal, fn(f.update().term)});
    case Op::True:
    case Op::False:
      return f;
    default:
      break;
  }
  if (is_unary(f.op())) return Formula::unary(f.op(), map_terms(f.child(), fn, pred));
  return Formula::binary(f.op(), map_terms(f.lhs(), fn, pred), map_terms(f.rhs(), fn, pred));
}

std::set<std::string> all_names(const Formula& f) {
  SymbolTable st = classify(f);
  std::set<std::string> out(st.inputs.begin(), st.inputs.end());
  out.insert(st.outputs.begin(), st.outputs.end());
  for (const auto& [n, a] : st.functions) out.insert(n);
  for (const auto& [n, a] : st.predicates) out.insert(n);
  return out;
}

std::string fresh(const std::string& stem, std::set<std::string>& taken) {
  for (int k = 1;; ++k) {
    std::string cand = stem + std::to_string(k);
    if (taken.insert(cand).second) return cand;
  }
}

FunctionTerm bottom_up(const FunctionTerm& t, const TermMap& node) {
  if (!t.applied) return t;
  std::vector<FunctionTerm> args;
  for (const auto& a : t.args) args.push_back(bottom_up(a, node));
  return node(FunctionTerm::apply(t.name, std::move(args)));
}

}  // namespace

Formula kappa0(const Formula& formula) {
  const SymbolTable st = classify(formula);
  std::set<std::string> taken = all_names(formula);
  std::set<std::string> moved;
  std::map<std::string, std::string> pred_rename;
  for (const auto& [n, a] : st.functions) {
    if (a == 0) moved.insert(n);
  }
  for (const auto& [n, a] : st.predicates) {
    if (a == 0) {
      moved.insert(n);
      pred_rename[n] = fresh(n, taken);
    }
  }
  TermMap fn = [&](const FunctionTerm& t) {
    return bottom_up(t, [&](const FunctionTerm& node) {
      if (node.args.empty() && moved.count(node.name)) return FunctionTerm::signal(node.name);
      return node;
    });
  };
  auto pred = [&](const PredicateTerm& p) {
    if (p.args.empty() && pred_rename.count(p.name)) {
      return Formula::pred(PredicateTerm{pred_rename.at(p.name), {FunctionTerm::signal(p.name)}});
    }
    PredicateTerm q{p.name, {}};
    for (const auto& a : p.args) q.args.push_back(fn(a));
    return Formula::pred(q);
  };
  std::vector<Formula> keep;
  for (const auto& x : moved) {
    keep.push_back(Globally(Formula::upd(UpdateTerm{x, FunctionTerm::signal(x)})));
  }
  return And(conjunction(keep), map_terms(formula, fn, pred));
}

Formula kappa1(const Formula& formula) {
  TermMap fn = [](const FunctionTerm& t) {
    return bottom_up(t, [](const FunctionTerm& node) {
      if (node.args.size() == 1) return FunctionTerm::apply(node.name, {node.args[0], node.args[0]});
      return node;
    });
  };
  auto pred = [&](const PredicateTerm& p) {
    PredicateTerm q{p.name, {}};
    for (const auto& a : p.args) q.args.push_back(fn(a));
    if (q.args.size() == 1) q.args.push_back(q.args[0]);
    return Formula::pred(q);
  };
  return map_terms(formula, fn, pred);
}

Formula kappa2(const Formula& formula) {
  std::set<std::string> taken = all_names(formula);
  std::string pair = taken.count("pair") ? fresh("pair", taken) : "pair";
  auto fold = [&](const std::string& name, const std::vector<FunctionTerm>& args) {
    if (args.size() <= 2) return args;
    FunctionTerm tail = FunctionTerm::apply(pair, {args[args.size() - 2], args.back()});
    for (std::size_t k = args.size() - 2; k-- > 1;) {
      tail = FunctionTerm::apply(pair, {args[k], tail});
    }
    (void)name;
    return std::vector<FunctionTerm>{args[0], tail};
  };
  TermMap fn = [&](const FunctionTerm& t) {
    return bottom_up(t, [&](const FunctionTerm& node) {
      return FunctionTerm::apply(node.name, fold(node.name, node.args));
    });
  };
  auto pred = [&](const PredicateTerm& p) {
    std::vector<FunctionTerm> args;
    for (const auto& a : p.args) args.push_back(fn(a));
    return Formula::pred(PredicateTerm{p.name, fold(p.name, args)});
  };
  return map_terms(formula, fn, pred);
}

Formula to_tsl2(const Formula& formula) { return kappa2(kappa1(kappa0(formula))); }

namespace {

bool term_tsl2(const FunctionTerm& t) {
  if (!t.applied) return true;
  if (t.args.size() != 2) return false;
  return term_tsl2(t.args[0]) && term_tsl2(t.args[1]);
}

}  // namespace

bool is_tsl2(const Formula& f) {
  if (f.op() == Op::Pred) {
    const auto& p = f.predicate();
    return p.args.size() == 2 && term_tsl2(p.args[0]) && term_tsl2(p.args[1]);
  }
  if (f.op() == Op::Upd) return term_tsl2(f.update().term);
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (!is_tsl2(f.child(i))) return false;
  }
  return true;
}

PcpInstance parse_pcp(const std::string& text) {
  PcpInstance inst;
  try {
    auto j = nlohmann::json::parse(text);
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) throw Error("each pair needs two words");
      inst.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid PCP instance: ") + e.what());
  }
  return inst;
}

FunctionTerm mu(const std::string& word, const FunctionTerm& s) {
  if (word.empty()) throw Error("PCP words must be nonempty");
  FunctionTerm t = s;
  for (std::size_t k = word.size(); k-- > 0;) {
    std::string sym(1, word[k]);
    if (!is_valid_name(sym)) throw Error("PCP symbol '" + sym + "' is not a letter");
    if (sym == "A" || sym == "B" || sym == "X" || sym == "p") {
      throw Error("PCP symbol '" + sym + "' clashes with a reserved name of the construction");
    }
    t = FunctionTerm::apply(sym, {t});
  }
  return t;
}

Formula pcp_formula(const PcpInstance& instance) {
  if (instance.pairs.empty()) throw Error("PCP instance needs at least one pair");
  const FunctionTerm a = FunctionTerm::signal("A");
  const FunctionTerm b = FunctionTerm::signal("B");
  const FunctionTerm x = FunctionTerm::apply("X");
  Formula init = And(Formula::upd(UpdateTerm{"A", x}), Formula::upd(UpdateTerm{"B", x}));
  std::vector<Formula> moves;
  for (const auto& [w, v] : instance.pairs) {
    moves.push_back(And(Formula::upd(UpdateTerm{"A", mu(w, a)}),
                        Formula::upd(UpdateTerm{"B", mu(v, b)})));
  }
  Formula step = moves.front();
  for (std::size_t k = 1; k < moves.size(); ++k) step = Or(step, moves[k]);
  Formula eq = Iff(Formula::pred(PredicateTerm{"p", {a}}), Formula::pred(PredicateTerm{"p", {b}}));
  return And(And(init, Next(Globally(step))), Next(Next(Finally(eq))));
}

LtlSpec counter_ltl(int bits) {
  if (bits < 1 || bits > 6) throw Error("counter width must be between 1 and 6");
  LtlSpec spec;
  spec.inputs.push_back(Prop{"click", PredicateTerm{"click", {}}});
  std::vector<Ltl> c;
  for (int i = 0; i < bits; ++i) {
    spec.free_outputs.push_back("c" + std::to_string(i));
    c.push_back(Ltl::prop("c" + std::to_string(i)));
  }
  const Ltl click = Ltl::prop("click");
  std::vector<Ltl> parts;
  // first step: the counter holds the first click
  parts.push_back(Ltl::iff(c[0], click));
  for (int i = 1; i < bits; ++i) parts.push_back(Ltl::lnot(c[i]));
  std::vector<Ltl> step;
  for (int i = 0; i < bits; ++i) {
    std::vector<Ltl> carry{Ltl::next(click)};
    for (int j = 0; j < i; ++j) carry.push_back(c[j]);
    Ltl flip = Ltl::conj(carry);
    Ltl xor_ = Ltl::lnot(Ltl::iff(c[i], flip));
    step.push_back(Ltl::iff(Ltl::next(c[i]), xor_));
  }
  parts.push_back(Ltl::globally(Ltl::conj(step)));
  spec.body = Ltl::conj(parts);
  spec.constraint = Ltl::tt();
  return spec;
}

}  // namespace tslsynth
