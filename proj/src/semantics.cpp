#include "tslsynth/semantics.hpp"

#include <sstream>

namespace tslsynth {

std::string to_string(const Value& v) {
  struct Visitor {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return '"' + s + '"'; }
    std::string operator()(Token t) const {
      std::ostringstream os;
      os << '#' << std::hex << t.id;
      return os.str();
    }
  };
  return std::visit(Visitor{}, v);
}

const ComputationStep& LassoComputation::at(std::size_t t) const {
  if (loop.empty()) throw Error("computation loop must be nonempty");
  if (t < prefix.size()) return prefix[t];
  return loop[(t - prefix.size()) % loop.size()];
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_text(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) h = mix(h ^ c);
  return mix(h ^ s.size());
}

std::uint64_t hash_value(std::uint64_t h, const Value& v) {
  h = mix(h ^ v.index());
  struct Visitor {
    std::uint64_t h;
    std::uint64_t operator()(std::int64_t i) const { return mix(h ^ std::uint64_t(i)); }
    std::uint64_t operator()(bool b) const { return mix(h ^ (b ? 1 : 2)); }
    std::uint64_t operator()(const std::string& s) const { return hash_text(h, s); }
    std::uint64_t operator()(Token t) const { return mix(h ^ t.id); }
  };
  return std::visit(Visitor{h}, v);
}

std::uint64_t hash_call(std::uint64_t seed, std::string_view kind, const std::string& name,
                        const std::vector<Value>& args) {
  std::uint64_t h = hash_text(mix(seed), kind);
  h = hash_text(h, name);
  for (const auto& a : args) h = hash_value(h, a);
  return h;
}

const std::int64_t* as_int(const Value& v) { return std::get_if<std::int64_t>(&v); }

bool truthy(const Value& v) {
  struct Visitor {
    bool operator()(std::int64_t i) const { return i != 0; }
    bool operator()(bool b) const { return b; }
    bool operator()(const std::string& s) const { return !s.empty(); }
    bool operator()(Token t) const { return t.id != 0; }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace

Value Interpretation::apply_function(const std::string& name,
                                     const std::vector<Value>& args) const {
  if (call_counter) ++*call_counter;
  if (auto it = functions.find(name); it != functions.end()) return it->second(args);
  if (!fallback_seed) throw MissingInterpretation(name);
  return Token{hash_call(*fallback_seed, "f", name, args)};
}

bool Interpretation::apply_predicate(const std::string& name,
                                     const std::vector<Value>& args) const {
  if (call_counter) ++*call_counter;
  if (auto it = predicates.find(name); it != predicates.end()) {
    Value v = it->second(args);
    if (auto b = std::get_if<bool>(&v)) return *b;
    throw NonBoolean(name);
  }
  if (!fallback_seed) throw MissingInterpretation(name);
  return hash_call(*fallback_seed, "p", name, args) & 1;
}

Value Interpretation::init(const std::string& signal) const {
  if (auto it = inits.find(signal); it != inits.end()) return it->second;
  if (!fallback_seed) throw MissingInterpretation(std::string(kInitMarker) + "(" + signal + ")");
  return std::int64_t{0};
}

Value Interpretation::input(const std::string& signal, std::size_t t) const {
  if (call_counter) ++*call_counter;
  if (auto it = inputs.find(signal); it != inputs.end()) return it->second(t);
  if (!fallback_seed) throw MissingInterpretation(signal);
  std::uint64_t h = hash_call(*fallback_seed, "i", signal, {std::int64_t(t)});
  return std::int64_t(h % 4);
}

Interpretation builtin_interpretation(std::uint64_t seed) {
  Interpretation in;
  in.fallback_seed = seed;
  auto unary_int = [seed](std::string name, std::int64_t delta) -> HostFunction {
    return [seed, name, delta](const std::vector<Value>& a) -> Value {
      if (a.size() == 1) {
        if (auto i = as_int(a[0])) return *i + delta;
      }
      return Token{hash_call(seed, "f", name, a)};
    };
  };
  in.functions["increment"] = unary_int("increment", 1);
  in.functions["decrement"] = unary_int("decrement", -1);
  in.functions["sub1"] = unary_int("sub1", -1);
  in.functions["add"] = [seed](const std::vector<Value>& a) -> Value {
    if (a.size() == 2) {
      auto x = as_int(a[0]);
      auto y = as_int(a[1]);
      if (x && y) return *x + *y;
    }
    return Token{hash_call(seed, "f", "add", a)};
  };
  in.predicates["eq0"] = [seed](const std::vector<Value>& a) -> Value {
    if (a.size() == 1) {
      if (auto i = as_int(a[0])) return *i == 0;
    }
    return bool(hash_call(seed, "p", "eq0", a) & 1);
  };
  auto compare = [seed](std::string name, int want) -> HostFunction {
    return [seed, name, want](const std::vector<Value>& a) -> Value {
      if (a.size() != 2) return bool(hash_call(seed, "p", name, a) & 1);
      if (auto x = as_int(a[0]), y = as_int(a[1]); x && y) {
        int c = *x < *y ? -1 : (*x > *y ? 1 : 0);
        return c == want;
      }
      if (want == 0) return a[0] == a[1];
      return bool(hash_call(seed, "p", name, a) & 1);
    };
  };
  in.predicates["eq"] = compare("eq", 0);
  in.predicates["lt"] = compare("lt", -1);
  in.predicates["gt"] = compare("gt", 1);
  in.predicates["event"] = [](const std::vector<Value>& a) -> Value {
    return a.size() == 1 && truthy(a[0]);
  };
  return in;
}

namespace {

FunctionTerm eta(const LassoComputation& comp, const SymbolTable& symbols, std::size_t now,
                 std::size_t t, const FunctionTerm& term) {
  if (term.applied) {
    std::vector<FunctionTerm> args;
    args.reserve(term.args.size());
    for (const auto& a : term.args) args.push_back(eta(comp, symbols, now, t, a));
    return FunctionTerm::apply(term.name, std::move(args));
  }
  if (symbols.outputs.count(term.name)) {
    if (t == 0) return FunctionTerm::apply(kInitMarker, {term});
    const auto& step = comp.at(t - 1);
    auto it = step.find(term.name);
    if (it == step.end()) throw MissingInterpretation(term.name);
    return eta(comp, symbols, now, t - 1, it->second);
  }
  if (!symbols.inputs.count(term.name)) throw MissingInterpretation(term.name);
  // inputs read at an earlier step carry their time stamp
  if (t == now) return term;
  return FunctionTerm::signal(term.name + "@" + std::to_string(t));
}

}  // namespace

FunctionTerm eval_term(const LassoComputation& comp, const SymbolTable& symbols, std::size_t t,
                       const FunctionTerm& term) {
  return eta(comp, symbols, t, t, term);
}

PredicateTerm eval_term(const LassoComputation& comp, const SymbolTable& symbols, std::size_t t,
                        const PredicateTerm& term) {
  PredicateTerm out{term.name, {}};
  for (const auto& a : term.args) out.args.push_back(eta(comp, symbols, t, t, a));
  return out;
}

Value concretize(const FunctionTerm& term, const Interpretation& interp, std::size_t t) {
  if (term.applied) {
    if (term.name == kInitMarker && term.args.size() == 1 && !term.args[0].applied) {
      return interp.init(term.args[0].name);
    }
    std::vector<Value> args;
    args.reserve(term.args.size());
    for (const auto& a : term.args) args.push_back(concretize(a, interp, t));
    return interp.apply_function(term.name, args);
  }
  if (auto at = term.name.find('@'); at != std::string::npos) {
    return interp.input(term.name.substr(0, at), std::stoull(term.name.substr(at + 1)));
  }
  return interp.input(term.name, t);
}

// ---------------------------------------------------------------------------
// tsl_holds

namespace {

enum class K : char { F, T, U };

K knot(K a) { return a == K::U ? K::U : (a == K::T ? K::F : K::T); }
K kand(K a, K b) {
  if (a == K::F || b == K::F) return K::F;
  if (a == K::U || b == K::U) return K::U;
  return K::T;
}
K kor(K a, K b) { return knot(kand(knot(a), knot(b))); }

bool has_predicate(const Formula& f) {
  if (f.op() == Op::Pred) return true;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (has_predicate(f.child(i))) return true;
  }
  return false;
}

struct Checker {
  const LassoComputation& comp;
  const SymbolTable& symbols;
  const Interpretation& interp;
  std::size_t horizon;
  std::vector<std::map<std::string, Value>> outputs;  // output values per time

  std::size_t lasso_pos(std::size_t t) const {
    if (t < comp.prefix.size()) return t;
    return comp.prefix.size() + (t - comp.prefix.size()) % comp.loop.size();
  }

  Value value(const FunctionTerm& term, std::size_t t) {
    if (term.applied) {
      std::vector<Value> args;
      for (const auto& a : term.args) args.push_back(value(a, t));
      return interp.apply_function(term.name, args);
    }
    if (symbols.outputs.count(term.name)) return output_at(term.name, t);
    return interp.input(term.name, t);
  }

  Value output_at(const std::string& s, std::size_t t) {
    while (outputs.size() <= t) {
      std::size_t u = outputs.size();
      std::map<std::string, Value> row;
      for (const auto& o : symbols.outputs) {
        if (u == 0) {
          row.emplace(o, interp.init(o));
        } else {
          const auto& step = comp.at(u - 1);
          auto it = step.find(o);
          if (it == step.end()) throw MissingInterpretation(o);
          row.emplace(o, value(it->second, u - 1));
        }
      }
      outputs.push_back(std::move(row));
    }
    return outputs[t].at(s);
  }

  bool update_holds(const UpdateTerm& u, std::size_t t) const {
    const auto& step = comp.at(t);
    auto it = step.find(u.signal);
    return it != step.end() && it->second == u.term;
  }

  // exact lasso evaluation for predicate-free subformulas
  std::vector<char> exact(const Formula& f) const {
    const std::size_t n = comp.size();
    auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : comp.prefix.size(); };
    std::vector<char> v(n, 0);
    switch (f.op()) {
      case Op::Upd:
        for (std::size_t i = 0; i < n; ++i) v[i] = update_holds(f.update(), i);
        return v;
      case Op::True:
        return std::vector<char>(n, 1);
      case Op::False:
        return v;
      case Op::Not: {
        auto a = exact(f.child());
        for (std::size_t i = 0; i < n; ++i) v[i] = !a[i];
        return v;
      }
      case Op::And: {
        auto a = exact(f.lhs());
        auto b = exact(f.rhs());
        for (std::size_t i = 0; i < n; ++i) v[i] = a[i] && b[i];
        return v;
      }
      case Op::Next: {
        auto a = exact(f.child());
        for (std::size_t i = 0; i < n; ++i) v[i] = a[succ(i)];
        return v;
      }
      case Op::Until: {
        auto a = exact(f.lhs());
        auto b = exact(f.rhs());
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t k = n; k-- > 0;) {
            char nv = b[k] || (a[k] && v[succ(k)]);
            if (nv != v[k]) {
              v[k] = nv;
              changed = true;
            }
          }
        }
        return v;
      }
      default:
        throw Error("tsl_holds expects a desugared formula");
    }
  }

  // values on [0, horizon] where index `horizon` is the boundary beyond the window
  std::vector<K> eval(const Formula& f, bool negative) {
    const std::size_t H = horizon;
    std::vector<K> v(H + 1, K::U);
    if (!has_predicate(f)) {
      auto e = exact(f);
      for (std::size_t t = 0; t <= H; ++t) v[t] = e[lasso_pos(t)] ? K::T : K::F;
      return v;
    }
    switch (f.op()) {
      case Op::Pred: {
        const auto& p = f.predicate();
        for (std::size_t t = 0; t < H; ++t) {
          std::vector<Value> args;
          for (const auto& a : p.args) args.push_back(value(a, t));
          v[t] = interp.apply_predicate(p.name, args) ? K::T : K::F;
        }
        return v;
      }
      case Op::Not: {
        auto a = eval(f.child(), !negative);
        for (std::size_t t = 0; t <= H; ++t) v[t] = knot(a[t]);
        return v;
      }
      case Op::And: {
        auto a = eval(f.lhs(), negative);
        auto b = eval(f.rhs(), negative);
        for (std::size_t t = 0; t <= H; ++t) v[t] = kand(a[t], b[t]);
        return v;
      }
      case Op::Next: {
        auto a = eval(f.child(), negative);
        for (std::size_t t = 0; t < H; ++t) v[t] = a[t + 1];
        return v;
      }
      case Op::Until: {
        auto a = eval(f.lhs(), negative);
        auto b = eval(f.rhs(), negative);
        // an until under negation is a release obligation: treat it as
        // discharged beyond the window
        v[H] = negative ? K::F : K::U;
        for (std::size_t t = H; t-- > 0;) v[t] = kor(b[t], kand(a[t], v[t + 1]));
        return v;
      }
      default:
        throw Error("tsl_holds expects a desugared formula");
    }
  }
};

}  // namespace

bool tsl_holds(const LassoComputation& comp, const SymbolTable& symbols,
               const Interpretation& interp, const Formula& formula, HoldsOptions opts) {
  if (comp.loop.empty()) throw Error("computation loop must be nonempty");
  const Formula core = is_core(formula) ? formula : desugar(formula);
  std::size_t H = opts.horizon ? opts.horizon : comp.prefix.size() + 2 * comp.loop.size();
  Checker c{comp, symbols, interp, H, {}};
  K r = c.eval(core, false)[0];
  if (r == K::U) {
    if (opts.strict) throw UndecidedWithinHorizon();
    return false;
  }
  return r == K::T;
}

}  // namespace tslsynth
