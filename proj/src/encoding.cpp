#include "tslsynth/encoding.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tslsynth {

std::string mangle(const FunctionTerm& term) {
  if (!term.applied) return term.name;
  std::string out = term.name + "_l_";
  for (std::size_t i = 0; i < term.args.size(); ++i) {
    if (i) out += "_c_";
    out += mangle(term.args[i]);
  }
  return out + "_r_";
}

std::string term_prop_id(const PredicateTerm& term) {
  return mangle(FunctionTerm::apply(term.name, term.args));
}

std::string term_prop_id(const UpdateTerm& term) {
  return "u_" + term.signal + "_eq_" + mangle(term.term);
}

Prop term_prop(const TermRef& term) {
  return std::visit([](const auto& t) { return Prop{term_prop_id(t), t}; }, term);
}

namespace {

class Demangler {
 public:
  explicit Demangler(const std::string& id) {
    std::size_t start = 0;
    while (true) {
      auto pos = id.find('_', start);
      toks_.push_back(id.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }

  std::optional<UpdateTerm> update() {
    pos_ = 0;
    if (toks_.size() < 4 || toks_[0] != "u" || toks_[2] != "eq") return std::nullopt;
    if (!is_valid_name(toks_[1])) return std::nullopt;
    pos_ = 3;
    auto t = term();
    if (!t || pos_ != toks_.size()) return std::nullopt;
    return UpdateTerm{toks_[1], *t};
  }

  std::optional<PredicateTerm> predicate() {
    pos_ = 0;
    auto t = term();
    if (!t || !t->applied || pos_ != toks_.size()) return std::nullopt;
    return PredicateTerm{t->name, t->args};
  }

 private:
  bool at(const char* s) const { return pos_ < toks_.size() && toks_[pos_] == s; }

  std::optional<FunctionTerm> term() {
    if (pos_ >= toks_.size() || !is_valid_name(toks_[pos_])) return std::nullopt;
    std::string name = toks_[pos_++];
    if (!at("l")) return FunctionTerm::signal(name);
    // a signal named `l` is followed by a separator, never by a name
    const std::size_t save = pos_;
    ++pos_;
    std::vector<FunctionTerm> args;
    if (at("") && pos_ + 1 < toks_.size() && toks_[pos_ + 1] == "r") {
      pos_ += 2;
    } else {
      while (true) {
        auto a = term();
        if (!a) {
          pos_ = save;
          return FunctionTerm::signal(name);
        }
        args.push_back(*a);
        if (at("c")) {
          ++pos_;
          continue;
        }
        if (at("r")) {
          ++pos_;
          break;
        }
        return std::nullopt;
      }
    }
    if (!at("")) return std::nullopt;
    ++pos_;
    return FunctionTerm::apply(name, std::move(args));
  }

  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

TermRef unmangle(const std::string& id) {
  Demangler d(id);
  auto u = d.update();
  auto p = d.predicate();
  if (u && p) throw Error("ambiguous proposition id '" + id + "'");
  if (u && term_prop_id(*u) == id) return *u;
  if (p && term_prop_id(*p) == id) return *p;
  throw Error("malformed proposition id '" + id + "'");
}

std::vector<std::string> LtlSpec::input_ids() const {
  std::vector<std::string> out;
  for (const auto& p : inputs) out.push_back(p.id);
  return out;
}

std::vector<std::string> LtlSpec::output_ids() const {
  std::vector<std::string> out;
  for (const auto& g : groups) {
    for (const auto& p : g.props) out.push_back(p.id);
  }
  out.insert(out.end(), free_outputs.begin(), free_outputs.end());
  return out;
}

const Prop* LtlSpec::find(const std::string& id) const {
  for (const auto& p : inputs) {
    if (p.id == id) return &p;
  }
  for (const auto& g : groups) {
    for (const auto& p : g.props) {
      if (p.id == id) return &p;
    }
  }
  return nullptr;
}

Ltl to_ltl(const Formula& f) {
  switch (f.op()) {
    case Op::Pred:
      return Ltl::prop(term_prop_id(f.predicate()));
    case Op::Upd:
      return Ltl::prop(term_prop_id(f.update()));
    case Op::True:
      return Ltl::tt();
    case Op::False:
      return Ltl::ff();
    case Op::Not:
      return Ltl::lnot(to_ltl(f.child()));
    case Op::And:
      return Ltl::land(to_ltl(f.lhs()), to_ltl(f.rhs()));
    case Op::Or:
      return Ltl::lor(to_ltl(f.lhs()), to_ltl(f.rhs()));
    case Op::Implies:
      return Ltl::implies(to_ltl(f.lhs()), to_ltl(f.rhs()));
    case Op::Iff:
      return Ltl::iff(to_ltl(f.lhs()), to_ltl(f.rhs()));
    case Op::Next:
      return Ltl::next(to_ltl(f.child()));
    case Op::Until:
      return Ltl::until(to_ltl(f.lhs()), to_ltl(f.rhs()));
    case Op::Release:
      return Ltl::release(to_ltl(f.lhs()), to_ltl(f.rhs()));
    case Op::Finally:
      return Ltl::finally(to_ltl(f.child()));
    case Op::Globally:
      return Ltl::globally(to_ltl(f.child()));
    case Op::WeakUntil:
    case Op::AsSoonAs:
      return to_ltl(desugar(f));
  }
  throw Error("unknown operator");
}

LtlSpec encode(const Formula& formula, const SymbolTable& symbols, EncodeOptions opts) {
  const Formula core = is_core(formula) ? formula : desugar(formula);
  LtlSpec spec;
  for (const auto& p : predicate_terms(core)) spec.inputs.push_back(term_prop(p));
  const auto updates = update_terms(core);
  if (updates.empty() && opts.require_outputs) throw NoOutputs();

  std::set<std::string> outputs = symbols.outputs;
  for (const auto& u : updates) outputs.insert(u.signal);
  for (const auto& s : outputs) {
    OutputGroup g{s, {}, 0};
    for (const auto& u : updates) {
      if (u.signal == s && !u.is_identity()) g.props.push_back(term_prop(u));
    }
    g.identity_index = g.props.size();
    g.props.push_back(term_prop(UpdateTerm{s, FunctionTerm::signal(s)}));
    spec.groups.push_back(std::move(g));
  }

  spec.body = to_ltl(core);
  std::vector<Ltl> per_signal;
  for (const auto& g : spec.groups) {
    std::vector<Ltl> choices;
    for (std::size_t i = 0; i < g.props.size(); ++i) {
      std::vector<Ltl> cube{Ltl::prop(g.props[i].id)};
      for (std::size_t j = 0; j < g.props.size(); ++j) {
        if (j != i) cube.push_back(Ltl::lnot(Ltl::prop(g.props[j].id)));
      }
      choices.push_back(Ltl::conj(cube));
    }
    per_signal.push_back(Ltl::disj(choices));
  }
  spec.constraint = Ltl::globally(Ltl::conj(per_signal));
  return spec;
}

Formula purity_assumptions(const SymbolTable& symbols) {
  std::vector<Formula> parts;
  for (const auto& [p, pa] : symbols.predicates) {
    if (pa != 1) continue;
    for (const auto& [x, xa] : symbols.functions) {
      if (xa != 0) continue;
      Formula atom = Formula::pred(PredicateTerm{p, {FunctionTerm::apply(x)}});
      parts.push_back(Implies(atom, Globally(atom)));
      parts.push_back(Implies(Not(atom), Globally(Not(atom))));
    }
  }
  return conjunction(parts);
}

Formula assume_purity(const Formula& formula, const SymbolTable& symbols) {
  Formula purity = purity_assumptions(symbols);
  if (purity.op() == Op::True) return formula;
  return Implies(purity, formula);
}

std::map<std::string, std::string> tlsf_ids(const LtlSpec& spec) {
  std::map<std::string, std::string> out;
  std::set<std::string> used;
  auto add = [&](const std::string& id) {
    std::string low = id;
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    std::string cand = low;
    for (int k = 2; used.count(cand); ++k) cand = low + "_" + std::to_string(k);
    used.insert(cand);
    out[id] = cand;
  };
  for (const auto& id : spec.input_ids()) add(id);
  for (const auto& id : spec.output_ids()) add(id);
  return out;
}

std::string export_tlsf(const LtlSpec& spec, const std::string& title) {
  const auto ids = tlsf_ids(spec);
  auto rename = [&](const std::string& id) { return ids.at(id); };
  std::ostringstream os;
  os << "INFO {\n"
     << "  TITLE:       \"" << title << "\"\n"
     << "  DESCRIPTION: \"TSL specification encoded to LTL\"\n"
     << "  SEMANTICS:   Mealy\n"
     << "  TARGET:      Mealy\n"
     << "}\n\n"
     << "MAIN {\n"
     << "  INPUTS {\n";
  for (const auto& id : spec.input_ids()) os << "    " << rename(id) << ";\n";
  os << "  }\n  OUTPUTS {\n";
  for (const auto& id : spec.output_ids()) os << "    " << rename(id) << ";\n";
  os << "  }\n  GUARANTEES {\n"
     << "    " << to_tlsf(spec.body, rename) << ";\n"
     << "    " << to_tlsf(spec.constraint, rename) << ";\n"
     << "  }\n}\n";
  return os.str();
}

}  // namespace tslsynth
