#include "tslsynth/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace tslsynth {

LexError::LexError(std::string msg, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

ParseError::ParseError(std::string msg, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

KindConflict::KindConflict(std::string name)
    : Error("name '" + name + "' is used with conflicting kinds"), name_(std::move(name)) {}

ArityConflict::ArityConflict(std::string name, std::size_t first, std::size_t second)
    : Error("name '" + name + "' is used with arities " + std::to_string(first) + " and " +
            std::to_string(second)),
      name_(std::move(name)) {}

bool is_valid_name(std::string_view text) {
  if (text.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(text.front())) return false;
  return std::all_of(text.begin(), text.end(), [&](char c) { return alpha(c) || digit(c); });
}

FunctionTerm FunctionTerm::signal(std::string name) {
  return FunctionTerm{std::move(name), false, {}};
}

FunctionTerm FunctionTerm::apply(std::string name, std::vector<FunctionTerm> args) {
  return FunctionTerm{std::move(name), true, std::move(args)};
}

bool is_unary(Op op) {
  return op == Op::Not || op == Op::Next || op == Op::Finally || op == Op::Globally;
}

bool is_binary(Op op) {
  switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
    case Op::Until:
    case Op::Release:
    case Op::WeakUntil:
    case Op::AsSoonAs:
      return true;
    default:
      return false;
  }
}

Formula Formula::pred(PredicateTerm p) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Pred, std::move(p), {}}));
}

Formula Formula::upd(UpdateTerm u) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Upd, std::move(u), {}}));
}

Formula Formula::tt() {
  static const Formula t(std::make_shared<const FormulaNode>(FormulaNode{Op::True, {}, {}}));
  return t;
}

Formula Formula::ff() {
  static const Formula f(std::make_shared<const FormulaNode>(FormulaNode{Op::False, {}, {}}));
  return f;
}

Formula Formula::unary(Op op, Formula f) {
  if (!is_unary(op)) throw Error("operator is not unary");
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{op, {}, {std::move(f)}}));
}

Formula Formula::binary(Op op, Formula lhs, Formula rhs) {
  if (!is_binary(op)) throw Error("operator is not binary");
  return Formula(
      std::make_shared<const FormulaNode>(FormulaNode{op, {}, {std::move(lhs), std::move(rhs)}}));
}

const PredicateTerm& Formula::predicate() const {
  if (op() != Op::Pred) throw Error("formula is not a predicate atom");
  return std::get<PredicateTerm>(node_->atom);
}

const UpdateTerm& Formula::update() const {
  if (op() != Op::Upd) throw Error("formula is not an update atom");
  return std::get<UpdateTerm>(node_->atom);
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  if (a.node_->atom != b.node_->atom) return false;
  return a.node_->children == b.node_->children;
}

Formula Not(Formula f) { return Formula::unary(Op::Not, std::move(f)); }
Formula And(Formula a, Formula b) { return Formula::binary(Op::And, std::move(a), std::move(b)); }
Formula Or(Formula a, Formula b) { return Formula::binary(Op::Or, std::move(a), std::move(b)); }
Formula Implies(Formula a, Formula b) {
  return Formula::binary(Op::Implies, std::move(a), std::move(b));
}
Formula Iff(Formula a, Formula b) { return Formula::binary(Op::Iff, std::move(a), std::move(b)); }
Formula Next(Formula f) { return Formula::unary(Op::Next, std::move(f)); }
Formula Until(Formula a, Formula b) {
  return Formula::binary(Op::Until, std::move(a), std::move(b));
}
Formula Release(Formula a, Formula b) {
  return Formula::binary(Op::Release, std::move(a), std::move(b));
}
Formula Finally(Formula f) { return Formula::unary(Op::Finally, std::move(f)); }
Formula Globally(Formula f) { return Formula::unary(Op::Globally, std::move(f)); }
Formula WeakUntil(Formula a, Formula b) {
  return Formula::binary(Op::WeakUntil, std::move(a), std::move(b));
}
Formula AsSoonAs(Formula a, Formula b) {
  return Formula::binary(Op::AsSoonAs, std::move(a), std::move(b));
}

Formula conjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::tt();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = And(acc, fs[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// desugar

namespace {

Formula negate(const Formula& f) {
  if (f.op() == Op::Not) return f.child();
  return Not(f);
}

Formula lower(const Formula& f) {
  switch (f.op()) {
    case Op::Pred:
    case Op::Upd:
    case Op::True:
      return f;
    case Op::False:
      return Not(Formula::tt());
    case Op::Not:
      return negate(lower(f.child()));
    case Op::And:
      return And(lower(f.lhs()), lower(f.rhs()));
    case Op::Or:
      return negate(And(negate(lower(f.lhs())), negate(lower(f.rhs()))));
    case Op::Implies:
      return negate(And(lower(f.lhs()), negate(lower(f.rhs()))));
    case Op::Iff: {
      auto a = lower(f.lhs());
      auto b = lower(f.rhs());
      return And(negate(And(a, negate(b))), negate(And(b, negate(a))));
    }
    case Op::Next:
      return Next(lower(f.child()));
    case Op::Until:
      return Until(lower(f.lhs()), lower(f.rhs()));
    case Op::Release:
      // a R b == !(!a U !b)
      return negate(Until(negate(lower(f.lhs())), negate(lower(f.rhs()))));
    case Op::Finally:
      return Until(Formula::tt(), lower(f.child()));
    case Op::Globally:
      // false R a == !(true U !a)
      return negate(Until(Formula::tt(), negate(lower(f.child()))));
    case Op::WeakUntil: {
      // a W b == (a U b) || G a
      auto a = lower(f.lhs());
      auto b = lower(f.rhs());
      auto g = negate(Until(Formula::tt(), negate(a)));
      return negate(And(negate(Until(a, b)), negate(g)));
    }
    case Op::AsSoonAs:
      // a A b == !b W (b && a)
      return lower(WeakUntil(Not(f.rhs()), And(f.rhs(), f.lhs())));
  }
  throw Error("unknown operator");
}

}  // namespace

Formula desugar(const Formula& formula) { return lower(formula); }

bool is_core(const Formula& f) {
  switch (f.op()) {
    case Op::Pred:
    case Op::Upd:
    case Op::True:
      return true;
    case Op::Not:
    case Op::Next:
      return is_core(f.child());
    case Op::And:
    case Op::Until:
      return is_core(f.lhs()) && is_core(f.rhs());
    default:
      return false;
  }
}

std::size_t subformula_count(const Formula& f) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < f.arity(); ++i) n += subformula_count(f.child(i));
  return n;
}

// ---------------------------------------------------------------------------
// pretty printing

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    case Op::Until:
    case Op::Release:
    case Op::WeakUntil:
    case Op::AsSoonAs:
      return 5;
    case Op::Not:
    case Op::Next:
    case Op::Finally:
    case Op::Globally:
      return 6;
    default:
      return 7;
  }
}

bool right_assoc(Op op) {
  return op == Op::Implies || op == Op::Until || op == Op::Release || op == Op::WeakUntil ||
         op == Op::AsSoonAs;
}

const char* symbol(Op op) {
  switch (op) {
    case Op::Not:
      return "!";
    case Op::And:
      return "&&";
    case Op::Or:
      return "||";
    case Op::Implies:
      return "->";
    case Op::Iff:
      return "<->";
    case Op::Next:
      return "X";
    case Op::Until:
      return "U";
    case Op::Release:
      return "R";
    case Op::Finally:
      return "F";
    case Op::Globally:
      return "G";
    case Op::WeakUntil:
      return "W";
    case Op::AsSoonAs:
      return "A";
    default:
      return "?";
  }
}

void print_term(std::ostream& os, const FunctionTerm& t) {
  os << t.name;
  if (!t.applied) return;
  os << '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) os << ", ";
    print_term(os, t.args[i]);
  }
  os << ')';
}

void print_formula(std::ostream& os, const Formula& f);

void print_child(std::ostream& os, const Formula& child, bool parens) {
  if (parens) os << '(';
  print_formula(os, child);
  if (parens) os << ')';
}

void print_formula(std::ostream& os, const Formula& f) {
  const Op op = f.op();
  switch (op) {
    case Op::Pred:
      os << pretty(f.predicate());
      return;
    case Op::Upd:
      os << pretty(f.update());
      return;
    case Op::True:
      os << "true";
      return;
    case Op::False:
      os << "false";
      return;
    default:
      break;
  }
  const int p = precedence(op);
  if (is_unary(op)) {
    os << symbol(op) << ' ';
    print_child(os, f.child(), precedence(f.child().op()) < p);
    return;
  }
  const int pl = precedence(f.lhs().op());
  const int pr = precedence(f.rhs().op());
  const bool ra = right_assoc(op);
  print_child(os, f.lhs(), ra ? pl <= p : pl < p);
  os << ' ' << symbol(op) << ' ';
  print_child(os, f.rhs(), ra ? pr < p : pr <= p);
}

}  // namespace

std::string pretty(const FunctionTerm& term) {
  std::ostringstream os;
  print_term(os, term);
  return os.str();
}

std::string pretty(const PredicateTerm& term) {
  std::ostringstream os;
  os << term.name << '(';
  for (std::size_t i = 0; i < term.args.size(); ++i) {
    if (i) os << ", ";
    print_term(os, term.args[i]);
  }
  os << ')';
  return os.str();
}

std::string pretty(const UpdateTerm& term) {
  std::ostringstream os;
  os << '[' << term.signal << " <- ";
  print_term(os, term.term);
  os << ']';
  return os.str();
}

std::string pretty(const Formula& formula) {
  std::ostringstream os;
  print_formula(os, formula);
  return os.str();
}

// ---------------------------------------------------------------------------
// term collection

namespace {

template <typename Visit>
void walk(const Formula& f, Visit&& visit) {
  visit(f);
  for (std::size_t i = 0; i < f.arity(); ++i) walk(f.child(i), visit);
}

}  // namespace

std::vector<PredicateTerm> predicate_terms(const Formula& formula) {
  std::vector<PredicateTerm> out;
  std::set<PredicateTerm> seen;
  walk(formula, [&](const Formula& f) {
    if (f.op() == Op::Pred && seen.insert(f.predicate()).second) out.push_back(f.predicate());
  });
  return out;
}

std::vector<UpdateTerm> update_terms(const Formula& formula) {
  std::vector<UpdateTerm> out;
  std::set<UpdateTerm> seen;
  walk(formula, [&](const Formula& f) {
    if (f.op() == Op::Upd && seen.insert(f.update()).second) out.push_back(f.update());
  });
  return out;
}

}  // namespace tslsynth
