#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tslsynth {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LexError : public Error {
 public:
  LexError(std::string msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ParseError : public Error {
 public:
  ParseError(std::string msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A name was used with two different kinds (e.g. as function and predicate).
class KindConflict : public Error {
 public:
  explicit KindConflict(std::string name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ArityConflict : public Error {
 public:
  ArityConflict(std::string name, std::size_t first, std::size_t second);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// True iff `text` matches `[A-Za-z][A-Za-z0-9]*`.
bool is_valid_name(std::string_view text);

/// Function term: a signal reference or an application `f(t0, ..., tn)`.
/// Zero-argument applications are distinct from signal references.
struct FunctionTerm {
  std::string name;
  bool applied = false;
  std::vector<FunctionTerm> args;

  static FunctionTerm signal(std::string name);
  static FunctionTerm apply(std::string name, std::vector<FunctionTerm> args = {});

  bool is_signal() const { return !applied; }

  friend bool operator==(const FunctionTerm&, const FunctionTerm&) = default;
  friend std::strong_ordering operator<=>(const FunctionTerm& a, const FunctionTerm& b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.applied <=> b.applied; c != 0) return c;
    return a.args <=> b.args;
  }
};

struct PredicateTerm {
  std::string name;
  std::vector<FunctionTerm> args;

  friend bool operator==(const PredicateTerm&, const PredicateTerm&) = default;
  friend std::strong_ordering operator<=>(const PredicateTerm& a, const PredicateTerm& b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    return a.args <=> b.args;
  }
};

/// `[signal <- term]`
struct UpdateTerm {
  std::string signal;
  FunctionTerm term;

  bool is_identity() const { return term.is_signal() && term.name == signal; }

  friend bool operator==(const UpdateTerm&, const UpdateTerm&) = default;
  friend std::strong_ordering operator<=>(const UpdateTerm& a, const UpdateTerm& b) {
    if (auto c = a.signal <=> b.signal; c != 0) return c;
    return a.term <=> b.term;
  }
};

enum class Op {
  Pred,
  Upd,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,
  Until,
  Release,
  Finally,
  Globally,
  WeakUntil,
  AsSoonAs,
};

bool is_unary(Op op);
bool is_binary(Op op);

class Formula;

struct FormulaNode {
  Op op;
  std::variant<std::monostate, PredicateTerm, UpdateTerm> atom;
  std::vector<Formula> children;
};

/// Immutable TSL formula; copies share structure.
class Formula {
 public:
  static Formula pred(PredicateTerm p);
  static Formula upd(UpdateTerm u);
  static Formula tt();
  static Formula ff();
  static Formula unary(Op op, Formula f);
  static Formula binary(Op op, Formula lhs, Formula rhs);

  Op op() const { return node_->op; }
  const PredicateTerm& predicate() const;
  const UpdateTerm& update() const;
  const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }
  std::size_t arity() const { return node_->children.size(); }
  bool is_atom() const { return op() == Op::Pred || op() == Op::Upd; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;
};

// Construction shorthands.
Formula Not(Formula f);
Formula And(Formula a, Formula b);
Formula Or(Formula a, Formula b);
Formula Implies(Formula a, Formula b);
Formula Iff(Formula a, Formula b);
Formula Next(Formula f);
Formula Until(Formula a, Formula b);
Formula Release(Formula a, Formula b);
Formula Finally(Formula f);
Formula Globally(Formula f);
Formula WeakUntil(Formula a, Formula b);
Formula AsSoonAs(Formula a, Formula b);
/// Left-folded conjunction; `True` when empty.
Formula conjunction(const std::vector<Formula>& fs);

/// Names partitioned by kind, with arities for functions and predicates.
struct SymbolTable {
  std::set<std::string> inputs;
  std::set<std::string> outputs;
  std::map<std::string, std::size_t> functions;
  std::map<std::string, std::size_t> predicates;

  bool empty() const {
    return inputs.empty() && outputs.empty() && functions.empty() && predicates.empty();
  }

  friend bool operator==(const SymbolTable&, const SymbolTable&) = default;
};

struct ParsedSpec {
  Formula formula;
  SymbolTable symbols;
};

/// Parses a `.tsl` source. Either a `;`-separated list of formulas
/// (conjoined) or `assume { ... } guarantee { ... }` sections combined as
/// `(/\A) -> (/\G)`. The result is already classified.
ParsedSpec parse_spec(std::string_view text);

/// Parses a single formula without section syntax.
Formula parse_formula(std::string_view text);

/// Parses a single function term, e.g. `play(Tr, trackPos(MPin))`.
FunctionTerm parse_term(std::string_view text);

SymbolTable classify(const Formula& formula);

/// Rewrites every derived operator into Pred/Upd/True/Not/And/Next/Until.
Formula desugar(const Formula& formula);
bool is_core(const Formula& formula);

/// Number of syntactic nodes; atoms count once, terms are not descended.
std::size_t subformula_count(const Formula& formula);

std::string pretty(const Formula& formula);
std::string pretty(const FunctionTerm& term);
std::string pretty(const PredicateTerm& term);
std::string pretty(const UpdateTerm& term);

/// Distinct predicate and update terms in first-occurrence order.
std::vector<PredicateTerm> predicate_terms(const Formula& formula);
std::vector<UpdateTerm> update_terms(const Formula& formula);

}  // namespace tslsynth
