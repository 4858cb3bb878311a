#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace tslsynth {

enum class LtlOp { Prop, True, False, Not, And, Or, Next, Until, Release };

struct LtlNode;

/// Immutable propositional LTL formula.
class Ltl {
 public:
  static Ltl prop(std::string name);
  static Ltl tt();
  static Ltl ff();
  static Ltl lnot(Ltl f);
  static Ltl land(Ltl a, Ltl b);
  static Ltl lor(Ltl a, Ltl b);
  static Ltl next(Ltl f);
  static Ltl until(Ltl a, Ltl b);
  static Ltl release(Ltl a, Ltl b);
  static Ltl implies(Ltl a, Ltl b);
  static Ltl iff(Ltl a, Ltl b);
  static Ltl finally(Ltl f);
  static Ltl globally(Ltl f);
  static Ltl conj(const std::vector<Ltl>& fs);
  static Ltl disj(const std::vector<Ltl>& fs);

  LtlOp op() const;
  const std::string& name() const;
  const Ltl& child(std::size_t i = 0) const;
  const Ltl& lhs() const { return child(0); }
  const Ltl& rhs() const { return child(1); }
  std::size_t arity() const;

  friend bool operator==(const Ltl& a, const Ltl& b);

 private:
  explicit Ltl(std::shared_ptr<const LtlNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const LtlNode> node_;
};

struct LtlNode {
  LtlOp op;
  std::string name;
  std::vector<Ltl> children;
};

/// Ultimately periodic word `prefix . loop^omega`; each letter is the set of
/// propositions that hold.
struct LassoWord {
  std::vector<std::set<std::string>> prefix;
  std::vector<std::set<std::string>> loop;

  std::size_t size() const { return prefix.size() + loop.size(); }
  const std::set<std::string>& at(std::size_t t) const;
};

bool ltl_lasso_holds(const LassoWord& word, const Ltl& formula);

/// Negation normal form over Prop/True/False/Not(Prop)/And/Or/Next/Until/Release.
Ltl nnf(const Ltl& formula);

std::set<std::string> props_of(const Ltl& formula);

std::string to_string(const Ltl& formula);
/// TLSF basic-format expression; `rename` maps prop ids to TLSF ids.
std::string to_tlsf(const Ltl& formula, const std::function<std::string(const std::string&)>& rename);

}  // namespace tslsynth
