#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tslsynth/ltl.hpp"
#include "tslsynth/syntax.hpp"

namespace tslsynth {

class NoOutputs : public Error {
 public:
  NoOutputs() : Error("specification contains no update term") {}
};

using TermRef = std::variant<PredicateTerm, UpdateTerm>;

struct Prop {
  std::string id;
  TermRef origin;

  friend bool operator==(const Prop&, const Prop&) = default;
};

std::string mangle(const FunctionTerm& term);
std::string term_prop_id(const PredicateTerm& term);
std::string term_prop_id(const UpdateTerm& term);
Prop term_prop(const TermRef& term);
/// Inverse of term_prop; throws Error on ids that are not well-formed.
TermRef unmangle(const std::string& id);

struct OutputGroup {
  std::string signal;
  /// Update props of the signal; the self-update is always present.
  std::vector<Prop> props;
  std::size_t identity_index = 0;
};

struct LtlSpec {
  std::vector<Prop> inputs;
  std::vector<OutputGroup> groups;
  /// Plain Boolean outputs outside any update group.
  std::vector<std::string> free_outputs;
  /// Encoded TSL formula with atoms replaced by props.
  Ltl body = Ltl::tt();
  /// G (exactly one update per output signal).
  Ltl constraint = Ltl::tt();

  Ltl formula() const { return Ltl::land(body, constraint); }
  std::vector<std::string> input_ids() const;
  std::vector<std::string> output_ids() const;
  const Prop* find(const std::string& id) const;
};

struct EncodeOptions {
  bool require_outputs = true;
};

LtlSpec encode(const Formula& formula, const SymbolTable& symbols, EncodeOptions opts = {});

/// Maps every Pred/Upd atom to its prop; the formula may use any operator.
Ltl to_ltl(const Formula& formula);

/// `(p(X()) -> G p(X())) && (!p(X()) -> G !p(X()))` over unary predicates
/// and 0-ary functions; `true` when there are none.
Formula purity_assumptions(const SymbolTable& symbols);

/// `purity -> formula`, or `formula` when no purity assumption applies.
Formula assume_purity(const Formula& formula, const SymbolTable& symbols);

/// Lower-cased identifiers for TLSF, with collisions resolved by suffixes.
std::map<std::string, std::string> tlsf_ids(const LtlSpec& spec);

std::string export_tlsf(const LtlSpec& spec, const std::string& title);

}  // namespace tslsynth
