#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tslsynth/syntax.hpp"

namespace tslsynth {

/// Opaque value produced by uninterpreted 0-ary names and hash semantics.
struct Token {
  std::uint64_t id;
  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token&, const Token&) = default;
};

using Value = std::variant<std::int64_t, bool, std::string, Token>;

std::string to_string(const Value& v);

class MissingInterpretation : public Error {
 public:
  explicit MissingInterpretation(const std::string& name)
      : Error("no interpretation for '" + name + "'") {}
};

class NonBoolean : public Error {
 public:
  explicit NonBoolean(const std::string& name)
      : Error("predicate '" + name + "' returned a non-Boolean value") {}
};

/// Raised in strict mode when a formula cannot be decided within the horizon.
class UndecidedWithinHorizon : public Error {
 public:
  UndecidedWithinHorizon() : Error("formula not decided within the evaluation horizon") {}
};

using ComputationStep = std::map<std::string, FunctionTerm>;

struct LassoComputation {
  std::vector<ComputationStep> prefix;
  std::vector<ComputationStep> loop;

  const ComputationStep& at(std::size_t t) const;
  std::size_t size() const { return prefix.size() + loop.size(); }
};

using HostFunction = std::function<Value(const std::vector<Value>&)>;

struct Interpretation {
  std::map<std::string, HostFunction> functions;
  std::map<std::string, HostFunction> predicates;
  std::map<std::string, Value> inits;
  std::map<std::string, std::function<Value(std::size_t)>> inputs;
  /// When set, unbound names get deterministic hash-based meanings.
  std::optional<std::uint64_t> fallback_seed;
  /// Counts every function/predicate/input call when non-null.
  std::size_t* call_counter = nullptr;

  Value apply_function(const std::string& name, const std::vector<Value>& args) const;
  bool apply_predicate(const std::string& name, const std::vector<Value>& args) const;
  Value init(const std::string& signal) const;
  Value input(const std::string& signal, std::size_t t) const;
};

/// Integer arithmetic (`increment`, `decrement`, `sub1`, `add`), comparisons
/// (`eq0`, `eq`, `lt`, `gt`), `event` (truthiness), integer inits 0, and
/// hash semantics with the given seed for every other name.
Interpretation builtin_interpretation(std::uint64_t seed = 0);

/// Name of the 0-ary root marking an initial value in eta-terms.
inline constexpr const char* kInitMarker = "init_s";

/// The evaluation function eta. Output signals unfold through the computation
/// history; at time 0 they become `init_s(s)`.
FunctionTerm eval_term(const LassoComputation& comp, const SymbolTable& symbols, std::size_t t,
                       const FunctionTerm& term);
PredicateTerm eval_term(const LassoComputation& comp, const SymbolTable& symbols, std::size_t t,
                        const PredicateTerm& term);

/// Concrete value of an eta-term; input leaves are read at time `t`.
Value concretize(const FunctionTerm& eta_term, const Interpretation& interp, std::size_t t);

struct HoldsOptions {
  /// Predicate atoms are evaluated on [0, horizon); 0 selects prefix + 2 * loop.
  std::size_t horizon = 0;
  bool strict = false;
};

bool tsl_holds(const LassoComputation& comp, const SymbolTable& symbols,
               const Interpretation& interp, const Formula& formula, HoldsOptions opts = {});

}  // namespace tslsynth
