#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tslsynth/automata.hpp"
#include "tslsynth/semantics.hpp"
#include "tslsynth/synthesis.hpp"

namespace tslsynth {

/// One guarded row. `guard` ranges over the CFM's predicate list; an
/// `otherwise` row applies when no earlier row of its state matches.
struct CfmRow {
  std::size_t state = 0;
  Cube guard;
  bool otherwise = false;
  ComputationStep updates;
  std::size_t next = 0;

  friend bool operator==(const CfmRow&, const CfmRow&) = default;
};

struct Cfm {
  SymbolTable symbols;
  std::vector<PredicateTerm> predicates;
  std::vector<FunctionTerm> functions;
  std::size_t states = 0;
  std::vector<CfmRow> rows;

  const CfmRow& select(std::size_t state, Letter valuation) const;
  Letter valuation(const std::set<PredicateTerm>& predset) const;

  friend bool operator==(const Cfm&, const Cfm&) = default;
};

Cfm mealy_to_cfm(const MealyMachine& machine, const SymbolTable& symbols);

/// Re-encodes a CFM as a Mealy machine over predicate and update props.
/// Output props follow `spec` when given.
MealyMachine cfm_to_mealy(const Cfm& cfm, const LtlSpec* spec = nullptr);

std::pair<ComputationStep, std::size_t> cfm_step(const Cfm& cfm, std::size_t state,
                                                 const std::set<PredicateTerm>& predset);

struct CfmRun {
  std::vector<ComputationStep> steps;
  std::vector<std::size_t> states;
  /// values[t][s] is the value of output s read at time t.
  std::vector<std::map<std::string, Value>> values;
};

/// Closed-loop simulation against an interpretation.
CfmRun cfm_run(const Cfm& cfm, const Interpretation& interp, std::size_t steps);

/// Open-loop simulation from given predicate valuations.
CfmRun cfm_run_syntactic(const Cfm& cfm, const std::vector<Letter>& valuations);

struct CfmTraceStep {
  std::size_t state;
  Letter valuation;
  ComputationStep updates;
};

struct Counterexample {
  std::vector<CfmTraceStep> prefix;
  std::vector<CfmTraceStep> loop;
};

std::string describe(const Cfm& cfm, const Counterexample& cex);

/// Model checks the CFM against the propositional encoding of `formula`.
std::optional<Counterexample> verify_cfm(const Cfm& cfm, const Formula& formula,
                                         NbaOptions opts = {});

struct CfmStats {
  std::size_t states;
  std::size_t inputs;
  std::size_t outputs;
  std::size_t n_predicates;
  std::size_t n_functions;
};

CfmStats cfm_stats(const Cfm& cfm);

std::string export_cfm(const Cfm& cfm);
Cfm import_cfm(const std::string& text);

}  // namespace tslsynth
