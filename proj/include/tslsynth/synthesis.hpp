#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tslsynth/automata.hpp"
#include "tslsynth/encoding.hpp"

namespace tslsynth {

class TotalityError : public Error {
 public:
  using Error::Error;
};

class ExactlyOneViolation : public Error {
 public:
  using Error::Error;
};

/// Mealy machine with a full transition table; input valuations are bitmasks
/// over `inputs`, emitted valuations bitmasks over `outputs`. State 0 is initial.
struct MealyMachine {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::size_t states = 0;
  std::vector<Letter> emit;
  std::vector<std::uint32_t> next;

  std::size_t input_count() const { return std::size_t{1} << inputs.size(); }
  std::size_t index(std::size_t state, Letter input) const {
    return state * input_count() + std::size_t(input);
  }
  Letter output(std::size_t state, Letter input) const { return emit[index(state, input)]; }
  std::size_t successor(std::size_t state, Letter input) const {
    return next[index(state, input)];
  }

  friend bool operator==(const MealyMachine&, const MealyMachine&) = default;
};

/// Environment strategy as a Moore machine: each state fixes an input
/// valuation and moves on the system's answer (index into `answers`).
struct EnvironmentMachine {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Letter> answers;
  std::size_t states = 0;
  std::vector<Letter> input_of;
  std::vector<std::uint32_t> next;
};

enum class Verdict { Realizable, Unrealizable, Unknown };

const char* to_string(Verdict v);

struct Limits {
  int max_bound = 4;
  std::size_t max_states = 400000;
  double seconds = 120.0;
  std::size_t max_props = 20;
  std::size_t verify_samples = 100;
  std::uint64_t seed = 1;
  std::size_t search_nodes = 200000;
  int shrink_rounds = 1;
};

/// Reads `TSLSYNTH_LIMITS` (e.g. `bound=6,states=100000,seconds=30`) on top of `base`.
Limits limits_from_env(Limits base = {});
Limits parse_limits(const std::string& text, Limits base = {});

struct SynthesisResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<MealyMachine> machine;
  std::optional<EnvironmentMachine> witness;
  int bound = -1;
  std::size_t game_states = 0;
  std::string reason;
};

/// The game arena derived from a specification: input bits first, then
/// output bits; `answers` lists the output valuations satisfying
/// exactly-one, in tie-break order.
struct Arena {
  std::vector<std::string> props;
  std::size_t n_inputs = 0;
  std::vector<Letter> answers;
};

Arena make_arena(const LtlSpec& spec);

/// Solves the safety game on a counting automaton for the system (Mealy,
/// moves after the input). Returns the minimized strategy machine.
std::optional<MealyMachine> solve_safety_game(CountingAutomaton& aut, const Arena& arena,
                                              const Limits& limits, std::size_t* explored = nullptr);

/// Dual game: the environment commits to an input, then the system answers.
std::optional<EnvironmentMachine> solve_environment_game(CountingAutomaton& aut,
                                                         const Arena& arena, const Limits& limits,
                                                         std::size_t* explored = nullptr);

SynthesisResult synthesize(const LtlSpec& spec, const Limits& limits = {});
SynthesisResult check_unrealizable(const LtlSpec& spec, const Limits& limits = {});

MealyMachine minimize(const MealyMachine& m);
EnvironmentMachine minimize(const EnvironmentMachine& m);

/// Output word of `m` on an input lasso, as an exact lasso over input and output ids.
LassoWord run_lasso(const MealyMachine& m, const std::vector<Letter>& prefix,
                    const std::vector<Letter>& loop);
LassoWord run_lasso(const EnvironmentMachine& m, const std::vector<std::size_t>& prefix,
                    const std::vector<std::size_t>& loop);

/// Checks `samples` random input lassos against the formula; returns the
/// first failing word, if any.
std::optional<LassoWord> sample_verify(const MealyMachine& m, const Ltl& formula,
                                       std::size_t samples, std::uint64_t seed);

/// True iff every reachable emission has exactly one update prop per group.
bool exactly_one_holds(const MealyMachine& m, const LtlSpec& spec);

std::string export_mealy(const MealyMachine& m);
/// Throws TotalityError or ExactlyOneViolation (strict mode) on bad input.
MealyMachine import_mealy(const std::string& text, const LtlSpec* spec = nullptr,
                          bool permissive = false);

}  // namespace tslsynth
