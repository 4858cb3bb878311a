#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tslsynth/encoding.hpp"
#include "tslsynth/syntax.hpp"

namespace tslsynth {

/// Turns every 0-ary function and predicate name into an output signal that
/// keeps its value; a 0-ary predicate `p()` becomes `p1(p)` with a fresh name.
Formula kappa0(const Formula& formula);

/// Doubles the argument of every unary application.
Formula kappa1(const Formula& formula);

/// Right-folds the tail arguments of applications with arity above 2 through
/// one fresh binary function.
Formula kappa2(const Formula& formula);

Formula to_tsl2(const Formula& formula);

/// True iff every function and predicate application has exactly two arguments.
bool is_tsl2(const Formula& formula);

struct PcpInstance {
  std::vector<std::pair<std::string, std::string>> pairs;
};

PcpInstance parse_pcp(const std::string& json_text);

/// `mu("ab", s) = a(b(s))`
FunctionTerm mu(const std::string& word, const FunctionTerm& s);

Formula pcp_formula(const PcpInstance& instance);

/// n-bit counter over input `click` and outputs `c0..c{n-1}` that counts
/// clicks in the same cycle and wraps on overflow.
LtlSpec counter_ltl(int bits);

}  // namespace tslsynth
