#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tslsynth/ltl.hpp"
#include "tslsynth/syntax.hpp"

namespace tslsynth {

/// Valuation of an ordered proposition list, bit i for proposition i.
using Letter = std::uint64_t;

struct Cube {
  Letter pos = 0;
  Letter neg = 0;
  bool matches(Letter l) const { return (l & pos) == pos && (l & neg) == 0; }
  friend bool operator==(const Cube&, const Cube&) = default;
};

/// Disjoint cubes over `vars` variables covering exactly `minterms`.
std::vector<Cube> cube_cover(const std::vector<Letter>& minterms, std::size_t vars);

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error(what + " budget exceeded") {}
};

struct NbaEdge {
  Cube guard;
  int to;
};

/// State-based Buchi automaton over valuations of `props`.
struct Nba {
  std::vector<std::string> props;
  std::vector<std::vector<NbaEdge>> edges;
  std::vector<char> accepting;
  std::vector<int> initial;

  std::size_t size() const { return edges.size(); }
  std::vector<int> successors(int q, Letter l) const;
};

struct NbaOptions {
  std::size_t max_props = 20;
  std::size_t max_states = 100000;
};

/// Tableau construction; `props` fixes the letter layout and must contain
/// every proposition of the formula.
Nba ltl_to_nba(const Ltl& formula, const std::vector<std::string>& props, NbaOptions opts = {});

Letter letter_of(const std::set<std::string>& letter, const std::vector<std::string>& props);

bool nba_accepts(const Nba& nba, const LassoWord& word);

/// Deterministic safety automaton tracking, per NBA state, the maximal number
/// of accepting visits over all runs; runs exceeding `bound` lead to the sink.
class CountingAutomaton {
 public:
  CountingAutomaton(const Nba& nba, int bound, std::size_t max_states);

  static constexpr int kSink = -1;
  int initial() const { return 0; }
  int step(int state, Letter l);
  std::size_t size() const { return states_.size(); }
  const std::vector<std::pair<int, int>>& counters(int state) const { return states_[state]; }

 private:
  int intern(std::vector<std::pair<int, int>> s);
  const std::vector<int>& nba_successors(int q, Letter l);

  struct VecHash {
    std::size_t operator()(const std::vector<std::pair<int, int>>& v) const;
  };
  struct PairHash {
    std::size_t operator()(const std::pair<int, Letter>& p) const;
  };

  const Nba& nba_;
  int bound_;
  std::size_t max_states_;
  std::vector<std::vector<std::pair<int, int>>> states_;
  std::unordered_map<std::vector<std::pair<int, int>>, int, VecHash> index_;
  std::unordered_map<std::pair<int, Letter>, std::vector<int>, PairHash> succ_cache_;
};

}  // namespace tslsynth
