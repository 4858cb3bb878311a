#include "tslsynth/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace tslsynth {

using json = nlohmann::json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Realizable:
      return "Realizable";
    case Verdict::Unrealizable:
      return "Unrealizable";
    case Verdict::Unknown:
      return "Unknown";
  }
  return "?";
}

Limits parse_limits(const std::string& text, Limits base) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("malformed limit '" + item + "'");
    std::string key = item.substr(0, eq);
    std::string val = item.substr(eq + 1);
    try {
      if (key == "bound") {
        base.max_bound = std::stoi(val);
      } else if (key == "states") {
        base.max_states = std::stoull(val);
      } else if (key == "seconds") {
        base.seconds = std::stod(val);
      } else if (key == "props") {
        base.max_props = std::stoull(val);
      } else if (key == "samples") {
        base.verify_samples = std::stoull(val);
      } else if (key == "shrink") {
        base.shrink_rounds = std::stoi(val);
      } else if (key == "nodes") {
        base.search_nodes = std::stoull(val);
      } else {
        throw Error("unknown limit '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw Error("malformed limit '" + item + "'");
    }
  }
  if (base.max_bound < 0 || base.max_states == 0 || base.seconds <= 0) {
    throw Error("limits must be positive");
  }
  return base;
}

Limits limits_from_env(Limits base) {
  if (const char* env = std::getenv("TSLSYNTH_LIMITS")) return parse_limits(env, base);
  return base;
}

Arena make_arena(const LtlSpec& spec) {
  Arena a;
  a.props = spec.input_ids();
  a.n_inputs = a.props.size();
  for (const auto& id : spec.output_ids()) a.props.push_back(id);

  struct Choice {
    Letter letter;
    int changes;
    std::vector<std::string> ids;
  };
  std::vector<Choice> choices{{0, 0, {}}};
  std::size_t bit = a.n_inputs;
  for (const auto& g : spec.groups) {
    std::vector<Choice> next;
    for (const auto& c : choices) {
      for (std::size_t i = 0; i < g.props.size(); ++i) {
        Choice d = c;
        d.letter |= Letter{1} << (bit + i);
        d.changes += i == g.identity_index ? 0 : 1;
        d.ids.push_back(g.props[i].id);
        next.push_back(std::move(d));
      }
    }
    choices = std::move(next);
    bit += g.props.size();
  }
  for (std::size_t f = 0; f < spec.free_outputs.size(); ++f, ++bit) {
    std::vector<Choice> next;
    for (const auto& c : choices) {
      next.push_back(c);
      Choice d = c;
      d.letter |= Letter{1} << bit;
      d.changes += 1;
      d.ids.push_back(spec.free_outputs[f]);
      next.push_back(std::move(d));
    }
    choices = std::move(next);
  }
  // least change first, then lexicographic by prop id
  std::stable_sort(choices.begin(), choices.end(), [](const Choice& x, const Choice& y) {
    if (x.changes != y.changes) return x.changes < y.changes;
    return x.ids < y.ids;
  });
  for (const auto& c : choices) a.answers.push_back(c.letter);
  return a;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point end;
  explicit Deadline(double seconds)
      : end(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(seconds))) {}
  void check() const {
    if (Clock::now() > end) throw BudgetExceeded("time");
  }
};

// Explores the reachable game graph; succ[s][i * answers + o].
struct Graph {
  std::vector<std::vector<int>> succ;
};

Graph explore(CountingAutomaton& aut, const Arena& arena, const Limits& limits,
              const Deadline& deadline) {
  const std::size_t ni = std::size_t{1} << arena.n_inputs;
  const std::size_t no = arena.answers.size();
  Graph g;
  for (std::size_t s = 0; s < aut.size(); ++s) {
    if ((s & 63) == 0) deadline.check();
    if (aut.size() > limits.max_states) throw BudgetExceeded("game state");
    std::vector<int> row(ni * no);
    for (std::size_t i = 0; i < ni; ++i) {
      for (std::size_t o = 0; o < no; ++o) {
        row[i * no + o] = aut.step(int(s), Letter(i) | arena.answers[o]);
      }
    }
    g.succ.push_back(std::move(row));
  }
  return g;
}

// Backtracking search for a strategy with exactly `size` machine states
// whose product with the game stays in the winning region.
struct SmallStrategy {
  std::vector<int> answer;
  std::vector<int> next;
};

class StrategySearch {
 public:
  StrategySearch(const Graph& g, const std::vector<char>& win, std::size_t size, std::size_t ni,
                 std::size_t no, std::size_t budget, const Deadline& deadline)
      : g_(g), win_(win), size_(size), ni_(ni), no_(no), budget_(budget), deadline_(deadline),
        answer_(size * ni, -1), next_(size * ni, -1), seen_(size * g.succ.size(), 0),
        members_(size) {}

  std::optional<SmallStrategy> run() {
    if (!add(0, 0) || !search()) return std::nullopt;
    return SmallStrategy{answer_, next_};
  }

 private:
  bool good(int t) const { return t != CountingAutomaton::kSink && win_[t]; }
  int succ(int q, std::size_t i, int o) const { return g_.succ[q][i * no_ + std::size_t(o)]; }
  bool member(std::size_t m, int q) const { return seen_[m * g_.succ.size() + std::size_t(q)]; }

  // Adds (m, q) and closes the pair set under the assigned slots.
  bool add(std::size_t m, int q) {
    std::vector<std::pair<std::size_t, int>> work{{m, q}};
    while (!work.empty()) {
      auto [m1, q1] = work.back();
      work.pop_back();
      if (member(m1, q1)) continue;
      seen_[m1 * g_.succ.size() + std::size_t(q1)] = 1;
      trail_.emplace_back(m1, q1);
      members_[m1].push_back(q1);
      for (std::size_t i = 0; i < ni_; ++i) {
        const std::size_t slot = m1 * ni_ + i;
        if (answer_[slot] < 0) continue;
        const int t = succ(q1, i, answer_[slot]);
        if (!good(t)) return false;
        work.emplace_back(std::size_t(next_[slot]), t);
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [m, q] = trail_.back();
      seen_[m * g_.succ.size() + std::size_t(q)] = 0;
      members_[m].pop_back();
      trail_.pop_back();
    }
  }

  std::vector<int> options(std::size_t m, std::size_t i) const {
    std::vector<int> out;
    for (std::size_t o = 0; o < no_; ++o) {
      bool ok = true;
      for (int q : members_[m]) {
        if (!good(succ(q, i, int(o)))) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(int(o));
    }
    return out;
  }

  std::size_t fresh_pairs(std::size_t m, std::size_t i, int o, std::size_t to) const {
    std::size_t n = 0;
    for (int q : members_[m]) n += !member(to, succ(q, i, o));
    return n;
  }

  bool search() {
    if (++nodes_ > budget_) throw BudgetExceeded("strategy search");
    if ((nodes_ & 255) == 0) deadline_.check();
    std::size_t best = answer_.size();
    std::vector<int> best_opts;
    std::size_t used = 0;
    for (std::size_t m = 0; m < size_; ++m) {
      if (members_[m].empty()) continue;
      used = m + 1;
      for (std::size_t i = 0; i < ni_; ++i) {
        if (answer_[m * ni_ + i] >= 0) continue;
        auto opts = options(m, i);
        if (best == answer_.size() || opts.size() < best_opts.size()) {
          best = m * ni_ + i;
          best_opts = std::move(opts);
          if (best_opts.empty()) return false;
        }
      }
    }
    if (best == answer_.size()) return true;
    const std::size_t m = best / ni_;
    const std::size_t i = best % ni_;
    std::vector<std::tuple<std::size_t, int, std::size_t>> moves;
    for (int o : best_opts) {
      for (std::size_t to = 0; to < std::min(size_, used + 1); ++to) {
        moves.emplace_back(fresh_pairs(m, i, o, to), o, to);
      }
    }
    std::stable_sort(moves.begin(), moves.end(),
                     [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
    const std::vector<int> from = members_[m];
    for (const auto& [cost, o, to] : moves) {
      const std::size_t mark = trail_.size();
      answer_[best] = o;
      next_[best] = int(to);
      bool ok = true;
      for (int q : from) {
        if (!(ok = add(to, succ(q, i, o)))) break;
      }
      if (ok && search()) return true;
      undo(mark);
    }
    answer_[best] = -1;
    next_[best] = -1;
    return false;
  }

  const Graph& g_;
  const std::vector<char>& win_;
  std::size_t size_, ni_, no_, budget_;
  const Deadline& deadline_;
  std::vector<int> answer_, next_;
  std::vector<char> seen_;
  std::vector<std::vector<int>> members_;
  std::vector<std::pair<std::size_t, int>> trail_;
  std::size_t nodes_ = 0;
};

std::optional<SmallStrategy> small_strategy(const Graph& g, const std::vector<char>& win,
                                            std::size_t size, std::size_t ni, std::size_t no,
                                            std::size_t budget, const Deadline& deadline) {
  try {
    return StrategySearch(g, win, size, ni, no, budget, deadline).run();
  } catch (const BudgetExceeded& e) {
    if (std::string(e.what()).find("strategy") == std::string::npos) throw;
    return std::nullopt;
  }
}

}  // namespace

std::optional<MealyMachine> solve_safety_game(CountingAutomaton& aut, const Arena& arena,
                                              const Limits& limits, std::size_t* explored) {
  Deadline deadline(limits.seconds);
  Graph g = explore(aut, arena, limits, deadline);
  if (explored) *explored = g.succ.size();
  const std::size_t n = g.succ.size();
  const std::size_t ni = std::size_t{1} << arena.n_inputs;
  const std::size_t no = arena.answers.size();
  std::vector<char> win(n, 1);
  auto good = [&](int t) { return t != CountingAutomaton::kSink && win[t]; };
  bool changed = true;
  while (changed) {
    deadline.check();
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!win[s]) continue;
      for (std::size_t i = 0; i < ni && win[s]; ++i) {
        bool ok = false;
        for (std::size_t o = 0; o < no && !ok; ++o) ok = good(g.succ[s][i * no + o]);
        if (!ok) {
          win[s] = 0;
          changed = true;
        }
      }
    }
  }
  if (!win[0]) return std::nullopt;

  MealyMachine m;
  m.inputs.assign(arena.props.begin(), arena.props.begin() + arena.n_inputs);
  m.outputs.assign(arena.props.begin() + arena.n_inputs, arena.props.end());

  // machine states are the game states reachable under the strategy
  std::map<int, std::uint32_t> id{{0, 0}};
  std::vector<int> order{0};
  for (std::size_t k = 0; k < order.size(); ++k) {
    int s = order[k];
    for (std::size_t i = 0; i < ni; ++i) {
      std::size_t o = 0;
      while (!good(g.succ[s][i * no + o])) ++o;
      int t = g.succ[s][i * no + o];
      auto [it, fresh] = id.emplace(t, std::uint32_t(order.size()));
      if (fresh) order.push_back(t);
      m.emit.push_back(arena.answers[o] >> arena.n_inputs);
      m.next.push_back(it->second);
    }
  }
  m.states = order.size();
  MealyMachine greedy = minimize(m);
  for (std::size_t size = 1; size < greedy.states; ++size) {
    auto small = small_strategy(g, win, size, ni, no, limits.search_nodes, deadline);
    if (!small) continue;
    m.emit.clear();
    m.next.clear();
    for (std::size_t k = 0; k < small->answer.size(); ++k) {
      int o = small->answer[k] < 0 ? 0 : small->answer[k];
      m.emit.push_back(arena.answers[o] >> arena.n_inputs);
      m.next.push_back(small->next[k] < 0 ? 0 : std::uint32_t(small->next[k]));
    }
    m.states = size;
    return minimize(m);
  }
  return greedy;
}

std::optional<EnvironmentMachine> solve_environment_game(CountingAutomaton& aut,
                                                         const Arena& arena, const Limits& limits,
                                                         std::size_t* explored) {
  Deadline deadline(limits.seconds);
  Graph g = explore(aut, arena, limits, deadline);
  if (explored) *explored = g.succ.size();
  const std::size_t n = g.succ.size();
  const std::size_t ni = std::size_t{1} << arena.n_inputs;
  const std::size_t no = arena.answers.size();
  std::vector<char> win(n, 1);
  auto good = [&](int t) { return t != CountingAutomaton::kSink && win[t]; };
  auto forcing = [&](std::size_t s, std::size_t i) {
    for (std::size_t o = 0; o < no; ++o) {
      if (!good(g.succ[s][i * no + o])) return false;
    }
    return true;
  };
  bool changed = true;
  while (changed) {
    deadline.check();
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (!win[s]) continue;
      bool ok = false;
      for (std::size_t i = 0; i < ni && !ok; ++i) ok = forcing(s, i);
      if (!ok) {
        win[s] = 0;
        changed = true;
      }
    }
  }
  if (!win[0]) return std::nullopt;

  EnvironmentMachine m;
  m.inputs.assign(arena.props.begin(), arena.props.begin() + arena.n_inputs);
  m.outputs.assign(arena.props.begin() + arena.n_inputs, arena.props.end());
  for (Letter a : arena.answers) m.answers.push_back(a >> arena.n_inputs);
  std::map<int, std::uint32_t> id{{0, 0}};
  std::vector<int> order{0};
  for (std::size_t k = 0; k < order.size(); ++k) {
    int s = order[k];
    std::size_t i = 0;
    while (!forcing(s, i)) ++i;
    m.input_of.push_back(Letter(i));
    for (std::size_t o = 0; o < no; ++o) {
      int t = g.succ[s][i * no + o];
      auto [it, fresh] = id.emplace(t, std::uint32_t(order.size()));
      if (fresh) order.push_back(t);
      m.next.push_back(it->second);
    }
  }
  m.states = order.size();
  return minimize(m);
}

namespace {

// Partition refinement; `label(s)` is the local signature of state s and
// `succ(s)` its successor list. Returns block ids renumbered in BFS order.
template <typename Label, typename Succ>
std::vector<std::uint32_t> refine(std::size_t n, Label label, Succ succ) {
  std::vector<std::uint32_t> block(n);
  {
    std::map<decltype(label(0)), std::uint32_t> ids;
    for (std::size_t s = 0; s < n; ++s) {
      block[s] = ids.emplace(label(s), std::uint32_t(ids.size())).first->second;
    }
  }
  while (true) {
    std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::uint32_t> ids;
    std::vector<std::uint32_t> nb(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::uint32_t> sig;
      for (auto t : succ(s)) sig.push_back(block[t]);
      nb[s] = ids.emplace(std::make_pair(block[s], sig), std::uint32_t(ids.size())).first->second;
    }
    std::size_t before = *std::max_element(block.begin(), block.end()) + 1;
    block = std::move(nb);
    if (ids.size() == before) break;
  }
  // renumber in BFS order from state 0
  std::vector<std::int64_t> renum(n, -1);
  std::vector<std::uint32_t> out(n);
  std::vector<std::size_t> queue{0};
  std::map<std::uint32_t, std::uint32_t> seen{{block[0], 0}};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (auto t : succ(queue[k])) {
      if (seen.emplace(block[t], std::uint32_t(seen.size())).second) queue.push_back(t);
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    auto it = seen.find(block[s]);
    out[s] = it == seen.end() ? std::uint32_t(-1) : it->second;
  }
  return out;
}

}  // namespace

MealyMachine minimize(const MealyMachine& m) {
  const std::size_t ni = m.input_count();
  auto label = [&](std::size_t s) {
    return std::vector<Letter>(m.emit.begin() + s * ni, m.emit.begin() + (s + 1) * ni);
  };
  auto succ = [&](std::size_t s) {
    return std::vector<std::uint32_t>(m.next.begin() + s * ni, m.next.begin() + (s + 1) * ni);
  };
  auto block = refine(m.states, label, succ);
  std::uint32_t count = 0;
  for (auto b : block) {
    if (b != std::uint32_t(-1)) count = std::max(count, b + 1);
  }
  MealyMachine out;
  out.inputs = m.inputs;
  out.outputs = m.outputs;
  out.states = count;
  out.emit.assign(count * ni, 0);
  out.next.assign(count * ni, 0);
  for (std::size_t s = 0; s < m.states; ++s) {
    if (block[s] == std::uint32_t(-1)) continue;
    for (std::size_t i = 0; i < ni; ++i) {
      out.emit[block[s] * ni + i] = m.emit[s * ni + i];
      out.next[block[s] * ni + i] = block[m.next[s * ni + i]];
    }
  }
  return out;
}

EnvironmentMachine minimize(const EnvironmentMachine& m) {
  const std::size_t no = m.answers.size();
  auto label = [&](std::size_t s) { return m.input_of[s]; };
  auto succ = [&](std::size_t s) {
    return std::vector<std::uint32_t>(m.next.begin() + s * no, m.next.begin() + (s + 1) * no);
  };
  auto block = refine(m.states, label, succ);
  std::uint32_t count = 0;
  for (auto b : block) {
    if (b != std::uint32_t(-1)) count = std::max(count, b + 1);
  }
  EnvironmentMachine out = m;
  out.states = count;
  out.input_of.assign(count, 0);
  out.next.assign(count * no, 0);
  for (std::size_t s = 0; s < m.states; ++s) {
    if (block[s] == std::uint32_t(-1)) continue;
    out.input_of[block[s]] = m.input_of[s];
    for (std::size_t o = 0; o < no; ++o) out.next[block[s] * no + o] = block[m.next[s * no + o]];
  }
  return out;
}

namespace {

std::set<std::string> letter_set(Letter in, const std::vector<std::string>& inputs, Letter out,
                                 const std::vector<std::string>& outputs) {
  std::set<std::string> s;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if ((in >> i) & 1) s.insert(inputs[i]);
  }
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if ((out >> i) & 1) s.insert(outputs[i]);
  }
  return s;
}

// Runs a deterministic closed loop over a lasso of environment moves until
// the (machine state, loop position) pair repeats.
template <typename Step>
LassoWord close_loop(std::size_t prefix_len, std::size_t loop_len, Step step) {
  LassoWord w;
  std::size_t state = 0;
  for (std::size_t t = 0; t < prefix_len; ++t) w.prefix.push_back(step(state, t));
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  std::vector<std::set<std::string>> tail;
  for (std::size_t k = 0;; ++k) {
    std::size_t pos = k % loop_len;
    auto key = std::make_pair(state, pos);
    if (auto it = seen.find(key); it != seen.end()) {
      for (std::size_t j = 0; j < it->second; ++j) w.prefix.push_back(tail[j]);
      w.loop.assign(tail.begin() + it->second, tail.end());
      return w;
    }
    seen.emplace(key, k);
    tail.push_back(step(state, prefix_len + pos));
  }
}

}  // namespace

LassoWord run_lasso(const MealyMachine& m, const std::vector<Letter>& prefix,
                    const std::vector<Letter>& loop) {
  if (loop.empty()) throw Error("lasso loop must be nonempty");
  return close_loop(prefix.size(), loop.size(), [&](std::size_t& s, std::size_t t) {
    Letter in = t < prefix.size() ? prefix[t] : loop[t - prefix.size()];
    auto letter = letter_set(in, m.inputs, m.output(s, in), m.outputs);
    s = m.successor(s, in);
    return letter;
  });
}

LassoWord run_lasso(const EnvironmentMachine& m, const std::vector<std::size_t>& prefix,
                    const std::vector<std::size_t>& loop) {
  if (loop.empty()) throw Error("lasso loop must be nonempty");
  return close_loop(prefix.size(), loop.size(), [&](std::size_t& s, std::size_t t) {
    std::size_t o = t < prefix.size() ? prefix[t] : loop[t - prefix.size()];
    auto letter = letter_set(m.input_of[s], m.inputs, m.answers[o], m.outputs);
    s = m.next[s * m.answers.size() + o];
    return letter;
  });
}

std::optional<LassoWord> sample_verify(const MealyMachine& m, const Ltl& formula,
                                       std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Letter mask = m.input_count() - 1;
  for (std::size_t k = 0; k < samples; ++k) {
    std::vector<Letter> prefix(rng() % 5);
    std::vector<Letter> loop(1 + rng() % 5);
    for (auto& l : prefix) l = rng() & mask;
    for (auto& l : loop) l = rng() & mask;
    auto w = run_lasso(m, prefix, loop);
    if (!ltl_lasso_holds(w, formula)) return w;
  }
  return std::nullopt;
}

namespace {

std::optional<std::vector<std::set<std::string>>> witness_violation(const EnvironmentMachine& m,
                                                                   const Ltl& formula,
                                                                   std::size_t samples,
                                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    std::vector<std::size_t> prefix(rng() % 5);
    std::vector<std::size_t> loop(1 + rng() % 5);
    for (auto& o : prefix) o = rng() % m.answers.size();
    for (auto& o : loop) o = rng() % m.answers.size();
    auto w = run_lasso(m, prefix, loop);
    if (ltl_lasso_holds(w, formula)) return w.loop;
  }
  return std::nullopt;
}

}  // namespace

bool exactly_one_holds(const MealyMachine& m, const LtlSpec& spec) {
  std::vector<std::vector<std::size_t>> group_bits;
  for (const auto& g : spec.groups) {
    std::vector<std::size_t> bits;
    for (const auto& p : g.props) {
      auto it = std::find(m.outputs.begin(), m.outputs.end(), p.id);
      if (it == m.outputs.end()) return false;
      bits.push_back(std::size_t(it - m.outputs.begin()));
    }
    group_bits.push_back(std::move(bits));
  }
  for (Letter e : m.emit) {
    for (const auto& bits : group_bits) {
      int on = 0;
      for (auto b : bits) on += (e >> b) & 1;
      if (on != 1) return false;
    }
  }
  return true;
}

namespace {

// A machine found at bound k may have a smaller equivalent that needs a
// larger bound; a few extra rounds look for one.
void shrink(SynthesisResult& res, const Nba& negated, const Arena& arena, const LtlSpec& spec,
            const Limits& limits, const Deadline& deadline) {
  const int last = std::min(limits.max_bound, res.bound + limits.shrink_rounds);
  for (int k = res.bound + 1; k <= last && res.machine->states > 1; ++k) {
    Limits left = limits;
    left.seconds = std::chrono::duration<double>(deadline.end - Clock::now()).count() / 2;
    if (left.seconds <= 0) return;
    try {
      CountingAutomaton aut(negated, k, limits.max_states);
      std::size_t explored = 0;
      auto m = solve_safety_game(aut, arena, left, &explored);
      res.game_states += explored;
      if (m && m->states < res.machine->states &&
          !sample_verify(*m, spec.formula(), limits.verify_samples, limits.seed)) {
        res.machine = std::move(m);
        res.bound = k;
      }
    } catch (const BudgetExceeded&) {
      return;
    }
  }
}

SynthesisResult run(const LtlSpec& spec, const Limits& limits, bool system_rounds) {
  SynthesisResult res;
  const Arena arena = make_arena(spec);
  const Deadline deadline(limits.seconds);
  NbaOptions nopts{limits.max_props, limits.max_states};
  try {
    // plays only use exactly-one answers, so the constraint holds on every play
    Nba negated = ltl_to_nba(Ltl::lnot(spec.body), arena.props, nopts);
    std::optional<Nba> positive;
    for (int k = 0; k <= limits.max_bound; ++k) {
      Limits left = limits;
      left.seconds =
          std::chrono::duration<double>(deadline.end - Clock::now()).count();
      if (left.seconds <= 0) throw BudgetExceeded("time");
      if (system_rounds) {
        CountingAutomaton aut(negated, k, limits.max_states);
        std::size_t explored = 0;
        auto m = solve_safety_game(aut, arena, left, &explored);
        res.game_states += explored;
        if (m) {
          if (auto bad = sample_verify(*m, spec.formula(), limits.verify_samples, limits.seed)) {
            throw Error("internal error: synthesized machine violates the specification");
          }
          res.verdict = Verdict::Realizable;
          res.machine = std::move(m);
          res.bound = k;
          shrink(res, negated, arena, spec, limits, deadline);
          return res;
        }
        left.seconds = std::chrono::duration<double>(deadline.end - Clock::now()).count();
        if (left.seconds <= 0) throw BudgetExceeded("time");
      }
      if (!positive) positive = ltl_to_nba(spec.body, arena.props, nopts);
      CountingAutomaton dual(*positive, k, limits.max_states);
      std::size_t explored = 0;
      auto w = solve_environment_game(dual, arena, left, &explored);
      res.game_states += explored;
      if (w) {
        if (witness_violation(*w, spec.formula(), limits.verify_samples, limits.seed)) {
          throw Error("internal error: environment witness does not refute the specification");
        }
        res.verdict = Verdict::Unrealizable;
        res.witness = std::move(w);
        res.bound = k;
        return res;
      }
    }
    res.reason = "bound limit reached";
  } catch (const BudgetExceeded& e) {
    res.reason = e.what();
  }
  return res;
}

}  // namespace

SynthesisResult synthesize(const LtlSpec& spec, const Limits& limits) {
  return run(spec, limits, true);
}

SynthesisResult check_unrealizable(const LtlSpec& spec, const Limits& limits) {
  return run(spec, limits, false);
}

// ---------------------------------------------------------------------------
// Mealy JSON

std::string export_mealy(const MealyMachine& m) {
  json j;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["states"] = m.states;
  j["init"] = 0;
  json trans = json::array();
  const std::size_t ni = m.input_count();
  for (std::size_t s = 0; s < m.states; ++s) {
    // group input valuations by behaviour and cover each group with cubes
    std::map<std::pair<Letter, std::uint32_t>, std::vector<Letter>> groups;
    std::vector<std::pair<Letter, std::uint32_t>> order;
    for (std::size_t i = 0; i < ni; ++i) {
      auto key = std::make_pair(m.emit[s * ni + i], m.next[s * ni + i]);
      auto [it, fresh] = groups.try_emplace(key);
      if (fresh) order.push_back(key);
      it->second.push_back(Letter(i));
    }
    for (const auto& key : order) {
      for (const auto& c : cube_cover(groups[key], m.inputs.size())) {
        json given = json::object();
        for (std::size_t b = 0; b < m.inputs.size(); ++b) {
          if ((c.pos >> b) & 1) given[m.inputs[b]] = true;
          if ((c.neg >> b) & 1) given[m.inputs[b]] = false;
        }
        json emit = json::array();
        for (std::size_t b = 0; b < m.outputs.size(); ++b) {
          if ((key.first >> b) & 1) emit.push_back(m.outputs[b]);
        }
        trans.push_back({{"from", s}, {"given", given}, {"emit", emit}, {"to", key.second}});
      }
    }
  }
  j["transitions"] = trans;
  return j.dump(2);
}

MealyMachine import_mealy(const std::string& text, const LtlSpec* spec, bool permissive) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid Mealy JSON: ") + e.what());
  }
  MealyMachine m;
  try {
    m.inputs = j.at("inputs").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.states = j.at("states").get<std::size_t>();
    if (j.value("init", 0) != 0) throw Error("initial state must be 0");
    if (m.inputs.size() > 20 || m.outputs.size() > 64) throw Error("too many propositions");
    if (m.states == 0) throw Error("machine needs at least one state");
    const std::size_t ni = m.input_count();
    std::vector<char> defined(m.states * ni, 0);
    m.emit.assign(m.states * ni, 0);
    m.next.assign(m.states * ni, 0);
    for (const auto& t : j.at("transitions")) {
      std::size_t from = t.at("from").get<std::size_t>();
      std::size_t to = t.at("to").get<std::size_t>();
      if (from >= m.states || to >= m.states) throw Error("state index out of range");
      Cube c;
      for (const auto& [id, val] : t.at("given").items()) {
        auto it = std::find(m.inputs.begin(), m.inputs.end(), id);
        if (it == m.inputs.end()) throw Error("unknown input '" + id + "'");
        Letter bit = Letter{1} << (it - m.inputs.begin());
        (val.get<bool>() ? c.pos : c.neg) |= bit;
      }
      Letter out = 0;
      for (const auto& id : t.at("emit")) {
        auto it = std::find(m.outputs.begin(), m.outputs.end(), id.get<std::string>());
        if (it == m.outputs.end()) throw Error("unknown output '" + id.get<std::string>() + "'");
        out |= Letter{1} << (it - m.outputs.begin());
      }
      for (std::size_t i = 0; i < ni; ++i) {
        if (!c.matches(Letter(i))) continue;
        if (defined[from * ni + i]) {
          throw TotalityError("overlapping transitions in state " + std::to_string(from));
        }
        defined[from * ni + i] = 1;
        m.emit[from * ni + i] = out;
        m.next[from * ni + i] = std::uint32_t(to);
      }
    }
    for (std::size_t k = 0; k < defined.size(); ++k) {
      if (!defined[k]) {
        throw TotalityError("state " + std::to_string(k / ni) +
                            " has no transition for input valuation " + std::to_string(k % ni));
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("Mealy JSON schema violation: ") + e.what());
  }
  if (spec && !permissive && !exactly_one_holds(m, *spec)) {
    throw ExactlyOneViolation("machine violates exactly-one update per signal");
  }
  return m;
}

}  // namespace tslsynth
