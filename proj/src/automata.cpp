#include "tslsynth/automata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

namespace tslsynth {

std::vector<Cube> cube_cover(const std::vector<Letter>& minterms, std::size_t vars) {
  std::vector<Letter> sorted(minterms);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Cube> out;
  // Shannon split on variables in order; each leaf is a full subcube
  std::function<void(std::vector<Letter>, std::size_t, Cube)> rec =
      [&](std::vector<Letter> set, std::size_t var, Cube c) {
        if (set.empty()) return;
        if (set.size() == (std::size_t{1} << (vars - var))) {
          out.push_back(c);
          return;
        }
        std::vector<Letter> hi;
        std::vector<Letter> lo;
        for (Letter m : set) ((m >> var) & 1 ? hi : lo).push_back(m);
        Letter bit = Letter{1} << var;
        rec(std::move(hi), var + 1, Cube{c.pos | bit, c.neg});
        rec(std::move(lo), var + 1, Cube{c.pos, c.neg | bit});
      };
  rec(std::move(sorted), 0, Cube{});
  return out;
}

std::vector<int> Nba::successors(int q, Letter l) const {
  std::vector<int> out;
  for (const auto& e : edges[q]) {
    if (e.guard.matches(l)) out.push_back(e.to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Letter letter_of(const std::set<std::string>& letter, const std::vector<std::string>& props) {
  Letter l = 0;
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (letter.count(props[i])) l |= Letter{1} << i;
  }
  return l;
}

namespace {

enum class NOp { True, False, Lit, And, Or, Next, Until, Release };

struct NNode {
  NOp op;
  int prop = -1;
  bool negated = false;
  int a = -1;
  int b = -1;
};

class Closure {
 public:
  explicit Closure(const std::vector<std::string>& props) {
    for (std::size_t i = 0; i < props.size(); ++i) prop_index_[props[i]] = int(i);
  }

  int add(const Ltl& f) {
    switch (f.op()) {
      case LtlOp::True:
        return intern({NOp::True});
      case LtlOp::False:
        return intern({NOp::False});
      case LtlOp::Prop:
        return intern({NOp::Lit, prop(f.name()), false});
      case LtlOp::Not:
        return intern({NOp::Lit, prop(f.child().name()), true});
      case LtlOp::And:
        return intern({NOp::And, -1, false, add(f.lhs()), add(f.rhs())});
      case LtlOp::Or:
        return intern({NOp::Or, -1, false, add(f.lhs()), add(f.rhs())});
      case LtlOp::Next:
        return intern({NOp::Next, -1, false, add(f.child())});
      case LtlOp::Until:
        return intern({NOp::Until, -1, false, add(f.lhs()), add(f.rhs())});
      case LtlOp::Release:
        return intern({NOp::Release, -1, false, add(f.lhs()), add(f.rhs())});
    }
    throw Error("bad LTL operator");
  }

  const NNode& operator[](int i) const { return nodes_[i]; }
  const std::vector<int>& untils() const { return untils_; }
  int until_slot(int node) const { return slot_.at(node); }

 private:
  int prop(const std::string& name) const {
    auto it = prop_index_.find(name);
    if (it == prop_index_.end()) throw Error("proposition '" + name + "' not in alphabet");
    return it->second;
  }

  int intern(NNode n) {
    auto key = std::make_tuple(int(n.op), n.prop, n.negated, n.a, n.b);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = int(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(key, id);
    if (n.op == NOp::Until) {
      slot_[id] = int(untils_.size());
      untils_.push_back(id);
    }
    return id;
  }

  std::map<std::string, int> prop_index_;
  std::vector<NNode> nodes_;
  std::map<std::tuple<int, int, bool, int, int>, int> index_;
  std::vector<int> untils_;
  std::map<int, int> slot_;
};

struct Transition {
  Cube guard;
  std::vector<int> next;
  std::uint64_t postponed = 0;

  auto key() const { return std::tie(guard.pos, guard.neg, next, postponed); }
};

class Expander {
 public:
  explicit Expander(const Closure& cl) : cl_(cl) {}

  std::vector<Transition> expand(const std::vector<int>& now) {
    out_.clear();
    Branch b;
    b.todo = now;
    run(std::move(b));
    std::sort(out_.begin(), out_.end(),
              [](const Transition& x, const Transition& y) { return x.key() < y.key(); });
    out_.erase(std::unique(out_.begin(), out_.end(),
                           [](const Transition& x, const Transition& y) {
                             return x.key() == y.key();
                           }),
               out_.end());
    return out_;
  }

 private:
  struct Branch {
    std::vector<int> todo;
    std::vector<int> done;
    Cube guard;
    std::vector<int> next;
    std::uint64_t postponed = 0;
  };

  void run(Branch b) {
    while (!b.todo.empty()) {
      int f = b.todo.back();
      b.todo.pop_back();
      if (std::find(b.done.begin(), b.done.end(), f) != b.done.end()) continue;
      b.done.push_back(f);
      const NNode& n = cl_[f];
      switch (n.op) {
        case NOp::True:
          break;
        case NOp::False:
          return;
        case NOp::Lit: {
          Letter bit = Letter{1} << n.prop;
          if (n.negated) {
            if (b.guard.pos & bit) return;
            b.guard.neg |= bit;
          } else {
            if (b.guard.neg & bit) return;
            b.guard.pos |= bit;
          }
          break;
        }
        case NOp::And:
          b.todo.push_back(n.a);
          b.todo.push_back(n.b);
          break;
        case NOp::Next:
          b.next.push_back(n.a);
          break;
        case NOp::Or: {
          Branch alt = b;
          alt.todo.push_back(n.b);
          b.todo.push_back(n.a);
          run(std::move(alt));
          break;
        }
        case NOp::Until: {
          Branch alt = b;
          alt.todo.push_back(n.a);
          alt.next.push_back(f);
          alt.postponed |= std::uint64_t{1} << cl_.until_slot(f);
          b.todo.push_back(n.b);
          run(std::move(alt));
          break;
        }
        case NOp::Release: {
          Branch alt = b;
          alt.todo.push_back(n.b);
          alt.next.push_back(f);
          b.todo.push_back(n.a);
          b.todo.push_back(n.b);
          run(std::move(alt));
          break;
        }
      }
    }
    std::sort(b.next.begin(), b.next.end());
    b.next.erase(std::unique(b.next.begin(), b.next.end()), b.next.end());
    out_.push_back(Transition{b.guard, std::move(b.next), b.postponed});
  }

  const Closure& cl_;
  std::vector<Transition> out_;
};

}  // namespace

Nba ltl_to_nba(const Ltl& formula, const std::vector<std::string>& props, NbaOptions opts) {
  if (props.size() > opts.max_props || props.size() > 64) {
    throw Error("too many propositions (" + std::to_string(props.size()) + " > " +
                std::to_string(std::min<std::size_t>(opts.max_props, 64)) + ")");
  }
  Closure cl(props);
  const int root = cl.add(nnf(formula));
  const std::size_t m = cl.untils().size();
  if (m > 64) throw Error("too many until subformulas");

  Nba nba;
  nba.props = props;
  Expander ex(cl);
  std::map<std::pair<std::vector<int>, int>, int> index;
  std::vector<std::pair<std::vector<int>, int>> queue;
  auto state = [&](std::vector<int> set, int level) {
    auto key = std::make_pair(std::move(set), level);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (queue.size() >= opts.max_states) throw BudgetExceeded("automaton state");
    int id = int(queue.size());
    index.emplace(key, id);
    queue.push_back(key);
    nba.edges.emplace_back();
    nba.accepting.push_back(std::size_t(level) == m);
    return id;
  };
  nba.initial.push_back(state({root}, 0));
  std::map<std::vector<int>, std::vector<Transition>> expansions;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const auto [set, level] = queue[qi];
    auto it = expansions.find(set);
    if (it == expansions.end()) it = expansions.emplace(set, ex.expand(set)).first;
    const std::size_t base = std::size_t(level) == m ? 0 : std::size_t(level);
    for (const auto& t : it->second) {
      std::size_t j = base;
      while (j < m && !((t.postponed >> j) & 1)) ++j;
      int to = state(t.next, int(j));
      nba.edges[qi].push_back(NbaEdge{t.guard, to});
    }
  }
  return nba;
}

bool nba_accepts(const Nba& nba, const LassoWord& word) {
  if (word.loop.empty()) throw Error("lasso loop must be nonempty");
  const std::size_t n = word.size();
  const std::size_t Q = nba.size();
  std::vector<Letter> letters(n);
  for (std::size_t i = 0; i < n; ++i) letters[i] = letter_of(word.at(i), nba.props);
  auto succ_pos = [&](std::size_t i) { return i + 1 < n ? i + 1 : word.prefix.size(); };
  auto id = [&](int q, std::size_t pos) { return std::size_t(q) * n + pos; };

  // reachable product nodes
  std::vector<char> seen(Q * n, 0);
  std::vector<std::vector<std::size_t>> adj(Q * n);
  std::vector<std::size_t> stack;
  for (int q : nba.initial) {
    if (!seen[id(q, 0)]) {
      seen[id(q, 0)] = 1;
      stack.push_back(id(q, 0));
    }
  }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    int q = int(v / n);
    std::size_t pos = v % n;
    for (int q2 : nba.successors(q, letters[pos])) {
      std::size_t w = id(q2, succ_pos(pos));
      adj[v].push_back(w);
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }

  // iterative Tarjan
  const std::size_t N = Q * n;
  std::vector<int> idx(N, -1), low(N, 0);
  std::vector<char> on(N, 0);
  std::vector<std::size_t> st;
  int counter = 0;
  for (std::size_t s = 0; s < N; ++s) {
    if (!seen[s] || idx[s] != -1) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{s, 0}};
    idx[s] = low[s] = counter++;
    st.push_back(s);
    on[s] = 1;
    while (!call.empty()) {
      auto& [v, ei] = call.back();
      if (ei < adj[v].size()) {
        std::size_t w = adj[v][ei++];
        if (idx[w] == -1) {
          idx[w] = low[w] = counter++;
          st.push_back(w);
          on[w] = 1;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
        continue;
      }
      if (low[v] == idx[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = st.back();
          st.pop_back();
          on[w] = 0;
          comp.push_back(w);
        } while (w != v);
        bool cyclic = comp.size() > 1 ||
                      std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
        if (cyclic) {
          for (std::size_t c : comp) {
            if (nba.accepting[c / n]) return true;
          }
        }
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

std::size_t CountingAutomaton::VecHash::operator()(
    const std::vector<std::pair<int, int>>& v) const {
  std::size_t h = 1469598103934665603ULL;
  for (auto [q, c] : v) {
    h ^= std::size_t(q) * 0x9e3779b97f4a7c15ULL + std::size_t(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::size_t CountingAutomaton::PairHash::operator()(const std::pair<int, Letter>& p) const {
  return std::size_t(p.first) * 0x9e3779b97f4a7c15ULL ^ (p.second * 0xbf58476d1ce4e5b9ULL);
}

CountingAutomaton::CountingAutomaton(const Nba& nba, int bound, std::size_t max_states)
    : nba_(nba), bound_(bound), max_states_(max_states) {
  std::map<int, int> init;
  for (int q : nba.initial) init[q] = nba.accepting[q] ? 1 : 0;
  std::vector<std::pair<int, int>> s(init.begin(), init.end());
  // an initial count above the bound still starts in a regular state so that
  // index 0 is always the initial state; step() sends it to the sink
  intern(std::move(s));
}

int CountingAutomaton::intern(std::vector<std::pair<int, int>> s) {
  auto it = index_.find(s);
  if (it != index_.end()) return it->second;
  if (states_.size() >= max_states_) throw BudgetExceeded("counting automaton state");
  int id = int(states_.size());
  index_.emplace(s, id);
  states_.push_back(std::move(s));
  return id;
}

const std::vector<int>& CountingAutomaton::nba_successors(int q, Letter l) {
  auto key = std::make_pair(q, l);
  auto it = succ_cache_.find(key);
  if (it != succ_cache_.end()) return it->second;
  return succ_cache_.emplace(key, nba_.successors(q, l)).first->second;
}

int CountingAutomaton::step(int state, Letter l) {
  if (state == kSink) return kSink;
  std::map<int, int> next;
  for (auto [q, c] : states_[state]) {
    if (c > bound_) return kSink;
    for (int q2 : nba_successors(q, l)) {
      int c2 = c + (nba_.accepting[q2] ? 1 : 0);
      if (c2 > bound_) return kSink;
      auto [it, fresh] = next.emplace(q2, c2);
      if (!fresh) it->second = std::max(it->second, c2);
    }
  }
  return intern(std::vector<std::pair<int, int>>(next.begin(), next.end()));
}

}  // namespace tslsynth
