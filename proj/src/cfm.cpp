#include "tslsynth/cfm.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"
#include "tslsynth/encoding.hpp"

namespace tslsynth {

using json = nlohmann::json;

const CfmRow& Cfm::select(std::size_t state, Letter valuation) const {
  for (const auto& r : rows) {
    if (r.state == state && (r.otherwise || r.guard.matches(valuation))) return r;
  }
  throw Error("CFM has no row for state " + std::to_string(state));
}

Letter Cfm::valuation(const std::set<PredicateTerm>& predset) const {
  Letter l = 0;
  for (std::size_t i = 0; i < predicates.size(); ++i) {
    if (predset.count(predicates[i])) l |= Letter{1} << i;
  }
  return l;
}

namespace {

void collect_functions(const FunctionTerm& t, std::set<FunctionTerm>& seen,
                       std::vector<FunctionTerm>& out) {
  if (!t.applied) return;
  for (const auto& a : t.args) collect_functions(a, seen, out);
  if (seen.insert(t).second) out.push_back(t);
}

std::vector<FunctionTerm> function_terms(const std::vector<CfmRow>& rows) {
  std::set<FunctionTerm> seen;
  std::vector<FunctionTerm> out;
  for (const auto& r : rows) {
    for (const auto& [s, t] : r.updates) collect_functions(t, seen, out);
  }
  return out;
}

std::vector<CfmRow> compress(std::size_t states, std::size_t npreds,
                             const std::function<std::pair<ComputationStep, std::size_t>(
                                 std::size_t, Letter)>& behaviour) {
  std::vector<CfmRow> rows;
  const std::size_t nv = std::size_t{1} << npreds;
  for (std::size_t s = 0; s < states; ++s) {
    std::vector<std::pair<ComputationStep, std::size_t>> keys;
    std::vector<std::vector<Letter>> members;
    for (std::size_t v = 0; v < nv; ++v) {
      auto b = behaviour(s, Letter(v));
      auto it = std::find(keys.begin(), keys.end(), b);
      if (it == keys.end()) {
        keys.push_back(b);
        members.emplace_back();
        it = keys.end() - 1;
      }
      members[it - keys.begin()].push_back(Letter(v));
    }
    // the group holding the all-false valuation becomes the fallback row
    for (std::size_t g = 1; g < keys.size(); ++g) {
      for (const auto& c : cube_cover(members[g], npreds)) {
        rows.push_back(CfmRow{s, c, false, keys[g].first, keys[g].second});
      }
    }
    rows.push_back(CfmRow{s, Cube{}, true, keys[0].first, keys[0].second});
  }
  return rows;
}

}  // namespace

Cfm mealy_to_cfm(const MealyMachine& machine, const SymbolTable& symbols) {
  Cfm cfm;
  cfm.symbols = symbols;
  cfm.states = machine.states;
  for (const auto& id : machine.inputs) {
    auto t = unmangle(id);
    if (!std::holds_alternative<PredicateTerm>(t)) {
      throw Error("machine input '" + id + "' is not a predicate term");
    }
    cfm.predicates.push_back(std::get<PredicateTerm>(t));
  }
  std::vector<UpdateTerm> outs;
  for (const auto& id : machine.outputs) {
    auto t = unmangle(id);
    if (!std::holds_alternative<UpdateTerm>(t)) {
      throw Error("machine output '" + id + "' is not an update term");
    }
    outs.push_back(std::get<UpdateTerm>(t));
  }
  auto behaviour = [&](std::size_t s, Letter v) {
    Letter e = machine.output(s, v);
    ComputationStep step;
    for (const auto& sig : symbols.outputs) {
      const UpdateTerm* chosen = nullptr;
      int count = 0;
      for (std::size_t b = 0; b < outs.size(); ++b) {
        if (((e >> b) & 1) && outs[b].signal == sig) {
          chosen = &outs[b];
          ++count;
        }
      }
      if (count != 1) {
        throw ExactlyOneViolation("state " + std::to_string(s) + ", valuation " +
                                  std::to_string(v) + ": signal '" + sig + "' has " +
                                  std::to_string(count) + " updates");
      }
      step.emplace(sig, chosen->term);
    }
    return std::make_pair(step, std::size_t(machine.successor(s, v)));
  };
  cfm.rows = compress(machine.states, cfm.predicates.size(), behaviour);
  cfm.functions = function_terms(cfm.rows);
  return cfm;
}

MealyMachine cfm_to_mealy(const Cfm& cfm, const LtlSpec* spec) {
  MealyMachine m;
  for (const auto& p : cfm.predicates) m.inputs.push_back(term_prop_id(p));
  if (spec) {
    m.outputs = spec->output_ids();
  } else {
    std::set<std::string> seen;
    for (const auto& s : cfm.symbols.outputs) {
      std::vector<std::string> ids;
      for (const auto& r : cfm.rows) {
        auto it = r.updates.find(s);
        if (it == r.updates.end()) continue;
        auto id = term_prop_id(UpdateTerm{s, it->second});
        if (seen.insert(id).second) ids.push_back(id);
      }
      auto self = term_prop_id(UpdateTerm{s, FunctionTerm::signal(s)});
      if (seen.insert(self).second) ids.push_back(self);
      m.outputs.insert(m.outputs.end(), ids.begin(), ids.end());
    }
  }
  m.states = cfm.states;
  const std::size_t ni = m.input_count();
  for (std::size_t s = 0; s < cfm.states; ++s) {
    for (std::size_t v = 0; v < ni; ++v) {
      const auto& row = cfm.select(s, Letter(v));
      Letter e = 0;
      for (const auto& [sig, term] : row.updates) {
        auto id = term_prop_id(UpdateTerm{sig, term});
        auto it = std::find(m.outputs.begin(), m.outputs.end(), id);
        if (it == m.outputs.end()) throw Error("update '" + id + "' has no output prop");
        e |= Letter{1} << (it - m.outputs.begin());
      }
      m.emit.push_back(e);
      m.next.push_back(std::uint32_t(row.next));
    }
  }
  return m;
}

std::pair<ComputationStep, std::size_t> cfm_step(const Cfm& cfm, std::size_t state,
                                                 const std::set<PredicateTerm>& predset) {
  const auto& row = cfm.select(state, cfm.valuation(predset));
  return {row.updates, row.next};
}

namespace {

Value eval_now(const FunctionTerm& t, const std::map<std::string, Value>& outputs,
               const Interpretation& interp, std::size_t time) {
  if (t.applied) {
    std::vector<Value> args;
    for (const auto& a : t.args) args.push_back(eval_now(a, outputs, interp, time));
    return interp.apply_function(t.name, args);
  }
  if (auto it = outputs.find(t.name); it != outputs.end()) return it->second;
  return interp.input(t.name, time);
}

}  // namespace

CfmRun cfm_run(const Cfm& cfm, const Interpretation& interp, std::size_t steps) {
  if (steps == 0) throw Error("simulation horizon must be positive");
  CfmRun run;
  std::map<std::string, Value> current;
  for (const auto& s : cfm.symbols.outputs) current.emplace(s, interp.init(s));
  std::size_t state = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    run.values.push_back(current);
    run.states.push_back(state);
    Letter v = 0;
    for (std::size_t i = 0; i < cfm.predicates.size(); ++i) {
      std::vector<Value> args;
      for (const auto& a : cfm.predicates[i].args) args.push_back(eval_now(a, current, interp, t));
      if (interp.apply_predicate(cfm.predicates[i].name, args)) v |= Letter{1} << i;
    }
    const auto& row = cfm.select(state, v);
    run.steps.push_back(row.updates);
    std::map<std::string, Value> next;
    for (const auto& [sig, term] : row.updates) next.emplace(sig, eval_now(term, current, interp, t));
    current = std::move(next);
    state = row.next;
  }
  return run;
}

CfmRun cfm_run_syntactic(const Cfm& cfm, const std::vector<Letter>& valuations) {
  CfmRun run;
  std::size_t state = 0;
  for (Letter v : valuations) {
    run.states.push_back(state);
    const auto& row = cfm.select(state, v);
    run.steps.push_back(row.updates);
    state = row.next;
  }
  return run;
}

std::string describe(const Cfm& cfm, const Counterexample& cex) {
  std::ostringstream os;
  auto step = [&](const CfmTraceStep& s) {
    os << "  m" << s.state << " {";
    bool first = true;
    for (std::size_t i = 0; i < cfm.predicates.size(); ++i) {
      if ((s.valuation >> i) & 1) {
        os << (first ? "" : ", ") << pretty(cfm.predicates[i]);
        first = false;
      }
    }
    os << "}";
    for (const auto& [sig, t] : s.updates) os << " [" << sig << " <- " << pretty(t) << "]";
    os << "\n";
  };
  os << "prefix:\n";
  for (const auto& s : cex.prefix) step(s);
  os << "loop:\n";
  for (const auto& s : cex.loop) step(s);
  return os.str();
}

std::optional<Counterexample> verify_cfm(const Cfm& cfm, const Formula& formula,
                                         NbaOptions opts) {
  LtlSpec spec = encode(formula, cfm.symbols, EncodeOptions{false});
  std::vector<std::string> props;
  std::vector<std::size_t> pred_bit;
  auto index_of = [&](const std::string& id) {
    auto it = std::find(props.begin(), props.end(), id);
    if (it != props.end()) return std::size_t(it - props.begin());
    props.push_back(id);
    return props.size() - 1;
  };
  for (const auto& id : spec.input_ids()) index_of(id);
  for (const auto& p : cfm.predicates) pred_bit.push_back(index_of(term_prop_id(p)));
  for (const auto& id : spec.output_ids()) index_of(id);

  const std::size_t nv = std::size_t{1} << cfm.predicates.size();
  // letter and exactly-one status of each (state, valuation)
  std::vector<Letter> letters(cfm.states * nv);
  std::vector<char> valid(cfm.states * nv, 1);
  for (std::size_t s = 0; s < cfm.states; ++s) {
    for (std::size_t v = 0; v < nv; ++v) {
      const auto& row = cfm.select(s, Letter(v));
      Letter l = 0;
      for (std::size_t i = 0; i < pred_bit.size(); ++i) {
        if ((v >> i) & 1) l |= Letter{1} << pred_bit[i];
      }
      std::set<std::string> on;
      for (const auto& [sig, term] : row.updates) {
        auto id = term_prop_id(UpdateTerm{sig, term});
        on.insert(id);
        auto it = std::find(props.begin(), props.end(), id);
        if (it != props.end()) l |= Letter{1} << (it - props.begin());
      }
      for (const auto& g : spec.groups) {
        int count = 0;
        for (const auto& p : g.props) count += on.count(p.id) ? 1 : 0;
        if (count != 1) valid[s * nv + v] = 0;
      }
      letters[s * nv + v] = l;
    }
  }

  Nba nba = ltl_to_nba(Ltl::lnot(spec.body), props, opts);
  const std::size_t Q = nba.size();
  auto node = [&](std::size_t m, int q) { return m * Q + std::size_t(q); };
  const std::size_t N = cfm.states * Q;

  struct Edge {
    std::size_t to;
    Letter valuation;
  };
  std::vector<std::vector<Edge>> adj(N);
  std::vector<std::ptrdiff_t> parent(N, -1);
  std::vector<Letter> parent_val(N, 0);
  std::vector<char> seen(N, 0);
  std::vector<std::size_t> queue;
  for (int q : nba.initial) {
    if (!seen[node(0, q)]) {
      seen[node(0, q)] = 1;
      queue.push_back(node(0, q));
    }
  }

  auto path_to = [&](std::size_t target) {
    std::vector<CfmTraceStep> path;
    for (std::size_t v = target; parent[v] >= 0; v = std::size_t(parent[v])) {
      std::size_t m = std::size_t(parent[v]) / Q;
      path.push_back({m, parent_val[v], cfm.select(m, parent_val[v]).updates});
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  // any continuation closes a lasso after an exactly-one violation
  auto close = [&](std::size_t m) {
    std::vector<CfmTraceStep> tail;
    std::map<std::size_t, std::size_t> at;
    while (!at.count(m)) {
      at[m] = tail.size();
      const auto& row = cfm.select(m, 0);
      tail.push_back({m, 0, row.updates});
      m = row.next;
    }
    return std::make_pair(std::vector<CfmTraceStep>(tail.begin(), tail.begin() + at[m]),
                          std::vector<CfmTraceStep>(tail.begin() + at[m], tail.end()));
  };

  for (std::size_t k = 0; k < queue.size(); ++k) {
    std::size_t u = queue[k];
    std::size_t m = u / Q;
    int q = int(u % Q);
    for (std::size_t v = 0; v < nv; ++v) {
      if (!valid[m * nv + v]) {
        Counterexample cex;
        cex.prefix = path_to(u);
        const auto& row = cfm.select(m, Letter(v));
        cex.prefix.push_back({m, Letter(v), row.updates});
        auto [pre, loop] = close(row.next);
        cex.prefix.insert(cex.prefix.end(), pre.begin(), pre.end());
        cex.loop = loop;
        return cex;
      }
      std::size_t m2 = cfm.select(m, Letter(v)).next;
      for (int q2 : nba.successors(q, letters[m * nv + v])) {
        std::size_t w = node(m2, q2);
        adj[u].push_back({w, Letter(v)});
        if (!seen[w]) {
          seen[w] = 1;
          parent[w] = std::ptrdiff_t(u);
          parent_val[w] = Letter(v);
          queue.push_back(w);
        }
      }
    }
  }

  // accepting node on a cycle: search a path back to itself
  for (std::size_t u : queue) {
    if (!nba.accepting[u % Q]) continue;
    std::vector<std::ptrdiff_t> back(N, -1);
    std::vector<Letter> back_val(N, 0);
    std::vector<std::size_t> bq{u};
    std::vector<char> vis(N, 0);
    std::optional<std::pair<std::size_t, Letter>> closing;
    for (std::size_t k = 0; k < bq.size() && !closing; ++k) {
      for (const auto& e : adj[bq[k]]) {
        if (e.to == u) {
          closing = std::make_pair(bq[k], e.valuation);
          break;
        }
        if (!vis[e.to]) {
          vis[e.to] = 1;
          back[e.to] = std::ptrdiff_t(bq[k]);
          back_val[e.to] = e.valuation;
          bq.push_back(e.to);
        }
      }
    }
    if (!closing) continue;
    Counterexample cex;
    cex.prefix = path_to(u);
    std::vector<CfmTraceStep> loop;
    std::size_t last = closing->first;
    loop.push_back({last / Q, closing->second, cfm.select(last / Q, closing->second).updates});
    for (std::size_t v = last; v != u; v = std::size_t(back[v])) {
      std::size_t from = std::size_t(back[v]);
      loop.push_back({from / Q, back_val[v], cfm.select(from / Q, back_val[v]).updates});
    }
    std::reverse(loop.begin(), loop.end());
    cex.loop = std::move(loop);
    return cex;
  }
  return std::nullopt;
}

CfmStats cfm_stats(const Cfm& cfm) {
  return CfmStats{cfm.states, cfm.symbols.inputs.size(), cfm.symbols.outputs.size(),
                  cfm.symbols.predicates.size(), cfm.symbols.functions.size()};
}

// ---------------------------------------------------------------------------
// JSON

std::string export_cfm(const Cfm& cfm) {
  json j;
  j["symtab"] = {{"inputs", cfm.symbols.inputs},
                 {"outputs", cfm.symbols.outputs},
                 {"functions", cfm.symbols.functions},
                 {"predicates", cfm.symbols.predicates}};
  json preds = json::array();
  for (const auto& p : cfm.predicates) preds.push_back(term_prop_id(p));
  j["predicates"] = preds;
  j["states"] = cfm.states;
  j["init"] = 0;
  json rows = json::array();
  for (const auto& r : cfm.rows) {
    json given = json::object();
    for (std::size_t i = 0; i < cfm.predicates.size(); ++i) {
      const auto id = term_prop_id(cfm.predicates[i]);
      if (r.otherwise) {
        given[id] = "*";
      } else if ((r.guard.pos >> i) & 1) {
        given[id] = true;
      } else if ((r.guard.neg >> i) & 1) {
        given[id] = false;
      } else {
        given[id] = "*";
      }
    }
    json updates = json::object();
    for (const auto& [sig, t] : r.updates) updates[sig] = pretty(t);
    json row = {{"state", r.state}, {"given", given}, {"updates", updates}, {"next", r.next}};
    if (r.otherwise) row["otherwise"] = true;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2);
}

Cfm import_cfm(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid CFM JSON: ") + e.what());
  }
  Cfm cfm;
  try {
    const auto& st = j.at("symtab");
    cfm.symbols.inputs = st.at("inputs").get<std::set<std::string>>();
    cfm.symbols.outputs = st.at("outputs").get<std::set<std::string>>();
    cfm.symbols.functions = st.at("functions").get<std::map<std::string, std::size_t>>();
    cfm.symbols.predicates = st.at("predicates").get<std::map<std::string, std::size_t>>();
    std::vector<std::string> ids;
    if (j.contains("predicates")) {
      ids = j.at("predicates").get<std::vector<std::string>>();
    } else {
      // fall back to the key order of the first row
      for (const auto& [id, v] : j.at("rows").at(0).at("given").items()) ids.push_back(id);
    }
    for (const auto& id : ids) {
      auto t = unmangle(id);
      if (!std::holds_alternative<PredicateTerm>(t)) throw Error("'" + id + "' is not a predicate");
      cfm.predicates.push_back(std::get<PredicateTerm>(t));
    }
    cfm.states = j.at("states").get<std::size_t>();
    if (j.value("init", 0) != 0) throw Error("initial state must be 0");
    for (const auto& r : j.at("rows")) {
      CfmRow row;
      row.state = r.at("state").get<std::size_t>();
      row.next = r.at("next").get<std::size_t>();
      if (row.state >= cfm.states || row.next >= cfm.states) throw Error("state out of range");
      row.otherwise = r.value("otherwise", false);
      for (const auto& [id, v] : r.at("given").items()) {
        auto it = std::find(ids.begin(), ids.end(), id);
        if (it == ids.end()) throw Error("unknown predicate '" + id + "'");
        Letter bit = Letter{1} << (it - ids.begin());
        if (v.is_boolean()) (v.get<bool>() ? row.guard.pos : row.guard.neg) |= bit;
      }
      for (const auto& [sig, text] : r.at("updates").items()) {
        row.updates.emplace(sig, parse_term(text.get<std::string>()));
      }
      cfm.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("CFM JSON schema violation: ") + e.what());
  }
  // every state needs a total, update-complete row set
  const std::size_t nv = std::size_t{1} << cfm.predicates.size();
  for (std::size_t s = 0; s < cfm.states; ++s) {
    for (std::size_t v = 0; v < nv; ++v) {
      const auto& row = cfm.select(s, Letter(v));
      for (const auto& o : cfm.symbols.outputs) {
        if (!row.updates.count(o)) throw TotalityError("row without update for '" + o + "'");
      }
    }
  }
  cfm.functions = function_terms(cfm.rows);
  return cfm;
}

}  // namespace tslsynth
