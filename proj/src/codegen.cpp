#include "tslsynth/codegen.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

namespace tslsynth {

namespace {

const std::set<std::string>& reserved() {
  static const std::set<std::string> words{
      "case", "class", "data", "default", "deriving", "do", "else", "foreign", "if",
      "import", "in", "infix", "infixl", "infixr", "instance", "let", "module", "newtype",
      "of", "then", "type", "where", "f", "i", "m", "sf", "loopD", "initValue", "otherwise",
      "not", "True", "False"};
  return words;
}

bool is_state_constant(const std::string& n) {
  if (n.size() < 2 || n[0] != 'm') return false;
  for (std::size_t i = 1; i < n.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(n[i]))) return false;
  }
  return true;
}

void names_in(const FunctionTerm& t, std::set<std::string>& out) {
  out.insert(t.name);
  for (const auto& a : t.args) names_in(a, out);
}

std::string render(const FunctionTerm& t, const std::map<std::string, std::string>& names,
                   bool nested) {
  const std::string& n = names.at(t.name);
  if (!t.applied || t.args.empty()) return n;
  std::string s = n;
  for (const auto& a : t.args) s += " " + render(a, names, true);
  return nested ? "(" + s + ")" : s;
}

std::string tuple(const std::vector<std::string>& items) {
  if (items.empty()) return "()";
  if (items.size() == 1) return items[0];
  std::string s = "(";
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i];
  return s + ")";
}

}  // namespace

std::map<std::string, std::string> frp_names(const Cfm& cfm) {
  std::set<std::string> all;
  for (const auto& s : cfm.symbols.inputs) all.insert(s);
  for (const auto& s : cfm.symbols.outputs) all.insert(s);
  for (const auto& [n, a] : cfm.symbols.functions) all.insert(n);
  for (const auto& [n, a] : cfm.symbols.predicates) all.insert(n);
  for (const auto& p : cfm.predicates) {
    all.insert(p.name);
    for (const auto& a : p.args) names_in(a, all);
  }
  for (const auto& r : cfm.rows) {
    for (const auto& [s, t] : r.updates) {
      all.insert(s);
      names_in(t, all);
    }
  }
  std::map<std::string, std::string> out;
  std::set<std::string> taken(all.begin(), all.end());
  for (const auto& n : all) {
    std::string cand = n;
    if (std::isupper(static_cast<unsigned char>(cand[0]))) cand = "v" + cand;
    while ((cand != n && taken.count(cand)) || reserved().count(cand) || is_state_constant(cand)) {
      cand += "_";
    }
    taken.insert(cand);
    out[n] = cand;
  }
  return out;
}

std::size_t count_conditionals(const Cfm& cfm) { return cfm.rows.size(); }

std::string generate_frp(const Cfm& cfm, const CodegenOptions& opts) {
  if (opts.dialect != "yampa") throw Error("unsupported FRP dialect '" + opts.dialect + "'");
  if (opts.module_name.empty() || !std::isupper(static_cast<unsigned char>(opts.module_name[0]))) {
    throw Error("module name must start with an upper-case letter");
  }
  const auto names = frp_names(cfm);
  const auto stats = cfm_stats(cfm);
  std::ostringstream os;
  os << "-- generated by tslsynth\n"
     << "-- stats: states=" << stats.states << " inputs=" << stats.inputs
     << " outputs=" << stats.outputs << " predicates=" << stats.n_predicates
     << " functions=" << stats.n_functions << " conditionals=" << count_conditionals(cfm)
     << "\n";
  for (const auto& [from, to] : names) {
    if (from != to) os << "-- renamed: " << from << " -> " << to << "\n";
  }
  os << "module " << opts.module_name << " (sf) where\n\n"
     << "import " << opts.module_name << "Terms\n\n"
     << "sf = loopD i f\n\n"
     << "i = (initValue, m0)\n\n";
  for (std::size_t m = 0; m < cfm.states; ++m) os << "m" << m << " = " << m << "\n";
  os << "\n";

  std::vector<std::string> ins;
  for (const auto& s : cfm.symbols.inputs) ins.push_back(names.at(s));
  std::vector<std::string> outs;
  for (const auto& s : cfm.symbols.outputs) outs.push_back(names.at(s));
  os << "f (" << tuple(ins) << ", (" << tuple(outs) << ", m)) = if\n";
  for (std::size_t k = 0; k < cfm.rows.size(); ++k) {
    const auto& r = cfm.rows[k];
    std::string guard;
    if (k + 1 == cfm.rows.size()) {
      guard = "otherwise";
    } else {
      std::vector<std::string> lits;
      for (std::size_t i = 0; i < cfm.predicates.size(); ++i) {
        const auto& p = cfm.predicates[i];
        std::string atom = render(FunctionTerm::apply(p.name, p.args), names, false);
        if (!r.otherwise && ((r.guard.pos >> i) & 1)) lits.push_back(atom);
        if (!r.otherwise && ((r.guard.neg >> i) & 1)) lits.push_back("not (" + atom + ")");
      }
      if (cfm.states > 1 || lits.empty()) lits.push_back("m == m" + std::to_string(r.state));
      for (std::size_t i = 0; i < lits.size(); ++i) guard += (i ? " && " : "") + lits[i];
    }
    std::vector<std::string> updates;
    for (const auto& s : cfm.symbols.outputs) updates.push_back(render(r.updates.at(s), names, false));
    os << "  | " << guard << " -> (" << tuple(updates) << ", m" << r.next << ")\n";
  }
  return os.str();
}

std::optional<std::string> validate_frp(const std::string& text) {
  std::vector<char> stack;
  int line = 1;
  for (char c : text) {
    if (c == '\n') ++line;
    if (c == '(' || c == '[' || c == '{') stack.push_back(c);
    if (c == ')' || c == ']' || c == '}') {
      char open = c == ')' ? '(' : (c == ']' ? '[' : '{');
      if (stack.empty() || stack.back() != open) {
        return "unbalanced '" + std::string(1, c) + "' on line " + std::to_string(line);
      }
      stack.pop_back();
    }
  }
  if (!stack.empty()) return std::string("unclosed '") + stack.back() + "'";

  std::istringstream in(text);
  std::string l;
  std::size_t guards = 0;
  std::string last;
  bool header = false;
  while (std::getline(in, l)) {
    if (l.rfind("f (", 0) == 0 && l.size() >= 4 && l.substr(l.size() - 4) == "= if") header = true;
    auto p = l.find_first_not_of(' ');
    if (p == std::string::npos || l[p] != '|') continue;
    if (!header) return "guard before the step function header";
    if (l.find(" -> ") == std::string::npos) return "guard without '->'";
    ++guards;
    last = l;
  }
  if (!header) return "missing step function";
  if (guards == 0) return "empty guard cascade";
  if (last.find("| otherwise ->") == std::string::npos) return "last guard is not 'otherwise'";
  return std::nullopt;
}

}  // namespace tslsynth
