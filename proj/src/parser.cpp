#include <optional>

#include "tslsynth/syntax.hpp"

namespace tslsynth {

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Assign,
  Bang,
  AndAnd,
  OrOr,
  Arrow,
  DArrow,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (starts("//")) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line;
    const int cl = col;
    auto push = [&](Tok k, std::size_t n) {
      out.push_back({k, std::string(src.substr(i, n)), l, cl});
      advance(n);
    };
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      std::size_t j = i;
      while (j < src.size() && ((src[j] >= 'a' && src[j] <= 'z') ||
                                (src[j] >= 'A' && src[j] <= 'Z') ||
                                (src[j] >= '0' && src[j] <= '9'))) {
        ++j;
      }
      if (j < src.size() && src[j] == '_') {
        throw LexError("underscore is not allowed in identifiers", l, cl + int(j - i));
      }
      push(Tok::Ident, j - i);
      continue;
    }
    if (starts("<->")) {
      push(Tok::DArrow, 3);
    } else if (starts("<-")) {
      push(Tok::Assign, 2);
    } else if (starts("->")) {
      push(Tok::Arrow, 2);
    } else if (starts("&&")) {
      push(Tok::AndAnd, 2);
    } else if (starts("||")) {
      push(Tok::OrOr, 2);
    } else if (c == '!') {
      push(Tok::Bang, 1);
    } else if (c == '(') {
      push(Tok::LParen, 1);
    } else if (c == ')') {
      push(Tok::RParen, 1);
    } else if (c == '[') {
      push(Tok::LBrack, 1);
    } else if (c == ']') {
      push(Tok::RBrack, 1);
    } else if (c == '{') {
      push(Tok::LBrace, 1);
    } else if (c == '}') {
      push(Tok::RBrace, 1);
    } else if (c == ',') {
      push(Tok::Comma, 1);
    } else if (c == ';') {
      push(Tok::Semi, 1);
    } else {
      throw LexError(std::string("unexpected character '") + c + "'", l, cl);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

std::optional<Op> unary_keyword(const std::string& s) {
  if (s == "G") return Op::Globally;
  if (s == "F") return Op::Finally;
  if (s == "X") return Op::Next;
  return std::nullopt;
}

std::optional<Op> binary_keyword(const std::string& s) {
  if (s == "U") return Op::Until;
  if (s == "R") return Op::Release;
  if (s == "W") return Op::WeakUntil;
  if (s == "A") return Op::AsSoonAs;
  return std::nullopt;
}

bool is_reserved(const std::string& s) {
  return unary_keyword(s) || binary_keyword(s) || s == "true" || s == "false" ||
         s == "assume" || s == "guarantee";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  ParsedSpec spec() {
    std::vector<Formula> assumes;
    std::vector<Formula> guarantees;
    bool sections = false;
    if (at_ident("assume") || at_ident("guarantee")) {
      sections = true;
      while (at_ident("assume") || at_ident("guarantee")) {
        auto& dst = cur().text == "assume" ? assumes : guarantees;
        next();
        expect(Tok::LBrace, "'{'");
        while (cur().kind != Tok::RBrace) {
          dst.push_back(formula());
          if (cur().kind == Tok::Semi) {
            next();
          } else if (cur().kind != Tok::RBrace) {
            fail("expected ';' or '}'");
          }
        }
        next();
      }
    } else {
      while (cur().kind != Tok::End) {
        guarantees.push_back(formula());
        if (cur().kind == Tok::Semi) {
          next();
        } else if (cur().kind != Tok::End) {
          fail("expected ';' or end of input");
        }
      }
      if (guarantees.empty()) fail("empty specification");
    }
    expect(Tok::End, "end of input");
    Formula f = sections && !assumes.empty()
                    ? Implies(conjunction(assumes), conjunction(guarantees))
                    : conjunction(guarantees);
    return ParsedSpec{f, classify(f)};
  }

  Formula single_formula() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

  FunctionTerm single_term() {
    FunctionTerm t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek() const { return toks_[std::min(pos_ + 1, toks_.size() - 1)]; }
  void next() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  bool at_ident(const char* s) const { return cur().kind == Tok::Ident && cur().text == s; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = cur().kind == Tok::End ? "end of input" : "'" + cur().text + "'";
    throw ParseError(msg + ", found " + found, cur().line, cur().column);
  }

  void expect(Tok k, const char* what) {
    if (cur().kind != k) fail(std::string("expected ") + what);
    next();
  }

  std::string name() {
    if (cur().kind != Tok::Ident) fail("expected identifier");
    if (is_reserved(cur().text)) fail("reserved word used as a name");
    std::string n = cur().text;
    next();
    return n;
  }

  Formula formula() { return iff(); }

  Formula iff() {
    Formula l = implies();
    while (cur().kind == Tok::DArrow) {
      next();
      l = Iff(l, implies());
    }
    return l;
  }

  Formula implies() {
    Formula l = disj();
    if (cur().kind == Tok::Arrow) {
      next();
      return Implies(l, implies());
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    while (cur().kind == Tok::OrOr) {
      next();
      l = Or(l, conj());
    }
    return l;
  }

  Formula conj() {
    Formula l = temporal();
    while (cur().kind == Tok::AndAnd) {
      next();
      l = And(l, temporal());
    }
    return l;
  }

  Formula temporal() {
    Formula l = unary();
    if (cur().kind == Tok::Ident) {
      if (auto op = binary_keyword(cur().text)) {
        next();
        return Formula::binary(*op, l, temporal());
      }
    }
    return l;
  }

  Formula unary() {
    if (cur().kind == Tok::Bang) {
      next();
      return Not(unary());
    }
    if (cur().kind == Tok::Ident) {
      if (auto op = unary_keyword(cur().text)) {
        next();
        return Formula::unary(*op, unary());
      }
    }
    return primary();
  }

  Formula primary() {
    switch (cur().kind) {
      case Tok::LParen: {
        next();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::LBrack: {
        next();
        FunctionTerm target = term();
        if (target.applied) fail("update target must be a signal");
        std::string s = target.name;
        expect(Tok::Assign, "'<-'");
        FunctionTerm t = term();
        expect(Tok::RBrack, "']'");
        return Formula::upd(UpdateTerm{s, std::move(t)});
      }
      case Tok::Ident: {
        if (cur().text == "true") {
          next();
          return Formula::tt();
        }
        if (cur().text == "false") {
          next();
          return Formula::ff();
        }
        if (binary_keyword(cur().text)) fail("binary operator without left operand");
        if (peek().kind != Tok::LParen) {
          fail("bare identifier in formula position (predicates need parentheses)");
        }
        std::string n = name();
        return Formula::pred(PredicateTerm{n, args()});
      }
      default:
        fail("expected formula");
    }
  }

  std::vector<FunctionTerm> args() {
    expect(Tok::LParen, "'('");
    std::vector<FunctionTerm> out;
    if (cur().kind != Tok::RParen) {
      out.push_back(term());
      while (cur().kind == Tok::Comma) {
        next();
        out.push_back(term());
      }
    }
    expect(Tok::RParen, "')'");
    return out;
  }

  FunctionTerm term() {
    if (cur().kind != Tok::Ident) fail("expected term");
    const std::string& t = cur().text;
    if (t == "true" || t == "false" || t == "assume" || t == "guarantee") {
      fail("reserved word used as a name");
    }
    std::string n = t;
    next();
    if (cur().kind == Tok::LParen) return FunctionTerm::apply(n, args());
    return FunctionTerm::signal(n);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

enum class Kind { Signal, Function, Predicate };

struct Classifier {
  std::map<std::string, Kind> kinds;
  std::map<std::string, std::size_t> arities;
  SymbolTable table;
  std::set<std::string> signals;

  void note(const std::string& n, Kind k) {
    auto [it, fresh] = kinds.emplace(n, k);
    if (!fresh && it->second != k) throw KindConflict(n);
  }

  void note_arity(const std::string& n, std::size_t a) {
    auto [it, fresh] = arities.emplace(n, a);
    if (!fresh && it->second != a) throw ArityConflict(n, it->second, a);
  }

  void term(const FunctionTerm& t) {
    if (!t.applied) {
      note(t.name, Kind::Signal);
      signals.insert(t.name);
      return;
    }
    note(t.name, Kind::Function);
    note_arity(t.name, t.args.size());
    table.functions[t.name] = t.args.size();
    for (const auto& a : t.args) term(a);
  }

  void formula(const Formula& f) {
    if (f.op() == Op::Pred) {
      const auto& p = f.predicate();
      note(p.name, Kind::Predicate);
      note_arity(p.name, p.args.size());
      table.predicates[p.name] = p.args.size();
      for (const auto& a : p.args) term(a);
    } else if (f.op() == Op::Upd) {
      const auto& u = f.update();
      note(u.signal, Kind::Signal);
      signals.insert(u.signal);
      table.outputs.insert(u.signal);
      term(u.term);
    }
    for (std::size_t i = 0; i < f.arity(); ++i) formula(f.child(i));
  }
};

}  // namespace

ParsedSpec parse_spec(std::string_view text) { return Parser(text).spec(); }

Formula parse_formula(std::string_view text) { return Parser(text).single_formula(); }

FunctionTerm parse_term(std::string_view text) { return Parser(text).single_term(); }

SymbolTable classify(const Formula& formula) {
  Classifier c;
  c.formula(formula);
  for (const auto& s : c.signals) {
    if (!c.table.outputs.count(s)) c.table.inputs.insert(s);
  }
  return c.table;
}

}  // namespace tslsynth
