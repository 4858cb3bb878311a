#include "tslsynth/ltl.hpp"

#include <sstream>
#include <stdexcept>

namespace tslsynth {

Ltl Ltl::prop(std::string name) {
  return Ltl(std::make_shared<const LtlNode>(LtlNode{LtlOp::Prop, std::move(name), {}}));
}

Ltl Ltl::tt() {
  static const Ltl t(std::make_shared<const LtlNode>(LtlNode{LtlOp::True, "", {}}));
  return t;
}

Ltl Ltl::ff() {
  static const Ltl f(std::make_shared<const LtlNode>(LtlNode{LtlOp::False, "", {}}));
  return f;
}

Ltl Ltl::lnot(Ltl f) {
  return Ltl(std::make_shared<const LtlNode>(LtlNode{LtlOp::Not, "", {std::move(f)}}));
}

Ltl Ltl::land(Ltl a, Ltl b) {
  return Ltl(
      std::make_shared<const LtlNode>(LtlNode{LtlOp::And, "", {std::move(a), std::move(b)}}));
}

Ltl Ltl::lor(Ltl a, Ltl b) {
  return Ltl(
      std::make_shared<const LtlNode>(LtlNode{LtlOp::Or, "", {std::move(a), std::move(b)}}));
}

Ltl Ltl::next(Ltl f) {
  return Ltl(std::make_shared<const LtlNode>(LtlNode{LtlOp::Next, "", {std::move(f)}}));
}

Ltl Ltl::until(Ltl a, Ltl b) {
  return Ltl(
      std::make_shared<const LtlNode>(LtlNode{LtlOp::Until, "", {std::move(a), std::move(b)}}));
}

Ltl Ltl::release(Ltl a, Ltl b) {
  return Ltl(std::make_shared<const LtlNode>(
      LtlNode{LtlOp::Release, "", {std::move(a), std::move(b)}}));
}

Ltl Ltl::implies(Ltl a, Ltl b) { return lor(lnot(std::move(a)), std::move(b)); }

Ltl Ltl::iff(Ltl a, Ltl b) { return land(implies(a, b), implies(b, a)); }

Ltl Ltl::finally(Ltl f) { return until(tt(), std::move(f)); }

Ltl Ltl::globally(Ltl f) { return release(ff(), std::move(f)); }

Ltl Ltl::conj(const std::vector<Ltl>& fs) {
  if (fs.empty()) return tt();
  Ltl acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = land(acc, fs[i]);
  return acc;
}

Ltl Ltl::disj(const std::vector<Ltl>& fs) {
  if (fs.empty()) return ff();
  Ltl acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = lor(acc, fs[i]);
  return acc;
}

LtlOp Ltl::op() const { return node_->op; }
const std::string& Ltl::name() const { return node_->name; }
const Ltl& Ltl::child(std::size_t i) const { return node_->children.at(i); }
std::size_t Ltl::arity() const { return node_->children.size(); }

bool operator==(const Ltl& a, const Ltl& b) {
  if (a.node_ == b.node_) return true;
  return a.op() == b.op() && a.name() == b.name() && a.node_->children == b.node_->children;
}

const std::set<std::string>& LassoWord::at(std::size_t t) const {
  if (loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  if (t < prefix.size()) return prefix[t];
  return loop[(t - prefix.size()) % loop.size()];
}

namespace {

using Vec = std::vector<char>;

struct LassoEval {
  const LassoWord& w;
  std::size_t n;
  std::size_t succ(std::size_t i) const { return i + 1 < n ? i + 1 : w.prefix.size(); }

  Vec eval(const Ltl& f) const {
    Vec v(n, 0);
    switch (f.op()) {
      case LtlOp::Prop:
        for (std::size_t i = 0; i < n; ++i) v[i] = w.at(i).count(f.name()) ? 1 : 0;
        return v;
      case LtlOp::True:
        return Vec(n, 1);
      case LtlOp::False:
        return v;
      case LtlOp::Not: {
        Vec a = eval(f.child());
        for (std::size_t i = 0; i < n; ++i) v[i] = !a[i];
        return v;
      }
      case LtlOp::And:
      case LtlOp::Or: {
        Vec a = eval(f.lhs());
        Vec b = eval(f.rhs());
        for (std::size_t i = 0; i < n; ++i) {
          v[i] = f.op() == LtlOp::And ? (a[i] && b[i]) : (a[i] || b[i]);
        }
        return v;
      }
      case LtlOp::Next: {
        Vec a = eval(f.child());
        for (std::size_t i = 0; i < n; ++i) v[i] = a[succ(i)];
        return v;
      }
      case LtlOp::Until:
      case LtlOp::Release: {
        const bool until = f.op() == LtlOp::Until;
        Vec a = eval(f.lhs());
        Vec b = eval(f.rhs());
        // least fixpoint for U, greatest for R; one sweep per position suffices
        v.assign(n, until ? 0 : 1);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t k = n; k-- > 0;) {
            char nv = until ? (b[k] || (a[k] && v[succ(k)])) : (b[k] && (a[k] || v[succ(k)]));
            if (nv != v[k]) {
              v[k] = nv;
              changed = true;
            }
          }
        }
        return v;
      }
    }
    throw std::logic_error("bad LTL operator");
  }
};

}  // namespace

bool ltl_lasso_holds(const LassoWord& word, const Ltl& formula) {
  if (word.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  LassoEval e{word, word.size()};
  return e.eval(formula)[0];
}

namespace {

Ltl nnf_rec(const Ltl& f, bool neg) {
  switch (f.op()) {
    case LtlOp::Prop:
      return neg ? Ltl::lnot(f) : f;
    case LtlOp::True:
      return neg ? Ltl::ff() : f;
    case LtlOp::False:
      return neg ? Ltl::tt() : f;
    case LtlOp::Not:
      return nnf_rec(f.child(), !neg);
    case LtlOp::And:
    case LtlOp::Or: {
      auto a = nnf_rec(f.lhs(), neg);
      auto b = nnf_rec(f.rhs(), neg);
      return (f.op() == LtlOp::And) != neg ? Ltl::land(a, b) : Ltl::lor(a, b);
    }
    case LtlOp::Next:
      return Ltl::next(nnf_rec(f.child(), neg));
    case LtlOp::Until:
    case LtlOp::Release: {
      auto a = nnf_rec(f.lhs(), neg);
      auto b = nnf_rec(f.rhs(), neg);
      return (f.op() == LtlOp::Until) != neg ? Ltl::until(a, b) : Ltl::release(a, b);
    }
  }
  throw std::logic_error("bad LTL operator");
}

void collect(const Ltl& f, std::set<std::string>& out) {
  if (f.op() == LtlOp::Prop) out.insert(f.name());
  for (std::size_t i = 0; i < f.arity(); ++i) collect(f.child(i), out);
}

void print(std::ostream& os, const Ltl& f,
           const std::function<std::string(const std::string&)>& rename, bool tlsf) {
  switch (f.op()) {
    case LtlOp::Prop:
      os << rename(f.name());
      return;
    case LtlOp::True:
      os << "true";
      return;
    case LtlOp::False:
      os << "false";
      return;
    case LtlOp::Not:
      os << "!";
      break;
    case LtlOp::Next:
      os << "X ";
      break;
    default: {
      const char* sym = "";
      switch (f.op()) {
        case LtlOp::And:
          sym = " && ";
          break;
        case LtlOp::Or:
          sym = " || ";
          break;
        case LtlOp::Until:
          sym = " U ";
          break;
        default:
          sym = " R ";
          break;
      }
      os << '(';
      print(os, f.lhs(), rename, tlsf);
      os << sym;
      print(os, f.rhs(), rename, tlsf);
      os << ')';
      return;
    }
  }
  const auto& c = f.child();
  const bool atomic = c.op() == LtlOp::Prop || c.op() == LtlOp::True || c.op() == LtlOp::False;
  if (!atomic && c.arity() == 1) {
    os << '(';
    print(os, c, rename, tlsf);
    os << ')';
  } else {
    print(os, c, rename, tlsf);
  }
}

}  // namespace

Ltl nnf(const Ltl& formula) { return nnf_rec(formula, false); }

std::set<std::string> props_of(const Ltl& formula) {
  std::set<std::string> out;
  collect(formula, out);
  return out;
}

std::string to_string(const Ltl& formula) {
  std::ostringstream os;
  print(os, formula, [](const std::string& s) { return s; }, false);
  return os.str();
}

std::string to_tlsf(const Ltl& formula,
                    const std::function<std::string(const std::string&)>& rename) {
  std::ostringstream os;
  print(os, formula, rename, true);
  return os.str();
}

}  // namespace tslsynth
