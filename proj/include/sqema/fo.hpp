// ============================================================================
//  fo.hpp
//
//  First-order correspondence language: one binary relation R, equality,
//  and (only as an intermediate in standard translations of formulas that
//  still carry propositional variables) unary predicates.  Terms are plain
//  variables; there are no function symbols or constants.
//
//  Same representation discipline as the modal AST: immutable shared trees,
//  n-ary flattened And/Or (kept in construction order -- FO output should
//  read like the translation that produced it).
// ============================================================================
#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sqema/formula.hpp"  // ParseError lives there

namespace sqema {

enum class FoKind : std::uint8_t {
  Top,
  Bottom,
  Rel,      // R(a, b)
  Eq,       // a = b
  Pred,     // P_name(a); never appears in finished correspondents
  Not,
  And,
  Or,
  Implies,
  Forall,
  Exists,
};

class FoFormula {
 public:
  FoFormula() = default;

  FoKind kind() const { return node_->kind; }
  bool is(FoKind k) const { return node_->kind == k; }

  // Rel/Eq: both terms.  Pred: `a` is the predicate name, `b` the term.
  // Forall/Exists: `a` is the bound variable.
  const std::string& a() const { return node_->a; }
  const std::string& b() const { return node_->b; }

  const std::vector<FoFormula>& children() const { return node_->kids; }
  const FoFormula& child(std::size_t i = 0) const { return node_->kids[i]; }
  std::size_t arity() const { return node_->kids.size(); }

  static FoFormula top() { return leaf(FoKind::Top); }
  static FoFormula bottom() { return leaf(FoKind::Bottom); }

  static FoFormula rel(std::string x, std::string y) {
    return atom(FoKind::Rel, std::move(x), std::move(y));
  }
  static FoFormula eq(std::string x, std::string y) {
    return atom(FoKind::Eq, std::move(x), std::move(y));
  }
  static FoFormula pred(std::string name, std::string term) {
    return atom(FoKind::Pred, std::move(name), std::move(term));
  }

  static FoFormula fo_not(FoFormula f) {
    auto n = std::make_shared<Node>();
    n->kind = FoKind::Not;
    n->kids.push_back(std::move(f));
    return wrap(std::move(n));
  }

  static FoFormula conj(std::vector<FoFormula> kids) {
    return nary(FoKind::And, std::move(kids));
  }
  static FoFormula disj(std::vector<FoFormula> kids) {
    return nary(FoKind::Or, std::move(kids));
  }

  static FoFormula implies(FoFormula x, FoFormula y) {
    auto n = std::make_shared<Node>();
    n->kind = FoKind::Implies;
    n->kids.push_back(std::move(x));
    n->kids.push_back(std::move(y));
    return wrap(std::move(n));
  }

  static FoFormula forall(std::string v, FoFormula body) {
    return quant(FoKind::Forall, std::move(v), std::move(body));
  }
  static FoFormula exists(std::string v, FoFormula body) {
    return quant(FoKind::Exists, std::move(v), std::move(body));
  }

  static int compare(const FoFormula& x, const FoFormula& y) {
    if (x.node_ == y.node_) return 0;
    if (x.kind() != y.kind()) return x.kind() < y.kind() ? -1 : 1;
    if (x.a() != y.a()) return x.a() < y.a() ? -1 : 1;
    if (x.b() != y.b()) return x.b() < y.b() ? -1 : 1;
    if (x.arity() != y.arity()) return x.arity() < y.arity() ? -1 : 1;
    for (std::size_t i = 0; i < x.arity(); ++i) {
      int c = compare(x.child(i), y.child(i));
      if (c != 0) return c;
    }
    return 0;
  }

  friend bool operator==(const FoFormula& x, const FoFormula& y) {
    return compare(x, y) == 0;
  }
  friend bool operator!=(const FoFormula& x, const FoFormula& y) {
    return compare(x, y) != 0;
  }

 private:
  struct Node {
    FoKind kind = FoKind::Top;
    std::string a, b;
    std::vector<FoFormula> kids;
  };

  std::shared_ptr<const Node> node_;

  static FoFormula wrap(std::shared_ptr<const Node> n) {
    FoFormula f;
    f.node_ = std::move(n);
    return f;
  }

  static FoFormula leaf(FoKind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return wrap(std::move(n));
  }

  static FoFormula atom(FoKind k, std::string x, std::string y) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(x);
    n->b = std::move(y);
    return wrap(std::move(n));
  }

  static FoFormula quant(FoKind k, std::string v, FoFormula body) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(v);
    n->kids.push_back(std::move(body));
    return wrap(std::move(n));
  }

  static FoFormula nary(FoKind k, std::vector<FoFormula> kids) {
    std::vector<FoFormula> flat;
    flat.reserve(kids.size());
    for (auto& c : kids) {
      if (c.is(k)) {
        for (const auto& g : c.children()) flat.push_back(g);
      } else {
        flat.push_back(std::move(c));
      }
    }
    if (flat.empty()) return k == FoKind::And ? top() : bottom();
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids = std::move(flat);
    return wrap(std::move(n));
  }
};

// ── Variable bookkeeping ────────────────────────────────────────────────────

namespace detail {

inline void fo_free_vars(const FoFormula& f, std::set<std::string>& bound,
                         std::set<std::string>& out) {
  switch (f.kind()) {
    case FoKind::Rel:
    case FoKind::Eq:
      if (!bound.count(f.a())) out.insert(f.a());
      if (!bound.count(f.b())) out.insert(f.b());
      return;
    case FoKind::Pred:
      if (!bound.count(f.b())) out.insert(f.b());
      return;
    case FoKind::Forall:
    case FoKind::Exists: {
      bool fresh = bound.insert(f.a()).second;
      fo_free_vars(f.child(), bound, out);
      if (fresh) bound.erase(f.a());
      return;
    }
    default:
      for (const auto& c : f.children()) fo_free_vars(c, bound, out);
      return;
  }
}

}  // namespace detail

inline std::set<std::string> free_vars(const FoFormula& f) {
  std::set<std::string> bound, out;
  detail::fo_free_vars(f, bound, out);
  return out;
}

inline bool mentions_var(const FoFormula& f, const std::string& v) {
  switch (f.kind()) {
    case FoKind::Rel:
    case FoKind::Eq:
      return f.a() == v || f.b() == v;
    case FoKind::Pred:
      return f.b() == v;
    default:
      for (const auto& c : f.children())
        if (mentions_var(c, v)) return true;
      return false;
  }
}

inline bool has_predicates(const FoFormula& f) {
  if (f.is(FoKind::Pred)) return true;
  for (const auto& c : f.children())
    if (has_predicates(c)) return true;
  return false;
}

// Renames free occurrences of x to t.  Binders are uniquely named by
// construction, so capture cannot occur; a binder equal to x shadows it.
inline FoFormula rename_free(const FoFormula& f, const std::string& x,
                             const std::string& t) {
  auto sub = [&](const std::string& s) { return s == x ? t : s; };
  switch (f.kind()) {
    case FoKind::Top:
    case FoKind::Bottom:
      return f;
    case FoKind::Rel:
      return FoFormula::rel(sub(f.a()), sub(f.b()));
    case FoKind::Eq:
      return FoFormula::eq(sub(f.a()), sub(f.b()));
    case FoKind::Pred:
      return FoFormula::pred(f.a(), sub(f.b()));
    case FoKind::Forall:
    case FoKind::Exists: {
      if (f.a() == x) return f;  // shadowed
      FoFormula body = rename_free(f.child(), x, t);
      return f.is(FoKind::Forall) ? FoFormula::forall(f.a(), std::move(body))
                                  : FoFormula::exists(f.a(), std::move(body));
    }
    case FoKind::Not:
      return FoFormula::fo_not(rename_free(f.child(), x, t));
    case FoKind::Implies:
      return FoFormula::implies(rename_free(f.child(0), x, t),
                                rename_free(f.child(1), x, t));
    case FoKind::And:
    case FoKind::Or: {
      std::vector<FoFormula> kids;
      kids.reserve(f.arity());
      for (const auto& c : f.children()) kids.push_back(rename_free(c, x, t));
      return f.is(FoKind::And) ? FoFormula::conj(std::move(kids))
                               : FoFormula::disj(std::move(kids));
    }
  }
  return f;  // unreachable
}

// ── Printing ────────────────────────────────────────────────────────────────
// Concrete syntax:  ~  binds tightest, then &, then |, then ->.  Quantifier
// bodies are printed parenthesized unless atomic, which matches how the
// correspondents are usually typeset.

namespace detail {

enum FoPrec : int { kFoImp = 1, kFoOr = 2, kFoAnd = 3, kFoUnary = 4, kFoAtom = 5 };

inline int fo_precedence(FoKind k) {
  switch (k) {
    case FoKind::Implies: return kFoImp;
    case FoKind::Or: return kFoOr;
    case FoKind::And: return kFoAnd;
    case FoKind::Not: return kFoUnary;
    // A quantifier's scope runs as far right as it can, so embedding one
    // anywhere but the tail position forces parentheses.
    case FoKind::Forall:
    case FoKind::Exists: return kFoImp;
    default: return kFoAtom;
  }
}

inline void fo_print(const FoFormula& f, int min_prec, std::string& out) {
  int prec = fo_precedence(f.kind());
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case FoKind::Top: out += "true"; break;
    case FoKind::Bottom: out += "false"; break;
    case FoKind::Rel:
      out += "R(";
      out += f.a();
      out += ',';
      out += f.b();
      out += ')';
      break;
    case FoKind::Eq:
      out += f.a();
      out += " = ";
      out += f.b();
      break;
    case FoKind::Pred:
      out += "P_";
      out += f.a();
      out += '(';
      out += f.b();
      out += ')';
      break;
    case FoKind::Not:
      out += '~';
      fo_print(f.child(), kFoUnary, out);
      break;
    case FoKind::And:
    case FoKind::Or: {
      const char* sep = f.is(FoKind::And) ? " & " : " | ";
      for (std::size_t i = 0; i < f.arity(); ++i) {
        if (i) out += sep;
        fo_print(f.child(i), prec + 1, out);
      }
      break;
    }
    case FoKind::Implies:
      fo_print(f.child(0), kFoImp + 1, out);
      out += " -> ";
      fo_print(f.child(1), kFoImp, out);
      break;
    case FoKind::Forall:
    case FoKind::Exists: {
      out += f.is(FoKind::Forall) ? "forall " : "exists ";
      out += f.a();
      out += " . ";
      const FoFormula& body = f.child();
      bool atomic = fo_precedence(body.kind()) == kFoAtom &&
                    !body.is(FoKind::Forall) && !body.is(FoKind::Exists);
      if (atomic || body.is(FoKind::Forall) || body.is(FoKind::Exists)) {
        fo_print(body, 0, out);
      } else {
        out += '(';
        fo_print(body, 0, out);
        out += ')';
      }
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const FoFormula& f) {
  std::string out;
  detail::fo_print(f, 0, out);
  return out;
}

}  // namespace sqema
