// ============================================================================
//  translation.hpp
//
//  From modal to first-order.  standard_translation is the textbook clause
//  set; the interesting part is turning a solved (pure) implication system
//  into a readable frame condition:
//
//    * every nominal #ik is mirrored by a first-order variable yk, with y0
//      left free as the evaluation point,
//    * equations of the shape  #ij -> dia #ik  are peeled off as relational
//      atoms R(yj,yk) and moved into an antecedent,
//    * the remaining equations are negated, translated at a fresh point x0,
//      and existentially closed.
//
//  A branch with equations E1..Em therefore becomes
//
//      forall y* ( R-atoms  ->  exists x0 . ST(~(E1 & .. & Em'), x0) )
//
//  which says: no assignment of the nominals makes the whole system
//  globally true.  simplify_fo then folds away the bookkeeping (one-point
//  equalities, vacuous quantifiers) so the classical shapes come out.
// ============================================================================
#pragma once

#include <set>
#include <string>
#include <vector>

#include "sqema/fo.hpp"
#include "sqema/formula.hpp"
#include "sqema/normalize.hpp"

namespace sqema {

// Hands out globally distinct bound-variable names (z1, z2, ...) and the
// fixed names tied to nominals.  One pool per correspondence computation,
// so no two binders in the final output ever collide.
class VariablePool {
 public:
  std::string fresh() { return "z" + std::to_string(++next_); }
  static std::string nominal_var(int index) {
    return "y" + std::to_string(index);
  }

 private:
  int next_ = 0;
};

inline FoFormula standard_translation(const Formula& f, const std::string& x,
                                      VariablePool& pool) {
  switch (f.kind()) {
    case Kind::Top: return FoFormula::top();
    case Kind::Bottom: return FoFormula::bottom();
    case Kind::Var: return FoFormula::pred(f.var_name(), x);
    case Kind::Nominal:
      return FoFormula::eq(x, VariablePool::nominal_var(f.nominal_index()));
    case Kind::Not:
      return FoFormula::fo_not(standard_translation(f.child(), x, pool));
    case Kind::And:
    case Kind::Or: {
      std::vector<FoFormula> kids;
      kids.reserve(f.arity());
      for (const auto& c : f.children())
        kids.push_back(standard_translation(c, x, pool));
      return f.is(Kind::And) ? FoFormula::conj(std::move(kids))
                             : FoFormula::disj(std::move(kids));
    }
    case Kind::Implies:
      return FoFormula::implies(standard_translation(f.child(0), x, pool),
                                standard_translation(f.child(1), x, pool));
    case Kind::Iff: {
      FoFormula a = standard_translation(f.child(0), x, pool);
      FoFormula b = standard_translation(f.child(1), x, pool);
      return FoFormula::conj({FoFormula::implies(a, b), FoFormula::implies(b, a)});
    }
    case Kind::Box: {
      std::string z = pool.fresh();
      return FoFormula::forall(
          z, FoFormula::implies(FoFormula::rel(x, z),
                                standard_translation(f.child(), z, pool)));
    }
    case Kind::Dia: {
      std::string z = pool.fresh();
      return FoFormula::exists(
          z, FoFormula::conj({FoFormula::rel(x, z),
                              standard_translation(f.child(), z, pool)}));
    }
    case Kind::BoxInv: {
      std::string z = pool.fresh();
      return FoFormula::forall(
          z, FoFormula::implies(FoFormula::rel(z, x),
                                standard_translation(f.child(), z, pool)));
    }
    case Kind::DiaInv: {
      std::string z = pool.fresh();
      return FoFormula::exists(
          z, FoFormula::conj({FoFormula::rel(z, x),
                              standard_translation(f.child(), z, pool)}));
    }
  }
  return FoFormula::top();  // unreachable
}

// Matches  #ij -> dia #ik  and reports the two nominal indices.
inline bool is_relational_atom(const Formula& f, int& from, int& to) {
  if (!f.is(Kind::Implies)) return false;
  const Formula& lhs = f.child(0);
  const Formula& rhs = f.child(1);
  if (!lhs.is(Kind::Nominal) || !rhs.is(Kind::Dia)) return false;
  if (!rhs.child().is(Kind::Nominal)) return false;
  from = lhs.nominal_index();
  to = rhs.child().nominal_index();
  return true;
}

// Builds the (unsimplified) first-order condition stating that the given
// pure implication system has no globally satisfying nominal assignment
// once #i0 is read as the free variable y0.
inline FoFormula branch_correspondent(const std::vector<Formula>& pure_equations,
                                      VariablePool& pool) {
  std::vector<FoFormula> rel_atoms;
  std::vector<Formula> rest;
  std::set<int> nominal_indices;
  for (const Formula& eq : pure_equations) {
    collect_nominals(eq, nominal_indices);
    int from = 0, to = 0;
    if (is_relational_atom(eq, from, to))
      rel_atoms.push_back(FoFormula::rel(VariablePool::nominal_var(from),
                                         VariablePool::nominal_var(to)));
    else
      rest.push_back(eq);
  }
  nominal_indices.erase(kCurrentStateNominal);

  Formula negated = neg_nnf(Formula::conj(rest));
  FoFormula body = FoFormula::exists("x0", standard_translation(negated, "x0", pool));
  if (!rel_atoms.empty())
    body = FoFormula::implies(FoFormula::conj(std::move(rel_atoms)), std::move(body));
  // Outermost quantifier binds the lowest nominal index.
  for (auto it = nominal_indices.rbegin(); it != nominal_indices.rend(); ++it)
    body = FoFormula::forall(VariablePool::nominal_var(*it), std::move(body));
  return body;
}

// ── First-order cleanup ─────────────────────────────────────────────────────
//
// Deliberately conservative: constant folding, duplicate removal, one-point
// elimination of equalities, vacuous-quantifier removal, and pulling
// quantifier-free parts out of a quantifier's scope.  Nothing here splits a
// binder in two, so names stay globally unique.

namespace detail {

inline bool eq_on(const FoFormula& f, const std::string& x, std::string& other) {
  if (!f.is(FoKind::Eq)) return false;
  if (f.a() == x && f.b() != x) { other = f.b(); return true; }
  if (f.b() == x && f.a() != x) { other = f.a(); return true; }
  return false;
}

inline FoFormula simp_fo_node(const FoFormula& f);

inline std::vector<FoFormula> simp_fo_kids(const FoFormula& f) {
  std::vector<FoFormula> kids;
  kids.reserve(f.arity());
  for (const auto& c : f.children()) kids.push_back(simp_fo_node(c));
  return kids;
}

inline FoFormula simp_fo_junction(FoKind k, std::vector<FoFormula> kids) {
  const FoFormula unit = k == FoKind::And ? FoFormula::top() : FoFormula::bottom();
  const FoFormula zero = k == FoKind::And ? FoFormula::bottom() : FoFormula::top();
  std::vector<FoFormula> out;
  for (auto& c : kids) {
    if (c == zero) return zero;
    if (c == unit) continue;
    bool dup = false;
    for (const auto& seen : out)
      if (seen == c) { dup = true; break; }
    if (!dup) out.push_back(std::move(c));
  }
  return k == FoKind::And ? FoFormula::conj(std::move(out))
                          : FoFormula::disj(std::move(out));
}

inline FoFormula simp_fo_quant(FoKind k, const std::string& x, FoFormula body) {
  if (!mentions_var(body, x)) return body;

  // One-point rules: a single equality pins x to another term.
  if (k == FoKind::Exists) {
    std::string t;
    if (eq_on(body, x, t)) return FoFormula::top();
    if (body.is(FoKind::And)) {
      for (std::size_t i = 0; i < body.arity(); ++i) {
        if (!eq_on(body.child(i), x, t)) continue;
        std::vector<FoFormula> rest;
        for (std::size_t j = 0; j < body.arity(); ++j)
          if (j != i) rest.push_back(rename_free(body.child(j), x, t));
        return simp_fo_node(FoFormula::conj(std::move(rest)));
      }
    }
  } else {
    std::string t;
    if (body.is(FoKind::Not) && eq_on(body.child(), x, t))
      return FoFormula::bottom();
    if (body.is(FoKind::Implies)) {
      const FoFormula& ant = body.child(0);
      if (eq_on(ant, x, t))
        return simp_fo_node(rename_free(body.child(1), x, t));
      if (ant.is(FoKind::And)) {
        for (std::size_t i = 0; i < ant.arity(); ++i) {
          if (!eq_on(ant.child(i), x, t)) continue;
          std::vector<FoFormula> rest;
          for (std::size_t j = 0; j < ant.arity(); ++j)
            if (j != i) rest.push_back(ant.child(j));
          FoFormula slim = FoFormula::implies(FoFormula::conj(std::move(rest)),
                                              body.child(1));
          return simp_fo_node(rename_free(slim, x, t));
        }
      }
    }
    if (body.is(FoKind::Or)) {
      for (std::size_t i = 0; i < body.arity(); ++i) {
        const FoFormula& d = body.child(i);
        if (!d.is(FoKind::Not) || !eq_on(d.child(), x, t)) continue;
        std::vector<FoFormula> rest;
        for (std::size_t j = 0; j < body.arity(); ++j)
          if (j != i) rest.push_back(rename_free(body.child(j), x, t));
        return simp_fo_node(FoFormula::disj(std::move(rest)));
      }
    }
  }

  // Pull subtrees that never mention x outside the quantifier.
  auto partition = [&](const std::vector<FoFormula>& kids,
                       std::vector<FoFormula>& fixed,
                       std::vector<FoFormula>& live) {
    for (const auto& c : kids) {
      if (mentions_var(c, x)) live.push_back(c);
      else fixed.push_back(c);
    }
  };
  if (body.is(FoKind::And) || body.is(FoKind::Or)) {
    std::vector<FoFormula> fixed, live;
    partition(body.children(), fixed, live);
    if (!fixed.empty()) {
      FoFormula inner = body.is(FoKind::And) ? FoFormula::conj(live)
                                             : FoFormula::disj(live);
      // Sound for all four quantifier/connective pairings because only the
      // x-free part moves and the domain is never empty.
      FoFormula quantified = k == FoKind::Forall
                                 ? FoFormula::forall(x, std::move(inner))
                                 : FoFormula::exists(x, std::move(inner));
      fixed.push_back(std::move(quantified));
      return body.is(FoKind::And) ? FoFormula::conj(std::move(fixed))
                                  : FoFormula::disj(std::move(fixed));
    }
  }
  if (k == FoKind::Forall && body.is(FoKind::Implies)) {
    const FoFormula& ant = body.child(0);
    if (!mentions_var(ant, x))
      return FoFormula::implies(ant, FoFormula::forall(x, body.child(1)));
    if (ant.is(FoKind::And)) {
      std::vector<FoFormula> fixed, live;
      partition(ant.children(), fixed, live);
      if (!fixed.empty())
        return FoFormula::implies(
            FoFormula::conj(std::move(fixed)),
            FoFormula::forall(x, FoFormula::implies(FoFormula::conj(std::move(live)),
                                                    body.child(1))));
    }
  }

  return k == FoKind::Forall ? FoFormula::forall(x, std::move(body))
                             : FoFormula::exists(x, std::move(body));
}

inline FoFormula simp_fo_node(const FoFormula& f) {
  switch (f.kind()) {
    case FoKind::Top:
    case FoKind::Bottom:
    case FoKind::Rel:
    case FoKind::Pred:
      return f;
    case FoKind::Eq:
      return f.a() == f.b() ? FoFormula::top() : f;
    case FoKind::Not: {
      FoFormula c = simp_fo_node(f.child());
      if (c.is(FoKind::Top)) return FoFormula::bottom();
      if (c.is(FoKind::Bottom)) return FoFormula::top();
      if (c.is(FoKind::Not)) return c.child();
      return FoFormula::fo_not(std::move(c));
    }
    case FoKind::And:
    case FoKind::Or:
      return simp_fo_junction(f.kind(), simp_fo_kids(f));
    case FoKind::Implies: {
      FoFormula a = simp_fo_node(f.child(0));
      FoFormula b = simp_fo_node(f.child(1));
      if (b.is(FoKind::Top) || a.is(FoKind::Bottom)) return FoFormula::top();
      if (a.is(FoKind::Top)) return b;
      if (b.is(FoKind::Bottom)) return simp_fo_node(FoFormula::fo_not(std::move(a)));
      if (a == b) return FoFormula::top();
      return FoFormula::implies(std::move(a), std::move(b));
    }
    case FoKind::Forall:
    case FoKind::Exists:
      return simp_fo_quant(f.kind(), f.a(), simp_fo_node(f.child()));
  }
  return f;
}

}  // namespace detail

inline FoFormula simplify_fo(FoFormula f) {
  for (int round = 0; round < 12; ++round) {
    FoFormula next = detail::simp_fo_node(f);
    if (next == f) break;
    f = std::move(next);
  }
  return f;
}

}  // namespace sqema
