// ============================================================================
//  simplify.hpp
//
//  Validity-preserving cleanup of modal formulas.  Two layers:
//
//    1. is_prop_tautology: decides whether a formula is true under every
//       valuation of its maximal non-boolean subformulas.  The abstraction
//       is duality-aware: a subformula and the NNF of its negation map to
//       the same propositional atom with opposite signs, so "dia ~p | box p"
//       is recognized just like "~box p | box p".  Gives up (answers false)
//       above 16 distinct atoms.
//
//    2. simplify_aux: bottom-up rewriting to a fixed point.  Nested And/Or
//       flatten and their children sort into the structural order (the
//       constructors preserve written grouping; this is the one place that
//       normalizes it away), then the unit laws apply (x & true = x,
//       x | false = x, ...), complementary-pair collapse (x | ~x = true,
//       x & ~x = false), implication/biconditional unit laws, double
//       negation, the modal dualities ~dia ~x = box x, and the modal
//       constants box true = true / dia false = false; then a final
//       tautology/contradiction test at the top.
//
//  Both are pure and deterministic; simplify_aux is idempotent.
// ============================================================================
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "sqema/formula.hpp"
#include "sqema/normalize.hpp"

namespace sqema {

// ── Propositional abstraction ───────────────────────────────────────────────

namespace detail {

struct PropNode {
  enum Op : std::uint8_t { kConst, kLit, kNot, kAnd, kOr, kImp, kIff };
  Op op = kConst;
  bool value = false;      // kConst
  int atom = -1;           // kLit
  bool sign = true;        // kLit: true = atom itself, false = its negation
  std::vector<PropNode> kids;
};

struct PropAbstraction {
  std::vector<Formula> atoms;  // canonical representative per atom id
  bool overflow = false;       // more than 16 atoms seen

  int atom_id(const Formula& rep) {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == rep) return static_cast<int>(i);
    if (atoms.size() >= 16) {
      overflow = true;
      return -1;
    }
    atoms.push_back(rep);
    return static_cast<int>(atoms.size() - 1);
  }

  PropNode build(const Formula& f) {
    PropNode n;
    switch (f.kind()) {
      case Kind::Top:
      case Kind::Bottom:
        n.op = PropNode::kConst;
        n.value = f.is(Kind::Top);
        return n;
      case Kind::Not:
        n.op = PropNode::kNot;
        n.kids.push_back(build(f.child()));
        return n;
      case Kind::And:
      case Kind::Or:
        n.op = f.is(Kind::And) ? PropNode::kAnd : PropNode::kOr;
        for (const auto& c : f.children()) n.kids.push_back(build(c));
        return n;
      case Kind::Implies:
        n.op = PropNode::kImp;
        n.kids.push_back(build(f.child(0)));
        n.kids.push_back(build(f.child(1)));
        return n;
      case Kind::Iff:
        n.op = PropNode::kIff;
        n.kids.push_back(build(f.child(0)));
        n.kids.push_back(build(f.child(1)));
        return n;
      default: {
        // Variable, nominal or modal-rooted subformula: an atom.  Pair it
        // with its NNF complement so dual forms share the id.
        Formula complement = neg_nnf(f);
        bool self_is_rep = Formula::compare(f, complement) <= 0;
        n.op = PropNode::kLit;
        n.sign = self_is_rep;
        n.atom = atom_id(self_is_rep ? f : complement);
        return n;
      }
    }
  }
};

inline bool eval_prop(const PropNode& n, std::uint32_t mask) {
  switch (n.op) {
    case PropNode::kConst: return n.value;
    case PropNode::kLit: {
      bool v = (mask >> n.atom) & 1u;
      return n.sign ? v : !v;
    }
    case PropNode::kNot: return !eval_prop(n.kids[0], mask);
    case PropNode::kAnd:
      for (const auto& k : n.kids)
        if (!eval_prop(k, mask)) return false;
      return true;
    case PropNode::kOr:
      for (const auto& k : n.kids)
        if (eval_prop(k, mask)) return true;
      return false;
    case PropNode::kImp:
      return !eval_prop(n.kids[0], mask) || eval_prop(n.kids[1], mask);
    case PropNode::kIff:
      return eval_prop(n.kids[0], mask) == eval_prop(n.kids[1], mask);
  }
  return false;
}

}  // namespace detail

// True iff f holds under every truth assignment to its modal atoms.  Sound
// but deliberately incomplete: a "false" answer means "not recognizably a
// tautology", never "falsifiable in some model".
inline bool is_prop_tautology(const Formula& f) {
  detail::PropAbstraction abs;
  detail::PropNode root = abs.build(f);
  if (abs.overflow) return false;
  const std::uint32_t combos = 1u << abs.atoms.size();
  for (std::uint32_t mask = 0; mask < combos; ++mask)
    if (!detail::eval_prop(root, mask)) return false;
  return true;
}

// ── simplify_aux ────────────────────────────────────────────────────────────

namespace detail {

// NNF-aware complement test: b is (equivalent as a normal form to) ~a.
inline bool complementary(const Formula& a, const Formula& b) {
  return neg_nnf(a) == to_nnf(b);
}

inline Formula simp_node(const Formula& f);

inline Formula mk_not(const Formula& c) {
  switch (c.kind()) {
    case Kind::Top: return Formula::bottom();
    case Kind::Bottom: return Formula::top();
    case Kind::Not: return c.child();
    case Kind::Dia:   // ~dia ~x = box x
      if (c.child().is(Kind::Not)) return simp_node(Formula::box(c.child().child()));
      break;
    case Kind::Box:   // ~box ~x = dia x
      if (c.child().is(Kind::Not)) return simp_node(Formula::dia(c.child().child()));
      break;
    case Kind::DiaInv:
      if (c.child().is(Kind::Not)) return simp_node(Formula::box_inv(c.child().child()));
      break;
    case Kind::BoxInv:
      if (c.child().is(Kind::Not)) return simp_node(Formula::dia_inv(c.child().child()));
      break;
    default: break;
  }
  return Formula::neg(c);
}

// Shared core of the And/Or cases; `conjunctive` selects the polarity of the
// absorbing/unit constants.  Expects the children already flattened and
// sorted, so duplicates sit next to each other.
inline Formula simp_junction(std::vector<Formula> kids, bool conjunctive) {
  const Formula absorbing = conjunctive ? Formula::bottom() : Formula::top();
  const Formula unit = conjunctive ? Formula::top() : Formula::bottom();
  std::vector<Formula> keep;
  keep.reserve(kids.size());
  for (auto& c : kids) {
    if (c == absorbing) return absorbing;
    if (c == unit) continue;
    if (!keep.empty() && keep.back() == c) continue;
    keep.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (complementary(keep[i], keep[j])) return absorbing;
  return conjunctive ? Formula::conj(std::move(keep))
                     : Formula::disj(std::move(keep));
}

inline Formula simp_node(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bottom:
    case Kind::Var:
    case Kind::Nominal:
      return f;
    case Kind::Not:
      return mk_not(simp_node(f.child()));
    case Kind::And:
    case Kind::Or: {
      // Flatten same-kind nesting and sort into the structural order; this
      // is where associativity/commutativity get normalized away, now that
      // the constructors preserve the written grouping.
      std::vector<Formula> flat;
      flat.reserve(f.arity());
      for (const auto& c : f.children()) {
        Formula s = simp_node(c);
        if (s.kind() == f.kind()) {
          for (const auto& g : s.children()) flat.push_back(g);
        } else {
          flat.push_back(std::move(s));
        }
      }
      std::sort(flat.begin(), flat.end());
      return simp_junction(std::move(flat), f.is(Kind::And));
    }
    case Kind::Box: {
      Formula c = simp_node(f.child());
      return c == Formula::top() ? c : Formula::box(std::move(c));
    }
    case Kind::Dia: {
      Formula c = simp_node(f.child());
      return c == Formula::bottom() ? c : Formula::dia(std::move(c));
    }
    case Kind::BoxInv: {
      Formula c = simp_node(f.child());
      return c == Formula::top() ? c : Formula::box_inv(std::move(c));
    }
    case Kind::DiaInv: {
      Formula c = simp_node(f.child());
      return c == Formula::bottom() ? c : Formula::dia_inv(std::move(c));
    }
    case Kind::Implies: {
      Formula a = simp_node(f.child(0));
      Formula b = simp_node(f.child(1));
      if (b == Formula::top()) return b;          // x -> true = true
      if (a == Formula::bottom()) return Formula::top();
      if (a == Formula::top()) return b;          // true -> x = x
      if (b == Formula::bottom()) return mk_not(a);
      return Formula::implies(std::move(a), std::move(b));
    }
    case Kind::Iff: {
      Formula a = simp_node(f.child(0));
      Formula b = simp_node(f.child(1));
      if (a == b) return Formula::top();
      if (a == Formula::top()) return b;
      if (b == Formula::top()) return a;
      if (a == Formula::bottom()) return mk_not(b);
      if (b == Formula::bottom()) return mk_not(a);
      return Formula::iff(std::move(a), std::move(b));
    }
  }
  return f;  // unreachable
}

}  // namespace detail

inline Formula simplify_aux(const Formula& f) {
  Formula cur = f;
  // The local rules are confluent in practice but cascade across levels
  // (a collapsed child can expose a new redex above), so iterate.
  for (int round = 0; round < 8; ++round) {
    Formula next = detail::simp_node(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  if (!cur.is(Kind::Top) && !cur.is(Kind::Bottom)) {
    if (is_prop_tautology(cur)) return Formula::top();
    if (is_prop_tautology(neg_nnf(cur))) return Formula::bottom();
  }
  return cur;
}

}  // namespace sqema
