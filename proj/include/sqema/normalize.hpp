// ============================================================================
//  normalize.hpp
//
//  Structural analyses and normal forms on modal formulas:
//    * negation normal form (also eliminates -> and <->)
//    * polarity of a variable's occurrences
//    * literal substitution that keeps NNF intact
//    * distribution of dia and & over | outside of boxes
//    * the syntactic closed/open classification used by the solver's
//      shape invariant
//
//  Everything here is a pure function; formulas are never mutated.
// ============================================================================
#pragma once

#include <set>
#include <string>
#include <vector>

#include "sqema/formula.hpp"

namespace sqema {

// ── Negation normal form ────────────────────────────────────────────────────
// a -> b becomes ~a | b, and a <-> b becomes (~a | b) & (~b | a), before
// negations are pushed down to variables and nominals.

namespace detail {

inline Formula nnf_rec(const Formula& f, bool negated) {
  switch (f.kind()) {
    case Kind::Top:
      return negated ? Formula::bottom() : Formula::top();
    case Kind::Bottom:
      return negated ? Formula::top() : Formula::bottom();
    case Kind::Var:
    case Kind::Nominal:
      return negated ? Formula::neg(f) : f;
    case Kind::Not:
      return nnf_rec(f.child(), !negated);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.arity());
      for (const auto& c : f.children()) kids.push_back(nnf_rec(c, negated));
      bool as_and = (f.kind() == Kind::And) != negated;
      return as_and ? Formula::conj(std::move(kids))
                    : Formula::disj(std::move(kids));
    }
    case Kind::Box:
      return negated ? Formula::dia(nnf_rec(f.child(), true))
                     : Formula::box(nnf_rec(f.child(), false));
    case Kind::Dia:
      return negated ? Formula::box(nnf_rec(f.child(), true))
                     : Formula::dia(nnf_rec(f.child(), false));
    case Kind::BoxInv:
      return negated ? Formula::dia_inv(nnf_rec(f.child(), true))
                     : Formula::box_inv(nnf_rec(f.child(), false));
    case Kind::DiaInv:
      return negated ? Formula::box_inv(nnf_rec(f.child(), true))
                     : Formula::dia_inv(nnf_rec(f.child(), false));
    case Kind::Implies: {
      // ~(a -> b) = a & ~b
      Formula na = nnf_rec(f.child(0), !negated);
      Formula b = nnf_rec(f.child(1), negated);
      return negated ? Formula::conj({std::move(na), std::move(b)})
                     : Formula::disj({std::move(na), std::move(b)});
    }
    case Kind::Iff: {
      // (~a | b) & (~b | a), then negate the whole if needed.
      const Formula& a = f.child(0);
      const Formula& b = f.child(1);
      Formula expanded = Formula::conj(
          {Formula::disj({Formula::neg(a), b}),
           Formula::disj({Formula::neg(b), a})});
      return nnf_rec(expanded, negated);
    }
  }
  return f;  // unreachable
}

}  // namespace detail

inline Formula to_nnf(const Formula& f) { return detail::nnf_rec(f, false); }

// NNF of the negation; this is used everywhere a side of an equation gets
// complemented, so it has its own name.
inline Formula neg_nnf(const Formula& f) { return detail::nnf_rec(f, true); }

inline bool is_nnf(const Formula& f) {
  switch (f.kind()) {
    case Kind::Implies:
    case Kind::Iff:
      return false;
    case Kind::Not:
      return f.child().is(Kind::Var) || f.child().is(Kind::Nominal);
    default:
      for (const auto& c : f.children())
        if (!is_nnf(c)) return false;
      return true;
  }
}

// ── Polarity ────────────────────────────────────────────────────────────────

enum class Polarity : std::uint8_t { Absent, Positive, Negative, Mixed };

inline const char* polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Absent: return "Absent";
    case Polarity::Positive: return "Positive";
    case Polarity::Negative: return "Negative";
    case Polarity::Mixed: return "Mixed";
  }
  return "?";
}

namespace detail {

struct Occurrences {
  bool pos = false;
  bool neg = false;
  void flip() { std::swap(pos, neg); }
  void merge(const Occurrences& o) { pos |= o.pos; neg |= o.neg; }
};

inline Occurrences occurrences_of(const Formula& f, const std::string& p,
                                  bool under_neg) {
  Occurrences acc;
  switch (f.kind()) {
    case Kind::Var:
      if (f.var_name() == p) {
        acc.pos = !under_neg;
        acc.neg = under_neg;
      }
      return acc;
    case Kind::Not:
      return occurrences_of(f.child(), p, !under_neg);
    case Kind::Implies: {
      acc = occurrences_of(f.child(0), p, !under_neg);
      acc.merge(occurrences_of(f.child(1), p, under_neg));
      return acc;
    }
    case Kind::Iff: {
      // Both sides occur with both polarities once the biconditional is
      // unfolded, so any occurrence counts twice.
      Occurrences l = occurrences_of(f.child(0), p, under_neg);
      Occurrences r = occurrences_of(f.child(1), p, under_neg);
      l.merge(r);
      if (l.pos || l.neg) { l.pos = true; l.neg = true; }
      return l;
    }
    default:
      for (const auto& c : f.children())
        acc.merge(occurrences_of(c, p, under_neg));
      return acc;
  }
}

inline Polarity to_polarity(const Occurrences& o) {
  if (o.pos && o.neg) return Polarity::Mixed;
  if (o.pos) return Polarity::Positive;
  if (o.neg) return Polarity::Negative;
  return Polarity::Absent;
}

}  // namespace detail

inline Polarity polarity_of(const Formula& f, const std::string& p) {
  return detail::to_polarity(detail::occurrences_of(f, p, false));
}

// A positive (negative) formula: every variable occurs only positively
// (only negatively).  Variable-free formulas are both.
inline bool all_vars_positive(const Formula& f);
inline bool all_vars_negative(const Formula& f);

namespace detail {

inline bool vars_one_signed(const Formula& f, bool want_pos, bool under_neg) {
  switch (f.kind()) {
    case Kind::Var:
      return want_pos != under_neg;
    case Kind::Not:
      return vars_one_signed(f.child(), want_pos, !under_neg);
    case Kind::Implies:
      return vars_one_signed(f.child(0), want_pos, !under_neg) &&
             vars_one_signed(f.child(1), want_pos, under_neg);
    case Kind::Iff:
      // Occurrences inside a biconditional carry both signs, so only a
      // variable-free one can be one-signed.
      return vars_one_signed(f.child(0), want_pos, under_neg) &&
             vars_one_signed(f.child(0), want_pos, !under_neg) &&
             vars_one_signed(f.child(1), want_pos, under_neg) &&
             vars_one_signed(f.child(1), want_pos, !under_neg);
    default:
      for (const auto& c : f.children())
        if (!vars_one_signed(c, want_pos, under_neg)) return false;
      return true;
  }
}

}  // namespace detail

inline bool all_vars_positive(const Formula& f) {
  return detail::vars_one_signed(f, true, false);
}

inline bool all_vars_negative(const Formula& f) {
  return detail::vars_one_signed(f, false, false);
}

// ── Collection helpers ──────────────────────────────────────────────────────

inline void collect_vars(const Formula& f, std::set<std::string>& out) {
  if (f.is(Kind::Var)) out.insert(f.var_name());
  for (const auto& c : f.children()) collect_vars(c, out);
}

inline std::set<std::string> vars_of(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

inline void collect_nominals(const Formula& f, std::set<int>& out) {
  if (f.is(Kind::Nominal)) out.insert(f.nominal_index());
  for (const auto& c : f.children()) collect_nominals(c, out);
}

inline std::set<int> nominals_of(const Formula& f) {
  std::set<int> out;
  collect_nominals(f, out);
  return out;
}

inline bool contains_var(const Formula& f, const std::string& p) {
  if (f.is(Kind::Var)) return f.var_name() == p;
  for (const auto& c : f.children())
    if (contains_var(c, p)) return true;
  return false;
}

// Pure: free of propositional variables (nominals and constants only).
inline bool is_pure(const Formula& f) {
  if (f.is(Kind::Var)) return false;
  for (const auto& c : f.children())
    if (!is_pure(c)) return false;
  return true;
}

inline bool uses_inverse_modalities(const Formula& f) {
  if (f.is(Kind::BoxInv) || f.is(Kind::DiaInv)) return true;
  for (const auto& c : f.children())
    if (uses_inverse_modalities(c)) return true;
  return false;
}

inline bool uses_nominals(const Formula& f) {
  if (f.is(Kind::Nominal)) return true;
  for (const auto& c : f.children())
    if (uses_nominals(c)) return true;
  return false;
}

// ── Substitution ────────────────────────────────────────────────────────────
// Replaces every occurrence of variable p by psi.  Negative literals ~p are
// replaced by the NNF of ~psi so that NNF inputs stay NNF.  (On non-NNF
// inputs the replacement still lands under the surrounding negation and is
// merely less pretty.)

inline Formula substitute(const Formula& f, const std::string& p,
                          const Formula& psi) {
  switch (f.kind()) {
    case Kind::Var:
      return f.var_name() == p ? psi : f;
    case Kind::Not:
      if (f.child().is(Kind::Var) && f.child().var_name() == p)
        return neg_nnf(psi);
      return Formula::neg(substitute(f.child(), p, psi));
    case Kind::Top:
    case Kind::Bottom:
    case Kind::Nominal:
      return f;
    default: {
      std::vector<Formula> kids;
      kids.reserve(f.arity());
      bool changed = false;
      for (const auto& c : f.children()) {
        Formula r = substitute(c, p, psi);
        changed |= (r != c);
        kids.push_back(std::move(r));
      }
      if (!changed) return f;
      switch (f.kind()) {
        case Kind::And: return Formula::conj(std::move(kids));
        case Kind::Or: return Formula::disj(std::move(kids));
        case Kind::Box: return Formula::box(std::move(kids[0]));
        case Kind::Dia: return Formula::dia(std::move(kids[0]));
        case Kind::BoxInv: return Formula::box_inv(std::move(kids[0]));
        case Kind::DiaInv: return Formula::dia_inv(std::move(kids[0]));
        case Kind::Implies:
          return Formula::implies(std::move(kids[0]), std::move(kids[1]));
        case Kind::Iff:
          return Formula::iff(std::move(kids[0]), std::move(kids[1]));
        default: return f;  // unreachable
      }
    }
  }
}

// ── Distribution into disjuncts ─────────────────────────────────────────────
// For an NNF input, exhaustively applies
//      dia (a | b)  =  dia a | dia b          (same for diainv)
//      (a | b) & c  =  (a & c) | (b & c)
// at every position not under a box/boxinv, and returns the disjuncts of the
// result.  Box scopes are opaque: whatever disjunctions live under a box
// stay there.

inline std::vector<Formula> distribute_to_disjuncts(const Formula& f) {
  switch (f.kind()) {
    case Kind::Or: {
      std::vector<Formula> out;
      for (const auto& c : f.children()) {
        auto sub = distribute_to_disjuncts(c);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case Kind::And: {
      // Cartesian product over the children's disjunct lists.
      std::vector<std::vector<Formula>> parts;
      parts.reserve(f.arity());
      std::size_t total = 1;
      for (const auto& c : f.children()) {
        parts.push_back(distribute_to_disjuncts(c));
        total *= parts.back().size();
      }
      std::vector<Formula> out;
      out.reserve(total);
      std::vector<std::size_t> pick(parts.size(), 0);
      for (std::size_t n = 0; n < total; ++n) {
        std::vector<Formula> conjuncts;
        conjuncts.reserve(parts.size());
        for (std::size_t i = 0; i < parts.size(); ++i)
          conjuncts.push_back(parts[i][pick[i]]);
        out.push_back(Formula::conj(std::move(conjuncts)));
        for (std::size_t i = parts.size(); i-- > 0;) {
          if (++pick[i] < parts[i].size()) break;
          pick[i] = 0;
        }
      }
      return out;
    }
    case Kind::Dia:
    case Kind::DiaInv: {
      std::vector<Formula> out;
      for (auto& d : distribute_to_disjuncts(f.child()))
        out.push_back(f.is(Kind::Dia) ? Formula::dia(std::move(d))
                                      : Formula::dia_inv(std::move(d)));
      return out;
    }
    default:
      return {f};
  }
}

// ── Syntactic closure ───────────────────────────────────────────────────────
// A formula is syntactically closed when every nominal and every diainv
// occurs positively and every boxinv occurs negatively; syntactically open
// is the mirror image.  Formulas without nominals or inverse modalities are
// trivially both; a formula can also be neither.

enum class ClosureClass : std::uint8_t {
  Both,
  SyntacticallyClosed,
  SyntacticallyOpen,
  Neither,
};

inline const char* closure_class_name(ClosureClass c) {
  switch (c) {
    case ClosureClass::Both: return "Both";
    case ClosureClass::SyntacticallyClosed: return "SyntacticallyClosed";
    case ClosureClass::SyntacticallyOpen: return "SyntacticallyOpen";
    case ClosureClass::Neither: return "Neither";
  }
  return "?";
}

namespace detail {

struct ClosureScan {
  bool nominal_pos = false, nominal_neg = false;
  bool diainv_pos = false, diainv_neg = false;
  bool boxinv_pos = false, boxinv_neg = false;
};

inline void closure_scan(const Formula& f, bool under_neg, ClosureScan& s) {
  switch (f.kind()) {
    case Kind::Nominal:
      (under_neg ? s.nominal_neg : s.nominal_pos) = true;
      return;
    case Kind::DiaInv:
      (under_neg ? s.diainv_neg : s.diainv_pos) = true;
      closure_scan(f.child(), under_neg, s);
      return;
    case Kind::BoxInv:
      (under_neg ? s.boxinv_neg : s.boxinv_pos) = true;
      closure_scan(f.child(), under_neg, s);
      return;
    case Kind::Not:
      closure_scan(f.child(), !under_neg, s);
      return;
    case Kind::Implies:
      closure_scan(f.child(0), !under_neg, s);
      closure_scan(f.child(1), under_neg, s);
      return;
    case Kind::Iff:
      // Unfolding gives each side both polarities.
      closure_scan(f.child(0), under_neg, s);
      closure_scan(f.child(0), !under_neg, s);
      closure_scan(f.child(1), under_neg, s);
      closure_scan(f.child(1), !under_neg, s);
      return;
    default:
      for (const auto& c : f.children()) closure_scan(c, under_neg, s);
      return;
  }
}

}  // namespace detail

inline ClosureClass closure_class(const Formula& f) {
  detail::ClosureScan s;
  detail::closure_scan(f, false, s);
  bool closed = !s.nominal_neg && !s.diainv_neg && !s.boxinv_pos;
  bool open = !s.nominal_pos && !s.diainv_pos && !s.boxinv_neg;
  if (closed && open) return ClosureClass::Both;
  if (closed) return ClosureClass::SyntacticallyClosed;
  if (open) return ClosureClass::SyntacticallyOpen;
  return ClosureClass::Neither;
}

}  // namespace sqema
