// ============================================================================
//  equations.hpp
//
//  The solver works on systems of global implications  lhs -> rhs  whose
//  sides are negation normal form formulae over variables, nominals and the
//  forward/backward modalities.  Each system descends from one disjunctive
//  branch of the negated input, seeded as  #i0 -> conjunct  with #i0 naming
//  the evaluation point.
//
//  Also here: the bookkeeping types for replayable traces, the shared
//  system-level cleanup pass, and the structural sanity check that every
//  rewriting step is supposed to preserve (left sides stay syntactically
//  closed, right sides stay syntactically open).
// ============================================================================
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sqema/formula.hpp"
#include "sqema/normalize.hpp"
#include "sqema/simplify.hpp"

namespace sqema {

struct Equation {
  Formula lhs, rhs;

  Formula as_formula() const { return Formula::implies(lhs, rhs); }
  bool pure() const { return is_pure(lhs) && is_pure(rhs); }
};

inline bool operator==(const Equation& a, const Equation& b) {
  return a.lhs == b.lhs && a.rhs == b.rhs;
}
inline bool operator!=(const Equation& a, const Equation& b) { return !(a == b); }

using EquationSystem = std::vector<Equation>;

inline bool system_pure(const EquationSystem& sys) {
  for (const auto& eq : sys)
    if (!eq.pure()) return false;
  return true;
}

inline std::string to_string(const Equation& eq) {
  return to_string(eq.as_formula());
}

inline std::string to_string(const EquationSystem& sys) {
  std::string out = "{";
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (i) out += "; ";
    out += to_string(sys[i]);
  }
  out += "}";
  return out;
}

// ── Branch setup ────────────────────────────────────────────────────────────

// Negates the input, normalizes, and distributes diamonds and conjunctions
// over disjunctions (boxes stay opaque).  Each resulting disjunct becomes
// one equation system, its top-level conjuncts split into separate
// equations anchored at #i0.
inline std::vector<EquationSystem> initial_systems(const Formula& phi) {
  Formula negated = neg_nnf(phi);
  std::vector<EquationSystem> out;
  for (const Formula& branch : distribute_to_disjuncts(negated)) {
    EquationSystem sys;
    // One equation per conjunct; the same split the conjunction rule would
    // perform, done up front.
    std::function<void(const Formula&)> split = [&](const Formula& g) {
      if (g.is(Kind::And)) {
        for (const auto& c : g.children()) split(c);
      } else {
        sys.push_back(Equation{Formula::nominal(kCurrentStateNominal), g});
      }
    };
    split(branch);
    out.push_back(std::move(sys));
  }
  return out;
}

// ── System-level cleanup ────────────────────────────────────────────────────

// Simplifies both sides of every equation, discards equations that are
// propositional tautologies (they constrain nothing), and collapses the
// whole system to the single unsatisfiable equation  true -> false  as soon
// as one member can never hold anywhere.
inline EquationSystem normalize_system(const EquationSystem& sys) {
  EquationSystem out;
  for (const Equation& eq : sys) {
    Equation e{simplify_aux(eq.lhs), simplify_aux(eq.rhs)};
    if (is_prop_tautology(Formula::disj({neg_nnf(e.lhs), e.rhs})))
      continue;
    if (is_prop_tautology(Formula::conj({e.lhs, neg_nnf(e.rhs)})))
      return {Equation{Formula::top(), Formula::bottom()}};
    out.push_back(std::move(e));
  }
  return out;
}

// ── Shape invariant ─────────────────────────────────────────────────────────

// Every non-pure equation must keep a syntactically closed left side and a
// syntactically open right side (formulas without nominals or inverse
// modalities count as both).  Pure equations are exempt; they are finished
// output and no rule touches them again.
inline bool equation_shape_ok(const Equation& eq) {
  if (eq.pure()) return true;
  ClosureClass l = closure_class(eq.lhs);
  ClosureClass r = closure_class(eq.rhs);
  bool lhs_ok = l == ClosureClass::SyntacticallyClosed || l == ClosureClass::Both;
  bool rhs_ok = r == ClosureClass::SyntacticallyOpen || r == ClosureClass::Both;
  return lhs_ok && rhs_ok;
}

// Returns the index of the first offending equation, or -1 when the whole
// system is in shape.
inline int first_shape_violation(const EquationSystem& sys) {
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (!equation_shape_ok(sys[i])) return int(i);
  return -1;
}

// ── Traces ──────────────────────────────────────────────────────────────────

enum class RuleName {
  AndRule,
  LeftOr,
  RightOr,
  LeftBox,
  RightBox,
  DiaRule,
  Ackermann,
  PolaritySwitch,
  AuxSimplify,
  TrivialPolarity,
};

inline const char* rule_name(RuleName r) {
  switch (r) {
    case RuleName::AndRule: return "and-rule";
    case RuleName::LeftOr: return "left-shift-or";
    case RuleName::RightOr: return "right-shift-or";
    case RuleName::LeftBox: return "left-shift-box";
    case RuleName::RightBox: return "right-shift-box";
    case RuleName::DiaRule: return "dia-rule";
    case RuleName::Ackermann: return "ackermann";
    case RuleName::PolaritySwitch: return "polarity-switch";
    case RuleName::AuxSimplify: return "simplify";
    case RuleName::TrivialPolarity: return "uniform-polarity";
  }
  return "?";
}

struct TraceStep {
  RuleName rule;
  int eq_index = -1;                // equation acted on; -1 for system-wide steps
  std::string variable;             // set for variable-directed steps
  std::vector<int> kept_disjuncts;  // or-shift: disjunct positions left in place
  std::string constant;             // uniform-polarity: "true" or "false"
  EquationSystem before, after;
};

enum class AttemptOutcome { Solved, Stuck, BudgetExceeded };

struct AttemptTrace {
  std::vector<std::string> order;  // elimination order this attempt followed
  std::vector<TraceStep> steps;
  AttemptOutcome outcome = AttemptOutcome::Stuck;
  EquationSystem final_system;     // pure when solved, the stuck state otherwise
};

struct BranchTrace {
  EquationSystem initial;
  std::vector<TraceStep> pre_steps;  // shared cleanup before any ordering is tried
  std::vector<AttemptTrace> attempts;
};

}  // namespace sqema
