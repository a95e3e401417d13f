// ============================================================================
//  engine.hpp
//
//  The second-order quantifier elimination engine.  Given a modal formula,
//  it negates and splits it into implication systems (equations.hpp), then
//  tries to rid each system of its propositional variables one at a time.
//
//  Per variable p the solver loops: simplify the system; if every equation
//  mentioning p is either an antecedent equation (lhs -> p with p-free lhs)
//  or downward monotone in p, eliminate p by substituting the join of the
//  collected antecedents; otherwise pick the first equation blocking that
//  precondition and rewrite it (split a conjunction on the right, shift
//  p-irrelevant disjuncts to the left, strip a box on the right, or peel a
//  diamond off into a fresh nominal).  When no rewrite fits, the variable
//  is retried with inverted polarity, and after that the whole elimination
//  order is abandoned and the next permutation tried.
//
//  Every system change is recorded as a replayable trace step.  A solved
//  branch is pure (variable-free) and goes to translation.hpp for its
//  first-order reading.
// ============================================================================
#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqema/equations.hpp"
#include "sqema/formula.hpp"
#include "sqema/normalize.hpp"
#include "sqema/translation.hpp"

namespace sqema {

// ── Single rule applications ────────────────────────────────────────────────
// These are total on well-shaped arguments and throw std::invalid_argument
// otherwise; the driver below only calls them on shapes it has checked.

namespace detail {

inline void check_eq_index(const EquationSystem& sys, int idx) {
  if (idx < 0 || std::size_t(idx) >= sys.size())
    throw std::invalid_argument("rule application: equation index out of range");
}

}  // namespace detail

// lhs -> (c1 & .. & cn)  becomes one equation per conjunct.
inline EquationSystem apply_and_rule(const EquationSystem& sys, int idx) {
  detail::check_eq_index(sys, idx);
  const Equation& eq = sys[idx];
  if (!eq.rhs.is(Kind::And))
    throw std::invalid_argument("and-rule needs a conjunction on the right");
  EquationSystem out(sys.begin(), sys.begin() + idx);
  for (const auto& c : eq.rhs.children()) out.push_back(Equation{eq.lhs, c});
  out.insert(out.end(), sys.begin() + idx + 1, sys.end());
  return out;
}

// lhs -> (d1 | .. | dn): the disjuncts listed in `moved` cross to the left
// negated, the rest stay.  At least one disjunct must stay.
inline EquationSystem apply_left_or(const EquationSystem& sys, int idx,
                                    const std::vector<int>& moved) {
  detail::check_eq_index(sys, idx);
  const Equation& eq = sys[idx];
  if (!eq.rhs.is(Kind::Or))
    throw std::invalid_argument("left-shift-or needs a disjunction on the right");
  std::vector<bool> is_moved(eq.rhs.arity(), false);
  for (int m : moved) {
    if (m < 0 || std::size_t(m) >= eq.rhs.arity())
      throw std::invalid_argument("left-shift-or: disjunct index out of range");
    is_moved[std::size_t(m)] = true;
  }
  std::vector<Formula> lhs_parts{eq.lhs};
  std::vector<Formula> kept;
  for (std::size_t i = 0; i < eq.rhs.arity(); ++i) {
    if (is_moved[i]) lhs_parts.push_back(neg_nnf(eq.rhs.child(i)));
    else kept.push_back(eq.rhs.child(i));
  }
  if (moved.empty() || kept.empty())
    throw std::invalid_argument("left-shift-or: need a proper split");
  EquationSystem out = sys;
  out[std::size_t(idx)] =
      Equation{Formula::conj(std::move(lhs_parts)), Formula::disj(std::move(kept))};
  return out;
}

// (c1 & .. & cn) -> rhs: the conjuncts listed in `moved` cross to the right
// negated.  Mirror image of apply_left_or; the default strategy never needs
// it, it exists for completeness and direct use.
inline EquationSystem apply_right_or(const EquationSystem& sys, int idx,
                                     const std::vector<int>& moved) {
  detail::check_eq_index(sys, idx);
  const Equation& eq = sys[idx];
  if (!eq.lhs.is(Kind::And))
    throw std::invalid_argument("right-shift-or needs a conjunction on the left");
  std::vector<bool> is_moved(eq.lhs.arity(), false);
  for (int m : moved) {
    if (m < 0 || std::size_t(m) >= eq.lhs.arity())
      throw std::invalid_argument("right-shift-or: conjunct index out of range");
    is_moved[std::size_t(m)] = true;
  }
  std::vector<Formula> rhs_parts{eq.rhs};
  std::vector<Formula> kept;
  for (std::size_t i = 0; i < eq.lhs.arity(); ++i) {
    if (is_moved[i]) rhs_parts.push_back(neg_nnf(eq.lhs.child(i)));
    else kept.push_back(eq.lhs.child(i));
  }
  if (moved.empty() || kept.empty())
    throw std::invalid_argument("right-shift-or: need a proper split");
  EquationSystem out = sys;
  out[std::size_t(idx)] =
      Equation{Formula::conj(std::move(kept)), Formula::disj(std::move(rhs_parts))};
  return out;
}

// lhs -> box g  becomes  diainv lhs -> g  (residuation).
inline EquationSystem apply_left_box(const EquationSystem& sys, int idx) {
  detail::check_eq_index(sys, idx);
  const Equation& eq = sys[idx];
  if (!eq.rhs.is(Kind::Box))
    throw std::invalid_argument("left-shift-box needs a box on the right");
  EquationSystem out = sys;
  out[std::size_t(idx)] = Equation{Formula::dia_inv(eq.lhs), eq.rhs.child()};
  return out;
}

// diainv g -> rhs  becomes  g -> box rhs;  dia g -> rhs  becomes
// g -> boxinv rhs.  The other residuation direction.
inline EquationSystem apply_right_box(const EquationSystem& sys, int idx) {
  detail::check_eq_index(sys, idx);
  const Equation& eq = sys[idx];
  EquationSystem out = sys;
  if (eq.lhs.is(Kind::DiaInv))
    out[std::size_t(idx)] = Equation{eq.lhs.child(), Formula::box(eq.rhs)};
  else if (eq.lhs.is(Kind::Dia))
    out[std::size_t(idx)] = Equation{eq.lhs.child(), Formula::box_inv(eq.rhs)};
  else
    throw std::invalid_argument("right-shift-box needs a diamond on the left");
  return out;
}

// #ij -> dia g  becomes  #ij -> dia #ik  plus  #ik -> g  for fresh k.
inline EquationSystem apply_dia_rule(const EquationSystem& sys, int idx,
                                     int fresh_index) {
  detail::check_eq_index(sys, idx);
  const Equation& eq = sys[idx];
  if (!eq.lhs.is(Kind::Nominal))
    throw std::invalid_argument("dia-rule needs a nominal on the left");
  if (!eq.rhs.is(Kind::Dia))
    throw std::invalid_argument("dia-rule needs a diamond on the right");
  std::set<int> used;
  for (const auto& e : sys) {
    collect_nominals(e.lhs, used);
    collect_nominals(e.rhs, used);
  }
  if (used.count(fresh_index))
    throw std::invalid_argument("dia-rule: nominal index already in use");
  Formula k = Formula::nominal(fresh_index);
  EquationSystem out(sys.begin(), sys.begin() + idx);
  out.push_back(Equation{eq.lhs, Formula::dia(k)});
  out.push_back(Equation{k, eq.rhs.child()});
  out.insert(out.end(), sys.begin() + idx + 1, sys.end());
  return out;
}

// ── Variable elimination ────────────────────────────────────────────────────

// lhs -> p  with p-free lhs: contributes its lhs to the join substituted
// for p.
inline bool antecedent_equation_for(const Equation& eq, const std::string& p) {
  return eq.rhs.is(Kind::Var) && eq.rhs.var_name() == p && !contains_var(eq.lhs, p);
}

// As a single implication the equation must be downward monotone in p: p
// only positive on the left, only negative on the right.
inline bool equation_negative_in(const Equation& eq, const std::string& p) {
  Polarity pol = polarity_of(eq.as_formula(), p);
  return pol == Polarity::Negative || pol == Polarity::Absent;
}

inline bool equation_blocks(const Equation& eq, const std::string& p) {
  if (!contains_var(eq.lhs, p) && !contains_var(eq.rhs, p)) return false;
  return !antecedent_equation_for(eq, p) && !equation_negative_in(eq, p);
}

inline bool ackermann_applicable(const EquationSystem& sys, const std::string& p) {
  for (const auto& eq : sys)
    if (equation_blocks(eq, p)) return false;
  return true;
}

// Replaces p everywhere by the join of the collected antecedents (bottom
// when there are none) and drops the antecedent equations.  Sound exactly
// when ackermann_applicable holds.
inline EquationSystem apply_ackermann(const EquationSystem& sys,
                                      const std::string& p) {
  if (!ackermann_applicable(sys, p))
    throw std::invalid_argument("ackermann: precondition violated for " + p);
  std::vector<Formula> antecedents;
  for (const auto& eq : sys)
    if (antecedent_equation_for(eq, p)) antecedents.push_back(eq.lhs);
  Formula join =
      antecedents.empty() ? Formula::bottom() : Formula::disj(std::move(antecedents));
  EquationSystem out;
  for (const auto& eq : sys) {
    if (antecedent_equation_for(eq, p)) continue;
    out.push_back(Equation{substitute(eq.lhs, p, join), substitute(eq.rhs, p, join)});
  }
  return out;
}

// Swaps p and ~p throughout the system.
inline EquationSystem switch_polarity(const EquationSystem& sys,
                                      const std::string& p) {
  Formula negated = Formula::neg(Formula::var(p));
  EquationSystem out;
  out.reserve(sys.size());
  for (const auto& eq : sys)
    out.push_back(Equation{substitute(eq.lhs, p, negated),
                           substitute(eq.rhs, p, negated)});
  return out;
}

// Variables occurring with one sign only across the whole system (reading
// each equation as a single implication) are replaced by the constant that
// slackens every constraint: top for uniformly positive, bottom for
// uniformly negative.  Steps are appended to *steps when given.
inline EquationSystem eliminate_trivial_polarity(EquationSystem sys,
                                                 std::vector<TraceStep>* steps = nullptr) {
  std::set<std::string> var_set;
  for (const auto& eq : sys) {
    collect_vars(eq.lhs, var_set);
    collect_vars(eq.rhs, var_set);
  }
  for (const std::string& p : var_set) {
    bool pos = false, neg = false;
    for (const auto& eq : sys) {
      switch (polarity_of(eq.as_formula(), p)) {
        case Polarity::Positive: pos = true; break;
        case Polarity::Negative: neg = true; break;
        case Polarity::Mixed: pos = neg = true; break;
        case Polarity::Absent: break;
      }
    }
    if (pos == neg) continue;  // mixed across equations, or gone already
    Formula constant = pos ? Formula::top() : Formula::bottom();
    EquationSystem after;
    after.reserve(sys.size());
    for (const auto& eq : sys)
      after.push_back(Equation{substitute(eq.lhs, p, constant),
                               substitute(eq.rhs, p, constant)});
    if (steps) {
      TraceStep step;
      step.rule = RuleName::TrivialPolarity;
      step.variable = p;
      step.constant = pos ? "true" : "false";
      step.before = sys;
      step.after = after;
      steps->push_back(std::move(step));
    }
    sys = std::move(after);
  }
  return sys;
}

// ── Driver ──────────────────────────────────────────────────────────────────

struct EngineConfig {
  int max_order_permutations = 24;
  int max_rule_applications = 10000;  // per elimination-order attempt
  bool allow_polarity_switch = true;
};

enum class FailureKind { AllOrdersExhausted, BudgetExceeded };

inline const char* to_string(FailureKind k) {
  return k == FailureKind::AllOrdersExhausted ? "all-orders-exhausted"
                                              : "budget-exceeded";
}

struct SqemaResult {
  bool success = false;

  // Success payload.
  std::vector<std::vector<Formula>> pure_systems;  // per branch
  FoFormula local_fo;   // one free variable y0, the evaluation point
  FoFormula global_fo;  // sentence: local_fo closed under forall y0
  bool canonical = false;

  // Failure payload.
  FailureKind failure = FailureKind::AllOrdersExhausted;
  int failed_branch = -1;
  EquationSystem stuck_system;

  std::vector<BranchTrace> traces;  // per branch, in branch order
};

namespace detail {

struct AttemptState {
  EquationSystem sys;
  AttemptTrace trace;
  int budget = 0;
  int next_nominal = 1;
  bool budget_hit = false;
};

inline bool consume_budget(AttemptState& st) {
  if (st.budget <= 0) {
    st.budget_hit = true;
    return false;
  }
  --st.budget;
  return true;
}

inline void record_step(AttemptState& st, RuleName rule, int eq_index,
                        std::string variable, std::vector<int> kept,
                        std::string constant, EquationSystem after) {
  TraceStep step;
  step.rule = rule;
  step.eq_index = eq_index;
  step.variable = std::move(variable);
  step.kept_disjuncts = std::move(kept);
  step.constant = std::move(constant);
  step.before = st.sys;
  step.after = after;
  st.trace.steps.push_back(std::move(step));
  st.sys = std::move(after);
}

// Normalizes st.sys, recording the change if there is one.  False means
// the budget ran out.
inline bool normalize_recorded(AttemptState& st) {
  EquationSystem after = normalize_system(st.sys);
  if (after == st.sys) return true;
  if (!consume_budget(st)) return false;
  record_step(st, RuleName::AuxSimplify, -1, "", {}, "", std::move(after));
  return true;
}

enum class SolveStatus { Eliminated, Stuck, OutOfBudget };

inline bool system_mentions(const EquationSystem& sys, const std::string& p) {
  for (const auto& eq : sys)
    if (contains_var(eq.lhs, p) || contains_var(eq.rhs, p)) return true;
  return false;
}

// One variable, one polarity: rewrite until the substitution precondition
// holds, then substitute p away.
inline SolveStatus solve_for(AttemptState& st, const std::string& p) {
  for (;;) {
    if (!normalize_recorded(st)) return SolveStatus::OutOfBudget;
    if (!system_mentions(st.sys, p)) return SolveStatus::Eliminated;

    if (ackermann_applicable(st.sys, p)) {
      if (!consume_budget(st)) return SolveStatus::OutOfBudget;
      record_step(st, RuleName::Ackermann, -1, p, {}, "",
                  apply_ackermann(st.sys, p));
      return SolveStatus::Eliminated;
    }

    int idx = -1;
    for (std::size_t i = 0; i < st.sys.size(); ++i) {
      if (equation_blocks(st.sys[i], p)) {
        idx = int(i);
        break;
      }
    }
    // ackermann_applicable was false, so a blocking equation exists.
    const Equation& eq = st.sys[std::size_t(idx)];

    // No rewrite moves p out of an antecedent; this order is hopeless.
    if (contains_var(eq.lhs, p)) return SolveStatus::Stuck;

    switch (eq.rhs.kind()) {
      case Kind::And: {
        if (!consume_budget(st)) return SolveStatus::OutOfBudget;
        record_step(st, RuleName::AndRule, idx, p, {}, "",
                    apply_and_rule(st.sys, idx));
        continue;
      }
      case Kind::Or: {
        std::vector<int> moved, kept;
        for (std::size_t i = 0; i < eq.rhs.arity(); ++i) {
          Polarity pol = polarity_of(eq.rhs.child(i), p);
          if (pol == Polarity::Positive || pol == Polarity::Mixed)
            kept.push_back(int(i));
          else
            moved.push_back(int(i));
        }
        if (moved.empty() || kept.empty()) return SolveStatus::Stuck;
        if (!consume_budget(st)) return SolveStatus::OutOfBudget;
        record_step(st, RuleName::LeftOr, idx, p, kept,
                    "", apply_left_or(st.sys, idx, moved));
        continue;
      }
      case Kind::Box: {
        if (!consume_budget(st)) return SolveStatus::OutOfBudget;
        record_step(st, RuleName::LeftBox, idx, p, {}, "",
                    apply_left_box(st.sys, idx));
        continue;
      }
      case Kind::Dia: {
        if (!eq.lhs.is(Kind::Nominal)) return SolveStatus::Stuck;
        if (!consume_budget(st)) return SolveStatus::OutOfBudget;
        record_step(st, RuleName::DiaRule, idx, p, {}, "",
                    apply_dia_rule(st.sys, idx, st.next_nominal));
        ++st.next_nominal;
        continue;
      }
      default:
        // A bare variable, negated variable, nominal or inverse modality on
        // the right with p trapped inside: no rule reshapes these.
        return SolveStatus::Stuck;
    }
  }
}

}  // namespace detail

// Runs one elimination order to completion on a copy of `start`.
inline AttemptTrace eliminate_in_order(const EquationSystem& start,
                                       const std::vector<std::string>& order,
                                       const EngineConfig& cfg,
                                       int first_fresh_nominal) {
  detail::AttemptState st;
  st.sys = start;
  st.trace.order = order;
  st.budget = cfg.max_rule_applications;
  st.next_nominal = first_fresh_nominal;

  auto finish = [&](AttemptOutcome outcome) {
    st.trace.outcome = outcome;
    st.trace.final_system = st.sys;
    return std::move(st.trace);
  };

  for (const std::string& p : order) {
    EquationSystem snapshot_sys = st.sys;
    std::size_t snapshot_steps = st.trace.steps.size();
    int snapshot_nominal = st.next_nominal;
    int snapshot_budget = st.budget;

    detail::SolveStatus s = detail::solve_for(st, p);
    if (s == detail::SolveStatus::OutOfBudget)
      return finish(AttemptOutcome::BudgetExceeded);
    if (s == detail::SolveStatus::Stuck) {
      if (!cfg.allow_polarity_switch) return finish(AttemptOutcome::Stuck);

      // Rewind the failed derivation, flip p, and try once more.
      st.trace.steps.resize(snapshot_steps);
      st.sys = snapshot_sys;
      st.next_nominal = snapshot_nominal;
      st.budget = snapshot_budget;
      if (!detail::consume_budget(st))
        return finish(AttemptOutcome::BudgetExceeded);
      detail::record_step(st, RuleName::PolaritySwitch, -1, p, {}, "",
                          switch_polarity(st.sys, p));
      s = detail::solve_for(st, p);
      if (s == detail::SolveStatus::OutOfBudget)
        return finish(AttemptOutcome::BudgetExceeded);
      if (s == detail::SolveStatus::Stuck) return finish(AttemptOutcome::Stuck);
    }
  }

  if (!detail::normalize_recorded(st)) return finish(AttemptOutcome::BudgetExceeded);
  return finish(system_pure(st.sys) ? AttemptOutcome::Solved
                                    : AttemptOutcome::Stuck);
}

inline SqemaResult run_sqema(const Formula& phi, const EngineConfig& cfg = {}) {
  SqemaResult res;
  std::vector<EquationSystem> branches = initial_systems(phi);
  res.traces.reserve(branches.size());

  for (std::size_t b = 0; b < branches.size(); ++b) {
    BranchTrace bt;
    bt.initial = branches[b];

    EquationSystem sys = normalize_system(branches[b]);
    if (sys != branches[b]) {
      TraceStep step;
      step.rule = RuleName::AuxSimplify;
      step.before = branches[b];
      step.after = sys;
      bt.pre_steps.push_back(std::move(step));
    }
    EquationSystem eliminated = eliminate_trivial_polarity(sys, &bt.pre_steps);
    if (eliminated != sys) {
      EquationSystem renorm = normalize_system(eliminated);
      if (renorm != eliminated) {
        TraceStep step;
        step.rule = RuleName::AuxSimplify;
        step.before = eliminated;
        step.after = renorm;
        bt.pre_steps.push_back(std::move(step));
        eliminated = std::move(renorm);
      }
      sys = std::move(eliminated);
    }

    std::set<std::string> var_set;
    for (const auto& eq : sys) {
      collect_vars(eq.lhs, var_set);
      collect_vars(eq.rhs, var_set);
    }
    std::vector<std::string> vars(var_set.begin(), var_set.end());

    int max_nominal = kCurrentStateNominal;
    {
      std::set<int> noms;
      for (const auto& eq : sys) {
        collect_nominals(eq.lhs, noms);
        collect_nominals(eq.rhs, noms);
      }
      if (!noms.empty()) max_nominal = *noms.rbegin();
    }

    const AttemptTrace* solved = nullptr;
    std::vector<std::string> order = vars;  // already sorted
    int tried = 0;
    bool more_orders = true;
    while (more_orders && tried < cfg.max_order_permutations) {
      ++tried;
      bt.attempts.push_back(
          eliminate_in_order(sys, order, cfg, max_nominal + 1));
      if (bt.attempts.back().outcome == AttemptOutcome::Solved) {
        solved = &bt.attempts.back();
        break;
      }
      more_orders = std::next_permutation(order.begin(), order.end());
    }

    if (!solved) {
      res.success = false;
      res.failed_branch = int(b);
      res.failure = FailureKind::AllOrdersExhausted;
      for (const auto& at : bt.attempts)
        if (at.outcome == AttemptOutcome::BudgetExceeded)
          res.failure = FailureKind::BudgetExceeded;
      res.stuck_system =
          bt.attempts.empty() ? sys : bt.attempts.back().final_system;
      res.traces.push_back(std::move(bt));
      return res;
    }

    std::vector<Formula> pure;
    pure.reserve(solved->final_system.size());
    for (const auto& eq : solved->final_system) pure.push_back(eq.as_formula());
    res.pure_systems.push_back(std::move(pure));
    res.traces.push_back(std::move(bt));
  }

  VariablePool pool;
  std::vector<FoFormula> branch_fos;
  branch_fos.reserve(res.pure_systems.size());
  for (const auto& pure : res.pure_systems)
    branch_fos.push_back(branch_correspondent(pure, pool));
  res.local_fo = simplify_fo(FoFormula::conj(std::move(branch_fos)));
  res.global_fo = simplify_fo(FoFormula::forall("y0", res.local_fo));
  res.success = true;
  res.canonical = true;
  return res;
}

}  // namespace sqema
