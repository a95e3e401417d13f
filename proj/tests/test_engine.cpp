// ============================================================================
//  The elimination engine end to end: classic axioms, both elimination
//  orders, backtracking, failure modes, and trace faithfulness (every
//  recorded step can be replayed through the public rule functions).
// ============================================================================

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "sqema/classify.hpp"
#include "sqema/engine.hpp"
#include "sqema/kripke.hpp"

using namespace sqema;

namespace {

// Reapplies the named rule to step.before and compares with step.after.
void replay_step(const TraceStep& s) {
  CAPTURE(rule_name(s.rule), s.eq_index, s.variable, to_string(s.before));
  switch (s.rule) {
    case RuleName::AndRule:
      CHECK(apply_and_rule(s.before, s.eq_index) == s.after);
      break;
    case RuleName::LeftOr: {
      std::vector<int> moved;
      const Formula& rhs = s.before[std::size_t(s.eq_index)].rhs;
      for (int i = 0; i < int(rhs.arity()); ++i) {
        if (std::find(s.kept_disjuncts.begin(), s.kept_disjuncts.end(), i) ==
            s.kept_disjuncts.end())
          moved.push_back(i);
      }
      CHECK(apply_left_or(s.before, s.eq_index, moved) == s.after);
      break;
    }
    case RuleName::LeftBox:
      CHECK(apply_left_box(s.before, s.eq_index) == s.after);
      break;
    case RuleName::DiaRule: {
      std::set<int> noms_before, noms_after;
      for (const auto& e : s.before) {
        collect_nominals(e.lhs, noms_before);
        collect_nominals(e.rhs, noms_before);
      }
      for (const auto& e : s.after) {
        collect_nominals(e.lhs, noms_after);
        collect_nominals(e.rhs, noms_after);
      }
      std::vector<int> fresh;
      std::set_difference(noms_after.begin(), noms_after.end(),
                          noms_before.begin(), noms_before.end(),
                          std::back_inserter(fresh));
      REQUIRE(fresh.size() == 1);
      CHECK(apply_dia_rule(s.before, s.eq_index, fresh[0]) == s.after);
      break;
    }
    case RuleName::Ackermann:
      CHECK(apply_ackermann(s.before, s.variable) == s.after);
      break;
    case RuleName::PolaritySwitch:
      CHECK(switch_polarity(s.before, s.variable) == s.after);
      break;
    case RuleName::AuxSimplify:
      CHECK(normalize_system(s.before) == s.after);
      break;
    case RuleName::TrivialPolarity: {
      Formula c = s.constant == "true" ? Formula::top() : Formula::bottom();
      EquationSystem out;
      for (const auto& e : s.before)
        out.push_back(Equation{substitute(e.lhs, s.variable, c),
                               substitute(e.rhs, s.variable, c)});
      CHECK(out == s.after);
      break;
    }
    default:
      FAIL("unexpected rule in a trace: " << rule_name(s.rule));
  }
}

// Steps must chain: each starts where the previous one ended.
void check_trace_chaining(const BranchTrace& bt) {
  for (std::size_t i = 0; i < bt.pre_steps.size(); ++i) {
    CHECK(bt.pre_steps[i].before ==
          (i == 0 ? bt.initial : bt.pre_steps[i - 1].after));
  }
  EquationSystem start =
      bt.pre_steps.empty() ? bt.initial : bt.pre_steps.back().after;
  for (const AttemptTrace& at : bt.attempts) {
    for (std::size_t i = 0; i < at.steps.size(); ++i) {
      CHECK(at.steps[i].before == (i == 0 ? start : at.steps[i - 1].after));
    }
    if (!at.steps.empty()) CHECK(at.final_system == at.steps.back().after);
  }
}

void replay_all(const SqemaResult& res) {
  for (const BranchTrace& bt : res.traces) {
    check_trace_chaining(bt);
    for (const TraceStep& s : bt.pre_steps) replay_step(s);
    for (const AttemptTrace& at : bt.attempts)
      for (const TraceStep& s : at.steps) replay_step(s);
  }
}

}  // namespace

TEST_CASE("classic axioms produce their textbook frame conditions", "[engine]") {
  auto local = [](const char* txt) {
    SqemaResult r = run_sqema(parse_formula(txt));
    REQUIRE(r.success);
    REQUIRE(r.canonical);
    return to_string(r.local_fo);
  };
  CHECK(local("box p -> p") == "R(y0,y0)");
  CHECK(local("p -> dia p") == "R(y0,y0)");
  CHECK(local("p -> box dia p") == "forall z1 . (R(y0,z1) -> R(z1,y0))");
  CHECK(local("box p -> box box p") ==
        "forall z1 . (R(y0,z1) -> forall z2 . (R(z1,z2) -> R(y0,z2)))");
  CHECK(local("dia dia p -> dia p") ==
        "forall y1 . (R(y0,y1) -> forall y2 . (R(y1,y2) -> R(y0,y2)))");
  CHECK(local("dia box p -> box dia p") ==
        "forall y1 . (R(y0,y1) -> forall z1 . (R(y0,z1) -> exists z2 . "
        "(R(z1,z2) & R(y1,z2))))");
  // a bare diamond is never valid on any frame
  CHECK(local("dia p") == "false");
}

TEST_CASE("the global correspondent is the closed local one", "[engine]") {
  SqemaResult r = run_sqema(parse_formula("dia box p -> box dia p"));
  REQUIRE(r.success);
  CHECK(free_vars(r.local_fo) == std::set<std::string>{"y0"});
  CHECK(free_vars(r.global_fo).empty());
  CHECK_FALSE(has_predicates(r.global_fo));
  CorrespondenceCheck global = verify_global_correspondence(
      parse_formula("dia box p -> box dia p"), r.global_fo, 3);
  CHECK(global.ok);
  CHECK(global.frames_checked == 530);
}

TEST_CASE("a conjunction with a nested implication eliminates in any order",
          "[engine]") {
  Formula phi = parse_formula("p & box (dia p -> box q) -> dia box box q");
  SqemaResult r = run_sqema(phi);
  REQUIRE(r.success);
  REQUIRE(r.pure_systems.size() == 1);
  REQUIRE(r.pure_systems[0].size() == 1);
  CHECK(to_string(r.pure_systems[0][0]) ==
        "#i0 -> box dia dia boxinv (box ~#i0 | boxinv ~#i0)");
  CHECK(to_string(r.local_fo) ==
        "exists z1 . (R(y0,z1) & (forall z2 . (R(z1,z2) -> forall z3 . "
        "(R(z2,z3) -> exists z4 . (R(z4,z3) & R(z4,y0) & R(y0,z4))))))");

  auto branches = initial_systems(phi);
  REQUIRE(branches.size() == 1);
  EquationSystem start = normalize_system(branches[0]);
  EngineConfig cfg;
  AttemptTrace first = eliminate_in_order(start, {"p", "q"}, cfg, 1);
  AttemptTrace second = eliminate_in_order(start, {"q", "p"}, cfg, 1);
  REQUIRE(first.outcome == AttemptOutcome::Solved);
  REQUIRE(second.outcome == AttemptOutcome::Solved);
  CHECK(system_pure(first.final_system));
  CHECK(system_pure(second.final_system));
  // both orders land on the same pure system
  CHECK(first.final_system == second.final_system);

  replay_all(r);
  // the shape invariant holds at every recorded point
  for (const BranchTrace& bt : r.traces) {
    CHECK(first_shape_violation(bt.initial) == -1);
    for (const TraceStep& s : bt.pre_steps) {
      CHECK(first_shape_violation(s.before) == -1);
      CHECK(first_shape_violation(s.after) == -1);
    }
    for (const AttemptTrace& at : bt.attempts)
      for (const TraceStep& s : at.steps) {
        CHECK(first_shape_violation(s.before) == -1);
        CHECK(first_shape_violation(s.after) == -1);
      }
  }
}

TEST_CASE("backtracking recovers from a stuck elimination order", "[engine]") {
  SqemaResult r = run_sqema(parse_formula("box (box p <-> q) -> p"));
  REQUIRE(r.success);
  REQUIRE(r.traces.size() == 1);
  const BranchTrace& bt = r.traces[0];
  REQUIRE(bt.attempts.size() == 2);
  CHECK(bt.attempts[0].order == std::vector<std::string>{"p", "q"});
  CHECK(bt.attempts[0].outcome == AttemptOutcome::Stuck);
  CHECK(bt.attempts[1].order == std::vector<std::string>{"q", "p"});
  CHECK(bt.attempts[1].outcome == AttemptOutcome::Solved);
  // the formula is locally equivalent to falsum: valid nowhere
  CHECK(r.local_fo == FoFormula::bottom());
  replay_all(r);
}

TEST_CASE("an unsolvable input fails after exhausting all orders", "[engine]") {
  SqemaResult r = run_sqema(parse_formula("box dia p -> dia box p"));
  REQUIRE_FALSE(r.success);
  CHECK(r.failure == FailureKind::AllOrdersExhausted);
  CHECK(r.failed_branch == 0);
  CHECK_FALSE(r.stuck_system.empty());
  REQUIRE(r.traces.size() == 1);
  // one proposition letter, so exactly one order to try
  CHECK(r.traces[0].attempts.size() == 1);
  replay_all(r);

  EngineConfig no_switch;
  no_switch.allow_polarity_switch = false;
  SqemaResult r2 = run_sqema(parse_formula("box dia p -> dia box p"), no_switch);
  CHECK_FALSE(r2.success);
  CHECK(r2.failure == FailureKind::AllOrdersExhausted);
}

TEST_CASE("a tiny budget reports exhaustion rather than looping", "[engine]") {
  EngineConfig cfg;
  cfg.max_rule_applications = 1;
  SqemaResult r =
      run_sqema(parse_formula("p & box (dia p -> box q) -> dia box box q"), cfg);
  REQUIRE_FALSE(r.success);
  CHECK(r.failure == FailureKind::BudgetExceeded);
}

TEST_CASE("uniformly signed variables disappear before any ordering",
          "[engine]") {
  SqemaResult r = run_sqema(parse_formula("dia p"));
  REQUIRE(r.success);
  REQUIRE(r.traces.size() == 1);
  const auto& pre = r.traces[0].pre_steps;
  bool saw_uniform = false;
  for (const TraceStep& s : pre) {
    if (s.rule == RuleName::TrivialPolarity) {
      saw_uniform = true;
      CHECK(s.variable == "p");
      CHECK(s.constant == "false");
    }
  }
  CHECK(saw_uniform);
  CHECK(r.local_fo == FoFormula::bottom());

  // boxes over a positive letter hold exactly at dead ends
  SqemaResult r2 = run_sqema(parse_formula("box p"));
  REQUIRE(r2.success);
  CHECK(to_string(r2.local_fo) == "forall z1 . (~R(y0,z1))");

  // and a propositional tautology is valid everywhere
  SqemaResult r3 = run_sqema(parse_formula("p | ~p"));
  REQUIRE(r3.success);
  CHECK(r3.local_fo == FoFormula::top());
}

TEST_CASE("the engine is deterministic", "[engine]") {
  GenOptions opts;
  opts.num_vars = 2;
  opts.max_depth = 3;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Formula phi = generate_random_basic(seed, opts);
    SqemaResult a = run_sqema(phi);
    SqemaResult b = run_sqema(phi);
    CAPTURE(seed, to_string(phi));
    REQUIRE(a.success == b.success);
    if (a.success) {
      REQUIRE(to_string(a.local_fo) == to_string(b.local_fo));
    } else {
      REQUIRE(to_string(a.stuck_system) == to_string(b.stuck_system));
    }
    REQUIRE(a.traces.size() == b.traces.size());
  }
}

TEST_CASE("recorded traces replay exactly on generated inputs", "[engine]") {
  GenOptions opts;
  opts.num_vars = 2;
  opts.max_depth = 3;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Formula phi = generate_random_basic(seed, opts);
    CAPTURE(seed, to_string(phi));
    replay_all(run_sqema(phi));
  }
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Formula phi = generate_sahlqvist(seed, opts);
    CAPTURE(seed, to_string(phi));
    replay_all(run_sqema(phi));
  }
}
