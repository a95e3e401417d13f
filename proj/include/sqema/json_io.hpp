// ============================================================================
//  json_io.hpp
//
//  JSON views of the public data types, used by the command line tool and
//  by tests that round-trip structures.  Modal formulas travel as strings
//  in the concrete syntax (the parser is the inverse); first-order formulas
//  get a structural encoding as well, since there is no first-order parser.
// ============================================================================
#pragma once

#include <string>

#include "json.hpp"

#include "sqema/classify.hpp"
#include "sqema/engine.hpp"
#include "sqema/equations.hpp"
#include "sqema/fo.hpp"
#include "sqema/formula.hpp"
#include "sqema/kripke.hpp"

namespace sqema {

using Json = nlohmann::json;

// ── First-order formulas ────────────────────────────────────────────────────

inline Json fo_to_json(const FoFormula& f) {
  switch (f.kind()) {
    case FoKind::Top: return Json{{"k", "true"}};
    case FoKind::Bottom: return Json{{"k", "false"}};
    case FoKind::Rel: return Json{{"k", "rel"}, {"a", f.a()}, {"b", f.b()}};
    case FoKind::Eq: return Json{{"k", "eq"}, {"a", f.a()}, {"b", f.b()}};
    case FoKind::Pred:
      return Json{{"k", "pred"}, {"name", f.a()}, {"term", f.b()}};
    case FoKind::Not: return Json{{"k", "not"}, {"body", fo_to_json(f.child())}};
    case FoKind::And:
    case FoKind::Or: {
      Json kids = Json::array();
      for (const auto& c : f.children()) kids.push_back(fo_to_json(c));
      return Json{{"k", f.is(FoKind::And) ? "and" : "or"}, {"kids", kids}};
    }
    case FoKind::Implies:
      return Json{{"k", "imp"},
                  {"a", fo_to_json(f.child(0))},
                  {"b", fo_to_json(f.child(1))}};
    case FoKind::Forall:
    case FoKind::Exists:
      return Json{{"k", f.is(FoKind::Forall) ? "forall" : "exists"},
                  {"v", f.a()},
                  {"body", fo_to_json(f.child())}};
  }
  return Json{{"k", "true"}};
}

inline FoFormula fo_from_json(const Json& j) {
  const std::string k = j.at("k").get<std::string>();
  if (k == "true") return FoFormula::top();
  if (k == "false") return FoFormula::bottom();
  if (k == "rel")
    return FoFormula::rel(j.at("a").get<std::string>(), j.at("b").get<std::string>());
  if (k == "eq")
    return FoFormula::eq(j.at("a").get<std::string>(), j.at("b").get<std::string>());
  if (k == "pred")
    return FoFormula::pred(j.at("name").get<std::string>(),
                           j.at("term").get<std::string>());
  if (k == "not") return FoFormula::fo_not(fo_from_json(j.at("body")));
  if (k == "and" || k == "or") {
    std::vector<FoFormula> kids;
    for (const auto& c : j.at("kids")) kids.push_back(fo_from_json(c));
    return k == "and" ? FoFormula::conj(std::move(kids))
                      : FoFormula::disj(std::move(kids));
  }
  if (k == "imp")
    return FoFormula::implies(fo_from_json(j.at("a")), fo_from_json(j.at("b")));
  if (k == "forall")
    return FoFormula::forall(j.at("v").get<std::string>(),
                             fo_from_json(j.at("body")));
  if (k == "exists")
    return FoFormula::exists(j.at("v").get<std::string>(),
                             fo_from_json(j.at("body")));
  throw std::invalid_argument("fo_from_json: unknown node kind \"" + k + "\"");
}

// ── Classification reports ──────────────────────────────────────────────────

inline Json to_json(const ClassReport& r) {
  Json edges = Json::array();
  for (const auto& e : r.edges) edges.push_back(Json::array({e.first, e.second}));
  Json cycle;
  if (r.cycle) {
    cycle = Json::array();
    for (const auto& v : *r.cycle) cycle.push_back(v);
  } else {
    cycle = nullptr;
  }
  return Json{{"sahlqvist", r.sahlqvist},
              {"regular", r.regular},
              {"inductive", r.inductive},
              {"edges", edges},
              {"cycle", cycle}};
}

// ── Traces ──────────────────────────────────────────────────────────────────

// The target of a step is the equation index for equation-directed rules,
// the variable name for substitution steps, and null for whole-system
// cleanup.
inline Json to_json(const TraceStep& s) {
  Json target;
  switch (s.rule) {
    case RuleName::Ackermann:
    case RuleName::PolaritySwitch:
    case RuleName::TrivialPolarity:
      target = s.variable;
      break;
    case RuleName::AuxSimplify:
      target = nullptr;
      break;
    default:
      target = s.eq_index;
      break;
  }
  return Json{{"rule", rule_name(s.rule)},
              {"target", target},
              {"before", to_string(s.before)},
              {"after", to_string(s.after)}};
}

inline Json to_json(const AttemptTrace& a) {
  Json steps = Json::array();
  for (const auto& s : a.steps) steps.push_back(to_json(s));
  const char* outcome = a.outcome == AttemptOutcome::Solved ? "solved"
                        : a.outcome == AttemptOutcome::Stuck ? "stuck"
                                                             : "budget-exceeded";
  return Json{{"order", a.order},
              {"outcome", outcome},
              {"steps", steps},
              {"final", to_string(a.final_system)}};
}

inline Json to_json(const BranchTrace& b) {
  Json pre = Json::array();
  for (const auto& s : b.pre_steps) pre.push_back(to_json(s));
  Json attempts = Json::array();
  for (const auto& a : b.attempts) attempts.push_back(to_json(a));
  return Json{{"initial", to_string(b.initial)},
              {"pre_steps", pre},
              {"attempts", attempts}};
}

// ── Solver results ──────────────────────────────────────────────────────────

inline Json to_json(const SqemaResult& r, bool include_traces) {
  Json out;
  out["success"] = r.success;
  if (r.success) {
    Json systems = Json::array();
    for (const auto& branch : r.pure_systems) {
      Json one = Json::array();
      for (const auto& f : branch) one.push_back(to_string(f));
      systems.push_back(one);
    }
    out["pure_systems"] = systems;
    out["local"] = to_string(r.local_fo);
    out["local_ast"] = fo_to_json(r.local_fo);
    out["global"] = to_string(r.global_fo);
    out["canonical"] = r.canonical;
  } else {
    out["failure"] = to_string(r.failure);
    out["failed_branch"] = r.failed_branch;
    out["stuck_system"] = to_string(r.stuck_system);
  }
  if (include_traces) {
    Json traces = Json::array();
    for (const auto& b : r.traces) traces.push_back(to_json(b));
    out["traces"] = traces;
  }
  return out;
}

// ── Oracle reports ──────────────────────────────────────────────────────────

inline Json to_json(const CorrespondenceCheck& c) {
  Json out;
  out["ok"] = c.ok;
  out["frames_checked"] = c.frames_checked;
  out["points_checked"] = c.points_checked;
  if (c.frame) {
    out["counterexample"] = Json{{"frame", to_string(*c.frame)},
                                 {"world", c.world},
                                 {"modal", c.modal_value},
                                 {"fo", c.fo_value}};
  } else {
    out["counterexample"] = nullptr;
  }
  return out;
}

}  // namespace sqema
