// ============================================================================
//  Command line front end.
//
//  correspond  compute the first-order frame correspondent of a formula
//  classify    report syntactic class membership
//  verify      correspond, then model-check the answer on all small frames
//  gen         emit seeded sample formulas
//  batch       process a file with one formula per line
//
//  Exit codes: 0 success, 1 the algorithm (or the oracle) failed on the
//  input, 2 usage or parse errors.
// ============================================================================

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqema/classify.hpp"
#include "sqema/engine.hpp"
#include "sqema/json_io.hpp"
#include "sqema/kripke.hpp"

namespace {

using namespace sqema;

struct EngineFlags {
  int max_orders = 24;
  int budget = 10000;
  bool no_polarity_switch = false;
};

EngineConfig to_config(const EngineFlags& ef) {
  EngineConfig cfg;
  cfg.max_order_permutations = ef.max_orders;
  cfg.max_rule_applications = ef.budget;
  cfg.allow_polarity_switch = !ef.no_polarity_switch;
  return cfg;
}

void add_engine_flags(CLI::App* cmd, EngineFlags& ef) {
  cmd->add_option("--max-orders", ef.max_orders,
                  "elimination orders to try per branch")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--budget", ef.budget,
                  "rule applications allowed per elimination attempt")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-polarity-switch", ef.no_polarity_switch,
                "disable the polarity-switch retry for stuck variables");
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

std::string pure_line(const std::vector<Formula>& branch) {
  std::string out = "{";
  for (std::size_t i = 0; i < branch.size(); ++i) {
    if (i) out += "; ";
    out += to_string(branch[i]);
  }
  out += "}";
  return out;
}

std::string step_line(const TraceStep& s) {
  std::string out = rule_name(s.rule);
  switch (s.rule) {
    case RuleName::Ackermann:
    case RuleName::PolaritySwitch:
      out += " [" + s.variable + "]";
      break;
    case RuleName::TrivialPolarity:
      out += " [" + s.variable + " := " + s.constant + "]";
      break;
    case RuleName::AuxSimplify:
      break;
    default:
      out += " @" + std::to_string(s.eq_index);
      break;
  }
  out += "  ==> " + to_string(s.after);
  return out;
}

const char* outcome_name(AttemptOutcome o) {
  switch (o) {
    case AttemptOutcome::Solved: return "solved";
    case AttemptOutcome::Stuck: return "stuck";
    default: return "budget-exceeded";
  }
}

void print_traces(const SqemaResult& res) {
  std::cout << "trace:\n";
  for (std::size_t b = 0; b < res.traces.size(); ++b) {
    const BranchTrace& bt = res.traces[b];
    std::cout << "  branch " << b << "\n";
    std::cout << "    initial: " << to_string(bt.initial) << "\n";
    for (const TraceStep& s : bt.pre_steps)
      std::cout << "    " << step_line(s) << "\n";
    for (const AttemptTrace& at : bt.attempts) {
      std::cout << "    order [";
      for (std::size_t i = 0; i < at.order.size(); ++i) {
        if (i) std::cout << ", ";
        std::cout << at.order[i];
      }
      std::cout << "] -> " << outcome_name(at.outcome) << "\n";
      for (const TraceStep& s : at.steps)
        std::cout << "      " << step_line(s) << "\n";
      std::cout << "      final: " << to_string(at.final_system) << "\n";
    }
  }
}

std::string oracle_line(const CorrespondenceCheck& check) {
  if (check.ok) {
    return "VERIFIED (" + std::to_string(check.frames_checked) + " frames, " +
           std::to_string(check.points_checked) + " points)";
  }
  return "FAILED (frame " + to_string(*check.frame) + ", world " +
         std::to_string(check.world) +
         ", modal=" + (check.modal_value ? "true" : "false") +
         ", fo=" + (check.fo_value ? "true" : "false") + ")";
}

// ── correspond / verify ─────────────────────────────────────────────────────

int run_correspond(const std::string& text, const EngineFlags& ef, bool trace,
                   bool do_verify, int max_worlds, const std::string& format) {
  Formula phi = parse_formula(text);
  SqemaResult res = run_sqema(phi, to_config(ef));
  std::optional<CorrespondenceCheck> check;
  if (res.success && do_verify)
    check = verify_correspondence(phi, res.local_fo, max_worlds);

  if (format == "json") {
    Json j = to_json(res, trace);
    j["formula"] = to_string(phi);
    if (check) j["verification"] = to_json(*check);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "formula   : " << to_string(phi) << "\n";
    std::cout << "status    : " << (res.success ? "success" : "failure") << "\n";
    if (res.success) {
      for (const auto& branch : res.pure_systems)
        std::cout << "pure      : " << pure_line(branch) << "\n";
      std::cout << "local     : " << to_string(res.local_fo) << "\n";
      std::cout << "global    : " << to_string(res.global_fo) << "\n";
      std::cout << "canonical : " << yesno(res.canonical) << "\n";
      if (check) std::cout << "oracle    : " << oracle_line(*check) << "\n";
    } else {
      std::cout << "reason    : " << to_string(res.failure) << "\n";
      std::cout << "branch    : " << res.failed_branch << "\n";
      std::cout << "stuck     : " << to_string(res.stuck_system) << "\n";
    }
    if (trace) print_traces(res);
  }
  if (!res.success) return 1;
  if (check && !check->ok) return 1;
  return 0;
}

// ── classify ────────────────────────────────────────────────────────────────

int run_classify(const std::string& text, const std::string& format) {
  Formula phi = parse_formula(text);
  ClassReport rep = classify(phi);
  if (format == "json") {
    Json j = to_json(rep);
    j["formula"] = to_string(phi);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "formula   : " << to_string(phi) << "\n";
  std::cout << "sahlqvist : " << (rep.sahlqvist ? "true" : "false") << "\n";
  std::cout << "regular   : " << (rep.regular ? "true" : "false") << "\n";
  std::cout << "inductive : " << (rep.inductive ? "true" : "false") << "\n";
  std::string edges;
  for (const auto& e : rep.edges) {
    if (!edges.empty()) edges += ", ";
    edges += e.first + " -> " + e.second;
  }
  std::cout << "edges     : " << (edges.empty() ? "(none)" : edges) << "\n";
  std::string cycle;
  if (rep.cycle) {
    for (std::size_t i = 0; i < rep.cycle->size(); ++i) {
      if (i) cycle += " -> ";
      cycle += (*rep.cycle)[i];
    }
  }
  std::cout << "cycle     : " << (cycle.empty() ? "(none)" : cycle) << "\n";
  return 0;
}

// ── gen ─────────────────────────────────────────────────────────────────────

int run_gen(const std::string& kind, std::uint64_t seed, int count,
            const std::string& format) {
  auto make = [&](std::uint64_t s) {
    if (kind == "sahlqvist") return generate_sahlqvist(s);
    if (kind == "inductive") return generate_inductive(s);
    return generate_random_basic(s);
  };
  if (format == "json") {
    Json arr = Json::array();
    for (int i = 0; i < count; ++i) {
      std::uint64_t s = seed + std::uint64_t(i);
      arr.push_back(Json{{"seed", s}, {"formula", to_string(make(s))}});
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    for (int i = 0; i < count; ++i)
      std::cout << to_string(make(seed + std::uint64_t(i))) << "\n";
  }
  return 0;
}

// ── batch ───────────────────────────────────────────────────────────────────

int run_batch(const std::string& path, const EngineFlags& ef, bool do_verify,
              int max_worlds, const std::string& format) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  EngineConfig cfg = to_config(ef);
  int total = 0, succeeded = 0, failed = 0, parse_errors = 0, verified = 0;
  Json lines = Json::array();
  std::ostringstream table;

  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    // skip blank lines
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++total;
    Json jline{{"line", lineno}};
    table << "line " << lineno << ": ";
    try {
      Formula phi = parse_formula(line);
      ClassReport rep = classify(phi);
      SqemaResult res = run_sqema(phi, cfg);
      if (res.success) {
        ++succeeded;
        jline["status"] = "success";
        jline["sahlqvist"] = rep.sahlqvist;
        jline["inductive"] = rep.inductive;
        jline["local"] = to_string(res.local_fo);
        table << "success  sahlqvist=" << yesno(rep.sahlqvist)
              << " inductive=" << yesno(rep.inductive);
        if (do_verify) {
          CorrespondenceCheck check =
              verify_correspondence(phi, res.local_fo, max_worlds);
          jline["verified"] = check.ok;
          if (check.ok) ++verified;
          table << " verified=" << yesno(check.ok);
        }
        table << "  local: " << to_string(res.local_fo) << "\n";
      } else {
        ++failed;
        jline["status"] = "failure";
        jline["failure"] = to_string(res.failure);
        table << "failure  " << to_string(res.failure) << "\n";
      }
    } catch (const ParseError& e) {
      ++parse_errors;
      jline["status"] = "parse-error";
      jline["message"] = e.what();
      table << "parse-error  " << e.what() << "\n";
    }
    lines.push_back(std::move(jline));
  }

  Json summary{{"total", total},
               {"success", succeeded},
               {"failure", failed},
               {"parse_errors", parse_errors}};
  if (do_verify) summary["verified"] = verified;

  if (format == "json") {
    Json out{{"lines", lines}, {"summary", summary}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << table.str();
    std::cout << "summary: total=" << total << " success=" << succeeded
              << " failure=" << failed << " parse-errors=" << parse_errors;
    if (do_verify) std::cout << " verified=" << verified;
    std::cout << "\n";
  }

  bool all_good = failed == 0 && parse_errors == 0 &&
                  (!do_verify || verified == succeeded);
  return all_good ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"second-order quantifier elimination for modal formulas"};
  app.require_subcommand(1);
  int rc = 0;

  // correspond
  std::string co_formula, co_format = "text";
  EngineFlags co_flags;
  bool co_trace = false, co_verify = false;
  int co_worlds = 3;
  CLI::App* co = app.add_subcommand(
      "correspond", "compute the first-order frame correspondent");
  co->add_option("formula", co_formula, "modal formula")->required();
  co->add_flag("--trace", co_trace, "print the derivation trace");
  co->add_flag("--verify", co_verify, "model-check the result on small frames");
  co->add_option("--max-worlds", co_worlds, "frame size bound for --verify")
      ->check(CLI::Range(1, 4));
  co->add_option("--format", co_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  add_engine_flags(co, co_flags);
  co->callback([&]() {
    rc = run_correspond(co_formula, co_flags, co_trace, co_verify, co_worlds,
                        co_format);
  });

  // classify
  std::string cl_formula, cl_format = "text";
  CLI::App* cl =
      app.add_subcommand("classify", "report syntactic class membership");
  cl->add_option("formula", cl_formula, "modal formula")->required();
  cl->add_option("--format", cl_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cl->callback([&]() { rc = run_classify(cl_formula, cl_format); });

  // verify
  std::string ve_formula, ve_format = "text";
  EngineFlags ve_flags;
  bool ve_trace = false;
  int ve_worlds = 3;
  CLI::App* ve = app.add_subcommand(
      "verify", "correspond and model-check the result exhaustively");
  ve->add_option("formula", ve_formula, "modal formula")->required();
  ve->add_flag("--trace", ve_trace, "print the derivation trace");
  ve->add_option("--max-worlds", ve_worlds, "largest frame size to check")
      ->check(CLI::Range(1, 4));
  ve->add_option("--format", ve_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  add_engine_flags(ve, ve_flags);
  ve->callback([&]() {
    rc = run_correspond(ve_formula, ve_flags, ve_trace, true, ve_worlds,
                        ve_format);
  });

  // gen
  std::string ge_kind, ge_format = "text";
  std::uint64_t ge_seed = 1;
  int ge_count = 10;
  CLI::App* ge = app.add_subcommand("gen", "emit seeded sample formulas");
  ge->add_option("kind", ge_kind, "sahlqvist, inductive or basic")
      ->required()
      ->check(CLI::IsMember({"sahlqvist", "inductive", "basic"}));
  ge->add_option("--seed", ge_seed, "first seed");
  ge->add_option("--count", ge_count, "how many formulas")
      ->check(CLI::PositiveNumber);
  ge->add_option("--format", ge_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  ge->callback([&]() { rc = run_gen(ge_kind, ge_seed, ge_count, ge_format); });

  // batch
  std::string ba_path, ba_format = "text";
  EngineFlags ba_flags;
  bool ba_verify = false;
  int ba_worlds = 3;
  CLI::App* ba =
      app.add_subcommand("batch", "process a file with one formula per line");
  ba->add_option("file", ba_path, "input file")->required();
  ba->add_flag("--verify", ba_verify, "model-check every correspondent");
  ba->add_option("--max-worlds", ba_worlds, "frame size bound for --verify")
      ->check(CLI::Range(1, 4));
  ba->add_option("--format", ba_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  add_engine_flags(ba, ba_flags);
  ba->callback([&]() {
    rc = run_batch(ba_path, ba_flags, ba_verify, ba_worlds, ba_format);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const sqema::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return rc;
}
