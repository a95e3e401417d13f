// ============================================================================
//  Standard translation into first-order logic, extraction of frame
//  conditions from pure systems, and the first-order simplifier.
// ============================================================================

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sqema/classify.hpp"
#include "sqema/translation.hpp"

using namespace sqema;

namespace {

Formula parse_res(const char* txt) {
  ParseOptions reserved;
  reserved.allow_reserved_nominal = true;
  return parse_formula(txt, reserved);
}

}  // namespace

TEST_CASE("fresh variables never repeat and nominal names are fixed",
          "[translation]") {
  VariablePool pool;
  CHECK(pool.fresh() == "z1");
  CHECK(pool.fresh() == "z2");
  CHECK(VariablePool::nominal_var(0) == "y0");
  CHECK(VariablePool::nominal_var(7) == "y7");
}

TEST_CASE("standard translation fixtures", "[translation]") {
  auto st = [](const char* txt) {
    VariablePool pool;
    return to_string(standard_translation(parse_res(txt), "x0", pool));
  };
  CHECK(st("p") == "P_p(x0)");
  CHECK(st("true") == "true");
  CHECK(st("false") == "false");
  CHECK(st("#i2") == "x0 = y2");
  CHECK(st("~p") == "~P_p(x0)");
  CHECK(st("box p") == "forall z1 . (R(x0,z1) -> P_p(z1))");
  CHECK(st("dia p") == "exists z1 . (R(x0,z1) & P_p(z1))");
  CHECK(st("boxinv p") == "forall z1 . (R(z1,x0) -> P_p(z1))");
  CHECK(st("diainv p") == "exists z1 . (R(z1,x0) & P_p(z1))");
  CHECK(st("p -> q") == "P_p(x0) -> P_q(x0)");
  CHECK(st("box (p & q)") == "forall z1 . (R(x0,z1) -> P_p(z1) & P_q(z1))");
}

TEST_CASE("relational atoms are recognized", "[translation]") {
  int from = -1, to = -1;
  CHECK(is_relational_atom(parse_res("#i1 -> dia #i2"), from, to));
  CHECK(from == 1);
  CHECK(to == 2);
  CHECK(is_relational_atom(parse_res("#i0 -> dia #i3"), from, to));
  CHECK(from == 0);
  CHECK_FALSE(is_relational_atom(parse_res("#i1 -> dia p"), from, to));
  CHECK_FALSE(is_relational_atom(parse_res("#i1 -> box #i2"), from, to));
  CHECK_FALSE(is_relational_atom(parse_res("p -> dia #i2"), from, to));
}

TEST_CASE("frame conditions extracted from pure systems", "[translation]") {
  {
    VariablePool pool;
    // the system pins the root to a world all of whose successors differ
    // from it; that is impossible exactly on reflexive points
    FoFormula fo = simplify_fo(
        branch_correspondent({parse_res("#i0 -> box ~#i0")}, pool));
    CHECK(to_string(fo) == "R(y0,y0)");
  }
  {
    VariablePool pool;
    FoFormula fo = simplify_fo(branch_correspondent(
        {parse_res("#i0 -> dia #i1"), parse_res("#i1 -> box ~#i0")}, pool));
    CHECK(to_string(fo) == "forall y1 . (R(y0,y1) -> R(y1,y0))");
  }
  {
    // an unsatisfiable constraint gives the vacuous condition
    VariablePool pool;
    FoFormula fo = simplify_fo(branch_correspondent(
        {parse_res("#i0 -> dia #i1"), parse_res("#i1 -> false")}, pool));
    CHECK(fo == FoFormula::top());
  }
}

TEST_CASE("first-order constructors flatten and the printer nests correctly",
          "[fo]") {
  FoFormula a = FoFormula::rel("x", "y");
  FoFormula b = FoFormula::rel("y", "z");
  FoFormula c = FoFormula::rel("x", "z");
  FoFormula all = FoFormula::conj({FoFormula::conj({a, b}), c});
  CHECK(all.arity() == 3);
  CHECK(to_string(all) == "R(x,y) & R(y,z) & R(x,z)");
  CHECK(to_string(FoFormula::implies(FoFormula::conj({a, b}), c)) ==
        "R(x,y) & R(y,z) -> R(x,z)");
  CHECK(to_string(FoFormula::fo_not(FoFormula::disj({a, b}))) ==
        "~(R(x,y) | R(y,z))");
  CHECK(to_string(FoFormula::forall("x", FoFormula::forall("y", a))) ==
        "forall x . forall y . R(x,y)");
}

TEST_CASE("free variables and capture-avoiding renaming", "[fo]") {
  FoFormula f = FoFormula::forall(
      "z", FoFormula::implies(FoFormula::rel("y0", "z"), FoFormula::rel("z", "y1")));
  CHECK(free_vars(f) == std::set<std::string>{"y0", "y1"});
  CHECK(mentions_var(f, "z"));
  CHECK_FALSE(has_predicates(f));
  CHECK(has_predicates(FoFormula::pred("p", "x")));

  FoFormula renamed = rename_free(f, "y0", "w");
  CHECK(free_vars(renamed) == std::set<std::string>{"w", "y1"});
  // a binder shadowing the name blocks the renaming inside its scope
  FoFormula shadow = FoFormula::forall("y0", FoFormula::rel("y0", "y0"));
  CHECK(rename_free(shadow, "y0", "w") == shadow);
}

TEST_CASE("first-order simplifier fixtures", "[fo][simplify]") {
  FoFormula one_point = FoFormula::exists(
      "x", FoFormula::conj({FoFormula::eq("x", "y"), FoFormula::rel("x", "x")}));
  CHECK(to_string(simplify_fo(one_point)) == "R(y,y)");

  FoFormula one_point_all = FoFormula::forall(
      "x", FoFormula::implies(FoFormula::eq("x", "y"), FoFormula::rel("x", "x")));
  CHECK(to_string(simplify_fo(one_point_all)) == "R(y,y)");

  FoFormula vacuous = FoFormula::forall("x", FoFormula::rel("y", "y"));
  CHECK(simplify_fo(vacuous) == FoFormula::rel("y", "y"));

  // subformulas that do not mention the bound variable move outside
  FoFormula mixed = FoFormula::exists(
      "x", FoFormula::conj({FoFormula::rel("y", "y"), FoFormula::rel("x", "y")}));
  CHECK(to_string(simplify_fo(mixed)) == "R(y,y) & (exists x . R(x,y))");

  CHECK(simplify_fo(FoFormula::implies(FoFormula::top(), FoFormula::rel("x", "y"))) ==
        FoFormula::rel("x", "y"));
  CHECK(simplify_fo(FoFormula::implies(FoFormula::rel("x", "y"), FoFormula::bottom())) ==
        FoFormula::fo_not(FoFormula::rel("x", "y")));
  CHECK(simplify_fo(FoFormula::forall("x", FoFormula::top())) == FoFormula::top());
}

TEST_CASE("the first-order simplifier preserves truth", "[fo][simplify]") {
  GenOptions opts;
  opts.num_vars = 2;
  opts.max_depth = 3;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Formula f = generate_random_basic(seed, opts);
    VariablePool pool;
    FoFormula st = standard_translation(f, "x0", pool);
    FoFormula simpler = simplify_fo(st);
    std::set<std::string> var_set = vars_of(f);
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    for (const KripkeFrame& fr : enumerate_frames(2)) {
      bool ok = detail::for_each_valuation(fr, vars, [&](const Valuation& val) {
        for (int w = 0; w < fr.size; ++w) {
          if (eval_fo(fr, st, FoEnv{{"x0", w}}, val) !=
              eval_fo(fr, simpler, FoEnv{{"x0", w}}, val))
            return false;
        }
        return true;
      });
      CAPTURE(seed, to_string(f), to_string(st), to_string(simpler), to_string(fr));
      REQUIRE(ok);
    }
  }
}
