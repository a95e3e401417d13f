// ============================================================================
//  Propositional tautology detection and the cleanup pass used between rule
//  applications.
// ============================================================================

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sqema/classify.hpp"
#include "sqema/simplify.hpp"

using namespace sqema;
using testsupport::semantically_equal;
using testsupport::valid_up_to;

TEST_CASE("tautology recognition treats modal subtrees as opaque atoms",
          "[tautology]") {
  auto taut = [](const char* txt) {
    ParseOptions reserved;
    reserved.allow_reserved_nominal = true;
    return is_prop_tautology(parse_formula(txt, reserved));
  };
  CHECK(taut("true"));
  CHECK(taut("p | ~p"));
  CHECK(taut("box p | ~box p"));
  CHECK(taut("p -> p"));
  CHECK(taut("p -> q -> p"));
  CHECK(taut("p <-> p"));
  CHECK(taut("~(p & ~p)"));
  CHECK(taut("(p & q) -> p | r"));

  // an atom and its modal dual count as complements
  CHECK(taut("dia ~p | box p"));
  CHECK(taut("boxinv ~q | diainv q"));
  CHECK(taut("diainv #i0 -> ~diainv #i0 | ~box p | box p"));

  CHECK_FALSE(taut("p"));
  CHECK_FALSE(taut("p | q"));
  CHECK_FALSE(taut("p -> q"));
  // valid, but only visible below a modal operator; the propositional
  // abstraction is deliberately blind to that
  CHECK_FALSE(taut("box (p | ~p)"));
}

TEST_CASE("anything recognized as a tautology really is one", "[tautology]") {
  GenOptions opts;
  opts.num_vars = 2;
  opts.max_depth = 3;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    Formula g = generate_random_basic(seed, opts);
    Formula t = Formula::disj({g, Formula::neg(g)});
    CAPTURE(seed, to_string(g));
    REQUIRE(is_prop_tautology(t));
    REQUIRE(valid_up_to(t, 2));
    if (is_prop_tautology(g)) REQUIRE(valid_up_to(g, 2));
  }
}

TEST_CASE("cleanup fixtures", "[simplify]") {
  CHECK(simplify_aux(parse_formula("p & true")) == parse_formula("p"));
  CHECK(simplify_aux(parse_formula("p & false")) == Formula::bottom());
  CHECK(simplify_aux(parse_formula("p | true")) == Formula::top());
  CHECK(simplify_aux(parse_formula("p | false")) == parse_formula("p"));
  CHECK(simplify_aux(parse_formula("p & p")) == parse_formula("p"));
  CHECK(simplify_aux(parse_formula("p | p | q")) == simplify_aux(parse_formula("p | q")));
  CHECK(simplify_aux(parse_formula("p & ~p")) == Formula::bottom());
  CHECK(simplify_aux(parse_formula("p | ~p")) == Formula::top());
  CHECK(simplify_aux(parse_formula("dia ~p | box p")) == Formula::top());
  CHECK(simplify_aux(parse_formula("box true")) == Formula::top());
  CHECK(simplify_aux(parse_formula("dia false")) == Formula::bottom());
  CHECK(simplify_aux(parse_formula("boxinv true")) == Formula::top());
  CHECK(simplify_aux(parse_formula("diainv false")) == Formula::bottom());
  CHECK(simplify_aux(parse_formula("~~p")) == parse_formula("p"));
  CHECK(simplify_aux(parse_formula("~dia ~p")) == parse_formula("box p"));
  CHECK(simplify_aux(parse_formula("~false")) == Formula::top());
  CHECK(simplify_aux(parse_formula("p -> false")) == parse_formula("~p"));
  CHECK(simplify_aux(parse_formula("true -> p")) == parse_formula("p"));
  CHECK(simplify_aux(parse_formula("p <-> p")) == Formula::top());
  // nested constants collapse through several levels
  CHECK(simplify_aux(parse_formula("box (p & (q | true))")) ==
        parse_formula("box p"));
}

TEST_CASE("cleanup canonicalizes junction order and grouping", "[simplify]") {
  CHECK(simplify_aux(parse_formula("(a & b) & c")) ==
        simplify_aux(parse_formula("c & (b & a)")));
  CHECK(simplify_aux(parse_formula("a | (b | c)")) ==
        simplify_aux(parse_formula("(c | a) | b")));
  CHECK(simplify_aux(parse_formula("dia ((a & b) & c)")) ==
        simplify_aux(parse_formula("dia (c & b & a)")));
}

TEST_CASE("cleanup is idempotent and meaning preserving", "[simplify]") {
  GenOptions opts;
  opts.num_vars = 2;
  opts.max_depth = 3;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Formula f = generate_random_basic(seed, opts);
    Formula s = simplify_aux(f);
    CAPTURE(seed, to_string(f), to_string(s));
    REQUIRE(simplify_aux(s) == s);
    REQUIRE(semantically_equal(f, s, 2));
  }
}
