// ============================================================================
//  Modal AST: parser, printer, structural order.
// ============================================================================

#include <catch2/catch_amalgamated.hpp>

#include "sqema/classify.hpp"
#include "sqema/formula.hpp"

using namespace sqema;

TEST_CASE("atoms parse to the expected nodes", "[formula][parse]") {
  CHECK(parse_formula("true").is(Kind::Top));
  CHECK(parse_formula("false").is(Kind::Bottom));

  Formula p = parse_formula("p");
  REQUIRE(p.is(Kind::Var));
  CHECK(p.var_name() == "p");
  CHECK(p.arity() == 0);

  Formula n = parse_formula("#i3");
  REQUIRE(n.is(Kind::Nominal));
  CHECK(n.nominal_index() == 3);
}

TEST_CASE("operator precedence and associativity", "[formula][parse]") {
  Formula p = Formula::var("p"), q = Formula::var("q"), r = Formula::var("r");

  CHECK(parse_formula("p -> q -> r") == Formula::implies(p, Formula::implies(q, r)));
  CHECK(parse_formula("p <-> q -> r") == Formula::iff(p, Formula::implies(q, r)));
  CHECK(parse_formula("p | q & r") == Formula::disj({p, Formula::conj({q, r})}));
  CHECK(parse_formula("~box p & q") ==
        Formula::conj({Formula::neg(Formula::box(p)), q}));
  CHECK(parse_formula("box p -> p") == Formula::implies(Formula::box(p), p));
  CHECK(parse_formula("dia boxinv ~#i1") ==
        Formula::dia(Formula::box_inv(Formula::neg(Formula::nominal(1)))));
  CHECK(parse_formula("diainv (p | q)") == Formula::dia_inv(Formula::disj({p, q})));
}

TEST_CASE("written grouping of junctions is preserved", "[formula][parse]") {
  Formula chain = parse_formula("p | q | r");
  REQUIRE(chain.is(Kind::Or));
  CHECK(chain.arity() == 3);

  Formula grouped = parse_formula("(p | q) | r");
  REQUIRE(grouped.is(Kind::Or));
  REQUIRE(grouped.arity() == 2);
  CHECK(grouped.child(0).is(Kind::Or));
  CHECK(grouped.child(0).arity() == 2);
  CHECK(chain != grouped);

  // the printer keeps the distinction visible, so parsing it back is faithful
  CHECK(to_string(grouped) == "(p | q) | r");
  CHECK(to_string(chain) == "p | q | r");
  CHECK(parse_formula(to_string(grouped)) == grouped);

  CHECK(parse_formula("p & q & r").arity() == 3);
  CHECK(parse_formula("p & (q & r)").arity() == 2);
}

TEST_CASE("empty and singleton junctions collapse to their units", "[formula]") {
  Formula p = Formula::var("p");
  CHECK(Formula::conj({}) == Formula::top());
  CHECK(Formula::disj({}) == Formula::bottom());
  CHECK(Formula::conj({p}) == p);
  CHECK(Formula::disj({p}) == p);
}

TEST_CASE("printing then parsing returns the identical tree", "[formula][print]") {
  GenOptions opts;
  opts.num_vars = 3;
  opts.max_depth = 4;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Formula f = generate_random_basic(seed, opts);
    CAPTURE(seed, to_string(f));
    REQUIRE(parse_formula(to_string(f)) == f);
  }

  // the generators stay in the basic language, so cover nominals and the
  // inverse modalities by hand
  Formula h = Formula::implies(
      Formula::dia_inv(Formula::conj({Formula::nominal(2), Formula::neg(Formula::var("p"))})),
      Formula::box_inv(Formula::disj({Formula::bottom(), Formula::box(Formula::nominal(1))})));
  CHECK(parse_formula(to_string(h)) == h);

  ParseOptions reserved;
  reserved.allow_reserved_nominal = true;
  Formula g = Formula::iff(Formula::nominal(0), Formula::dia(Formula::nominal(0)));
  CHECK(parse_formula(to_string(g), reserved) == g);
}

TEST_CASE("parse errors carry line and column", "[formula][errors]") {
  try {
    parse_formula("p &\n& q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }

  try {
    parse_formula("p @ q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 3);
    CHECK(std::string(e.what()).find("unexpected character") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_formula("(p | q"), ParseError);
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
  CHECK_THROWS_AS(parse_formula("p - q"), ParseError);
  CHECK_THROWS_AS(parse_formula("p <- q"), ParseError);
  CHECK_THROWS_AS(parse_formula("#ix"), ParseError);
  CHECK_THROWS_AS(parse_formula("#"), ParseError);
}

TEST_CASE("the current-state name is reserved unless opted in", "[formula][parse]") {
  CHECK_THROWS_AS(parse_formula("#i0"), ParseError);
  ParseOptions reserved;
  reserved.allow_reserved_nominal = true;
  Formula f = parse_formula("#i0 -> dia #i1", reserved);
  CHECK(f.child(0).nominal_index() == kCurrentStateNominal);
}

TEST_CASE("implications can be eliminated while parsing", "[formula][parse]") {
  ParseOptions elim;
  elim.eliminate_implications = true;
  CHECK(parse_formula("p -> q", elim) == parse_formula("~p | q"));
  CHECK(parse_formula("p <-> q", elim) == parse_formula("(~p | q) & (~q | p)"));
  CHECK(parse_formula("box (p -> q)", elim) == parse_formula("box (~p | q)"));
}

TEST_CASE("structural compare is a strict total order", "[formula][order]") {
  Formula a = parse_formula("p & q");
  Formula b = parse_formula("q & p");
  CHECK(a != b);
  CHECK(((a < b) || (b < a)));
  CHECK_FALSE(((a < b) && (b < a)));
  CHECK(Formula::compare(a, a) == 0);

  // rank follows the node kind before anything else
  CHECK(Formula::top() < Formula::bottom());
  CHECK(Formula::bottom() < Formula::var("a"));
  CHECK(Formula::var("zz") < Formula::nominal(1));

  // payload breaks ties within a kind
  CHECK(Formula::var("p") < Formula::var("q"));
  CHECK(Formula::nominal(1) < Formula::nominal(2));
}
