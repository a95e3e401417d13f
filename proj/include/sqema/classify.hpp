// ============================================================================
//  classify.hpp
//
//  Syntactic fragment recognizers for the basic modal language (no nominals,
//  no inverse modalities), the variable-dependency digraph, and seeded
//  generators that produce members of the recognized fragments by
//  construction.
//
//  Two shape matchers carry most of the weight:
//
//    box shape:       p  |  box B  |  A -> B (A positive)  |  N1|..|B|..|Nm
//                     with the Ni negative; the matched variable p is the
//                     head, the variables of the A/Ni parts are inessential.
//    negated box:     ~B in whatever syntax it reached us, i.e.  ~g with g
//                     box-shaped, dia continuation, or a conjunction of
//                     positives with exactly one matching conjunct.
//
//  Dependency edges run from inessential variables to heads, over every
//  subformula occurrence of the input as written.  A formula is regular
//  when its normal form is built from positives and negated box shapes with
//  &, | and box; inductive additionally means the digraph has no directed
//  cycle (a self-loop counts).
// ============================================================================
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sqema/formula.hpp"
#include "sqema/normalize.hpp"

namespace sqema {

// ── Shape matchers ──────────────────────────────────────────────────────────

struct ShapeMatch {
  std::string head;
  std::set<std::string> inessentials;
};

inline bool basic_modal_only(const Formula& f) {
  switch (f.kind()) {
    case Kind::Nominal:
    case Kind::BoxInv:
    case Kind::DiaInv:
      return false;
    default:
      for (const auto& c : f.children())
        if (!basic_modal_only(c)) return false;
      return true;
  }
}

inline std::optional<ShapeMatch> match_box_shape(const Formula& f) {
  switch (f.kind()) {
    case Kind::Var:
      return ShapeMatch{f.var_name(), {}};
    case Kind::Box:
      return match_box_shape(f.child());
    case Kind::Implies: {
      if (!all_vars_positive(f.child(0))) return std::nullopt;
      auto m = match_box_shape(f.child(1));
      if (m) collect_vars(f.child(0), m->inessentials);
      return m;
    }
    case Kind::Or: {
      const Formula* continuation = nullptr;
      for (const auto& c : f.children()) {
        if (all_vars_negative(c)) continue;
        if (continuation) return std::nullopt;  // two candidates, no shape
        continuation = &c;
      }
      if (!continuation) return std::nullopt;
      auto m = match_box_shape(*continuation);
      if (!m) return std::nullopt;
      for (const auto& c : f.children())
        if (&c != continuation) collect_vars(c, m->inessentials);
      return m;
    }
    default:
      return std::nullopt;
  }
}

inline std::optional<ShapeMatch> match_negated_box_shape(const Formula& f) {
  switch (f.kind()) {
    case Kind::Not:
      return match_box_shape(f.child());
    case Kind::Dia:
      return match_negated_box_shape(f.child());
    case Kind::And: {
      const Formula* continuation = nullptr;
      for (const auto& c : f.children()) {
        if (all_vars_positive(c)) continue;
        if (continuation) return std::nullopt;
        continuation = &c;
      }
      if (!continuation) return std::nullopt;
      auto m = match_negated_box_shape(*continuation);
      if (!m) return std::nullopt;
      for (const auto& c : f.children())
        if (&c != continuation) collect_vars(c, m->inessentials);
      return m;
    }
    default:
      return std::nullopt;
  }
}

// ── Sahlqvist ───────────────────────────────────────────────────────────────

// Antecedent grammar, applied to normal forms: constants, chains of boxes
// over a variable, anything negative, and &/|/dia composites thereof.
inline bool is_sahlqvist_antecedent_nnf(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bottom:
      return true;
    case Kind::Var:
      return true;
    case Kind::Box: {
      const Formula* g = &f;
      while (g->is(Kind::Box)) g = &g->child();
      if (g->is(Kind::Var)) return true;
      return all_vars_negative(f);
    }
    case Kind::And:
    case Kind::Or:
    case Kind::Dia: {
      if (all_vars_negative(f)) return true;
      for (const auto& c : f.children())
        if (!is_sahlqvist_antecedent_nnf(c)) return false;
      return true;
    }
    default:
      return all_vars_negative(f);
  }
}

inline bool is_sahlqvist(const Formula& f) {
  if (!basic_modal_only(f)) return false;
  switch (f.kind()) {
    case Kind::Implies:
      return is_sahlqvist_antecedent_nnf(to_nnf(f.child(0))) &&
             all_vars_positive(f.child(1));
    case Kind::Iff:
      return is_sahlqvist(Formula::implies(f.child(0), f.child(1))) &&
             is_sahlqvist(Formula::implies(f.child(1), f.child(0)));
    case Kind::And:
    case Kind::Or: {
      bool all = true;
      for (const auto& c : f.children()) all = all && is_sahlqvist(c);
      if (all) return true;
      break;
    }
    case Kind::Box:
      if (is_sahlqvist(f.child())) return true;
      break;
    default:
      break;
  }
  // No implication at the top: positive formulas are degenerate
  // implications from true, and a formula whose negation is an antecedent
  // is a degenerate implication to false.
  return all_vars_positive(f) ||
         is_sahlqvist_antecedent_nnf(neg_nnf(f));
}

// ── Regularity and the dependency digraph ───────────────────────────────────

namespace detail {

inline bool regular_nnf(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bottom:
      return true;
    default:
      break;
  }
  if (all_vars_positive(f)) return true;
  if (match_negated_box_shape(f)) return true;
  switch (f.kind()) {
    case Kind::And:
    case Kind::Or: {
      for (const auto& c : f.children())
        if (!regular_nnf(c)) return false;
      return true;
    }
    case Kind::Box:
      return regular_nnf(f.child());
    default:
      return false;
  }
}

}  // namespace detail

inline bool is_monadic_regular(const Formula& f) {
  return basic_modal_only(f) && detail::regular_nnf(to_nnf(f));
}

using DependencyEdges = std::set<std::pair<std::string, std::string>>;

// Every subformula occurrence of the input, as written, is run through both
// matchers; each hit contributes an edge from every inessential variable to
// the head.
inline DependencyEdges dependency_digraph(const Formula& f) {
  DependencyEdges edges;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (auto m = match_box_shape(g))
      for (const auto& q : m->inessentials) edges.emplace(q, m->head);
    if (auto m = match_negated_box_shape(g))
      for (const auto& q : m->inessentials) edges.emplace(q, m->head);
    for (const auto& c : g.children()) walk(c);
  };
  walk(f);
  return edges;
}

// A directed cycle through the edge set as the closed walk along it, first
// vertex repeated at the end ([p, q, p]; a self-loop gives [p, p]), or
// nothing when the graph is acyclic.  Vertices are explored in sorted
// order, so the result is stable.
inline std::optional<std::vector<std::string>> find_dependency_cycle(
    const DependencyEdges& edges) {
  std::map<std::string, std::vector<std::string>> adj;
  std::set<std::string> verts;
  for (const auto& e : edges) {
    adj[e.first].push_back(e.second);
    verts.insert(e.first);
    verts.insert(e.second);
  }
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> found;
  std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
    color[v] = 1;
    stack.push_back(v);
    for (const auto& u : adj[v]) {
      if (color[u] == 1) {
        auto it = std::find(stack.begin(), stack.end(), u);
        found = std::vector<std::string>(it, stack.end());
        found->push_back(u);
        return true;
      }
      if (color[u] == 0 && dfs(u)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (const auto& v : verts)
    if (color[v] == 0 && dfs(v)) break;
  return found;
}

inline bool is_monadic_inductive(const Formula& f) {
  if (!is_monadic_regular(f)) return false;
  return !find_dependency_cycle(dependency_digraph(f)).has_value();
}

struct ClassReport {
  bool sahlqvist = false;
  bool regular = false;
  bool inductive = false;
  DependencyEdges edges;
  std::optional<std::vector<std::string>> cycle;
};

inline ClassReport classify(const Formula& f) {
  ClassReport r;
  r.sahlqvist = is_sahlqvist(f);
  r.regular = is_monadic_regular(f);
  r.edges = dependency_digraph(f);
  r.cycle = find_dependency_cycle(r.edges);
  r.inductive = r.regular && !r.cycle.has_value();
  return r;
}

// ── Seeded generators ───────────────────────────────────────────────────────
//
// All randomness goes through raw mt19937_64 draws reduced by modulus, so a
// seed produces the same formula on every platform.  Each generator's
// output lands in its fragment by construction; the property tests pin that
// down over large seed ranges.

struct GenOptions {
  int num_vars = 3;   // clamped to the p,q,r,s pool
  int max_depth = 3;
};

namespace detail {

inline const std::vector<std::string>& var_pool() {
  static const std::vector<std::string> pool = {"p", "q", "r", "s"};
  return pool;
}

inline std::vector<std::string> gen_vars(const GenOptions& opts) {
  int n = std::max(1, std::min(opts.num_vars, int(var_pool().size())));
  return {var_pool().begin(), var_pool().begin() + n};
}

inline std::uint64_t draw(std::mt19937_64& g, std::uint64_t n) {
  return g() % n;
}

inline Formula pick_var(std::mt19937_64& g, const std::vector<std::string>& vars) {
  return Formula::var(vars[draw(g, vars.size())]);
}

// Negation-free, hence positive in every variable.
inline Formula gen_positive(std::mt19937_64& g, const std::vector<std::string>& vars,
                            int depth) {
  if (depth <= 0 || vars.empty()) {
    if (!vars.empty() && draw(g, 4) != 0) return pick_var(g, vars);
    return Formula::top();
  }
  switch (draw(g, 6)) {
    case 0: return pick_var(g, vars);
    case 1: return Formula::top();
    case 2:
      return Formula::conj({gen_positive(g, vars, depth - 1),
                            gen_positive(g, vars, depth - 1)});
    case 3:
      return Formula::disj({gen_positive(g, vars, depth - 1),
                            gen_positive(g, vars, depth - 1)});
    case 4: return Formula::box(gen_positive(g, vars, depth - 1));
    default: return Formula::dia(gen_positive(g, vars, depth - 1));
  }
}

inline Formula gen_negative(std::mt19937_64& g, const std::vector<std::string>& vars,
                            int depth) {
  return neg_nnf(gen_positive(g, vars, depth));
}

inline Formula gen_boxed_atom(std::mt19937_64& g, const std::vector<std::string>& vars,
                              int max_boxes) {
  Formula f = pick_var(g, vars);
  std::uint64_t n = draw(g, std::uint64_t(max_boxes) + 1);
  for (std::uint64_t i = 0; i < n; ++i) f = Formula::box(f);
  return f;
}

inline Formula gen_antecedent(std::mt19937_64& g, const std::vector<std::string>& vars,
                              int depth) {
  if (depth <= 0) {
    switch (draw(g, 3)) {
      case 0: return pick_var(g, vars);
      case 1: return Formula::neg(pick_var(g, vars));
      default: return Formula::top();
    }
  }
  switch (draw(g, 8)) {
    case 0: return gen_boxed_atom(g, vars, depth);
    case 1: return gen_negative(g, vars, depth - 1);
    case 2: return Formula::top();
    case 3: return Formula::bottom();
    case 4:
      return Formula::conj({gen_antecedent(g, vars, depth - 1),
                            gen_antecedent(g, vars, depth - 1)});
    case 5:
      return Formula::disj({gen_antecedent(g, vars, depth - 1),
                            gen_antecedent(g, vars, depth - 1)});
    default: return Formula::dia(gen_antecedent(g, vars, depth - 1));
  }
}

inline Formula gen_sahlqvist_rec(std::mt19937_64& g,
                                 const std::vector<std::string>& vars, int depth) {
  if (depth <= 0)
    return Formula::implies(gen_antecedent(g, vars, 1), gen_positive(g, vars, 1));
  switch (draw(g, 6)) {
    case 0:
    case 1:
      return Formula::implies(gen_antecedent(g, vars, depth - 1),
                              gen_positive(g, vars, depth - 1));
    case 2:
      return Formula::conj({gen_sahlqvist_rec(g, vars, depth - 1),
                            gen_sahlqvist_rec(g, vars, depth - 1)});
    case 3:
      return Formula::disj({gen_sahlqvist_rec(g, vars, depth - 1),
                            gen_sahlqvist_rec(g, vars, depth - 1)});
    default:
      return Formula::box(gen_sahlqvist_rec(g, vars, depth - 1));
  }
}

// Box shape headed by vars[j], antecedent parts drawn from vars[0..j-1]
// only, so every dependency edge points up the variable order.
inline Formula gen_box_shape(std::mt19937_64& g, const std::vector<std::string>& vars,
                             std::size_t j, int depth) {
  if (depth <= 0) return Formula::var(vars[j]);
  switch (draw(g, 4)) {
    case 0: return Formula::var(vars[j]);
    case 1: return Formula::box(gen_box_shape(g, vars, j, depth - 1));
    default: {
      if (j == 0) return Formula::box(gen_box_shape(g, vars, j, depth - 1));
      std::vector<std::string> lower(vars.begin(), vars.begin() + j);
      return Formula::implies(gen_positive(g, lower, depth - 1),
                              gen_box_shape(g, vars, j, depth - 1));
    }
  }
}

struct RegularPiece {
  Formula f;
  bool positive = false;
  // Head index a conjunction sibling would feed edges into, or npos when
  // the matchers cannot reach a continuation through this piece.
  std::size_t head = std::size_t(-1);
};

inline RegularPiece gen_regular_piece(std::mt19937_64& g,
                                      const std::vector<std::string>& vars,
                                      int depth, bool force_mixed) {
  if (depth <= 0) {
    std::size_t j = draw(g, vars.size());
    return {neg_nnf(gen_box_shape(g, vars, j, 1)), false, j};
  }
  std::uint64_t roll = draw(g, 8);
  if (force_mixed && roll == 0) roll = 1;
  switch (roll) {
    case 0:
      return {gen_positive(g, vars, depth - 1), true, std::size_t(-1)};
    case 1:
    case 2: {
      std::size_t j = draw(g, vars.size());
      return {neg_nnf(gen_box_shape(g, vars, j, depth - 1)), false, j};
    }
    case 3: {  // conjoin a positive with one mixed piece
      RegularPiece sub = gen_regular_piece(g, vars, depth - 1, true);
      std::vector<std::string> allowed =
          sub.head == std::size_t(-1)
              ? vars
              : std::vector<std::string>(vars.begin(), vars.begin() + sub.head);
      Formula pos = gen_positive(g, allowed, depth - 1);
      return {Formula::conj({pos, sub.f}), false, sub.head};
    }
    case 4: {  // disjoin two mixed pieces; matchers cannot enter this node
      RegularPiece a = gen_regular_piece(g, vars, depth - 1, true);
      RegularPiece b = gen_regular_piece(g, vars, depth - 1, true);
      return {Formula::disj({a.f, b.f}), false, std::size_t(-1)};
    }
    case 5: {  // conjoin two mixed pieces; ditto
      RegularPiece a = gen_regular_piece(g, vars, depth - 1, true);
      RegularPiece b = gen_regular_piece(g, vars, depth - 1, true);
      if (a.f == b.f) return a;  // conjunction would collapse to one piece
      return {Formula::conj({a.f, b.f}), false, std::size_t(-1)};
    }
    default: {
      RegularPiece sub = gen_regular_piece(g, vars, depth - 1, force_mixed);
      return {Formula::box(sub.f), sub.positive, std::size_t(-1)};
    }
  }
}

}  // namespace detail

inline Formula generate_sahlqvist(std::uint64_t seed, const GenOptions& opts = {}) {
  std::mt19937_64 g(seed);
  return detail::gen_sahlqvist_rec(g, detail::gen_vars(opts), opts.max_depth);
}

inline Formula generate_inductive(std::uint64_t seed, const GenOptions& opts = {}) {
  std::mt19937_64 g(seed);
  return detail::gen_regular_piece(g, detail::gen_vars(opts), opts.max_depth, true).f;
}

// Unconstrained basic modal formula over the pool; used for differential
// testing against the frame oracle.
inline Formula generate_random_basic(std::uint64_t seed, const GenOptions& opts = {}) {
  std::mt19937_64 g(seed);
  const std::vector<std::string> vars = detail::gen_vars(opts);
  std::function<Formula(int)> rec = [&](int depth) -> Formula {
    if (depth <= 0) {
      switch (detail::draw(g, 4)) {
        case 0: return Formula::top();
        case 1: return Formula::bottom();
        default: return detail::pick_var(g, vars);
      }
    }
    switch (detail::draw(g, 9)) {
      case 0: return detail::pick_var(g, vars);
      case 1: return Formula::neg(rec(depth - 1));
      case 2: return Formula::conj({rec(depth - 1), rec(depth - 1)});
      case 3: return Formula::disj({rec(depth - 1), rec(depth - 1)});
      case 4: return Formula::implies(rec(depth - 1), rec(depth - 1));
      case 5: return Formula::iff(rec(depth - 1), rec(depth - 1));
      case 6: return Formula::box(rec(depth - 1));
      default: return Formula::dia(rec(depth - 1));
    }
  };
  return rec(opts.max_depth);
}

}  // namespace sqema
