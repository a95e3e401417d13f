#pragma once

// ============================================================================
//  Shared helpers for the test suite: brute-force semantic comparisons over
//  small frames.  Everything here is exhaustive, so keep max_worlds <= 3.
// ============================================================================

#include <set>
#include <string>
#include <vector>

#include "sqema/kripke.hpp"
#include "sqema/normalize.hpp"

namespace testsupport {

// True when a and b have the same extension in every model with at most
// max_worlds worlds.  Only variable-based formulas; no nominals.
inline bool semantically_equal(const sqema::Formula& a, const sqema::Formula& b,
                               int max_worlds) {
  std::set<std::string> vs = sqema::vars_of(a);
  for (const auto& v : sqema::vars_of(b)) vs.insert(v);
  std::vector<std::string> vars(vs.begin(), vs.end());
  for (const sqema::KripkeFrame& fr : sqema::enumerate_frames(max_worlds)) {
    bool same = sqema::detail::for_each_valuation(fr, vars, [&](const sqema::Valuation& val) {
      return sqema::extension(fr, a, val, {}) == sqema::extension(fr, b, val, {});
    });
    if (!same) return false;
  }
  return true;
}

// True when f holds at every world of every model with at most max_worlds
// worlds, i.e. f is valid on the class of all frames of that size.
inline bool valid_up_to(const sqema::Formula& f, int max_worlds) {
  std::vector<std::string> vars;
  for (const auto& v : sqema::vars_of(f)) vars.push_back(v);
  for (const sqema::KripkeFrame& fr : sqema::enumerate_frames(max_worlds)) {
    bool ok = sqema::detail::for_each_valuation(fr, vars, [&](const sqema::Valuation& val) {
      return sqema::extension(fr, f, val, {}) == fr.all_worlds();
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace testsupport
