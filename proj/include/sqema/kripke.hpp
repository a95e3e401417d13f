// ============================================================================
//  kripke.hpp
//
//  Brute-force semantics over small Kripke frames.  Everything here exists
//  to cross-check the symbolic machinery: modal truth is computed by direct
//  extension calculation, first-order truth by Tarskian recursion, and
//  frame correspondence by exhaustive enumeration of frames, valuations and
//  evaluation points.
//
//  Frames are capped at 4 worlds so sets of worlds fit in a byte and the
//  full frame space stays enumerable (2, 16, 512, 65536 frames for
//  1, 2, 3, 4 worlds).
// ============================================================================
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqema/fo.hpp"
#include "sqema/formula.hpp"
#include "sqema/normalize.hpp"

namespace sqema {

constexpr int kMaxWorlds = 4;

// A frame with `size` worlds 0..size-1 and edges packed row-major:
// bit (i * size + j) set  <=>  R(i, j).
struct KripkeFrame {
  int size = 1;
  std::uint16_t edges = 0;

  bool has_edge(int i, int j) const {
    return (edges >> (i * size + j)) & 1u;
  }
  void set_edge(int i, int j, bool on = true) {
    std::uint16_t bit = std::uint16_t(1u << (i * size + j));
    if (on) edges = std::uint16_t(edges | bit);
    else edges = std::uint16_t(edges & ~bit);
  }

  std::uint8_t all_worlds() const {
    return std::uint8_t((1u << size) - 1u);
  }
  std::uint8_t successors(int i) const {
    std::uint8_t out = 0;
    for (int j = 0; j < size; ++j)
      if (has_edge(i, j)) out = std::uint8_t(out | (1u << j));
    return out;
  }
  std::uint8_t predecessors(int j) const {
    std::uint8_t out = 0;
    for (int i = 0; i < size; ++i)
      if (has_edge(i, j)) out = std::uint8_t(out | (1u << i));
    return out;
  }
};

// Frame literals look like "3;010001100": world count, a semicolon, then
// size*size edge bits row by row.
inline std::string to_string(const KripkeFrame& f) {
  std::string out = std::to_string(f.size);
  out += ';';
  for (int i = 0; i < f.size; ++i)
    for (int j = 0; j < f.size; ++j)
      out += f.has_edge(i, j) ? '1' : '0';
  return out;
}

inline KripkeFrame parse_frame(const std::string& text) {
  auto bad = [&](const std::string& why) {
    throw ParseError(1, 1, "bad frame literal \"" + text + "\": " + why);
  };
  std::size_t semi = text.find(';');
  if (semi == std::string::npos) bad("missing ';'");
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(text.substr(0, semi), &used);
    if (used != semi) bad("bad world count");
  } catch (const std::exception&) {
    bad("bad world count");
  }
  if (n < 1 || n > kMaxWorlds) bad("world count out of range 1..4");
  std::string bits = text.substr(semi + 1);
  if (bits.size() != std::size_t(n) * std::size_t(n))
    bad("expected " + std::to_string(n * n) + " edge bits");
  KripkeFrame f;
  f.size = n;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') f.edges = std::uint16_t(f.edges | (1u << k));
    else if (bits[k] != '0') bad("edge bits must be 0 or 1");
  }
  return f;
}

// All frames with 1..max_worlds worlds, smaller frames first, edge masks
// in increasing order.  Deterministic, so test failures are reproducible.
inline std::vector<KripkeFrame> enumerate_frames(int max_worlds) {
  if (max_worlds < 1 || max_worlds > kMaxWorlds)
    throw std::invalid_argument("enumerate_frames: world bound out of range");
  std::vector<KripkeFrame> out;
  for (int n = 1; n <= max_worlds; ++n) {
    std::uint32_t count = 1u << (n * n);
    for (std::uint32_t e = 0; e < count; ++e)
      out.push_back(KripkeFrame{n, std::uint16_t(e)});
  }
  return out;
}

// ── Modal evaluation ────────────────────────────────────────────────────────

using Valuation = std::map<std::string, std::uint8_t>;   // var  -> world set
using NominalMap = std::map<int, int>;                   // index -> world

// Extension of `f` as a bitmask of worlds.  Variables and nominals missing
// from the maps are an error in the caller; fail loudly.
inline std::uint8_t extension(const KripkeFrame& fr, const Formula& f,
                              const Valuation& val, const NominalMap& noms) {
  std::uint8_t all = fr.all_worlds();
  auto sub = [&](const Formula& g) { return extension(fr, g, val, noms); };
  switch (f.kind()) {
    case Kind::Top: return all;
    case Kind::Bottom: return 0;
    case Kind::Var: {
      auto it = val.find(f.var_name());
      if (it == val.end())
        throw std::logic_error("extension: no value for variable " + f.var_name());
      return std::uint8_t(it->second & all);
    }
    case Kind::Nominal: {
      auto it = noms.find(f.nominal_index());
      if (it == noms.end())
        throw std::logic_error("extension: unassigned nominal #i" +
                               std::to_string(f.nominal_index()));
      return std::uint8_t(1u << it->second);
    }
    case Kind::Not: return std::uint8_t(all & ~sub(f.child()));
    case Kind::And: {
      std::uint8_t m = all;
      for (const auto& c : f.children()) m = std::uint8_t(m & sub(c));
      return m;
    }
    case Kind::Or: {
      std::uint8_t m = 0;
      for (const auto& c : f.children()) m = std::uint8_t(m | sub(c));
      return m;
    }
    case Kind::Implies:
      return std::uint8_t((all & ~sub(f.child(0))) | sub(f.child(1)));
    case Kind::Iff: {
      std::uint8_t x = sub(f.child(0)), y = sub(f.child(1));
      return std::uint8_t(all & ~(x ^ y));
    }
    case Kind::Box: {
      std::uint8_t m = sub(f.child()), out = 0;
      for (int w = 0; w < fr.size; ++w)
        if ((fr.successors(w) & ~m) == 0) out = std::uint8_t(out | (1u << w));
      return out;
    }
    case Kind::Dia: {
      std::uint8_t m = sub(f.child()), out = 0;
      for (int w = 0; w < fr.size; ++w)
        if (fr.successors(w) & m) out = std::uint8_t(out | (1u << w));
      return out;
    }
    case Kind::BoxInv: {
      std::uint8_t m = sub(f.child()), out = 0;
      for (int w = 0; w < fr.size; ++w)
        if ((fr.predecessors(w) & ~m) == 0) out = std::uint8_t(out | (1u << w));
      return out;
    }
    case Kind::DiaInv: {
      std::uint8_t m = sub(f.child()), out = 0;
      for (int w = 0; w < fr.size; ++w)
        if (fr.predecessors(w) & m) out = std::uint8_t(out | (1u << w));
      return out;
    }
  }
  throw std::logic_error("extension: unhandled node kind");
}

inline bool true_at(const KripkeFrame& fr, const Formula& f, const Valuation& val,
                    const NominalMap& noms, int world) {
  return (extension(fr, f, val, noms) >> world) & 1u;
}

inline bool globally_true(const KripkeFrame& fr, const Formula& f,
                          const Valuation& val, const NominalMap& noms) {
  return extension(fr, f, val, noms) == fr.all_worlds();
}

namespace detail {

// Runs `fn` on every valuation of `vars` over the frame's worlds.
// Stops early when `fn` returns false and reports whether all calls held.
template <typename Fn>
bool for_each_valuation(const KripkeFrame& fr, const std::vector<std::string>& vars,
                        Fn&& fn) {
  std::uint32_t per_var = 1u << fr.size;
  std::vector<std::uint32_t> idx(vars.size(), 0);
  Valuation val;
  for (const auto& v : vars) val[v] = 0;
  for (;;) {
    for (std::size_t k = 0; k < vars.size(); ++k)
      val[vars[k]] = std::uint8_t(idx[k]);
    if (!fn(val)) return false;
    std::size_t k = 0;
    for (; k < vars.size(); ++k) {
      if (++idx[k] < per_var) break;
      idx[k] = 0;
    }
    if (k == vars.size()) return true;
  }
}

}  // namespace detail

// Frame validity at a point: true under every valuation of the variables.
// Only makes sense for nominal-free formulae; nominals denote by assignment,
// not by the frame.
inline bool frame_valid_at(const KripkeFrame& fr, const Formula& f, int world) {
  if (!nominals_of(f).empty())
    throw std::logic_error("frame_valid_at: formula contains nominals");
  std::set<std::string> var_set = vars_of(f);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  return detail::for_each_valuation(fr, vars, [&](const Valuation& val) {
    return true_at(fr, f, val, {}, world);
  });
}

inline bool frame_valid(const KripkeFrame& fr, const Formula& f) {
  for (int w = 0; w < fr.size; ++w)
    if (!frame_valid_at(fr, f, w)) return false;
  return true;
}

// ── First-order evaluation ──────────────────────────────────────────────────

using FoEnv = std::map<std::string, int>;                // variable -> world
using PredValuation = std::map<std::string, std::uint8_t>;

inline bool eval_fo(const KripkeFrame& fr, const FoFormula& f, FoEnv& env,
                    const PredValuation& preds) {
  auto world_of = [&](const std::string& v) {
    auto it = env.find(v);
    if (it == env.end())
      throw std::logic_error("eval_fo: unbound variable " + v);
    return it->second;
  };
  switch (f.kind()) {
    case FoKind::Top: return true;
    case FoKind::Bottom: return false;
    case FoKind::Rel: return fr.has_edge(world_of(f.a()), world_of(f.b()));
    case FoKind::Eq: return world_of(f.a()) == world_of(f.b());
    case FoKind::Pred: {
      auto it = preds.find(f.a());
      if (it == preds.end())
        throw std::logic_error("eval_fo: no valuation for predicate P_" + f.a());
      return (it->second >> world_of(f.b())) & 1u;
    }
    case FoKind::Not: return !eval_fo(fr, f.child(), env, preds);
    case FoKind::And:
      for (const auto& c : f.children())
        if (!eval_fo(fr, c, env, preds)) return false;
      return true;
    case FoKind::Or:
      for (const auto& c : f.children())
        if (eval_fo(fr, c, env, preds)) return true;
      return false;
    case FoKind::Implies:
      return !eval_fo(fr, f.child(0), env, preds) ||
             eval_fo(fr, f.child(1), env, preds);
    case FoKind::Forall:
    case FoKind::Exists: {
      bool want = f.is(FoKind::Exists);
      auto saved = env.find(f.a()) != env.end()
                       ? std::optional<int>(env[f.a()])
                       : std::nullopt;
      bool result = !want;
      for (int w = 0; w < fr.size; ++w) {
        env[f.a()] = w;
        if (eval_fo(fr, f.child(), env, preds) == want) {
          result = want;
          break;
        }
      }
      if (saved) env[f.a()] = *saved;
      else env.erase(f.a());
      return result;
    }
  }
  throw std::logic_error("eval_fo: unhandled node kind");
}

inline bool eval_fo(const KripkeFrame& fr, const FoFormula& f,
                    const FoEnv& env = {}, const PredValuation& preds = {}) {
  FoEnv scratch = env;
  return eval_fo(fr, f, scratch, preds);
}

// ── Correspondence checking ─────────────────────────────────────────────────

struct CorrespondenceCheck {
  bool ok = true;
  std::uint64_t frames_checked = 0;
  std::uint64_t points_checked = 0;
  // First disagreement found, if any.
  std::optional<KripkeFrame> frame;
  int world = 0;
  bool modal_value = false;
  bool fo_value = false;
};

// Confirms that `local` (one free variable, conventionally y0) holds at
// exactly the points where `phi` is frame-valid, on every frame with at
// most `max_worlds` worlds.
inline CorrespondenceCheck verify_correspondence(const Formula& phi,
                                                 const FoFormula& local,
                                                 int max_worlds,
                                                 const std::string& point_var = "y0") {
  CorrespondenceCheck out;
  for (const KripkeFrame& fr : enumerate_frames(max_worlds)) {
    ++out.frames_checked;
    for (int w = 0; w < fr.size; ++w) {
      ++out.points_checked;
      bool modal = frame_valid_at(fr, phi, w);
      bool fo = eval_fo(fr, local, FoEnv{{point_var, w}});
      if (modal != fo) {
        out.ok = false;
        out.frame = fr;
        out.world = w;
        out.modal_value = modal;
        out.fo_value = fo;
        return out;
      }
    }
  }
  return out;
}

// Same for the globally quantified correspondent (no free variables).
inline CorrespondenceCheck verify_global_correspondence(const Formula& phi,
                                                        const FoFormula& global,
                                                        int max_worlds) {
  CorrespondenceCheck out;
  for (const KripkeFrame& fr : enumerate_frames(max_worlds)) {
    ++out.frames_checked;
    ++out.points_checked;
    bool modal = frame_valid(fr, phi);
    bool fo = eval_fo(fr, global);
    if (modal != fo) {
      out.ok = false;
      out.frame = fr;
      out.world = 0;
      out.modal_value = modal;
      out.fo_value = fo;
      return out;
    }
  }
  return out;
}

// ── Constrained satisfiability of implication systems ───────────────────────
//
// Used to check that rewriting steps preserve meaning: a system of modal
// implications is "satisfiable at w" when some valuation of its variables
// and some assignment of its nominals, with nominal #i0 pinned to w, makes
// every member globally true on the frame.
inline bool system_satisfiable_at(const KripkeFrame& fr,
                                  const std::vector<Formula>& system, int root) {
  std::set<std::string> var_set;
  std::set<int> nom_set;
  for (const auto& f : system) {
    collect_vars(f, var_set);
    collect_nominals(f, nom_set);
  }
  nom_set.erase(kCurrentStateNominal);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  std::vector<int> noms(nom_set.begin(), nom_set.end());

  std::vector<int> assign(noms.size(), 0);
  for (;;) {
    NominalMap nm;
    nm[kCurrentStateNominal] = root;
    for (std::size_t k = 0; k < noms.size(); ++k) nm[noms[k]] = assign[k];

    bool found = !detail::for_each_valuation(fr, vars, [&](const Valuation& val) {
      for (const auto& f : system)
        if (!globally_true(fr, f, val, nm)) return true;  // keep searching
      return false;                                       // witness found
    });
    if (found) return true;

    std::size_t k = 0;
    for (; k < noms.size(); ++k) {
      if (++assign[k] < fr.size) break;
      assign[k] = 0;
    }
    if (k == noms.size()) return false;
  }
}

}  // namespace sqema
