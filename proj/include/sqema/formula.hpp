// ============================================================================
//  formula.hpp
//
//  Modal formula AST for the hybrid language ML+ (propositional variables,
//  nominals, box/diamond and their inverses), plus parsing and printing.
//
//  Representation choices that the rest of the library leans on:
//    * Formulas are immutable trees behind shared_ptr; copying is cheap and
//      sharing subtrees across threads is safe.  There is no interning --
//      the formulas handled here are small enough that structural compare
//      is never a bottleneck.
//    * And/Or are n-ary but keep the children exactly as given: no
//      flattening, no reordering.  The syntactic fragment recognizers need
//      the grouping the user wrote ((~box p | q) | (~q | box p) is two
//      implications, its flattening is not), so canonicalization is an
//      explicit step (simplify_aux) rather than a constructor side effect.
//    * Implies/Iff exist as node kinds so that user input keeps its shape
//      until NNF conversion; everything downstream of NNF never sees them.
//    * Nominal index 0 is reserved for the designated "current state"
//      nominal.  The parser rejects it in user input by default.
// ============================================================================
#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqema {

// ── Node kinds ──────────────────────────────────────────────────────────────
// The enumerator order doubles as the major key of the structural ordering,
// so it is part of the library's observable behaviour.  Do not reorder.
enum class Kind : std::uint8_t {
  Top,
  Bottom,
  Var,
  Nominal,
  Not,
  And,
  Or,
  Box,
  Dia,
  BoxInv,
  DiaInv,
  Implies,
  Iff,
};

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Top: return "Top";
    case Kind::Bottom: return "Bottom";
    case Kind::Var: return "Var";
    case Kind::Nominal: return "Nominal";
    case Kind::Not: return "Not";
    case Kind::And: return "And";
    case Kind::Or: return "Or";
    case Kind::Box: return "Box";
    case Kind::Dia: return "Dia";
    case Kind::BoxInv: return "BoxInv";
    case Kind::DiaInv: return "DiaInv";
    case Kind::Implies: return "Implies";
    case Kind::Iff: return "Iff";
  }
  return "?";
}

// Index of the reserved nominal that names the evaluation state.
inline constexpr int kCurrentStateNominal = 0;

class Formula {
 public:
  Formula() = default;  // empty handle; only valid after assignment

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  const std::string& var_name() const { return node_->name; }
  int nominal_index() const { return node_->index; }

  const std::vector<Formula>& children() const { return node_->kids; }
  const Formula& child(std::size_t i = 0) const { return node_->kids[i]; }
  std::size_t arity() const { return node_->kids.size(); }

  bool valid() const { return node_ != nullptr; }

  // ── Constructors ─────────────────────────────────────────────────────────
  static Formula top() { return leaf(Kind::Top); }
  static Formula bottom() { return leaf(Kind::Bottom); }

  static Formula var(std::string name) {
    Formula f = leaf(Kind::Var);
    const_cast<Node*>(f.node_.get())->name = std::move(name);
    return f;
  }

  static Formula nominal(int index) {
    if (index < 0) throw std::invalid_argument("nominal index must be >= 0");
    Formula f = leaf(Kind::Nominal);
    const_cast<Node*>(f.node_.get())->index = index;
    return f;
  }

  static Formula neg(Formula f) { return unary(Kind::Not, std::move(f)); }
  static Formula box(Formula f) { return unary(Kind::Box, std::move(f)); }
  static Formula dia(Formula f) { return unary(Kind::Dia, std::move(f)); }
  static Formula box_inv(Formula f) { return unary(Kind::BoxInv, std::move(f)); }
  static Formula dia_inv(Formula f) { return unary(Kind::DiaInv, std::move(f)); }

  static Formula implies(Formula a, Formula b) {
    return binary(Kind::Implies, std::move(a), std::move(b));
  }
  static Formula iff(Formula a, Formula b) {
    return binary(Kind::Iff, std::move(a), std::move(b));
  }

  // n-ary conjunction/disjunction.  Children are kept in the given order and
  // grouping.  Zero children give the unit (And -> Top, Or -> Bottom); a
  // single child is returned as-is.
  static Formula conj(std::vector<Formula> kids) {
    return nary(Kind::And, std::move(kids));
  }
  static Formula disj(std::vector<Formula> kids) {
    return nary(Kind::Or, std::move(kids));
  }

  // ── Structural order ─────────────────────────────────────────────────────
  // Total order: kind rank first, then payload, then children
  // lexicographically.  Shared subtrees compare equal in O(1).
  static int compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
      case Kind::Var:
        return a.var_name() < b.var_name() ? -1
             : a.var_name() > b.var_name() ? 1 : 0;
      case Kind::Nominal:
        return a.nominal_index() < b.nominal_index() ? -1
             : a.nominal_index() > b.nominal_index() ? 1 : 0;
      default: break;
    }
    const auto& xs = a.children();
    const auto& ys = b.children();
    if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      int c = compare(xs[i], ys[i]);
      if (c != 0) return c;
    }
    return 0;
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return compare(a, b) == 0;
  }
  friend bool operator!=(const Formula& a, const Formula& b) {
    return compare(a, b) != 0;
  }
  friend bool operator<(const Formula& a, const Formula& b) {
    return compare(a, b) < 0;
  }

 private:
  struct Node {
    Kind kind = Kind::Top;
    std::string name;           // Var only
    int index = -1;             // Nominal only
    std::vector<Formula> kids;  // everything else
  };

  std::shared_ptr<const Node> node_;

  static Formula wrap(std::shared_ptr<const Node> n) {
    Formula f;
    f.node_ = std::move(n);
    return f;
  }

  static Formula leaf(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return wrap(std::move(n));
  }

  static Formula unary(Kind k, Formula c) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids.push_back(std::move(c));
    return wrap(std::move(n));
  }

  static Formula binary(Kind k, Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids.push_back(std::move(a));
    n->kids.push_back(std::move(b));
    return wrap(std::move(n));
  }

  static Formula nary(Kind k, std::vector<Formula> kids) {
    if (kids.empty()) return k == Kind::And ? top() : bottom();
    if (kids.size() == 1) return std::move(kids.front());
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids = std::move(kids);
    return wrap(std::move(n));
  }
};

// ── Printing ────────────────────────────────────────────────────────────────
// Concrete syntax, loosest binding last:
//   <->   |   ->   |   '|'   |   '&'   |   ~ box dia boxinv diainv   |  atoms
// '->' is right-associative; unary operators stack without parentheses.

namespace detail {

enum Prec : int { kIff = 0, kImp = 1, kOr = 2, kAnd = 3, kUnary = 4, kAtom = 5 };

inline int precedence_of(Kind k) {
  switch (k) {
    case Kind::Iff: return kIff;
    case Kind::Implies: return kImp;
    case Kind::Or: return kOr;
    case Kind::And: return kAnd;
    case Kind::Not:
    case Kind::Box:
    case Kind::Dia:
    case Kind::BoxInv:
    case Kind::DiaInv: return kUnary;
    default: return kAtom;
  }
}

inline void print_into(const Formula& f, int min_prec, std::string& out) {
  int prec = precedence_of(f.kind());
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Kind::Top: out += "true"; break;
    case Kind::Bottom: out += "false"; break;
    case Kind::Var: out += f.var_name(); break;
    case Kind::Nominal:
      out += "#i";
      out += std::to_string(f.nominal_index());
      break;
    case Kind::Not:
      out += '~';
      print_into(f.child(), kUnary, out);
      break;
    case Kind::Box:
    case Kind::Dia:
    case Kind::BoxInv:
    case Kind::DiaInv:
      out += f.kind() == Kind::Box ? "box" : f.kind() == Kind::Dia ? "dia"
           : f.kind() == Kind::BoxInv ? "boxinv" : "diainv";
      out += ' ';
      print_into(f.child(), kUnary, out);
      break;
    case Kind::And:
    case Kind::Or: {
      const char* sep = f.kind() == Kind::And ? " & " : " | ";
      int level = prec;
      for (std::size_t i = 0; i < f.arity(); ++i) {
        if (i) out += sep;
        print_into(f.child(i), level + 1, out);
      }
      break;
    }
    case Kind::Implies:
      print_into(f.child(0), kImp + 1, out);
      out += " -> ";
      print_into(f.child(1), kImp, out);  // right-associative
      break;
    case Kind::Iff:
      print_into(f.child(0), kIff + 1, out);
      out += " <-> ";
      print_into(f.child(1), kIff, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_into(f, 0, out);
  return out;
}

// ── Parsing ─────────────────────────────────────────────────────────────────

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ParseOptions {
  // Rewrite '->' and '<->' into ~/&/| during parsing.  Off by default; the
  // NNF pass eliminates them anyway, and keeping them preserves input shape
  // for the classifiers.
  bool eliminate_implications = false;
  // Accept the reserved nominal #i0.  User-facing input must not name the
  // current state explicitly, but traces and tests round-trip through here.
  bool allow_reserved_nominal = false;
};

namespace detail {

struct Token {
  enum Type {
    kEnd, kTrue, kFalse, kIdent, kNominal, kNot, kAnd, kOr, kImp, kIff,
    kBox, kDia, kBoxInv, kDiaInv, kLParen, kRParen,
  };
  Type type = kEnd;
  std::string text;
  int nominal = -1;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    switch (c) {
      case '(': advance(); t.type = Token::kLParen; return t;
      case ')': advance(); t.type = Token::kRParen; return t;
      case '~': advance(); t.type = Token::kNot; return t;
      case '&': advance(); t.type = Token::kAnd; return t;
      case '|': advance(); t.type = Token::kOr; return t;
      case '-':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '>') {
          advance();
          t.type = Token::kImp;
          return t;
        }
        throw ParseError(t.line, t.col, "expected '->'");
      case '<':
        advance();
        if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '>') {
          advance();
          advance();
          t.type = Token::kIff;
          return t;
        }
        throw ParseError(t.line, t.col, "expected '<->'");
      case '#': {
        advance();
        if (pos_ >= src_.size() || src_[pos_] != 'i')
          throw ParseError(t.line, t.col, "expected 'i' after '#'");
        advance();
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
          throw ParseError(t.line, t.col, "expected nominal index after '#i'");
        long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          v = v * 10 + (src_[pos_] - '0');
          if (v > 1'000'000) throw ParseError(t.line, t.col, "nominal index too large");
          advance();
        }
        t.type = Token::kNominal;
        t.nominal = static_cast<int>(v);
        return t;
      }
      default: break;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string word;
      while (pos_ < src_.size() &&
             std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
        word += src_[pos_];
        advance();
      }
      if (word == "true") t.type = Token::kTrue;
      else if (word == "false") t.type = Token::kFalse;
      else if (word == "box") t.type = Token::kBox;
      else if (word == "dia") t.type = Token::kDia;
      else if (word == "boxinv") t.type = Token::kBoxInv;
      else if (word == "diainv") t.type = Token::kDiaInv;
      else {
        t.type = Token::kIdent;
        t.text = std::move(word);
      }
      return t;
    }
    throw ParseError(t.line, t.col,
                     std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts)
      : lexer_(src), opts_(opts) {
    bump();
  }

  Formula parse() {
    Formula f = parse_iff();
    if (tok_.type != Token::kEnd)
      throw ParseError(tok_.line, tok_.col, "trailing input");
    return f;
  }

 private:
  // iff := imp ('<->' iff)?          (right-associative, loosest)
  Formula parse_iff() {
    Formula a = parse_imp();
    if (tok_.type == Token::kIff) {
      bump();
      Formula b = parse_iff();
      if (opts_.eliminate_implications)
        return Formula::conj({Formula::disj({Formula::neg(a), b}),
                              Formula::disj({Formula::neg(b), a})});
      return Formula::iff(std::move(a), std::move(b));
    }
    return a;
  }

  // imp := or ('->' imp)?            (right-associative)
  Formula parse_imp() {
    Formula a = parse_or();
    if (tok_.type == Token::kImp) {
      bump();
      Formula b = parse_imp();
      if (opts_.eliminate_implications)
        return Formula::disj({Formula::neg(a), std::move(b)});
      return Formula::implies(std::move(a), std::move(b));
    }
    return a;
  }

  Formula parse_or() {
    std::vector<Formula> kids{parse_and()};
    while (tok_.type == Token::kOr) {
      bump();
      kids.push_back(parse_and());
    }
    return kids.size() == 1 ? std::move(kids.front())
                            : Formula::disj(std::move(kids));
  }

  Formula parse_and() {
    std::vector<Formula> kids{parse_unary()};
    while (tok_.type == Token::kAnd) {
      bump();
      kids.push_back(parse_unary());
    }
    return kids.size() == 1 ? std::move(kids.front())
                            : Formula::conj(std::move(kids));
  }

  Formula parse_unary() {
    switch (tok_.type) {
      case Token::kNot: bump(); return Formula::neg(parse_unary());
      case Token::kBox: bump(); return Formula::box(parse_unary());
      case Token::kDia: bump(); return Formula::dia(parse_unary());
      case Token::kBoxInv: bump(); return Formula::box_inv(parse_unary());
      case Token::kDiaInv: bump(); return Formula::dia_inv(parse_unary());
      default: return parse_atom();
    }
  }

  Formula parse_atom() {
    Token t = tok_;
    switch (t.type) {
      case Token::kTrue: bump(); return Formula::top();
      case Token::kFalse: bump(); return Formula::bottom();
      case Token::kIdent: bump(); return Formula::var(t.text);
      case Token::kNominal:
        if (t.nominal == kCurrentStateNominal && !opts_.allow_reserved_nominal)
          throw ParseError(t.line, t.col,
                           "#i0 is reserved for the current state");
        bump();
        return Formula::nominal(t.nominal);
      case Token::kLParen: {
        bump();
        Formula f = parse_iff();
        if (tok_.type != Token::kRParen)
          throw ParseError(tok_.line, tok_.col, "expected ')'");
        bump();
        return f;
      }
      case Token::kEnd:
        throw ParseError(t.line, t.col, "unexpected end of input");
      default:
        throw ParseError(t.line, t.col, "expected a formula");
    }
  }

  void bump() { tok_ = lexer_.next(); }

  Lexer lexer_;
  ParseOptions opts_;
  Token tok_;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text,
                             const ParseOptions& opts = {}) {
  detail::Parser p(text, opts);
  return p.parse();
}

}  // namespace sqema
