#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wavesys/genfunc/piecewise.hpp"

namespace wavesys::cli {

// Tokens of the problem-spec language, with source positions for
// diagnostics.
struct Token {
  enum class Kind {
    Number,
    Ident,
    Symbol,   // one of + - * / ^ ( ) { } [ ] : ; , = < > & and the two-char <= >=
    Newline,
    End,
  };
  Kind kind = Kind::End;
  std::string text;
  double number = 0;
  int line = 1;
  int col = 1;
};

// Newline-aware tokenizer; '#' starts a comment to end of line. Numbers
// accept the power shorthand 2^-10.
std::vector<Token> tokenize(const std::string& text);

// Expression AST for coefficient and initial-data entries.
struct ExprNode {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Neg, Pow, H, Sin, Cos, Bump };
  Kind kind = Kind::Number;
  double number = 0;
  int axis = 0;        // Var: 0 = t, 1..3 = space
  int exponent = 1;    // Pow
  double radius = 0;   // Bump
  std::vector<ExprNode> kids;
  int line = 1, col = 1;
};

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek(int ahead = 0) const;
  Token next();
  bool accept_symbol(const std::string& s);
  void expect_symbol(const std::string& s);
  void skip_newlines();
  bool at_end() const { return peek().kind == Token::Kind::End; }
  [[noreturn]] void fail(const std::string& msg) const;

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// Parses an expression; stops at newline / ';' / ':' / '}' boundaries.
ExprNode parse_expression(TokenStream& ts, int max_dim);

// Piecewise-polynomial value on an axis-aligned breakpoint grid; the
// lowering target for coefficient expressions (H factors split cells).
struct PwValue {
  std::array<std::vector<double>, 4> cuts;  // interior breakpoints per axis
  std::vector<genfunc::Polynomial> cells;   // row-major over cut intervals

  int cell_count(int axis) const { return static_cast<int>(cuts[axis].size()) + 1; }
  const genfunc::Polynomial& at(double t, const SpaceVec& x) const;
  bool has_cuts() const;
};

// Lowers an AST to a piecewise polynomial; sin/cos/bump are rejected here.
PwValue lower_piecewise(const ExprNode& ast, int n);

// Lowers to a smooth closed-form evaluator; H is rejected here.
std::function<double(double, const SpaceVec&)> lower_closed_form(const ExprNode& ast, int n,
                                                                 bool* depends_on_t);

// PiecewiseExpr over the given definition box from a lowered value.
genfunc::PiecewiseExpr to_piecewise_expr(const PwValue& value, int n,
                                         const SpaceTimeBox& box);

}  // namespace wavesys::cli
