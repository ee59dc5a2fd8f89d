#include "wavesys/cli/expr_parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "wavesys/errors.hpp"

namespace wavesys::cli {

using genfunc::Polynomial;

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  const auto push = [&](Token::Kind kind, std::string s, double num = 0) {
    Token t;
    t.kind = kind;
    t.text = std::move(s);
    t.number = num;
    t.line = line;
    t.col = col;
    out.push_back(std::move(t));
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ch == '\n') {
      push(Token::Kind::Newline, "\\n");
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      ++col;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) ||
        (ch == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      const size_t start = i;
      while (i < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
              text[i] == 'e' || text[i] == 'E' ||
              ((text[i] == '+' || text[i] == '-') && i > start &&
               (text[i - 1] == 'e' || text[i - 1] == 'E'))))
        ++i;
      const std::string s = text.substr(start, i - start);
      double v = 0;
      try {
        v = std::stod(s);
      } catch (...) {
        throw ParseError(line, col, "bad number '" + s + "'");
      }
      push(Token::Kind::Number, s, v);
      col += static_cast<int>(i - start);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' ||
              text[i] == '.'))
        ++i;
      push(Token::Kind::Ident, text.substr(start, i - start));
      col += static_cast<int>(i - start);
      continue;
    }
    if ((ch == '<' || ch == '>') && i + 1 < text.size() && text[i + 1] == '=') {
      push(Token::Kind::Symbol, std::string(1, ch) + "=");
      i += 2;
      col += 2;
      continue;
    }
    static const std::string singles = "+-*/^(){}[]:;,=<>&";
    if (singles.find(ch) != std::string::npos) {
      push(Token::Kind::Symbol, std::string(1, ch));
      ++i;
      ++col;
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + ch + "'");
  }
  push(Token::Kind::End, "<end>");
  return out;
}

const Token& TokenStream::peek(int ahead) const {
  const size_t i = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[i];
}

Token TokenStream::next() {
  const Token t = peek();
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool TokenStream::accept_symbol(const std::string& s) {
  if (peek().kind == Token::Kind::Symbol && peek().text == s) {
    next();
    return true;
  }
  return false;
}

void TokenStream::expect_symbol(const std::string& s) {
  if (!accept_symbol(s)) fail("expected '" + s + "', found '" + peek().text + "'");
}

void TokenStream::skip_newlines() {
  while (peek().kind == Token::Kind::Newline) next();
}

void TokenStream::fail(const std::string& msg) const {
  throw ParseError(peek().line, peek().col, msg);
}

namespace {

int axis_of(const std::string& name, int max_dim, const TokenStream& ts) {
  int axis = -1;
  if (name == "t") axis = 0;
  else if (name == "x" || name == "x1") axis = 1;
  else if (name == "y" || name == "x2") axis = 2;
  else if (name == "z" || name == "x3") axis = 3;
  if (axis < 0) ts.fail("unknown variable '" + name + "'");
  if (axis > max_dim)
    ts.fail("variable '" + name + "' exceeds the spatial dimension " + std::to_string(max_dim));
  return axis;
}

ExprNode parse_sum(TokenStream& ts, int max_dim);

ExprNode parse_atom(TokenStream& ts, int max_dim) {
  ExprNode node;
  node.line = ts.peek().line;
  node.col = ts.peek().col;
  const Token t = ts.peek();
  if (t.kind == Token::Kind::Number) {
    ts.next();
    node.kind = ExprNode::Kind::Number;
    node.number = t.number;
    // Power shorthand for sweep entries: 2^-10 on number literals.
    if (ts.peek().kind == Token::Kind::Symbol && ts.peek().text == "^") {
      const Token after = ts.peek(1);
      const bool neg = after.kind == Token::Kind::Symbol && after.text == "-";
      if (neg && ts.peek(2).kind == Token::Kind::Number) {
        ts.next();
        ts.next();
        const Token e = ts.next();
        node.number = std::pow(t.number, -e.number);
        return node;
      }
    }
    return node;
  }
  if (t.kind == Token::Kind::Ident) {
    if (t.text == "pi") {
      ts.next();
      node.kind = ExprNode::Kind::Number;
      node.number = M_PI;
      return node;
    }
    if (t.text == "H" || t.text == "sin" || t.text == "cos") {
      ts.next();
      ts.expect_symbol("(");
      ExprNode arg = parse_sum(ts, max_dim);
      ts.expect_symbol(")");
      node.kind = t.text == "H" ? ExprNode::Kind::H
                                : (t.text == "sin" ? ExprNode::Kind::Sin : ExprNode::Kind::Cos);
      node.kids.push_back(std::move(arg));
      return node;
    }
    if (t.text == "bump") {
      ts.next();
      ts.expect_symbol("(");
      const Token var = ts.next();
      if (var.kind != Token::Kind::Ident) ts.fail("bump(var, radius) expects a variable");
      node.axis = axis_of(var.text, max_dim, ts);
      ts.expect_symbol(",");
      bool negr = ts.accept_symbol("-");
      const Token r = ts.next();
      if (r.kind != Token::Kind::Number || negr) ts.fail("bump radius must be positive");
      node.radius = r.number;
      ts.expect_symbol(")");
      node.kind = ExprNode::Kind::Bump;
      return node;
    }
    ts.next();
    node.kind = ExprNode::Kind::Var;
    node.axis = axis_of(t.text, max_dim, ts);
    return node;
  }
  if (t.kind == Token::Kind::Symbol && t.text == "(") {
    ts.next();
    ExprNode inner = parse_sum(ts, max_dim);
    ts.expect_symbol(")");
    return inner;
  }
  ts.fail("expected a number, variable or function, found '" + t.text + "'");
}

ExprNode parse_power(TokenStream& ts, int max_dim) {
  ExprNode base = parse_atom(ts, max_dim);
  if (ts.peek().kind == Token::Kind::Symbol && ts.peek().text == "^") {
    ts.next();
    const bool neg = ts.accept_symbol("-");
    const Token e = ts.next();
    if (e.kind != Token::Kind::Number || e.number != std::floor(e.number))
      ts.fail("exponent must be an integer");
    if (neg) {
      if (base.kind != ExprNode::Kind::Number) ts.fail("negative exponents only on numbers");
      ExprNode node;
      node.kind = ExprNode::Kind::Number;
      node.number = std::pow(base.number, -e.number);
      return node;
    }
    ExprNode node;
    node.kind = ExprNode::Kind::Pow;
    node.exponent = static_cast<int>(e.number);
    if (node.exponent < 0) ts.fail("exponent must be non-negative");
    node.kids.push_back(std::move(base));
    return node;
  }
  return base;
}

ExprNode parse_unary(TokenStream& ts, int max_dim) {
  if (ts.accept_symbol("-")) {
    ExprNode node;
    node.kind = ExprNode::Kind::Neg;
    node.kids.push_back(parse_unary(ts, max_dim));
    return node;
  }
  (void)ts.accept_symbol("+");
  return parse_power(ts, max_dim);
}

ExprNode parse_product(TokenStream& ts, int max_dim) {
  ExprNode lhs = parse_unary(ts, max_dim);
  while (ts.peek().kind == Token::Kind::Symbol &&
         (ts.peek().text == "*" || ts.peek().text == "/")) {
    const std::string op = ts.next().text;
    ExprNode rhs = parse_unary(ts, max_dim);
    ExprNode node;
    node.kind = op == "*" ? ExprNode::Kind::Mul : ExprNode::Kind::Div;
    node.kids.push_back(std::move(lhs));
    node.kids.push_back(std::move(rhs));
    lhs = std::move(node);
  }
  return lhs;
}

ExprNode parse_sum(TokenStream& ts, int max_dim) {
  ExprNode lhs = parse_product(ts, max_dim);
  while (ts.peek().kind == Token::Kind::Symbol &&
         (ts.peek().text == "+" || ts.peek().text == "-")) {
    const std::string op = ts.next().text;
    ExprNode rhs = parse_product(ts, max_dim);
    ExprNode node;
    node.kind = op == "+" ? ExprNode::Kind::Add : ExprNode::Kind::Sub;
    node.kids.push_back(std::move(lhs));
    node.kids.push_back(std::move(rhs));
    lhs = std::move(node);
  }
  return lhs;
}

}  // namespace

ExprNode parse_expression(TokenStream& ts, int max_dim) { return parse_sum(ts, max_dim); }

bool PwValue::has_cuts() const {
  for (const auto& c : cuts)
    if (!c.empty()) return true;
  return false;
}

const Polynomial& PwValue::at(double t, const SpaceVec& x) const {
  std::array<double, 4> coord{t, x[0], x[1], x[2]};
  std::int64_t idx = 0;
  for (int a = 0; a < 4; ++a) {
    int cell = 0;
    while (cell < static_cast<int>(cuts[a].size()) && coord[a] >= cuts[a][cell]) ++cell;
    idx = idx * cell_count(a) + cell;
  }
  return cells[idx];
}

namespace {

std::vector<double> merged_cuts(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double u, double v) { return std::abs(u - v) < 1e-13; }),
            out.end());
  return out;
}

// Representative point of one cell on an axis given the interior cuts.
double cell_point(const std::vector<double>& cuts, int cell) {
  if (cuts.empty()) return 0.0;
  if (cell == 0) return cuts.front() - 1.0;
  if (cell == static_cast<int>(cuts.size())) return cuts.back() + 1.0;
  return 0.5 * (cuts[cell - 1] + cuts[cell]);
}

PwValue combine(const PwValue& a, const PwValue& b,
                const std::function<Polynomial(const Polynomial&, const Polynomial&)>& op) {
  PwValue out;
  for (int axis = 0; axis < 4; ++axis) out.cuts[axis] = merged_cuts(a.cuts[axis], b.cuts[axis]);
  std::int64_t total = 1;
  for (int axis = 0; axis < 4; ++axis) total *= out.cell_count(axis);
  out.cells.resize(total);
  std::array<int, 4> idx{};
  for (std::int64_t k = 0; k < total; ++k) {
    double t = cell_point(out.cuts[0], idx[0]);
    SpaceVec x{};
    for (int axis = 1; axis < 4; ++axis) x[axis - 1] = cell_point(out.cuts[axis], idx[axis]);
    out.cells[k] = op(a.at(t, x), b.at(t, x));
    for (int axis = 3; axis >= 0; --axis) {
      if (++idx[axis] < out.cell_count(axis)) break;
      idx[axis] = 0;
    }
  }
  return out;
}

PwValue pw_constant(double v) {
  PwValue out;
  out.cells = {Polynomial::constant(v)};
  return out;
}

PwValue lower_pw(const ExprNode& ast, int n) {
  switch (ast.kind) {
    case ExprNode::Kind::Number:
      return pw_constant(ast.number);
    case ExprNode::Kind::Var: {
      PwValue out;
      out.cells = {Polynomial::variable(ast.axis)};
      return out;
    }
    case ExprNode::Kind::Add:
      return combine(lower_pw(ast.kids[0], n), lower_pw(ast.kids[1], n),
                     [](const Polynomial& u, const Polynomial& v) { return u + v; });
    case ExprNode::Kind::Sub:
      return combine(lower_pw(ast.kids[0], n), lower_pw(ast.kids[1], n),
                     [](const Polynomial& u, const Polynomial& v) { return u - v; });
    case ExprNode::Kind::Mul:
      return combine(lower_pw(ast.kids[0], n), lower_pw(ast.kids[1], n),
                     [](const Polynomial& u, const Polynomial& v) { return u * v; });
    case ExprNode::Kind::Div: {
      const PwValue rhs = lower_pw(ast.kids[1], n);
      if (rhs.cells.size() != 1 || !rhs.cells[0].is_constant() ||
          rhs.cells[0].constant_value() == 0.0)
        throw ParseError(ast.line, ast.col, "division only by nonzero constants");
      const double inv = 1.0 / rhs.cells[0].constant_value();
      PwValue lhs = lower_pw(ast.kids[0], n);
      for (Polynomial& p : lhs.cells) p = inv * p;
      return lhs;
    }
    case ExprNode::Kind::Neg: {
      PwValue v = lower_pw(ast.kids[0], n);
      for (Polynomial& p : v.cells) p = -1.0 * p;
      return v;
    }
    case ExprNode::Kind::Pow: {
      const PwValue base = lower_pw(ast.kids[0], n);
      PwValue out = pw_constant(1.0);
      for (int k = 0; k < ast.exponent; ++k)
        out = combine(out, base,
                      [](const Polynomial& u, const Polynomial& v) { return u * v; });
      return out;
    }
    case ExprNode::Kind::H: {
      // The argument must be affine in a single axis: a*v + b.
      const PwValue arg = lower_pw(ast.kids[0], n);
      if (arg.has_cuts() || arg.cells.size() != 1)
        throw ParseError(ast.line, ast.col, "H argument must be affine, without nested H");
      const Polynomial& poly = arg.cells[0];
      int axis = -1;
      double slope = 0, offset = 0;
      for (const auto& m : poly.terms()) {
        if (m.total_degree() == 0) {
          offset = m.coef;
        } else if (m.total_degree() == 1) {
          for (int a = 0; a < 4; ++a)
            if (m.exp[a] == 1) {
              if (axis >= 0 && axis != a)
                throw ParseError(ast.line, ast.col, "H argument must involve a single axis");
              axis = a;
              slope = m.coef;
            }
        } else {
          throw ParseError(ast.line, ast.col, "H argument must be affine");
        }
      }
      if (axis < 0) return pw_constant(offset >= 0 ? 1.0 : 0.0);
      PwValue out;
      out.cuts[axis] = {-offset / slope};
      out.cells = {Polynomial::constant(slope > 0 ? 0.0 : 1.0),
                   Polynomial::constant(slope > 0 ? 1.0 : 0.0)};
      return out;
    }
    default:
      throw ParseError(ast.line, ast.col,
                       "sin/cos/bump are only allowed in initial data and sources that are "
                       "not piecewise-polynomial coefficients");
  }
}

using Evaluator = std::function<double(double, const SpaceVec&)>;

Evaluator lower_cf(const ExprNode& ast, bool* depends_on_t) {
  switch (ast.kind) {
    case ExprNode::Kind::Number: {
      const double v = ast.number;
      return [v](double, const SpaceVec&) { return v; };
    }
    case ExprNode::Kind::Var: {
      const int axis = ast.axis;
      if (axis == 0 && depends_on_t) *depends_on_t = true;
      return [axis](double t, const SpaceVec& x) { return axis == 0 ? t : x[axis - 1]; };
    }
    case ExprNode::Kind::Add: {
      auto a = lower_cf(ast.kids[0], depends_on_t), b = lower_cf(ast.kids[1], depends_on_t);
      return [a, b](double t, const SpaceVec& x) { return a(t, x) + b(t, x); };
    }
    case ExprNode::Kind::Sub: {
      auto a = lower_cf(ast.kids[0], depends_on_t), b = lower_cf(ast.kids[1], depends_on_t);
      return [a, b](double t, const SpaceVec& x) { return a(t, x) - b(t, x); };
    }
    case ExprNode::Kind::Mul: {
      auto a = lower_cf(ast.kids[0], depends_on_t), b = lower_cf(ast.kids[1], depends_on_t);
      return [a, b](double t, const SpaceVec& x) { return a(t, x) * b(t, x); };
    }
    case ExprNode::Kind::Div: {
      auto a = lower_cf(ast.kids[0], depends_on_t), b = lower_cf(ast.kids[1], depends_on_t);
      return [a, b](double t, const SpaceVec& x) { return a(t, x) / b(t, x); };
    }
    case ExprNode::Kind::Neg: {
      auto a = lower_cf(ast.kids[0], depends_on_t);
      return [a](double t, const SpaceVec& x) { return -a(t, x); };
    }
    case ExprNode::Kind::Pow: {
      auto a = lower_cf(ast.kids[0], depends_on_t);
      const int e = ast.exponent;
      return [a, e](double t, const SpaceVec& x) { return std::pow(a(t, x), e); };
    }
    case ExprNode::Kind::Sin: {
      auto a = lower_cf(ast.kids[0], depends_on_t);
      return [a](double t, const SpaceVec& x) { return std::sin(a(t, x)); };
    }
    case ExprNode::Kind::Cos: {
      auto a = lower_cf(ast.kids[0], depends_on_t);
      return [a](double t, const SpaceVec& x) { return std::cos(a(t, x)); };
    }
    case ExprNode::Kind::Bump: {
      const int axis = ast.axis;
      const double r = ast.radius;
      if (axis == 0 && depends_on_t) *depends_on_t = true;
      return [axis, r](double t, const SpaceVec& x) {
        const double y = (axis == 0 ? t : x[axis - 1]) / r;
        return y * y < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0;
      };
    }
    case ExprNode::Kind::H:
      throw ParseError(ast.line, ast.col, "H is not allowed in smooth closed-form entries");
  }
  throw ParseError(ast.line, ast.col, "unsupported expression");
}

}  // namespace

PwValue lower_piecewise(const ExprNode& ast, int n) { return lower_pw(ast, n); }

Evaluator lower_closed_form(const ExprNode& ast, int n, bool* depends_on_t) {
  (void)n;
  if (depends_on_t) *depends_on_t = false;
  return lower_cf(ast, depends_on_t);
}

genfunc::PiecewiseExpr to_piecewise_expr(const PwValue& value, int n, const SpaceTimeBox& box) {
  std::vector<genfunc::Region> regions;
  std::array<int, 4> counts{};
  for (int a = 0; a < 4; ++a) counts[a] = value.cell_count(a);
  std::array<int, 4> idx{};
  const std::int64_t total = static_cast<std::int64_t>(value.cells.size());
  for (std::int64_t k = 0; k < total; ++k) {
    genfunc::Region region;
    for (int a = 0; a < 4; ++a) {
      const auto& cuts = value.cuts[a];
      if (idx[a] > 0) region.bounds[a].lo = cuts[idx[a] - 1];
      if (idx[a] < static_cast<int>(cuts.size())) region.bounds[a].hi = cuts[idx[a]];
    }
    std::int64_t flat = 0;
    for (int a = 0; a < 4; ++a) flat = flat * counts[a] + idx[a];
    region.poly = value.cells[flat];
    regions.push_back(std::move(region));
    for (int a = 3; a >= 0; --a) {
      if (++idx[a] < counts[a]) break;
      idx[a] = 0;
    }
  }
  return genfunc::PiecewiseExpr(n, box, std::move(regions));
}

}  // namespace wavesys::cli
