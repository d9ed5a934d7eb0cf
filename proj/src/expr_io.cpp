// Canonical printing and the surface-syntax parser.

#include <cctype>
#include <sstream>

#include "expr_internal.hpp"

namespace fgordon {

using detail::Atom;

using detail::Polynomial;

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Rational rational_from_string(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

NameTable default_names(int m) {
  NameTable t;
  if (m == 1)
    t.dependent = {"u"};
  else if (m == 2)
    t.dependent = {"u", "v"};
  else if (m == 3)
    t.dependent = {"u", "v", "w"};
  else
    for (int i = 1; i <= m; ++i) t.dependent.push_back("u" + std::to_string(i));
  return t;
}

std::string NameTable::coordinate_name(const Coordinate& c) const {
  switch (c.kind) {
    case CoordKind::X:
      return "x";
    case CoordKind::Y:
      return "y";
    default:
      break;
  }
  if (c.index < 1 || c.index > m())
    throw std::invalid_argument("coordinate index out of range");
  std::string base = dependent[static_cast<std::size_t>(c.index - 1)];
  switch (c.kind) {
    case CoordKind::U:
      return base;
    case CoordKind::Ux:
      return base + "_x";
    case CoordKind::Uy:
      return base + "_y";
    case CoordKind::Uxx:
      return base + "_xx";
    case CoordKind::Uxy:
      return base + "_xy";
    case CoordKind::Uyy:
      return base + "_yy";
    default:
      return base;
  }
}

std::string NameTable::parameter_name(int i) const {
  if (i >= 1 && i <= static_cast<int>(parameters.size()))
    return parameters[static_cast<std::size_t>(i - 1)];
  return "c" + std::to_string(i);
}

namespace {

bool plain_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

void NameTable::validate() const {
  std::set<std::string> seen{"x", "y", "exp", "log", "sin", "cos"};
  auto check = [&seen](const std::string& n) {
    if (!plain_identifier(n))
      throw std::invalid_argument("bad variable name: '" + n + "'");
    if (!seen.insert(n).second)
      throw std::invalid_argument("duplicate or reserved name: '" + n + "'");
  };
  for (const auto& n : dependent) check(n);
  for (const auto& n : parameters) check(n);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string print_expr(const ExprData& d, const NameTable& names);

std::string print_atom(const Atom& a, const NameTable& names) {
  switch (a.tag) {
    case Atom::Tag::Coord:
      return names.coordinate_name(a.coord);
    case Atom::Tag::Param:
      return names.parameter_name(a.param);
    case Atom::Tag::Func:
      return std::string(func_name(a.func)) + "(" +
             print_expr(*a.arg, names) + ")";
  }
  return "?";
}

std::string print_poly(const Polynomial& p, const NameTable& names) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms) {
    Rational c = t.coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    bool coef_printed = false;
    if (t.mono.is_one() || c != 1) {
      os << to_string(c);
      coef_printed = true;
    }
    bool need_star = coef_printed;
    for (const auto& [a, e] : t.mono.factors) {
      if (need_star) os << "*";
      os << print_atom(a, names);
      if (e != 1) os << "^" << e;
      need_star = true;
    }
  }
  return os.str();
}

std::string print_expr(const ExprData& d, const NameTable& names) {
  if (d.den.is_constant())  // monic constant denominator is 1
    return print_poly(d.num, names);
  return "(" + print_poly(d.num, names) + ")/(" + print_poly(d.den, names) +
         ")";
}

}  // namespace

std::string to_string(const Expression& e, const NameTable& names) {
  return print_expr(*e.data(), names);
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Number, Ident, Op, End } kind = Kind::End;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[i_])))
      ++i_;
    tok_.pos = i_;
    if (i_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[j])))
        ++j;
      tok_.kind = Token::Kind::Number;
      tok_.text = src_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) ||
              src_[j] == '_'))
        ++j;
      tok_.kind = Token::Kind::Ident;
      tok_.text = src_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    if (std::string("+-*/^()").find(c) != std::string::npos) {
      tok_.kind = Token::Kind::Op;
      tok_.text = std::string(1, c);
      ++i_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

  const std::string& src_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& src, const NameTable& names)
      : lex_(src), names_(names) {}

  Expression parse_all() {
    Expression e = parse_expr();
    if (lex_.peek().kind != Token::Kind::End)
      throw ParseError("trailing input", lex_.peek().pos);
    return e;
  }

 private:
  Expression parse_expr() {
    bool neg = false;
    if (lex_.peek().kind == Token::Kind::Op &&
        (lex_.peek().text == "-" || lex_.peek().text == "+")) {
      neg = lex_.take().text == "-";
    }
    Expression e = parse_term();
    if (neg) e = -e;
    while (lex_.peek().kind == Token::Kind::Op &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      bool minus = lex_.take().text == "-";
      Expression rhs = parse_term();
      e = minus ? e - rhs : e + rhs;
    }
    return e;
  }

  Expression parse_term() {
    Expression e = parse_factor();
    while (lex_.peek().kind == Token::Kind::Op &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      bool div = lex_.take().text == "/";
      std::size_t pos = lex_.peek().pos;
      Expression rhs = parse_factor();
      if (div) {
        if (rhs.is_structural_zero())
          throw ParseError("division by zero", pos);
        e = e / rhs;
      } else {
        e = e * rhs;
      }
    }
    return e;
  }

  Expression parse_factor() {
    Expression base = parse_base();
    if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "^") {
      lex_.take();
      bool neg = false;
      if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "-") {
        lex_.take();
        neg = true;
      }
      if (lex_.peek().kind != Token::Kind::Number)
        throw ParseError("expected integer exponent", lex_.peek().pos);
      Token t = lex_.take();
      long e = std::stol(t.text);
      if (neg && base.is_structural_zero())
        throw ParseError("zero to a negative power", t.pos);
      base = base.pow(neg ? -e : e);
    }
    return base;
  }

  Expression parse_base() {
    Token t = lex_.peek();
    if (t.kind == Token::Kind::Number) {
      lex_.take();
      return Expression::from_rational(rational_from_string(t.text));
    }
    if (t.kind == Token::Kind::Op && t.text == "(") {
      lex_.take();
      Expression e = parse_expr();
      expect_op(")");
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      lex_.take();
      if (auto f = func_kind(t.text)) {
        expect_op("(");
        Expression arg = parse_expr();
        expect_op(")");
        return Expression::apply(*f, arg);
      }
      return resolve_ident(t);
    }
    throw ParseError("expected a number, name or '('", t.pos);
  }

  void expect_op(const std::string& op) {
    if (lex_.peek().kind != Token::Kind::Op || lex_.peek().text != op)
      throw ParseError("expected '" + op + "'", lex_.peek().pos);
    lex_.take();
  }

  static std::optional<FuncKind> func_kind(const std::string& s) {
    if (s == "exp") return FuncKind::Exp;
    if (s == "log") return FuncKind::Log;
    if (s == "sin") return FuncKind::Sin;
    if (s == "cos") return FuncKind::Cos;
    return std::nullopt;
  }

  Expression resolve_ident(const Token& t) {
    const std::string& s = t.text;
    if (s == "x") return Expression::coordinate(Coordinate::x());
    if (s == "y") return Expression::coordinate(Coordinate::y());
    std::string base = s;
    CoordKind kind = CoordKind::U;
    auto us = s.rfind('_');
    if (us != std::string::npos) {
      std::string suffix = s.substr(us + 1);
      base = s.substr(0, us);
      if (suffix == "x")
        kind = CoordKind::Ux;
      else if (suffix == "y")
        kind = CoordKind::Uy;
      else if (suffix == "xx")
        kind = CoordKind::Uxx;
      else if (suffix == "xy")
        kind = CoordKind::Uxy;
      else if (suffix == "yy")
        kind = CoordKind::Uyy;
      else
        throw ParseError("unknown derivative suffix '_" + suffix + "'", t.pos);
    }
    for (int i = 0; i < names_.m(); ++i)
      if (names_.dependent[static_cast<std::size_t>(i)] == base)
        return Expression::coordinate(Coordinate{kind, i + 1});
    if (us == std::string::npos)
      for (std::size_t i = 0; i < names_.parameters.size(); ++i)
        if (names_.parameters[i] == s)
          return Expression::parameter(static_cast<int>(i) + 1);
    // Default-style names carry their index; report range errors clearly.
    if (base.size() > 1 && base[0] == 'u') {
      bool digits = true;
      for (std::size_t i = 1; i < base.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(base[i]))) digits = false;
      if (digits)
        throw ParseError("dependent index out of range: '" + s + "'", t.pos);
    }
    throw ParseError("unknown identifier '" + s + "'", t.pos);
  }

  Lexer lex_;
  const NameTable& names_;
};

}  // namespace

Expression parse(const std::string& source, const NameTable& names) {
  Parser p(source, names);
  return p.parse_all();
}

Expression parse(const std::string& source, int m) {
  return parse(source, default_names(m));
}

}  // namespace fgordon
