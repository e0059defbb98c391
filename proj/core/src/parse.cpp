#include "kpv/parse.hpp"

#include <cctype>

namespace kpv {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1) + " in '" + s_ + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  static bool starts_primary(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        acc = acc / unary();
      } else if (starts_primary(peek())) {
        acc = acc * unary();
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    return pow(base, exponent());
  }

  long exponent() {
    if (accept('(')) {
      const long k = exponent();
      if (!accept(')')) fail("expected ')' after exponent");
      return k;
    }
    long sign = 1;
    if (accept('-')) {
      sign = -1;
    } else {
      accept('+');
    }
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      fail("expected integer exponent");
    }
    long k = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      k = k * 10 + (s_[pos_++] - '0');
      if (k > 1'000'000) fail("exponent too large");
    }
    return sign * k;
  }

  Expr primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Expr(Rational::parse(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      return Expr::symbol(s_.substr(start, pos_ - start));
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).run(); }

}  // namespace kpv
