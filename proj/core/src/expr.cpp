#include "chow/expr.hpp"

#include <cctype>

namespace chow {

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("parse error at offset " + std::to_string(i) + ": " + what + " in \"" + s + "\"");
  }

  RatFunc expr() {
    RatFunc acc = term();
    while (true) {
      if (eat('+'))
        acc = acc + term();
      else if (eat('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  RatFunc term() {
    RatFunc acc = factor();
    while (true) {
      if (eat('*'))
        acc = acc * factor();
      else if (eat('/')) {
        RatFunc d = factor();
        if (d.is_zero()) fail("division by zero");
        acc = acc / d;
      } else
        return acc;
    }
  }

  RatFunc factor() {
    if (eat('-')) return -factor();
    RatFunc b = base();
    if (eat('^')) {
      bool neg = eat('-');
      std::string digits = integer_digits();
      int k = std::stoi(digits);
      b = b.pow(neg ? -k : k);
    }
    return b;
  }

  std::string integer_digits() {
    skip();
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) fail("expected integer");
    return s.substr(start, i - start);
  }

  RatFunc base() {
    char c = peek();
    if (c == '(') {
      ++i;
      RatFunc r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return RatFunc(Rat(mpz_class(integer_digits())));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      ++i;
      return RatFunc::sym(sym_index(c));
    }
    fail("unexpected character");
  }
};

}  // namespace

RatFunc parse_ratfunc(const std::string& text) {
  Parser p(text);
  RatFunc r = p.expr();
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace chow
