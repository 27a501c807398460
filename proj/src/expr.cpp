#include "fbx/expr.hpp"

#include <cctype>

namespace fbx {
namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  RegFun parse() {
    RegFun r = expression();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("expression error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  RegFun expression() {
    RegFun r = eat('-') ? -term() : (eat('+'), term());
    for (;;) {
      if (eat('+')) r = r + term();
      else if (eat('-')) r = r - term();
      else return r;
    }
  }

  RegFun term() {
    RegFun r = factor();
    for (;;) {
      if (eat('*')) r = r * factor();
      else if (eat('/')) {
        RegFun d = factor();
        if (d.is_zero()) fail("division by zero");
        r = r / d;
      } else return r;
    }
  }

  RegFun factor() {
    RegFun base = atom();
    if (eat('^')) {
      bool neg = eat('-');
      long n = integer();
      RegFun r = RegFun::constant(Rat(1));
      for (long i = 0; i < n; ++i) r = r * base;
      if (neg) {
        if (r.is_zero()) fail("zero to a negative power");
        r = RegFun::constant(Rat(1)) / r;
      }
      return r;
    }
    return base;
  }

  RegFun atom() {
    skip_ws();
    if (eat('(')) {
      RegFun r = expression();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    char c = peek();
    if (c == 't') {
      ++pos_;
      return RegFun::t();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        digits.push_back(s_[pos_++]);
      return RegFun::constant(rat_from_string(digits));
    }
    fail("expected a number, 't' or '('");
  }

  long integer() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail("expected an integer");
    std::string digits;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      digits.push_back(s_[pos_++]);
    return std::stol(digits);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

RegFun parse_regfun(const std::string& text) { return Parser(text).parse(); }

}  // namespace fbx
