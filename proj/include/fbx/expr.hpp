#pragma once

#include <string>

#include "fbx/regfun.hpp"

namespace fbx {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the rational-function expression grammar: integers, rationals
/// p/q, the symbol t, operators + - * /, integer powers ^n, parentheses.
/// Whitespace is insignificant. Division by an identically zero expression
/// is a ParseError; pole validation against a curve happens separately.
RegFun parse_regfun(const std::string& text);

}  // namespace fbx
