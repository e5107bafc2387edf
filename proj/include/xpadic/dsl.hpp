#pragma once

// A small expression language over an exact structure.
//
//   program := { "let" NAME "=" expr ";" } expr
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := atom [ "^" ["-"] INT ]
//   atom    := INT [ "/" INT ] | NAME | "x" | "(" expr ")"
//
// INT/INT directly after one another is a single rational literal. "x" is
// the polynomial variable; an expression mentioning it is a polynomial with
// lazily computed coefficients. Whitespace is ignored.

#include <optional>
#include <string>
#include <vector>

#include "xpadic/rings.hpp"

namespace xpadic {

struct Parsed {
  std::optional<ExactElement> element;
  std::optional<ExactPoly> poly;
  /// Literal nodes, in order of appearance; the natural inputs for optimize.
  std::vector<lazy::NodePtr> literals;
};

/// Throws ParseError on malformed input.
Parsed parse_expression(const std::string& text, const ExactStructure& s);
ExactElement parse_element(const std::string& text, const ExactStructure& s);
/// Element-valued expressions are accepted as constant polynomials.
ExactPoly parse_polynomial(const std::string& text, const ExactStructure& s);

}  // namespace xpadic
