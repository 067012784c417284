#pragma once

// Text and JSON input for bivariate Laurent polynomials.
//
// Grammar (whitespace ignored):
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor | factor)*     juxtaposition multiplies
//   factor := ('+'|'-') factor | atom ('^' ['-'] integer)?
//   atom   := number | 'i' | 'x' | 'y' | '(' expr ')'
// Numbers are integers or decimals ("0.25" is read exactly as 1/4). Division
// is only allowed by a single term. U+2212 is accepted as a minus sign.

#include <string>

#include <json.hpp>

#include "mahler/bivar.hpp"

namespace mahler {

struct ParsedPoly {
  BiPoly poly;
  // The input was multiplied by x^x_shift y^y_shift to clear negative
  // exponents; both are >= 0.
  int x_shift = 0;
  int y_shift = 0;
};

// Throws Error(kInvalidArgument): "syntax error at position N: ..." (0-based
// byte offset) or "zero polynomial".
ParsedPoly parse_poly(const std::string& expr);

// {"terms":[{"i":..,"j":..,"re":"p/q","im":"p/q"}]}; "im" may be omitted and
// exponents may be negative.
ParsedPoly parse_poly_json(const nlohmann::json& j);
nlohmann::json poly_to_json(const BiPoly& p);

}  // namespace mahler
