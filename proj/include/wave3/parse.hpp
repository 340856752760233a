#pragma once

#include <string>

#include "wave3/ratexpr.hpp"

namespace wave3 {

// Grammar:
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := base ('^' int)?
//   base     := rational | param | jetvar | '(' expr ')'
//   jetvar   := field tick* | 'd(' field ',' uint ')'
//   field    := 'p11'|'p10'|'p01'|'m01'|'m10'|'m11'
//   rational := int ('/' uint)?
//   param    := identifier that is not a field name
// Errors carry line/column (SyntaxError, UnknownIdentifier).
RatExpr parse_expr(const std::string& text);

std::string format_expr(const RatExpr& e);

}  // namespace wave3
