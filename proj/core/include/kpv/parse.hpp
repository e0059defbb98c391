#pragma once

#include <string>

#include "kpv/expr.hpp"

namespace kpv {

/// Parses an infix rational expression.
///
/// Grammar: `+ - * / ^ ( )`, integer literals, identifiers
/// `[A-Za-z_][A-Za-z0-9_]*`. Juxtaposition is multiplication at the same
/// level as `*` and `/`, so `a/b c` reads as `(a/b)*c`. Unary minus binds
/// looser than `^`: `-y^2` is `-(y^2)`. Exponents are integers, optionally
/// signed or parenthesised (`y^-1`, `y^(-2)`).
///
/// Throws ParseError with the offending column.
Expr parse_expr(const std::string& text);

}  // namespace kpv
