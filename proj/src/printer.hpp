#pragma once

#include <string>

#include "ast.hpp"

namespace sph::dsl {

/// Canonical source text; parse(pretty_print(p)) is structurally
/// identical to p.
std::string pretty_print(const Program& p);

std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s, int indent = 0);

}  // namespace sph::dsl
