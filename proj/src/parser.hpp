#pragma once

#include <string>

#include "ast.hpp"

namespace sph::dsl {

/// Parses DSL source text into a Program. Throws error(errc::parse)
/// with line/column on syntax problems.
Program parse(const std::string& text);

}  // namespace sph::dsl
