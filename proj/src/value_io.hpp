#pragma once

#include <string>

#include "interp.hpp"

namespace sph::dsl {

/// Plain-text value format, self-describing by its first keyword:
///
///   extents: 4 4        delta: 0.1      rows: 2 cols: 2   int: 3
///   elements:           extents: 8      <4 field blocks>  real: 0.5
///   <flat row-major>    elements:
///                       <flat>
///
/// Reals print with enough digits to round-trip exactly.
std::string format_value(const Value& v);
Value parse_value(const std::string& text);

std::string format_real(double r);

}  // namespace sph::dsl
