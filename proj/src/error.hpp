#pragma once

#include <stdexcept>
#include <string>

namespace sph {

enum class errc {
  shape,      // extent mismatch, empty/zero extents
  dimension,  // dimension index out of range
  stencil,    // extent too small for the derivative stencil
  aliasing,   // aliased mutator operand
  field,      // scalar-field shape/delta mismatch
  tensor,     // tensor dimension mismatch
  parse,      // DSL syntax or name error
  decl,       // conflicting operator declarations
  transform,  // internal transformation failure
  runtime,    // interpreter/type failure
  io,         // value text format failure
};

class error : public std::runtime_error {
 public:
  error(errc kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

inline const char* errc_name(errc k) {
  switch (k) {
    case errc::shape: return "shape";
    case errc::dimension: return "dimension";
    case errc::stencil: return "stencil";
    case errc::aliasing: return "aliasing";
    case errc::field: return "field";
    case errc::tensor: return "tensor";
    case errc::parse: return "parse";
    case errc::decl: return "decl";
    case errc::transform: return "transform";
    case errc::runtime: return "runtime";
    case errc::io: return "io";
  }
  return "unknown";
}

}  // namespace sph
