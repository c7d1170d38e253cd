#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "alloc_stats.hpp"
#include "ast.hpp"
#include "field.hpp"

namespace sph::dsl {

/// Runtime value. Meshes, fields and tensors carry value semantics:
/// assigning one variable to another copies the data.
struct Value {
  std::variant<std::monostate, Mesh, TorusScalarField, Tensor, double, long long> v;

  bool initialized() const { return !std::holds_alternative<std::monostate>(v); }
};

Type value_type(const Value& val);

Value make_mesh(Mesh m);
Value make_field(TorusScalarField f);
Value make_tensor(Tensor t);
Value make_real(double r);
Value make_int(long long i);

struct InterpResult {
  /// Final values of the updated parameters; a trailing `return x;` in
  /// the entry procedure adds a "return" entry.
  std::map<std::string, Value> outputs;
  /// Allocation activity of the body alone; parameter binding is not
  /// charged to the program under test.
  AllocCounts allocs;
};

/// Executes `proc_name` against named inputs. Read-only parameters are
/// borrowed, updated parameters are moved in and handed back through
/// `outputs`.
InterpResult interpret(const Program& prog, const std::string& proc_name,
                       std::map<std::string, Value> inputs);

/// Bitwise comparison; returns a description of the first mismatch, or
/// nothing when the values agree exactly.
std::optional<std::string> diff_values(const Value& a, const Value& b);

}  // namespace sph::dsl
