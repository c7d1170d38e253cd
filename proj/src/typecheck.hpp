#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"

namespace sph::dsl {

/// Built-in result type of infix operators, if the combination exists.
std::optional<Type> builtin_binary(const std::string& op, Type a, Type b);

/// Built-in result type of library functions (currently shift).
std::optional<Type> builtin_call(const std::string& fn, const std::vector<Type>& args);

/// Lexically scoped variable typing used while walking a proc body.
class TypeScope {
 public:
  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }
  void declare(const std::string& name, Type t);
  std::optional<Type> lookup(const std::string& name) const;

 private:
  std::vector<std::vector<std::pair<std::string, Type>>> scopes_;
};

/// Infers the type of an expression. `prog` resolves calls to
/// wrapper-style procedures (value-returning, read-only parameters).
Type expr_type(const Expr& e, const TypeScope& vars, const SignatureTable& sigs,
               const Program& prog);

/// Result type of a wrapper-style proc (one ending in `return x;`).
std::optional<Type> proc_result_type(const Proc& p);

/// Pass 1: builds the per-operator table from declarations, then walks
/// every proc body adding has_mutating_form=false entries for used but
/// undeclared operators. Also validates statement-level typing.
SignatureTable collect_signatures(const Program& p);

}  // namespace sph::dsl
