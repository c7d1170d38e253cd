#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "error.hpp"

namespace sph::dsl {

enum class Type { Mesh, Field, Tensor, Real, Int };

inline bool is_expensive(Type t) {
  return t == Type::Mesh || t == Type::Field || t == Type::Tensor;
}

const char* type_name(Type t);
bool type_from_name(const std::string& name, Type& out);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

/// Expression node: variable, literal, infix operator, or call.
struct Expr {
  enum class Kind { Var, RealLit, IntLit, Binary, Call };

  Kind kind;
  std::string name;      // Var name, Binary op symbol, Call function name
  std::string lit_text;  // literal spelling, kept verbatim
  long long int_value = 0;
  ExprPtr lhs, rhs;           // Binary
  std::vector<ExprPtr> args;  // Call
  int line = 0, col = 0;

  ExprPtr clone() const;
  double real_value() const;  // parses lit_text

  static ExprPtr var(std::string n);
  static ExprPtr real_lit(std::string text);
  static ExprPtr int_lit(long long v);
  static ExprPtr binary(std::string op, ExprPtr l, ExprPtr r);
  static ExprPtr call(std::string fn, std::vector<ExprPtr> a);
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

/// Statement node. `Return` appears only in generated wrapper
/// procedures, as the final statement.
struct Stmt {
  enum class Kind { VarDecl, Assign, CompoundAssign, MutCall, Block, Return };

  Kind kind;
  std::string name;  // declared/assigned variable, receiver, or returned variable
  Type decl_type = Type::Mesh;
  std::string op;             // compound-assignment operator: "+", "-", "*"
  std::string fn;             // MutCall function name
  ExprPtr expr;               // VarDecl init (may be null) or Assign rhs
  std::vector<ExprPtr> args;  // MutCall arguments
  std::vector<StmtPtr> stmts; // Block body
  bool synthetic = false;     // block introduced by the transformer
  int line = 0, col = 0;

  StmtPtr clone() const;

  static StmtPtr var_decl(std::string n, Type t, ExprPtr init);
  static StmtPtr assign(std::string n, ExprPtr rhs);
  static StmtPtr compound(std::string n, std::string op, ExprPtr rhs);
  static StmtPtr mut_call(std::string recv, std::string fn, std::vector<ExprPtr> args);
  static StmtPtr block(std::vector<StmtPtr> body);
  static StmtPtr ret(std::string n);
};

struct Param {
  std::string name;
  Type type = Type::Mesh;
  bool upd = false;
};

struct Proc {
  std::string name;
  std::vector<Param> params;
  std::vector<StmtPtr> body;
  int line = 0, col = 0;

  Proc clone() const;
};

/// Operator/function declaration, including whether a self-mutating
/// form exists and which argument position it updates.
struct OpDecl {
  std::string name;
  std::vector<Type> operand_types;
  Type result_type = Type::Mesh;
  bool has_mutating_form = false;
  std::size_t upd_index = 0;
  int line = 0, col = 0;
};

struct Program {
  std::vector<OpDecl> op_decls;
  std::vector<Proc> procs;

  Program clone() const;
  const Proc* find_proc(const std::string& name) const;
};

/// Per-operator lookup keyed by (name, operand types).
class SignatureTable {
 public:
  void add(OpDecl decl);
  const OpDecl* find(const std::string& name, const std::vector<Type>& operands) const;
  const std::vector<OpDecl>& entries() const { return entries_; }

  static std::string key(const std::string& name, const std::vector<Type>& operands);

 private:
  std::vector<OpDecl> entries_;
  std::map<std::string, std::size_t> index_;
};

// --- structural comparison -------------------------------------------

bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const Program& a, const Program& b);

/// Structural equality up to a consistent renaming of locally declared
/// variables; parameters and free names must match exactly.
bool equal_modulo_locals(const Proc& a, const Proc& b);

bool occurs(const Expr& e, const std::string& var);
bool occurs(const Stmt& s, const std::string& var);

void rename_var(Expr& e, const std::string& from, const std::string& to);
void rename_var(Stmt& s, const std::string& from, const std::string& to);

}  // namespace sph::dsl
