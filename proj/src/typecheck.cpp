#include "typecheck.hpp"

namespace sph::dsl {

std::optional<Type> builtin_binary(const std::string& op, Type a, Type b) {
  if (a == b && (op == "+" || op == "-" || op == "*")) return a;
  if (op == "*" && b == Type::Real && is_expensive(a)) return a;
  return std::nullopt;
}

std::optional<Type> builtin_call(const std::string& fn, const std::vector<Type>& args) {
  if (fn == "shift" && args.size() == 3 && args[0] == Type::Mesh &&
      args[1] == Type::Int && args[2] == Type::Int)
    return Type::Mesh;
  return std::nullopt;
}

void TypeScope::declare(const std::string& name, Type t) {
  scopes_.back().emplace_back(name, t);
}

std::optional<Type> TypeScope::lookup(const std::string& name) const {
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
    for (auto jt = it->rbegin(); jt != it->rend(); ++jt)
      if (jt->first == name) return jt->second;
  return std::nullopt;
}

namespace {

[[noreturn]] void type_fail(const std::string& msg, int line, int col) {
  throw error(errc::runtime, "type error at " + std::to_string(line) + ":" +
                                 std::to_string(col) + ": " + msg);
}

}  // namespace

std::optional<Type> proc_result_type(const Proc& p) {
  if (p.body.empty() || p.body.back()->kind != Stmt::Kind::Return) return std::nullopt;
  const std::string& rv = p.body.back()->name;
  for (const auto& s : p.body)
    if (s->kind == Stmt::Kind::VarDecl && s->name == rv) return s->decl_type;
  for (const auto& prm : p.params)
    if (prm.name == rv) return prm.type;
  return std::nullopt;
}

Type expr_type(const Expr& e, const TypeScope& vars, const SignatureTable& sigs,
               const Program& prog) {
  switch (e.kind) {
    case Expr::Kind::Var: {
      auto t = vars.lookup(e.name);
      if (!t) type_fail("unbound name '" + e.name + "'", e.line, e.col);
      return *t;
    }
    case Expr::Kind::RealLit:
      return Type::Real;
    case Expr::Kind::IntLit:
      return Type::Int;
    case Expr::Kind::Binary: {
      Type a = expr_type(*e.lhs, vars, sigs, prog);
      Type b = expr_type(*e.rhs, vars, sigs, prog);
      if (const OpDecl* d = sigs.find(e.name, {a, b})) return d->result_type;
      if (auto t = builtin_binary(e.name, a, b)) return *t;
      type_fail(std::string("no operator '") + e.name + "' for (" + type_name(a) +
                    ", " + type_name(b) + ")",
                e.line, e.col);
    }
    case Expr::Kind::Call: {
      std::vector<Type> args;
      args.reserve(e.args.size());
      for (const auto& a : e.args) args.push_back(expr_type(*a, vars, sigs, prog));
      if (const OpDecl* d = sigs.find(e.name, args)) return d->result_type;
      if (auto t = builtin_call(e.name, args)) return *t;
      if (const Proc* pr = prog.find_proc(e.name)) {
        if (pr->params.size() != args.size())
          type_fail("call to '" + e.name + "' with wrong arity", e.line, e.col);
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (pr->params[i].upd)
            type_fail("procedure '" + e.name + "' with updated parameters cannot be called in an expression",
                      e.line, e.col);
          if (pr->params[i].type != args[i])
            type_fail("argument " + std::to_string(i) + " of '" + e.name +
                          "' expects " + type_name(pr->params[i].type),
                      e.line, e.col);
        }
        if (auto t = proc_result_type(*pr)) return *t;
        type_fail("procedure '" + e.name + "' does not return a value", e.line, e.col);
      }
      type_fail("unknown function '" + e.name + "'", e.line, e.col);
    }
  }
  type_fail("malformed expression", e.line, e.col);
}

namespace {

/// Walks bodies adding undeclared used operators and validating
/// statement typing.
class Collector {
 public:
  Collector(const Program& prog, SignatureTable& sigs) : prog_(prog), sigs_(sigs) {}

  void run() {
    for (const auto& p : prog_.procs) visit_proc(p);
  }

 private:
  void visit_proc(const Proc& p) {
    TypeScope vars;
    vars.push();
    for (const auto& prm : p.params) vars.declare(prm.name, prm.type);
    for (const auto& s : p.body) visit_stmt(*s, vars);
  }

  void visit_stmt(const Stmt& s, TypeScope& vars) {
    switch (s.kind) {
      case Stmt::Kind::VarDecl: {
        if (s.expr) {
          Type t = visit_expr(*s.expr, vars);
          if (t != s.decl_type)
            type_fail("initializer type does not match declaration of '" + s.name + "'",
                      s.line, s.col);
        }
        vars.declare(s.name, s.decl_type);
        break;
      }
      case Stmt::Kind::Assign: {
        auto lt = vars.lookup(s.name);
        if (!lt) type_fail("assignment to unbound name '" + s.name + "'", s.line, s.col);
        Type rt = visit_expr(*s.expr, vars);
        if (rt != *lt)
          type_fail("assignment type mismatch for '" + s.name + "'", s.line, s.col);
        break;
      }
      case Stmt::Kind::CompoundAssign: {
        auto lt = vars.lookup(s.name);
        if (!lt) type_fail("update of unbound name '" + s.name + "'", s.line, s.col);
        Type rt = visit_expr(*s.expr, vars);
        const OpDecl* d = sigs_.find(s.op, {*lt, rt});
        if (!d || !d->has_mutating_form || d->upd_index != 0)
          type_fail("no self-mutating '" + s.op + "=' declared for (" +
                        type_name(*lt) + ", " + type_name(rt) + ")",
                    s.line, s.col);
        break;
      }
      case Stmt::Kind::MutCall: {
        auto rt = vars.lookup(s.name);
        if (!rt) type_fail("update of unbound name '" + s.name + "'", s.line, s.col);
        std::vector<Type> args;
        for (const auto& a : s.args) args.push_back(visit_expr(*a, vars));
        const OpDecl* d = find_mut_sig(s.fn, *rt, args);
        if (!d)
          type_fail("no self-mutating form of '" + s.fn + "' updates a " +
                        std::string(type_name(*rt)),
                    s.line, s.col);
        break;
      }
      case Stmt::Kind::Block: {
        vars.push();
        for (const auto& c : s.stmts) visit_stmt(*c, vars);
        vars.pop();
        break;
      }
      case Stmt::Kind::Return: {
        if (!vars.lookup(s.name))
          type_fail("return of unbound name '" + s.name + "'", s.line, s.col);
        break;
      }
    }
  }

  // Receiver sits at the declared upd position; remaining arguments
  // keep their original order.
  const OpDecl* find_mut_sig(const std::string& fn, Type recv,
                             const std::vector<Type>& args) const {
    for (const auto& d : sigs_.entries()) {
      if (d.name != fn || !d.has_mutating_form) continue;
      if (d.operand_types.size() != args.size() + 1) continue;
      if (d.operand_types[d.upd_index] != recv) continue;
      std::vector<Type> expected;
      for (std::size_t i = 0; i < d.operand_types.size(); ++i)
        if (i != d.upd_index) expected.push_back(d.operand_types[i]);
      if (expected == args) return &d;
    }
    return nullptr;
  }

  Type visit_expr(const Expr& e, const TypeScope& vars) {
    // Recurse first so nested operators are collected too.
    if (e.kind == Expr::Kind::Binary) {
      Type a = visit_expr(*e.lhs, vars);
      Type b = visit_expr(*e.rhs, vars);
      if (!sigs_.find(e.name, {a, b})) {
        if (auto t = builtin_binary(e.name, a, b)) {
          OpDecl d;
          d.name = e.name;
          d.operand_types = {a, b};
          d.result_type = *t;
          d.has_mutating_form = false;
          sigs_.add(std::move(d));
        }
      }
    } else if (e.kind == Expr::Kind::Call) {
      std::vector<Type> args;
      for (const auto& a : e.args) args.push_back(visit_expr(*a, vars));
      if (!sigs_.find(e.name, args)) {
        if (auto t = builtin_call(e.name, args)) {
          OpDecl d;
          d.name = e.name;
          d.operand_types = args;
          d.result_type = *t;
          d.has_mutating_form = false;
          sigs_.add(std::move(d));
        }
      }
    }
    return expr_type(e, vars, sigs_, prog_);
  }

  const Program& prog_;
  SignatureTable& sigs_;
};

void validate_decl(const OpDecl& d) {
  if (d.operand_types.empty()) throw error(errc::decl, "declaration of '" + d.name + "' has no operands");
  if (d.has_mutating_form) {
    if (d.upd_index >= d.operand_types.size())
      throw error(errc::decl, "upd index out of range in declaration of '" + d.name + "'");
    if (d.operand_types[d.upd_index] != d.result_type)
      throw error(errc::decl, "updated operand of '" + d.name + "' must match the result type");
    if (!is_expensive(d.operand_types[d.upd_index]))
      throw error(errc::decl, "self-mutating '" + d.name + "' must update an expensive type");
  }
}

}  // namespace

SignatureTable collect_signatures(const Program& p) {
  SignatureTable sigs;
  for (const auto& d : p.op_decls) {
    validate_decl(d);
    sigs.add(d);
  }
  Collector(p, sigs).run();
  return sigs;
}

}  // namespace sph::dsl
