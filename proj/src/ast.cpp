#include "ast.hpp"

#include <charconv>
#include <cstdlib>

namespace sph::dsl {

const char* type_name(Type t) {
  switch (t) {
    case Type::Mesh: return "mesh";
    case Type::Field: return "field";
    case Type::Tensor: return "tensor";
    case Type::Real: return "real";
    case Type::Int: return "int";
  }
  return "?";
}

bool type_from_name(const std::string& name, Type& out) {
  if (name == "mesh") out = Type::Mesh;
  else if (name == "field") out = Type::Field;
  else if (name == "tensor") out = Type::Tensor;
  else if (name == "real") out = Type::Real;
  else if (name == "int") out = Type::Int;
  else return false;
  return true;
}

ExprPtr Expr::var(std::string n) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Var;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::real_lit(std::string text) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::RealLit;
  e->lit_text = std::move(text);
  return e;
}

ExprPtr Expr::int_lit(long long v) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::IntLit;
  e->int_value = v;
  e->lit_text = std::to_string(v);
  return e;
}

ExprPtr Expr::binary(std::string op, ExprPtr l, ExprPtr r) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Binary;
  e->name = std::move(op);
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr Expr::call(std::string fn, std::vector<ExprPtr> a) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Call;
  e->name = std::move(fn);
  e->args = std::move(a);
  return e;
}

double Expr::real_value() const { return std::strtod(lit_text.c_str(), nullptr); }

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->name = name;
  e->lit_text = lit_text;
  e->int_value = int_value;
  e->line = line;
  e->col = col;
  if (lhs) e->lhs = lhs->clone();
  if (rhs) e->rhs = rhs->clone();
  e->args.reserve(args.size());
  for (const auto& a : args) e->args.push_back(a->clone());
  return e;
}

StmtPtr Stmt::var_decl(std::string n, Type t, ExprPtr init) {
  auto s = std::make_unique<Stmt>();
  s->kind = Kind::VarDecl;
  s->name = std::move(n);
  s->decl_type = t;
  s->expr = std::move(init);
  return s;
}

StmtPtr Stmt::assign(std::string n, ExprPtr rhs) {
  auto s = std::make_unique<Stmt>();
  s->kind = Kind::Assign;
  s->name = std::move(n);
  s->expr = std::move(rhs);
  return s;
}

StmtPtr Stmt::compound(std::string n, std::string op, ExprPtr rhs) {
  auto s = std::make_unique<Stmt>();
  s->kind = Kind::CompoundAssign;
  s->name = std::move(n);
  s->op = std::move(op);
  s->expr = std::move(rhs);
  return s;
}

StmtPtr Stmt::mut_call(std::string recv, std::string fn, std::vector<ExprPtr> args) {
  auto s = std::make_unique<Stmt>();
  s->kind = Kind::MutCall;
  s->name = std::move(recv);
  s->fn = std::move(fn);
  s->args = std::move(args);
  return s;
}

StmtPtr Stmt::block(std::vector<StmtPtr> body) {
  auto s = std::make_unique<Stmt>();
  s->kind = Kind::Block;
  s->stmts = std::move(body);
  return s;
}

StmtPtr Stmt::ret(std::string n) {
  auto s = std::make_unique<Stmt>();
  s->kind = Kind::Return;
  s->name = std::move(n);
  return s;
}

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->name = name;
  s->decl_type = decl_type;
  s->op = op;
  s->fn = fn;
  s->synthetic = synthetic;
  s->line = line;
  s->col = col;
  if (expr) s->expr = expr->clone();
  s->args.reserve(args.size());
  for (const auto& a : args) s->args.push_back(a->clone());
  s->stmts.reserve(stmts.size());
  for (const auto& c : stmts) s->stmts.push_back(c->clone());
  return s;
}

Proc Proc::clone() const {
  Proc p;
  p.name = name;
  p.params = params;
  p.line = line;
  p.col = col;
  p.body.reserve(body.size());
  for (const auto& s : body) p.body.push_back(s->clone());
  return p;
}

Program Program::clone() const {
  Program p;
  p.op_decls = op_decls;
  p.procs.reserve(procs.size());
  for (const auto& pr : procs) p.procs.push_back(pr.clone());
  return p;
}

const Proc* Program::find_proc(const std::string& name) const {
  for (const auto& p : procs)
    if (p.name == name) return &p;
  return nullptr;
}

std::string SignatureTable::key(const std::string& name, const std::vector<Type>& operands) {
  std::string k = name + "(";
  for (std::size_t i = 0; i < operands.size(); ++i) {
    if (i) k += ",";
    k += type_name(operands[i]);
  }
  return k + ")";
}

void SignatureTable::add(OpDecl decl) {
  const std::string k = key(decl.name, decl.operand_types);
  auto it = index_.find(k);
  if (it != index_.end()) {
    const OpDecl& prev = entries_[it->second];
    if (prev.result_type != decl.result_type ||
        prev.has_mutating_form != decl.has_mutating_form ||
        prev.upd_index != decl.upd_index)
      throw error(errc::decl, "conflicting declarations for " + k);
    return;
  }
  index_.emplace(k, entries_.size());
  entries_.push_back(std::move(decl));
}

const OpDecl* SignatureTable::find(const std::string& name,
                                   const std::vector<Type>& operands) const {
  auto it = index_.find(key(name, operands));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

// --- structural comparison -------------------------------------------

namespace {

// Resolves a name through a local-rename map, if any.
struct NameMap {
  std::map<std::string, std::string>* map = nullptr;
  bool match(const std::string& a, const std::string& b) const {
    if (!map) return a == b;
    auto it = map->find(a);
    return it != map->end() ? it->second == b : a == b;
  }
};

bool expr_equal(const Expr& a, const Expr& b, const NameMap& nm) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Var:
      return nm.match(a.name, b.name);
    case Expr::Kind::RealLit:
      return a.lit_text == b.lit_text;
    case Expr::Kind::IntLit:
      return a.int_value == b.int_value;
    case Expr::Kind::Binary:
      return a.name == b.name && expr_equal(*a.lhs, *b.lhs, nm) &&
             expr_equal(*a.rhs, *b.rhs, nm);
    case Expr::Kind::Call: {
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!expr_equal(*a.args[i], *b.args[i], nm)) return false;
      return true;
    }
  }
  return false;
}

bool stmt_equal(const Stmt& a, const Stmt& b, NameMap nm,
                std::map<std::string, std::string>* locals) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Stmt::Kind::VarDecl: {
      if (a.decl_type != b.decl_type) return false;
      if (bool(a.expr) != bool(b.expr)) return false;
      if (a.expr && !expr_equal(*a.expr, *b.expr, nm)) return false;
      if (locals && a.name != b.name) (*locals)[a.name] = b.name;
      return locals ? true : a.name == b.name;
    }
    case Stmt::Kind::Assign:
    case Stmt::Kind::CompoundAssign:
      return nm.match(a.name, b.name) && a.op == b.op &&
             expr_equal(*a.expr, *b.expr, nm);
    case Stmt::Kind::MutCall: {
      if (!nm.match(a.name, b.name) || a.fn != b.fn || a.args.size() != b.args.size())
        return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!expr_equal(*a.args[i], *b.args[i], nm)) return false;
      return true;
    }
    case Stmt::Kind::Block: {
      if (a.stmts.size() != b.stmts.size()) return false;
      for (std::size_t i = 0; i < a.stmts.size(); ++i)
        if (!stmt_equal(*a.stmts[i], *b.stmts[i], nm, locals)) return false;
      return true;
    }
    case Stmt::Kind::Return:
      return nm.match(a.name, b.name);
  }
  return false;
}

}  // namespace

bool equal(const Expr& a, const Expr& b) { return expr_equal(a, b, NameMap{}); }
bool equal(const Stmt& a, const Stmt& b) { return stmt_equal(a, b, NameMap{}, nullptr); }

bool equal(const Program& a, const Program& b) {
  if (a.op_decls.size() != b.op_decls.size() || a.procs.size() != b.procs.size())
    return false;
  for (std::size_t i = 0; i < a.op_decls.size(); ++i) {
    const auto& da = a.op_decls[i];
    const auto& db = b.op_decls[i];
    if (da.name != db.name || da.operand_types != db.operand_types ||
        da.result_type != db.result_type ||
        da.has_mutating_form != db.has_mutating_form || da.upd_index != db.upd_index)
      return false;
  }
  for (std::size_t i = 0; i < a.procs.size(); ++i) {
    const auto& pa = a.procs[i];
    const auto& pb = b.procs[i];
    if (pa.name != pb.name || pa.params.size() != pb.params.size()) return false;
    for (std::size_t j = 0; j < pa.params.size(); ++j) {
      if (pa.params[j].name != pb.params[j].name ||
          pa.params[j].type != pb.params[j].type ||
          pa.params[j].upd != pb.params[j].upd)
        return false;
    }
    if (pa.body.size() != pb.body.size()) return false;
    for (std::size_t j = 0; j < pa.body.size(); ++j)
      if (!equal(*pa.body[j], *pb.body[j])) return false;
  }
  return true;
}

bool equal_modulo_locals(const Proc& a, const Proc& b) {
  if (a.params.size() != b.params.size()) return false;
  for (std::size_t j = 0; j < a.params.size(); ++j) {
    if (a.params[j].name != b.params[j].name || a.params[j].type != b.params[j].type ||
        a.params[j].upd != b.params[j].upd)
      return false;
  }
  if (a.body.size() != b.body.size()) return false;
  std::map<std::string, std::string> locals;
  NameMap nm{&locals};
  for (std::size_t j = 0; j < a.body.size(); ++j)
    if (!stmt_equal(*a.body[j], *b.body[j], nm, &locals)) return false;
  return true;
}

bool occurs(const Expr& e, const std::string& var) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return e.name == var;
    case Expr::Kind::Binary:
      return occurs(*e.lhs, var) || occurs(*e.rhs, var);
    case Expr::Kind::Call:
      for (const auto& a : e.args)
        if (occurs(*a, var)) return true;
      return false;
    default:
      return false;
  }
}

bool occurs(const Stmt& s, const std::string& var) {
  if (s.name == var) return true;
  if (s.expr && occurs(*s.expr, var)) return true;
  for (const auto& a : s.args)
    if (occurs(*a, var)) return true;
  for (const auto& c : s.stmts)
    if (occurs(*c, var)) return true;
  return false;
}

void rename_var(Expr& e, const std::string& from, const std::string& to) {
  if (e.kind == Expr::Kind::Var && e.name == from) e.name = to;
  if (e.lhs) rename_var(*e.lhs, from, to);
  if (e.rhs) rename_var(*e.rhs, from, to);
  for (auto& a : e.args) rename_var(*a, from, to);
}

void rename_var(Stmt& s, const std::string& from, const std::string& to) {
  if ((s.kind == Stmt::Kind::VarDecl || s.kind == Stmt::Kind::Assign ||
       s.kind == Stmt::Kind::CompoundAssign || s.kind == Stmt::Kind::MutCall ||
       s.kind == Stmt::Kind::Return) &&
      s.name == from)
    s.name = to;
  if (s.expr) rename_var(*s.expr, from, to);
  for (auto& a : s.args) rename_var(*a, from, to);
  for (auto& c : s.stmts) rename_var(*c, from, to);
}

}  // namespace sph::dsl
