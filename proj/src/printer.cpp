#include "printer.hpp"

#include <sstream>

namespace sph::dsl {

namespace {

int precedence(const std::string& op) { return op == "*" ? 2 : 1; }

void print_expr_prec(const Expr& e, int parent_prec, bool right_operand, std::ostream& os) {
  switch (e.kind) {
    case Expr::Kind::Var:
      os << e.name;
      break;
    case Expr::Kind::RealLit:
    case Expr::Kind::IntLit:
      os << e.lit_text;
      break;
    case Expr::Kind::Binary: {
      int prec = precedence(e.name);
      // left-associative: a right operand at equal precedence needs parens
      bool parens = prec < parent_prec || (prec == parent_prec && right_operand);
      if (parens) os << "(";
      print_expr_prec(*e.lhs, prec, false, os);
      os << " " << e.name << " ";
      print_expr_prec(*e.rhs, prec, true, os);
      if (parens) os << ")";
      break;
    }
    case Expr::Kind::Call: {
      os << e.name << "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr_prec(*e.args[i], 0, false, os);
      }
      os << ")";
      break;
    }
  }
}

void indent_to(std::ostream& os, int n) {
  for (int i = 0; i < n; ++i) os << "  ";
}

void print_stmt_impl(const Stmt& s, int indent, std::ostream& os) {
  switch (s.kind) {
    case Stmt::Kind::VarDecl:
      indent_to(os, indent);
      os << "var " << s.name << ": " << type_name(s.decl_type);
      if (s.expr) {
        os << " = ";
        print_expr_prec(*s.expr, 0, false, os);
      }
      os << ";\n";
      break;
    case Stmt::Kind::Assign:
      indent_to(os, indent);
      os << s.name << " = ";
      print_expr_prec(*s.expr, 0, false, os);
      os << ";\n";
      break;
    case Stmt::Kind::CompoundAssign:
      indent_to(os, indent);
      os << s.name << " " << s.op << "= ";
      print_expr_prec(*s.expr, 0, false, os);
      os << ";\n";
      break;
    case Stmt::Kind::MutCall:
      indent_to(os, indent);
      os << s.name << "." << s.fn << "(";
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) os << ", ";
        print_expr_prec(*s.args[i], 0, false, os);
      }
      os << ");\n";
      break;
    case Stmt::Kind::Block:
      indent_to(os, indent);
      os << "{\n";
      for (const auto& c : s.stmts) print_stmt_impl(*c, indent + 1, os);
      indent_to(os, indent);
      os << "}\n";
      break;
    case Stmt::Kind::Return:
      indent_to(os, indent);
      os << "return " << s.name << ";\n";
      break;
  }
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_prec(e, 0, false, os);
  return os.str();
}

std::string print_stmt(const Stmt& s, int indent) {
  std::ostringstream os;
  print_stmt_impl(s, indent, os);
  return os.str();
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.op_decls) {
    os << "op " << d.name << "(";
    for (std::size_t i = 0; i < d.operand_types.size(); ++i) {
      if (i) os << ", ";
      os << type_name(d.operand_types[i]);
    }
    os << ") -> " << type_name(d.result_type);
    if (d.has_mutating_form) {
      os << " mut upd " << d.upd_index;
    }
    os << ";\n";
  }
  if (!p.op_decls.empty() && !p.procs.empty()) os << "\n";
  for (std::size_t i = 0; i < p.procs.size(); ++i) {
    const Proc& pr = p.procs[i];
    if (i) os << "\n";
    os << "proc " << pr.name << "(";
    for (std::size_t j = 0; j < pr.params.size(); ++j) {
      if (j) os << ", ";
      os << pr.params[j].name << ": " << type_name(pr.params[j].type);
      if (pr.params[j].upd) os << " upd";
    }
    os << ") {\n";
    for (const auto& s : pr.body) print_stmt_impl(*s, 1, os);
    os << "}\n";
  }
  return os.str();
}

}  // namespace sph::dsl
