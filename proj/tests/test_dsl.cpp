#include "doctest.h"

#include "parser.hpp"
#include "printer.hpp"
#include "typecheck.hpp"

using namespace sph;
using namespace sph::dsl;

namespace {

const char* kDecls =
    "op +(mesh, mesh) -> mesh mut upd 0;\n"
    "op -(mesh, mesh) -> mesh mut upd 0;\n"
    "op *(mesh, mesh) -> mesh mut upd 0;\n"
    "op *(mesh, real) -> mesh mut upd 0;\n"
    "op shift(mesh, int, int) -> mesh mut upd 0;\n";

std::string with_decls(const std::string& body) { return kDecls + body; }

}  // namespace

TEST_CASE("parses declarations, statements and expressions") {
  Program p = parse(with_decls(
      "proc F(x: mesh upd, a: mesh, r: real) {\n"
      "  var t: mesh = a;\n"
      "  t *= r;\n"
      "  t.shift(0, -2);\n"
      "  { x = t + a * r; }\n"
      "}\n"));
  CHECK(p.op_decls.size() == 5);
  REQUIRE(p.procs.size() == 1);
  const Proc& f = p.procs[0];
  CHECK(f.params.size() == 3);
  CHECK(f.params[0].upd);
  CHECK_FALSE(f.params[1].upd);
  REQUIRE(f.body.size() == 4);
  CHECK(f.body[0]->kind == Stmt::Kind::VarDecl);
  CHECK(f.body[1]->kind == Stmt::Kind::CompoundAssign);
  CHECK(f.body[2]->kind == Stmt::Kind::MutCall);
  CHECK(f.body[3]->kind == Stmt::Kind::Block);
}

TEST_CASE("operator precedence and associativity") {
  Program p = parse(with_decls("proc g(x: mesh upd, a: mesh, b: mesh) {\n"
                               "  x = a + b * a - b;\n"
                               "}\n"));
  const Expr& e = *p.procs[0].body[0]->expr;
  // ((a + (b * a)) - b)
  CHECK(e.name == "-");
  CHECK(e.lhs->name == "+");
  CHECK(e.lhs->rhs->name == "*");
  CHECK(print_expr(e) == "a + b * a - b");
}

TEST_CASE("parentheses survive printing only where needed") {
  Program p = parse(with_decls("proc g(x: mesh upd, a: mesh, b: mesh) {\n"
                               "  x = (a + b) * a;\n"
                               "  x = a - (b - a);\n"
                               "  x = (a * b) + a;\n"
                               "}\n"));
  CHECK(print_expr(*p.procs[0].body[0]->expr) == "(a + b) * a");
  CHECK(print_expr(*p.procs[0].body[1]->expr) == "a - (b - a)");
  CHECK(print_expr(*p.procs[0].body[2]->expr) == "a * b + a");
}

TEST_CASE("signed literals parse at factor position") {
  Program p = parse(with_decls("proc g(x: mesh upd) {\n"
                               "  x = shift(x, 0, -3) * -0.25;\n"
                               "}\n"));
  const Expr& e = *p.procs[0].body[0]->expr;
  CHECK(e.rhs->kind == Expr::Kind::RealLit);
  CHECK(e.rhs->lit_text == "-0.25");
  CHECK(e.lhs->args[2]->int_value == -3);
}

TEST_CASE("literal spelling round-trips verbatim") {
  std::string src = with_decls(
      "proc g(x: mesh upd) {\n"
      "  x *= 0.85315148548241;\n"
      "  x *= 1.0e-3;\n"
      "}\n");
  Program p = parse(src);
  std::string printed = pretty_print(p);
  CHECK(printed.find("0.85315148548241") != std::string::npos);
  CHECK(printed.find("1.0e-3") != std::string::npos);
  // full round trip: parse(print(p)) is structurally identical
  CHECK(equal(parse(printed), p));
}

TEST_CASE("pretty-printed output is a fixpoint") {
  std::string src = with_decls(
      "proc g(x: mesh upd, a: mesh) {\n"
      "  { var t: mesh = a; t += a; x = t; }\n"
      "}\n");
  std::string once = pretty_print(parse(src));
  CHECK(pretty_print(parse(once)) == once);
}

TEST_CASE("syntax errors carry positions") {
  auto expect_parse_error = [](const std::string& src) {
    try {
      parse(src);
      FAIL_CHECK("expected a parse error for: " << src);
    } catch (const error& e) {
      CHECK(e.kind() == errc::parse);
      CHECK(std::string(e.what()).find(':') != std::string::npos);
    }
  };
  expect_parse_error("proc () {}");
  expect_parse_error("proc f(x: mesh upd) { x = ; }");
  expect_parse_error("proc f(x: mesh upd) { x += }");
  expect_parse_error("proc f(x: blob) { }");
  expect_parse_error("op +(mesh mesh) -> mesh;");
  expect_parse_error("proc f(x: mesh upd) { x = a + ; }");
  expect_parse_error("proc f() { }");                        // no params
  expect_parse_error("proc f(x: mesh) {} proc f(y: mesh) {}");  // duplicate
}

TEST_CASE("declaration validation") {
  CHECK_THROWS_AS(parse("op +(mesh, mesh) -> mesh mut upd 2;"), error);
  // updated operand type must match the result
  CHECK_THROWS_AS(collect_signatures(parse("op f(mesh, int) -> int mut upd 0;")),
                  error);
  // conflicting duplicate declaration
  CHECK_THROWS_AS(
      collect_signatures(parse("op f(mesh) -> mesh mut upd 0;\n"
                               "op f(mesh) -> mesh;\n")),
      error);
}

TEST_CASE("signature collection adds used builtin operators") {
  Program p = parse(
      "proc g(x: mesh upd, a: mesh) {\n"
      "  x = a + shift(a, 0, 1);\n"
      "}\n");
  SignatureTable sigs = collect_signatures(p);
  const OpDecl* plus = sigs.find("+", {Type::Mesh, Type::Mesh});
  REQUIRE(plus != nullptr);
  CHECK_FALSE(plus->has_mutating_form);  // used but not declared mutable
  CHECK(sigs.find("shift", {Type::Mesh, Type::Int, Type::Int}) != nullptr);
}

TEST_CASE("statement typing is validated") {
  auto expect_type_error = [](const std::string& body) {
    CHECK_THROWS_AS(collect_signatures(parse(with_decls(body))), error);
  };
  expect_type_error("proc g(x: mesh upd, r: real) { x = r; }");
  expect_type_error("proc g(x: mesh upd) { y = x; }");
  expect_type_error("proc g(x: mesh upd, r: real) { r += x; }");
  expect_type_error("proc g(x: mesh upd) { x.frobnicate(1); }");
  // block scoping: t is not visible outside its block
  expect_type_error("proc g(x: mesh upd) { { var t: mesh = x; } x = t; }");
}

TEST_CASE("compound assignment requires a declared mutating form") {
  // '+' over fields is not declared here
  CHECK_THROWS_AS(collect_signatures(
                      parse("proc g(x: field upd, a: field) { x += a; }")),
                  error);
}

TEST_CASE("equal_modulo_locals identifies consistently renamed temporaries") {
  Program a = parse(with_decls("proc F(x: mesh upd) {\n"
                               "  var t: mesh = x;\n"
                               "  t *= 2.0;\n"
                               "  x *= x;\n"
                               "  x += t;\n"
                               "}\n"));
  Program b = parse(with_decls("proc F(x: mesh upd) {\n"
                               "  var temp1: mesh = x;\n"
                               "  temp1 *= 2.0;\n"
                               "  x *= x;\n"
                               "  x += temp1;\n"
                               "}\n"));
  CHECK(equal_modulo_locals(a.procs[0], b.procs[0]));
  // an inconsistent rename is not accepted
  Program c = parse(with_decls("proc F(x: mesh upd) {\n"
                               "  var t: mesh = x;\n"
                               "  x *= 2.0;\n"
                               "  x *= x;\n"
                               "  x += t;\n"
                               "}\n"));
  CHECK_FALSE(equal_modulo_locals(a.procs[0], c.procs[0]));
}
