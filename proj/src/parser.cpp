#include "parser.hpp"

#include <cctype>
#include <optional>
#include <set>

namespace sph::dsl {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  bool is_real = false;  // Number only
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int line, int col) {
    throw error(errc::parse,
                "syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
                    ": " + msg);
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_ws();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        take();
      tok_.kind = Token::Kind::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number();
      return;
    }
    // multi-char punctuation first
    static const char* two[] = {"->", "+=", "-=", "*="};
    for (const char* p : two) {
      if (src_.compare(pos_, 2, p) == 0) {
        tok_.kind = Token::Kind::Punct;
        tok_.text = p;
        take();
        take();
        return;
      }
    }
    static const std::string singles = "(){},;:.=+-*";
    if (singles.find(c) != std::string::npos) {
      tok_.kind = Token::Kind::Punct;
      tok_.text = std::string(1, c);
      take();
      return;
    }
    fail(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) take();
    bool is_real = false;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      is_real = true;
      take();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) take();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      is_real = true;
      take();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) take();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) take();
    }
    tok_.kind = Token::Kind::Number;
    tok_.text = src_.substr(start, pos_ - start);
    tok_.is_real = is_real;
  }

  void take() {
    ++col_;
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Program parse_program() {
    Program p;
    while (peek_ident("op")) p.op_decls.push_back(parse_opdecl());
    std::set<std::string> proc_names;
    while (peek_ident("proc")) {
      Proc pr = parse_proc();
      if (!proc_names.insert(pr.name).second)
        fail("duplicate procedure name '" + pr.name + "'", lex_.peek());
      p.procs.push_back(std::move(pr));
    }
    expect_end();
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& at) {
    throw error(errc::parse, "syntax error at " + std::to_string(at.line) + ":" +
                                 std::to_string(at.col) + ": " + msg);
  }

  bool peek_ident(const std::string& kw) {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == kw;
  }

  bool peek_punct(const std::string& p) {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
  }

  Token expect_punct(const std::string& p) {
    if (!peek_punct(p)) fail("expected '" + p + "'", lex_.peek());
    return lex_.next();
  }

  Token expect_ident() {
    if (lex_.peek().kind != Token::Kind::Ident) fail("expected identifier", lex_.peek());
    return lex_.next();
  }

  void expect_keyword(const std::string& kw) {
    if (!peek_ident(kw)) fail("expected '" + kw + "'", lex_.peek());
    lex_.next();
  }

  void expect_end() {
    if (lex_.peek().kind != Token::Kind::End) fail("expected end of input", lex_.peek());
  }

  Type parse_type() {
    Token t = expect_ident();
    Type ty;
    if (!type_from_name(t.text, ty)) fail("unknown type name '" + t.text + "'", t);
    return ty;
  }

  // Operator declarations may name infix operators (+, -, *) as well
  // as plain functions.
  std::string parse_op_name() {
    if (peek_punct("+") || peek_punct("-") || peek_punct("*")) return lex_.next().text;
    return expect_ident().text;
  }

  OpDecl parse_opdecl() {
    OpDecl d;
    Token kw = lex_.next();  // "op"
    d.line = kw.line;
    d.col = kw.col;
    d.name = parse_op_name();
    expect_punct("(");
    d.operand_types.push_back(parse_type());
    while (peek_punct(",")) {
      lex_.next();
      d.operand_types.push_back(parse_type());
    }
    expect_punct(")");
    expect_punct("->");
    d.result_type = parse_type();
    if (peek_ident("mut")) {
      lex_.next();
      d.has_mutating_form = true;
      d.upd_index = 0;
      if (peek_ident("upd")) {
        lex_.next();
        Token n = lex_.next();
        if (n.kind != Token::Kind::Number || n.is_real) fail("expected argument index", n);
        d.upd_index = static_cast<std::size_t>(std::stoull(n.text));
      }
      if (d.upd_index >= d.operand_types.size())
        fail("upd index out of range for declaration of '" + d.name + "'", kw);
      if (d.operand_types[d.upd_index] != d.result_type)
        fail("updated operand type must equal the result type", kw);
      if (!is_expensive(d.operand_types[d.upd_index]))
        fail("self-mutating forms require an expensive updated operand", kw);
    }
    expect_punct(";");
    return d;
  }

  Proc parse_proc() {
    Proc p;
    Token kw = lex_.next();  // "proc"
    p.line = kw.line;
    p.col = kw.col;
    p.name = expect_ident().text;
    expect_punct("(");
    std::set<std::string> names;
    auto one_param = [&] {
      Param prm;
      Token n = expect_ident();
      prm.name = n.text;
      if (!names.insert(prm.name).second)
        fail("duplicate parameter name '" + prm.name + "'", n);
      expect_punct(":");
      prm.type = parse_type();
      if (peek_ident("upd")) {
        lex_.next();
        prm.upd = true;
      }
      p.params.push_back(std::move(prm));
    };
    one_param();
    while (peek_punct(",")) {
      lex_.next();
      one_param();
    }
    expect_punct(")");
    StmtPtr body = parse_block();
    p.body = std::move(body->stmts);
    return p;
  }

  StmtPtr parse_block() {
    Token open = expect_punct("{");
    std::vector<StmtPtr> body;
    while (!peek_punct("}")) {
      if (lex_.peek().kind == Token::Kind::End) fail("unterminated block", open);
      body.push_back(parse_stmt());
    }
    lex_.next();
    auto b = Stmt::block(std::move(body));
    b->line = open.line;
    b->col = open.col;
    return b;
  }

  StmtPtr parse_stmt() {
    if (peek_punct("{")) return parse_block();
    if (peek_ident("var")) {
      Token kw = lex_.next();
      Token n = expect_ident();
      expect_punct(":");
      Type t = parse_type();
      ExprPtr init;
      if (peek_punct("=")) {
        lex_.next();
        init = parse_expr();
      }
      expect_punct(";");
      auto s = Stmt::var_decl(n.text, t, std::move(init));
      s->line = kw.line;
      s->col = kw.col;
      return s;
    }
    if (peek_ident("return")) {
      Token kw = lex_.next();
      Token n = expect_ident();
      expect_punct(";");
      auto s = Stmt::ret(n.text);
      s->line = kw.line;
      s->col = kw.col;
      return s;
    }
    Token n = expect_ident();
    if (peek_punct("=")) {
      lex_.next();
      ExprPtr rhs = parse_expr();
      expect_punct(";");
      auto s = Stmt::assign(n.text, std::move(rhs));
      s->line = n.line;
      s->col = n.col;
      return s;
    }
    for (const char* aop : {"+=", "-=", "*="}) {
      if (peek_punct(aop)) {
        lex_.next();
        ExprPtr rhs = parse_expr();
        expect_punct(";");
        auto s = Stmt::compound(n.text, std::string(1, aop[0]), std::move(rhs));
        s->line = n.line;
        s->col = n.col;
        return s;
      }
    }
    if (peek_punct(".")) {
      lex_.next();
      Token fn = expect_ident();
      expect_punct("(");
      std::vector<ExprPtr> args = parse_args();
      expect_punct(")");
      expect_punct(";");
      auto s = Stmt::mut_call(n.text, fn.text, std::move(args));
      s->line = n.line;
      s->col = n.col;
      return s;
    }
    fail("expected '=', compound assignment, or method call", lex_.peek());
  }

  std::vector<ExprPtr> parse_args() {
    std::vector<ExprPtr> args;
    if (peek_punct(")")) return args;
    args.push_back(parse_expr());
    while (peek_punct(",")) {
      lex_.next();
      args.push_back(parse_expr());
    }
    return args;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (peek_punct("+") || peek_punct("-")) {
      Token op = lex_.next();
      ExprPtr r = parse_term();
      auto b = Expr::binary(op.text, std::move(e), std::move(r));
      b->line = op.line;
      b->col = op.col;
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (peek_punct("*")) {
      Token op = lex_.next();
      ExprPtr r = parse_factor();
      auto b = Expr::binary("*", std::move(e), std::move(r));
      b->line = op.line;
      b->col = op.col;
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parse_factor() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Punct && t.text == "(") {
      lex_.next();
      ExprPtr e = parse_expr();
      expect_punct(")");
      return e;
    }
    // signed numeric literal
    if (t.kind == Token::Kind::Punct && t.text == "-") {
      Token minus = lex_.next();
      Token n = lex_.next();
      if (n.kind != Token::Kind::Number) fail("expected number after unary '-'", n);
      return make_literal(n, true);
    }
    if (t.kind == Token::Kind::Number) return make_literal(lex_.next(), false);
    if (t.kind == Token::Kind::Ident) {
      Token n = lex_.next();
      if (peek_punct("(")) {
        lex_.next();
        std::vector<ExprPtr> args = parse_args();
        expect_punct(")");
        auto e = Expr::call(n.text, std::move(args));
        e->line = n.line;
        e->col = n.col;
        return e;
      }
      auto e = Expr::var(n.text);
      e->line = n.line;
      e->col = n.col;
      return e;
    }
    fail("expected expression", t);
  }

  ExprPtr make_literal(const Token& n, bool negative) {
    ExprPtr e;
    if (n.is_real) {
      e = Expr::real_lit(negative ? "-" + n.text : n.text);
    } else {
      long long v = std::stoll(n.text);
      e = Expr::int_lit(negative ? -v : v);
    }
    e->line = n.line;
    e->col = n.col;
    return e;
  }

  Lexer lex_;
};

}  // namespace

Program parse(const std::string& text) { return Parser(text).parse_program(); }

}  // namespace sph::dsl
