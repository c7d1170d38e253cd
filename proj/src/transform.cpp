#include "transform.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "json.hpp"

namespace sph::dsl {

namespace {

bool try_merge(std::vector<StmtPtr>& out, StmtPtr& next);

bool is_simple(const Expr& e) {
  return e.kind == Expr::Kind::Var || e.kind == Expr::Kind::RealLit ||
         e.kind == Expr::Kind::IntLit;
}

bool is_var(const Expr& e, const std::string& name) {
  return e.kind == Expr::Kind::Var && e.name == name;
}

int count_expensive_ops(const Expr& e, const TypeScope& vars, const SignatureTable& sigs,
                        const Program& prog) {
  int n = 0;
  if (e.kind == Expr::Kind::Binary) {
    n += count_expensive_ops(*e.lhs, vars, sigs, prog);
    n += count_expensive_ops(*e.rhs, vars, sigs, prog);
    if (is_expensive(expr_type(e, vars, sigs, prog))) ++n;
  } else if (e.kind == Expr::Kind::Call) {
    for (const auto& a : e.args) n += count_expensive_ops(*a, vars, sigs, prog);
    if (is_expensive(expr_type(e, vars, sigs, prog))) ++n;
  }
  return n;
}

/// Per-procedure rewriting context.
class ProcRewriter {
 public:
  ProcRewriter(const Program& prog, const SignatureTable& sigs, TransformReport& report)
      : prog_(prog), sigs_(sigs), report_(report) {}

  void run(Proc& p) {
    // Seed the temporary counter past any name already in use, so
    // re-running the transform on its own output stays collision free.
    std::set<std::string> names;
    collect_names(p, names);
    temp_counter_ = 0;
    for (const auto& n : names) {
      if (n.rfind("__t", 0) == 0) {
        const std::string digits = n.substr(3);
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
          temp_counter_ = std::max(temp_counter_, std::stoi(digits) + 1);
      }
    }
    vars_.push();
    for (const auto& prm : p.params) vars_.declare(prm.name, prm.type);
    p.body = rewrite_list(std::move(p.body));
    merge_in_list(p.body);
    flatten_list(p.body);
    vars_.pop();
  }

 private:
  static void collect_names(const Proc& p, std::set<std::string>& out) {
    for (const auto& prm : p.params) out.insert(prm.name);
    for (const auto& s : p.body) collect_names(*s, out);
  }
  static void collect_names(const Stmt& s, std::set<std::string>& out) {
    if (s.kind == Stmt::Kind::VarDecl) out.insert(s.name);
    for (const auto& c : s.stmts) collect_names(*c, out);
  }

  std::string fresh_temp() { return "__t" + std::to_string(temp_counter_++); }

  Type type_of(const Expr& e) const { return expr_type(e, vars_, sigs_, prog_); }

  const OpDecl* sig_of(const Expr& e) const {
    if (e.kind == Expr::Kind::Binary)
      return sigs_.find(e.name, {type_of(*e.lhs), type_of(*e.rhs)});
    if (e.kind == Expr::Kind::Call) {
      std::vector<Type> args;
      for (const auto& a : e.args) args.push_back(type_of(*a));
      return sigs_.find(e.name, args);
    }
    return nullptr;
  }

  bool rewritable(const Expr& e) const {
    const OpDecl* d = sig_of(e);
    if (!d || !d->has_mutating_form) return false;
    // Infix operators updating their second operand have no printable
    // self-mutating statement form; leave them to wrapper calls.
    if (e.kind == Expr::Kind::Binary && d->upd_index != 0) return false;
    return true;
  }

  // ------------------------------------------------------------------
  // statement-list rewriting

  std::vector<StmtPtr> rewrite_list(std::vector<StmtPtr> in) {
    std::vector<StmtPtr> out;
    for (std::size_t i = 0; i < in.size();) {
      if (std::size_t consumed = try_shift_inc(in, i, out)) {
        i += consumed;
        continue;
      }
      rewrite_stmt(std::move(in[i]), out);
      ++i;
    }
    return out;
  }

  void rewrite_stmt(StmtPtr s, std::vector<StmtPtr>& out) {
    switch (s->kind) {
      case Stmt::Kind::Block: {
        vars_.push();
        s->stmts = rewrite_list(std::move(s->stmts));
        vars_.pop();
        out.push_back(std::move(s));
        return;
      }
      case Stmt::Kind::VarDecl: {
        Type t = s->decl_type;
        if (s->expr && is_expensive(t) && !is_simple(*s->expr)) {
          report_.temps_before += count_expensive_ops(*s->expr, vars_, sigs_, prog_);
          if (rewritable(*s->expr)) {
            ExprPtr init = std::move(s->expr);
            vars_.declare(s->name, t);
            std::vector<StmtPtr> steps;
            emit_into(s->name, t, *init, steps);
            fuse_decl(std::move(s), steps, out);
            ++report_.assignments_rewritten;
            return;
          }
          warn(*s, "no self-mutating form available; initializer left algebraic");
        }
        vars_.declare(s->name, s->decl_type);
        out.push_back(std::move(s));
        return;
      }
      case Stmt::Kind::Assign: {
        auto lt = vars_.lookup(s->name);
        if (lt && is_expensive(*lt) && !is_simple(*s->expr)) {
          report_.temps_before += count_expensive_ops(*s->expr, vars_, sigs_, prog_);
          if (rewritable(*s->expr)) {
            emit_into(s->name, *lt, *s->expr, out);
            ++report_.assignments_rewritten;
            return;
          }
          warn(*s, "no self-mutating form available; statement left untouched");
        }
        out.push_back(std::move(s));
        return;
      }
      case Stmt::Kind::CompoundAssign: {
        // rule (7): x op1= e1 op2 e2  =>  {T t = e1; t op2= e2; x op1= t;}
        auto lt = vars_.lookup(s->name);
        Type rt = type_of(*s->expr);
        if (lt && is_expensive(rt) && !is_simple(*s->expr)) {
          emit_mut(s->name, s->op, *s->expr, out);
          return;
        }
        out.push_back(std::move(s));
        return;
      }
      default:
        out.push_back(std::move(s));
        return;
    }
  }

  // Turns `var x: T;` + leading `x = <simple>` back into an
  // initialized declaration.
  void fuse_decl(StmtPtr decl, std::vector<StmtPtr>& steps, std::vector<StmtPtr>& out) {
    decl->expr = nullptr;
    if (!steps.empty() && steps.front()->kind == Stmt::Kind::Assign &&
        steps.front()->name == decl->name) {
      decl->expr = std::move(steps.front()->expr);
      steps.erase(steps.begin());
    }
    out.push_back(std::move(decl));
    for (auto& st : steps) out.push_back(std::move(st));
  }

  void warn(const Stmt& s, const std::string& msg) {
    report_.warnings.push_back("line " + std::to_string(s.line) + ": " + msg);
  }

  // ------------------------------------------------------------------
  // expression compilation
  //
  // emit_into computes e (over the pre-statement state) into dest.
  // Invariant: every variable other than dest and fresh temporaries is
  // only read, and dest is read only before its first write.

  void emit_into(const std::string& dest, Type dest_type, const Expr& e,
                 std::vector<StmtPtr>& out) {
    if (e.kind == Expr::Kind::Var) {
      if (e.name != dest) {
        out.push_back(Stmt::assign(dest, e.clone()));
        report_.count("R3");
      }
      return;
    }
    const OpDecl* d = sig_of(e);
    if (!d || !d->has_mutating_form ||
        (e.kind == Expr::Kind::Binary && d->upd_index != 0)) {
      // opaque subexpression: materialize with a plain assignment
      out.push_back(Stmt::assign(dest, e.clone()));
      warn_expr(e);
      return;
    }
    if (e.kind == Expr::Kind::Binary) {
      emit_binary(dest, dest_type, e, *d, out);
    } else {
      emit_call(dest, dest_type, e, *d, out);
    }
  }

  void warn_expr(const Expr& e) {
    report_.warnings.push_back("line " + std::to_string(e.line) +
                               ": no self-mutating form for '" + e.name +
                               "'; subexpression materialized algebraically");
  }

  void emit_binary(const std::string& dest, Type dest_type, const Expr& e,
                   const OpDecl& d, std::vector<StmtPtr>& out) {
    const Expr& e1 = *e.lhs;
    const Expr& e2 = *e.rhs;
    if (d.upd_index == 0) {
      if (is_var(e1, dest)) {
        // rules (4)/(5): x = x op e  =>  x op= e
        emit_mut(dest, e.name, e2, out);
        return;
      }
      if (!occurs(e2, dest)) {
        // rule (6): x = e1 op e2  =>  x = e1; x op= e2
        emit_into(dest, dest_type, e1, out);
        report_.count("R6");
        emit_mut(dest, e.name, e2, out);
        return;
      }
      // dest occurs in e2: materialize e2 from the pre-state first,
      // then accumulate e1 into dest (the F -> P derivation order).
      Type t2 = type_of(e2);
      std::string t = fresh_temp();
      std::vector<StmtPtr> blk;
      vars_.push();
      emit_temp(t, t2, e2, blk);
      emit_into(dest, dest_type, e1, blk);
      blk.push_back(Stmt::compound(dest, e.name, Expr::var(t)));
      vars_.pop();
      report_.count("R6");
      push_block(std::move(blk), out);
      return;
    }
    // rule (2): x = e1 op e2 with the second operand updated
    //   =>  x = e2; e1 op= x   (named operators only)
    report_.count("R2");
    if (e1.kind == Expr::Kind::Var && e1.name != dest) {
      emit_into(dest, dest_type, e2, out);
      std::vector<ExprPtr> args;
      args.push_back(e1.clone());
      out.push_back(Stmt::mut_call(dest, e.name, std::move(args)));
      return;
    }
    Type t1 = type_of(e1);
    std::string t = fresh_temp();
    std::vector<StmtPtr> blk;
    vars_.push();
    emit_temp(t, t1, e1, blk);
    emit_into(dest, dest_type, e2, blk);
    std::vector<ExprPtr> args;
    args.push_back(Expr::var(t));
    blk.push_back(Stmt::mut_call(dest, e.name, std::move(args)));
    vars_.pop();
    push_block(std::move(blk), out);
  }

  void emit_call(const std::string& dest, Type dest_type, const Expr& e, const OpDecl& d,
                 std::vector<StmtPtr>& out) {
    const std::size_t u = d.upd_index;
    std::vector<StmtPtr> blk;
    bool lifted = false;
    vars_.push();
    std::vector<ExprPtr> rest;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      if (i == u) continue;
      const Expr& a = *e.args[i];
      Type at = type_of(a);
      if (!is_expensive(at) || (a.kind == Expr::Kind::Var && a.name != dest)) {
        rest.push_back(a.clone());
      } else {
        std::string t = fresh_temp();
        emit_temp(t, at, a, blk);
        rest.push_back(Expr::var(t));
        lifted = true;
      }
    }
    auto& sink = lifted ? blk : out;
    emit_into(dest, dest_type, *e.args[u], sink);
    report_.count(u == 0 ? "R6" : "R2");
    sink.push_back(Stmt::mut_call(dest, e.name, std::move(rest)));
    vars_.pop();
    if (lifted) push_block(std::move(blk), out);
  }

  /// Emits `dest op= e`, lifting a compound right-hand side into a
  /// scoped temporary per rule (7).
  void emit_mut(const std::string& dest, const std::string& op, const Expr& e,
                std::vector<StmtPtr>& out) {
    Type rt = type_of(e);
    if (is_simple(e) || !is_expensive(rt)) {
      out.push_back(Stmt::compound(dest, op, e.clone()));
      report_.count(is_simple(e) ? "R4" : "R5");
      return;
    }
    report_.count("R5");
    std::string t = fresh_temp();
    std::vector<StmtPtr> blk;
    vars_.push();
    emit_temp(t, rt, e, blk);
    blk.push_back(Stmt::compound(dest, op, Expr::var(t)));
    vars_.pop();
    push_block(std::move(blk), out);
  }

  /// Declares a fresh temporary and computes e into it.
  void emit_temp(const std::string& t, Type type, const Expr& e,
                 std::vector<StmtPtr>& blk) {
    report_.count("R7");
    ++report_.temps_after;
    vars_.declare(t, type);
    std::vector<StmtPtr> steps;
    emit_into(t, type, e, steps);
    auto decl = Stmt::var_decl(t, type, nullptr);
    std::vector<StmtPtr> fused;
    fuse_decl(std::move(decl), steps, fused);
    for (auto& st : fused) blk.push_back(std::move(st));
  }

  void push_block(std::vector<StmtPtr> body, std::vector<StmtPtr>& out) {
    auto b = Stmt::block(std::move(body));
    b->synthetic = true;
    out.push_back(std::move(b));
  }

  // ------------------------------------------------------------------
  // shift incrementalization
  //
  // Recognizes the 4-point stencil accumulation shape
  //   A = (shift(S,d,1) - shift(S,d,-1)) * c1;
  //   A = A + (shift(S,d,k) - shift(S,d,-k)) * ck;   k = 2..K
  //   [X = A * s;]
  // and rewrites it to cumulative unit shifts over two working meshes
  // and one reused scratch mesh.

  struct StencilRound {
    ExprPtr coeff;
  };

  struct StencilMatch {
    std::string acc;           // A
    bool acc_is_decl = false;  // statement 0 declared A
    std::string source;        // S
    ExprPtr dim;               // d
    std::vector<StencilRound> rounds;
    std::size_t stmt_count = 0;
    bool folded = false;  // tail X = A * s was folded in
    std::string target;   // X (folded) or A
    ExprPtr scale;        // s when folded
  };

  bool is_simple_real(const Expr& e) const {
    if (e.kind == Expr::Kind::RealLit) return true;
    if (e.kind == Expr::Kind::Var) {
      auto t = vars_.lookup(e.name);
      return t && *t == Type::Real;
    }
    return false;
  }

  // (shift(S,d,k) - shift(S,d,-k)) * c
  bool match_round_expr(const Expr& e, long long k, std::string& source, ExprPtr& dim,
                        ExprPtr& coeff) const {
    if (e.kind != Expr::Kind::Binary || e.name != "*") return false;
    const Expr& diff = *e.lhs;
    if (!is_simple_real(*e.rhs)) return false;
    if (diff.kind != Expr::Kind::Binary || diff.name != "-") return false;
    auto match_shift = [&](const Expr& c, long long off, bool first) {
      if (c.kind != Expr::Kind::Call || c.name != "shift" || c.args.size() != 3)
        return false;
      const Expr& src = *c.args[0];
      const Expr& d = *c.args[1];
      const Expr& o = *c.args[2];
      if (src.kind != Expr::Kind::Var) return false;
      if (d.kind != Expr::Kind::Var && d.kind != Expr::Kind::IntLit) return false;
      if (o.kind != Expr::Kind::IntLit || o.int_value != off) return false;
      if (first) {
        source = src.name;
        dim = d.clone();
        return true;
      }
      return src.name == source && equal(d, *dim);
    };
    if (!match_shift(*diff.lhs, k, true)) return false;
    if (!match_shift(*diff.rhs, -k, false)) return false;
    coeff = e.rhs->clone();
    return true;
  }

  std::optional<StencilMatch> match_stencil(const std::vector<StmtPtr>& list,
                                            std::size_t i) const {
    // mutating forms of shift, -, * and + over meshes must exist
    const OpDecl* dsh = sigs_.find("shift", {Type::Mesh, Type::Int, Type::Int});
    const OpDecl* dsub = sigs_.find("-", {Type::Mesh, Type::Mesh});
    const OpDecl* dmul = sigs_.find("*", {Type::Mesh, Type::Real});
    const OpDecl* dadd = sigs_.find("+", {Type::Mesh, Type::Mesh});
    for (const OpDecl* d : {dsh, dsub, dmul, dadd})
      if (!d || !d->has_mutating_form || d->upd_index != 0) return std::nullopt;

    const Stmt& s0 = *list[i];
    StencilMatch m;
    const Expr* init = nullptr;
    if (s0.kind == Stmt::Kind::VarDecl && s0.decl_type == Type::Mesh && s0.expr) {
      m.acc = s0.name;
      m.acc_is_decl = true;
      init = s0.expr.get();
    } else if (s0.kind == Stmt::Kind::Assign && s0.expr) {
      auto t = vars_.lookup(s0.name);
      if (!t || *t != Type::Mesh) return std::nullopt;
      m.acc = s0.name;
      init = s0.expr.get();
    } else {
      return std::nullopt;
    }
    ExprPtr coeff;
    if (!match_round_expr(*init, 1, m.source, m.dim, coeff)) return std::nullopt;
    if (m.source == m.acc) return std::nullopt;
    auto st = vars_.lookup(m.source);
    if (!st || *st != Type::Mesh) return std::nullopt;
    m.rounds.push_back({std::move(coeff)});

    std::size_t j = i + 1;
    long long k = 2;
    for (; j < list.size(); ++j, ++k) {
      const Stmt& s = *list[j];
      if (s.kind != Stmt::Kind::Assign || s.name != m.acc) break;
      const Expr& e = *s.expr;
      if (e.kind != Expr::Kind::Binary || e.name != "+" || !is_var(*e.lhs, m.acc)) break;
      std::string src;
      ExprPtr dim, c;
      if (!match_round_expr(*e.rhs, k, src, dim, c)) break;
      if (src != m.source || !equal(*dim, *m.dim)) break;
      m.rounds.push_back({std::move(c)});
    }
    if (m.rounds.size() < 2) return std::nullopt;
    m.stmt_count = j - i;
    m.target = m.acc;

    // optional tail X = A * s with A dead afterwards
    if (m.acc_is_decl && j < list.size() && list[j]->kind == Stmt::Kind::Assign &&
        list[j]->name != m.acc) {
      const Expr& e = *list[j]->expr;
      if (e.kind == Expr::Kind::Binary && e.name == "*" && is_var(*e.lhs, m.acc) &&
          is_simple_real(*e.rhs)) {
        bool dead = true;
        for (std::size_t r = j + 1; r < list.size() && dead; ++r)
          if (occurs(*list[r], m.acc)) dead = false;
        if (dead) {
          auto xt = vars_.lookup(list[j]->name);
          if (xt && *xt == Type::Mesh) {
            m.folded = true;
            m.target = list[j]->name;
            m.scale = e.rhs->clone();
            ++m.stmt_count;
          }
        }
      }
    }
    return m;
  }

  std::size_t try_shift_inc(const std::vector<StmtPtr>& list, std::size_t i,
                            std::vector<StmtPtr>& out) {
    auto m = match_stencil(list, i);
    if (!m) return 0;
    report_.count("SHIFT_INC");
    if (m->acc_is_decl) vars_.declare(m->acc, Type::Mesh);
    for (std::size_t r = i; r < i + m->stmt_count; ++r) {
      if (list[r]->expr)
        report_.temps_before += count_expensive_ops(*list[r]->expr, vars_, sigs_, prog_);
      ++report_.assignments_rewritten;
    }

    const std::string ta = fresh_temp();
    const std::string tb = fresh_temp();
    const std::string ts = fresh_temp();
    report_.temps_after += 3;
    vars_.declare(ta, Type::Mesh);
    vars_.declare(tb, Type::Mesh);
    vars_.declare(ts, Type::Mesh);

    out.push_back(Stmt::var_decl(ta, Type::Mesh, Expr::var(m->source)));
    out.push_back(Stmt::var_decl(tb, Type::Mesh, Expr::var(m->source)));
    out.push_back(Stmt::var_decl(ts, Type::Mesh, nullptr));
    if (!m->folded && m->acc_is_decl)
      out.push_back(Stmt::var_decl(m->acc, Type::Mesh, nullptr));
    for (std::size_t k = 0; k < m->rounds.size(); ++k) {
      {
        std::vector<ExprPtr> args;
        args.push_back(m->dim->clone());
        args.push_back(Expr::int_lit(1));
        out.push_back(Stmt::mut_call(ta, "shift", std::move(args)));
      }
      {
        std::vector<ExprPtr> args;
        args.push_back(m->dim->clone());
        args.push_back(Expr::int_lit(-1));
        out.push_back(Stmt::mut_call(tb, "shift", std::move(args)));
      }
      out.push_back(Stmt::assign(ts, Expr::var(ta)));
      out.push_back(Stmt::compound(ts, "-", Expr::var(tb)));
      out.push_back(Stmt::compound(ts, "*", m->rounds[k].coeff->clone()));
      if (k == 0) {
        out.push_back(Stmt::assign(m->target, Expr::var(ts)));
      } else {
        out.push_back(Stmt::compound(m->target, "+", Expr::var(ts)));
      }
    }
    if (m->folded) out.push_back(Stmt::compound(m->target, "*", m->scale->clone()));
    return m->stmt_count;
  }

  // ------------------------------------------------------------------
  // rule (8) merging and block flattening

  void merge_in_list(std::vector<StmtPtr>& list) {
    for (auto& s : list)
      if (s->kind == Stmt::Kind::Block) merge_in_list(s->stmts);
    std::vector<StmtPtr> out;
    for (auto& s : list) {
      if (try_merge(out, s)) {
        report_.count("R8");
        --report_.temps_after;
        continue;
      }
      out.push_back(std::move(s));
    }
    list = std::move(out);
  }

  void flatten_list(std::vector<StmtPtr>& list) {
    std::vector<StmtPtr> out;
    for (auto& s : list) {
      if (s->kind == Stmt::Kind::Block) {
        flatten_list(s->stmts);
        if (s->synthetic) {
          for (auto& c : s->stmts) out.push_back(std::move(c));
          continue;
        }
      }
      out.push_back(std::move(s));
    }
    list = std::move(out);
  }

  const Program& prog_;
  const SignatureTable& sigs_;
  TransformReport& report_;
  TypeScope vars_;
  int temp_counter_ = 0;
};

/// Single declared temporary heading a scope, the shape rule (8) acts on.
const Stmt* single_temp_decl(const Stmt& block) {
  if (block.kind != Stmt::Kind::Block || block.stmts.empty()) return nullptr;
  if (block.stmts.front()->kind != Stmt::Kind::VarDecl) return nullptr;
  for (std::size_t i = 1; i < block.stmts.size(); ++i)
    if (block.stmts[i]->kind == Stmt::Kind::VarDecl) return nullptr;
  return block.stmts.front().get();
}

/// Attempts to merge `next` into the trailing block of `out`.
bool try_merge(std::vector<StmtPtr>& out, StmtPtr& next);

bool try_merge_impl(std::vector<StmtPtr>& out, StmtPtr& next) {
  if (out.empty() || next->kind != Stmt::Kind::Block) return false;
  StmtPtr& prev = out.back();
  const Stmt* d1 = single_temp_decl(*prev);
  const Stmt* d2 = single_temp_decl(*next);
  if (!d1 || !d2 || d1->decl_type != d2->decl_type) return false;
  const std::string t1 = d1->name;
  const std::string t2 = d2->name;
  if (t1 != t2) {
    // renaming t2 -> t1 must not capture an outer t1
    for (std::size_t i = 1; i < next->stmts.size(); ++i)
      if (occurs(*next->stmts[i], t1)) return false;
  }
  // second declaration becomes a plain reassignment of the first temp
  StmtPtr head;
  if (next->stmts.front()->expr) {
    head = Stmt::assign(t1, std::move(next->stmts.front()->expr));
  }
  for (std::size_t i = 1; i < next->stmts.size(); ++i)
    if (t1 != t2) rename_var(*next->stmts[i], t2, t1);
  if (head) prev->stmts.push_back(std::move(head));
  for (std::size_t i = 1; i < next->stmts.size(); ++i)
    prev->stmts.push_back(std::move(next->stmts[i]));
  prev->synthetic = prev->synthetic && next->synthetic;
  return true;
}

bool try_merge(std::vector<StmtPtr>& out, StmtPtr& next) {
  return try_merge_impl(out, next);
}

}  // namespace

std::string TransformReport::to_json() const {
  nlohmann::json j;
  for (const char* r : {"R2", "R3", "R4", "R5", "R6", "R7", "R8", "SHIFT_INC"}) {
    auto it = rule_counts.find(r);
    j["rules"][r] = it == rule_counts.end() ? 0 : it->second;
  }
  j["temps_before"] = temps_before;
  j["temps_after"] = temps_after;
  j["assignments_rewritten"] = assignments_rewritten;
  j["warnings"] = warnings;
  return j.dump(2);
}

TransformResult transform_program(const Program& p) {
  TransformResult res;
  res.program = p.clone();
  SignatureTable sigs = collect_signatures(res.program);
  for (auto& proc : res.program.procs) {
    ProcRewriter rw(res.program, sigs, res.report);
    rw.run(proc);
  }
  return res;
}

StmtPtr merge_temporaries(const Stmt& block) {
  if (block.kind != Stmt::Kind::Block)
    throw error(errc::transform, "merge_temporaries expects a block");
  StmtPtr out = block.clone();
  std::vector<StmtPtr> merged;
  for (auto& s : out->stmts) {
    if (s->kind == Stmt::Kind::Block) {
      StmtPtr inner = merge_temporaries(*s);
      if (try_merge(merged, inner)) continue;
      merged.push_back(std::move(inner));
      continue;
    }
    merged.push_back(std::move(s));
  }
  out->stmts = std::move(merged);
  return out;
}

Program generate_wrappers(const SignatureTable& sigs) {
  Program out;
  // count name collisions to pick unambiguous wrapper names
  std::map<std::string, int> base_count;
  auto base_name = [](const OpDecl& d) -> std::string {
    if (d.name == "+") return "add";
    if (d.name == "-") return "sub";
    if (d.name == "*") return "mul";
    return d.name;
  };
  for (const auto& d : sigs.entries())
    if (d.has_mutating_form) ++base_count[base_name(d)];

  std::map<std::string, int> seen;
  for (const auto& d : sigs.entries()) {
    out.op_decls.push_back(d);
    if (!d.has_mutating_form) continue;
    std::string name = base_name(d);
    int n = ++seen[name];
    if (base_count[name] > 1 && n > 1) name += "_" + std::to_string(n);

    Proc p;
    p.name = name;
    const bool infix = d.name == "+" || d.name == "-" || d.name == "*";
    for (std::size_t i = 0; i < d.operand_types.size(); ++i) {
      Param prm;
      if (infix && d.operand_types.size() == 2) {
        prm.name = i == 0 ? "lhs" : "rhs";
      } else {
        prm.name = "a" + std::to_string(i);
      }
      prm.type = d.operand_types[i];
      p.params.push_back(std::move(prm));
    }
    // { var C: T = <upd operand>; C op= rest...; return C; }
    p.body.push_back(
        Stmt::var_decl("C", d.result_type, Expr::var(p.params[d.upd_index].name)));
    if (infix && d.upd_index == 0 && d.operand_types.size() == 2) {
      p.body.push_back(Stmt::compound("C", d.name, Expr::var(p.params[1].name)));
    } else {
      std::vector<ExprPtr> args;
      for (std::size_t i = 0; i < p.params.size(); ++i)
        if (i != d.upd_index) args.push_back(Expr::var(p.params[i].name));
      p.body.push_back(Stmt::mut_call("C", d.name, std::move(args)));
    }
    p.body.push_back(Stmt::ret("C"));
    out.procs.push_back(std::move(p));
  }
  return out;
}

}  // namespace sph::dsl
