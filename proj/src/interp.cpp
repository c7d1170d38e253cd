#include "interp.hpp"

#include <sstream>

namespace sph::dsl {

Type value_type(const Value& val) {
  switch (val.v.index()) {
    case 1: return Type::Mesh;
    case 2: return Type::Field;
    case 3: return Type::Tensor;
    case 4: return Type::Real;
    case 5: return Type::Int;
    default: throw error(errc::runtime, "use of an uninitialized value");
  }
}

Value make_mesh(Mesh m) { return Value{std::move(m)}; }
Value make_field(TorusScalarField f) { return Value{std::move(f)}; }
Value make_tensor(Tensor t) { return Value{std::move(t)}; }
Value make_real(double r) { return Value{r}; }
Value make_int(long long i) { return Value{i}; }

namespace {

[[noreturn]] void fail(const std::string& msg, int line, int col) {
  throw error(errc::runtime,
              msg + " at " + std::to_string(line) + ":" + std::to_string(col));
}

Tensor tensor_add(const Tensor& a, const Tensor& b) {
  Tensor c = a;
  tensor_uplus(c, b);
  return c;
}
Tensor tensor_sub(const Tensor& a, const Tensor& b) {
  Tensor c = a;
  tensor_uminus(c, b);
  return c;
}
Tensor tensor_mul_scalar(const Tensor& a, real r) {
  Tensor c = a;
  tensor_umult_scalar(c, r);
  return c;
}

/// Variable binding. Updated parameters and locals own their value;
/// read-only parameters borrow the caller's.
struct Slot {
  Value val;
  const Value* borrow = nullptr;
  bool writable = true;
  Type declared = Type::Mesh;

  const Value& read(int line, int col) const {
    const Value& v = borrow ? *borrow : val;
    if (!v.initialized()) fail("read of uninitialized variable", line, col);
    return v;
  }
};

class Frame {
 public:
  Frame(const Program& prog) : prog_(prog) { scopes_.emplace_back(); }

  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }

  Slot& declare(const std::string& name, Slot slot) {
    return scopes_.back()[name] = std::move(slot);
  }

  Slot& lookup(const std::string& name, int line, int col) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto jt = it->find(name);
      if (jt != it->end()) return jt->second;
    }
    fail("unbound variable '" + name + "'", line, col);
  }

  // --- execution ------------------------------------------------------

  std::optional<Value> exec_body(const std::vector<StmtPtr>& body) {
    for (const auto& s : body)
      if (auto r = exec(*s)) return r;
    return std::nullopt;
  }

 private:
  std::optional<Value> exec(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::VarDecl: {
        Slot slot;
        slot.declared = s.decl_type;
        if (s.expr) init_assign(slot, *s.expr, s);
        declare(s.name, std::move(slot));
        return std::nullopt;
      }
      case Stmt::Kind::Assign: {
        Slot& slot = lookup(s.name, s.line, s.col);
        if (!slot.writable)
          fail("cannot assign to read-only parameter '" + s.name + "'", s.line, s.col);
        init_assign(slot, *s.expr, s);
        return std::nullopt;
      }
      case Stmt::Kind::CompoundAssign: {
        Slot& slot = lookup(s.name, s.line, s.col);
        if (!slot.writable)
          fail("cannot update read-only parameter '" + s.name + "'", s.line, s.col);
        if (!slot.val.initialized())
          fail("update of uninitialized variable '" + s.name + "'", s.line, s.col);
        Operand rhs = operand(*s.expr);
        apply_compound(slot.val, s.op, rhs.get(), s.line, s.col);
        return std::nullopt;
      }
      case Stmt::Kind::MutCall: {
        Slot& slot = lookup(s.name, s.line, s.col);
        if (!slot.writable)
          fail("cannot update read-only parameter '" + s.name + "'", s.line, s.col);
        if (!slot.val.initialized())
          fail("update of uninitialized variable '" + s.name + "'", s.line, s.col);
        apply_mut_call(slot.val, s);
        return std::nullopt;
      }
      case Stmt::Kind::Block: {
        push_scope();
        auto r = exec_body(s.stmts);
        pop_scope();
        return r;
      }
      case Stmt::Kind::Return: {
        Slot& slot = lookup(s.name, s.line, s.col);
        const Value& v = slot.read(s.line, s.col);
        if (slot.borrow) return *slot.borrow;  // defensive; wrappers return locals
        Value out = std::move(slot.val);
        return out;
      }
    }
    return std::nullopt;
  }

  /// Assignment semantics: a bare variable on the right copies its
  /// value; anything else is computed into a fresh value and moved in.
  void init_assign(Slot& slot, const Expr& e, const Stmt& s) {
    if (e.kind == Expr::Kind::Var) {
      const Value& src = lookup(e.name, e.line, e.col).read(e.line, e.col);
      if (&src == &slot.val) return;
      if (value_type(src) != slot.declared)
        fail("assignment type mismatch for '" + s.name + "'", s.line, s.col);
      copy_into(slot.val, src);
      return;
    }
    Value v = eval(e);
    if (value_type(v) != slot.declared)
      fail("assignment type mismatch for '" + s.name + "'", s.line, s.col);
    slot.val = std::move(v);
  }

  static void copy_into(Value& dst, const Value& src) {
    // Same-type assignment into existing storage lands on the mesh
    // copy-assignment path, which reuses storage when shapes agree.
    if (dst.v.index() == src.v.index()) {
      dst = src;
    } else {
      Value fresh = src;
      dst = std::move(fresh);
    }
  }

  // --- expression evaluation -------------------------------------------

  /// Either a borrowed reference (bare variables) or an owned
  /// temporary, so operand reads never copy expensive values.
  struct Operand {
    const Value* ref = nullptr;
    Value tmp;
    const Value& get() const { return ref ? *ref : tmp; }
  };

  Operand operand(const Expr& e) {
    Operand o;
    if (e.kind == Expr::Kind::Var) {
      o.ref = &lookup(e.name, e.line, e.col).read(e.line, e.col);
    } else {
      o.tmp = eval(e);
    }
    return o;
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var:
        return lookup(e.name, e.line, e.col).read(e.line, e.col);
      case Expr::Kind::RealLit:
        return make_real(e.real_value());
      case Expr::Kind::IntLit:
        return make_int(e.int_value);
      case Expr::Kind::Binary: {
        Operand a = operand(*e.lhs);
        Operand b = operand(*e.rhs);
        return binary(e.name, a.get(), b.get(), e.line, e.col);
      }
      case Expr::Kind::Call:
        return call(e);
    }
    fail("malformed expression", e.line, e.col);
  }

  Value binary(const std::string& op, const Value& a, const Value& b, int line,
               int col) {
    Type ta = value_type(a);
    Type tb = value_type(b);
    if (ta == Type::Mesh && tb == Type::Mesh) {
      const Mesh& ma = std::get<Mesh>(a.v);
      const Mesh& mb = std::get<Mesh>(b.v);
      if (op == "+") return make_mesh(add(ma, mb));
      if (op == "-") return make_mesh(sub(ma, mb));
      if (op == "*") return make_mesh(mul_elem(ma, mb));
    }
    if (ta == Type::Mesh && tb == Type::Real && op == "*")
      return make_mesh(mul_scalar(std::get<Mesh>(a.v),
                                  static_cast<real>(std::get<double>(b.v))));
    if (ta == Type::Field && tb == Type::Field) {
      const auto& fa = std::get<TorusScalarField>(a.v);
      const auto& fb = std::get<TorusScalarField>(b.v);
      if (op == "+") return make_field(field_add(fa, fb));
      if (op == "-") return make_field(field_sub(fa, fb));
      if (op == "*") return make_field(field_mul_elem(fa, fb));
    }
    if (ta == Type::Field && tb == Type::Real && op == "*")
      return make_field(field_mul_scalar(std::get<TorusScalarField>(a.v),
                                         static_cast<real>(std::get<double>(b.v))));
    if (ta == Type::Tensor && tb == Type::Tensor) {
      const Tensor& xa = std::get<Tensor>(a.v);
      const Tensor& xb = std::get<Tensor>(b.v);
      if (op == "+") return make_tensor(tensor_add(xa, xb));
      if (op == "-") return make_tensor(tensor_sub(xa, xb));
    }
    if (ta == Type::Tensor && tb == Type::Real && op == "*")
      return make_tensor(tensor_mul_scalar(std::get<Tensor>(a.v),
                                           static_cast<real>(std::get<double>(b.v))));
    if (ta == Type::Real && tb == Type::Real) {
      double x = std::get<double>(a.v), y = std::get<double>(b.v);
      if (op == "+") return make_real(x + y);
      if (op == "-") return make_real(x - y);
      if (op == "*") return make_real(x * y);
    }
    if (ta == Type::Int && tb == Type::Int) {
      long long x = std::get<long long>(a.v), y = std::get<long long>(b.v);
      if (op == "+") return make_int(x + y);
      if (op == "-") return make_int(x - y);
      if (op == "*") return make_int(x * y);
    }
    fail(std::string("operator '") + op + "' is not defined for (" + type_name(ta) +
             ", " + type_name(tb) + ")",
         line, col);
  }

  void apply_compound(Value& dst, const std::string& op, const Value& rhs, int line,
                      int col) {
    Type td = value_type(dst);
    Type tr = value_type(rhs);
    if (td == Type::Mesh && tr == Type::Mesh) {
      Mesh& m = std::get<Mesh>(dst.v);
      const Mesh& r = std::get<Mesh>(rhs.v);
      if (op == "+") return m.uplus(r);
      if (op == "-") return m.uminus(r);
      if (op == "*") return m.umult_elem(r);
    }
    if (td == Type::Mesh && tr == Type::Real && op == "*")
      return std::get<Mesh>(dst.v).umult(static_cast<real>(std::get<double>(rhs.v)));
    if (td == Type::Field && tr == Type::Field) {
      auto& f = std::get<TorusScalarField>(dst.v);
      const auto& r = std::get<TorusScalarField>(rhs.v);
      if (op == "+") return field_uplus(f, r);
      if (op == "-") return field_uminus(f, r);
      if (op == "*") return field_umult_elem(f, r);
    }
    if (td == Type::Field && tr == Type::Real && op == "*")
      return field_umult(std::get<TorusScalarField>(dst.v),
                         static_cast<real>(std::get<double>(rhs.v)));
    if (td == Type::Tensor && tr == Type::Tensor) {
      Tensor& t = std::get<Tensor>(dst.v);
      const Tensor& r = std::get<Tensor>(rhs.v);
      if (op == "+") return tensor_uplus(t, r);
      if (op == "-") return tensor_uminus(t, r);
    }
    if (td == Type::Tensor && tr == Type::Real && op == "*")
      return tensor_umult_scalar(std::get<Tensor>(dst.v),
                                 static_cast<real>(std::get<double>(rhs.v)));
    if (td == Type::Real && tr == Type::Real) {
      double& x = std::get<double>(dst.v);
      double y = std::get<double>(rhs.v);
      if (op == "+") { x += y; return; }
      if (op == "-") { x -= y; return; }
      if (op == "*") { x *= y; return; }
    }
    if (td == Type::Int && tr == Type::Int) {
      long long& x = std::get<long long>(dst.v);
      long long y = std::get<long long>(rhs.v);
      if (op == "+") { x += y; return; }
      if (op == "-") { x -= y; return; }
      if (op == "*") { x *= y; return; }
    }
    fail(std::string("'") + op + "=' is not defined for (" + type_name(td) + ", " +
             type_name(tr) + ")",
         line, col);
  }

  void apply_mut_call(Value& recv, const Stmt& s) {
    if (s.fn == "shift" && s.args.size() == 2 &&
        value_type(recv) == Type::Mesh) {
      long long d = scalar_int(*s.args[0]);
      long long i = scalar_int(*s.args[1]);
      if (d < 0) fail("shift dimension must be non-negative", s.line, s.col);
      std::get<Mesh>(recv.v).ushift(static_cast<std::size_t>(d), i);
      return;
    }
    fail("no built-in self-mutating implementation of '" + s.fn + "'", s.line, s.col);
  }

  long long scalar_int(const Expr& e) {
    Operand o = operand(e);
    const Value& v = o.get();
    if (value_type(v) != Type::Int) fail("expected an int", e.line, e.col);
    return std::get<long long>(v.v);
  }

  Value call(const Expr& e) {
    if (e.name == "shift" && e.args.size() == 3) {
      Operand src = operand(*e.args[0]);
      if (value_type(src.get()) == Type::Mesh) {
        long long d = scalar_int(*e.args[1]);
        long long i = scalar_int(*e.args[2]);
        if (d < 0) fail("shift dimension must be non-negative", e.line, e.col);
        return make_mesh(
            shift(std::get<Mesh>(src.get().v), static_cast<std::size_t>(d), i));
      }
    }
    const Proc* pr = prog_.find_proc(e.name);
    if (!pr) fail("unknown function '" + e.name + "'", e.line, e.col);
    if (pr->params.size() != e.args.size())
      fail("call to '" + e.name + "' with wrong arity", e.line, e.col);

    std::vector<Operand> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(operand(*a));

    Frame callee(prog_);
    for (std::size_t i = 0; i < args.size(); ++i) {
      const Param& prm = pr->params[i];
      if (prm.upd)
        fail("procedure '" + e.name + "' with updated parameters cannot be called in an expression",
             e.line, e.col);
      const Value& av = args[i].get();
      if (value_type(av) != prm.type)
        fail("argument '" + prm.name + "' of '" + e.name + "' expects " +
                 std::string(type_name(prm.type)),
             e.line, e.col);
      Slot slot;
      slot.borrow = &av;
      slot.writable = false;
      slot.declared = prm.type;
      callee.declare(prm.name, std::move(slot));
    }
    auto r = callee.exec_body(pr->body);
    if (!r) fail("procedure '" + e.name + "' did not return a value", e.line, e.col);
    return std::move(*r);
  }

  const Program& prog_;
  std::vector<std::map<std::string, Slot>> scopes_;
};

}  // namespace

InterpResult interpret(const Program& prog, const std::string& proc_name,
                       std::map<std::string, Value> inputs) {
  const Proc* pr = prog.find_proc(proc_name);
  if (!pr) throw error(errc::runtime, "no procedure named '" + proc_name + "'");

  Frame frame(prog);
  std::vector<std::string> upd_names;
  for (const auto& prm : pr->params) {
    auto it = inputs.find(prm.name);
    if (it == inputs.end())
      throw error(errc::runtime, "missing input for parameter '" + prm.name + "'");
    if (value_type(it->second) != prm.type)
      throw error(errc::runtime, "input '" + prm.name + "' has the wrong type, expected " +
                                     std::string(type_name(prm.type)));
    Slot slot;
    slot.declared = prm.type;
    if (prm.upd) {
      slot.val = std::move(it->second);
      slot.writable = true;
      upd_names.push_back(prm.name);
    } else {
      slot.borrow = &it->second;
      slot.writable = false;
    }
    frame.declare(prm.name, std::move(slot));
  }

  InterpResult res;
  AllocStats stats;
  std::optional<Value> returned;
  {
    AllocScope scope(stats);
    returned = frame.exec_body(pr->body);
  }
  res.allocs = stats.counts();
  for (const auto& n : upd_names) {
    Slot& slot = frame.lookup(n, pr->line, pr->col);
    res.outputs[n] = std::move(slot.val);
  }
  if (returned) res.outputs["return"] = std::move(*returned);
  return res;
}

namespace {

template <typename T>
std::optional<std::string> diff_mesh(const BasicMesh<T>& a, const BasicMesh<T>& b) {
  if (a.extents() != b.extents()) return "mesh extents differ";
  auto ea = a.elements();
  auto eb = b.elements();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    bool same;
    if constexpr (sizeof(T) == 4)
      same = std::bit_cast<std::uint32_t>(ea[i]) == std::bit_cast<std::uint32_t>(eb[i]);
    else
      same = std::bit_cast<std::uint64_t>(ea[i]) == std::bit_cast<std::uint64_t>(eb[i]);
    if (!same) {
      std::ostringstream os;
      os << "element " << i << " differs: " << ea[i] << " vs " << eb[i];
      return os.str();
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> diff_values(const Value& a, const Value& b) {
  Type ta = value_type(a);
  Type tb = value_type(b);
  if (ta != tb)
    return std::string("type mismatch: ") + type_name(ta) + " vs " + type_name(tb);
  switch (ta) {
    case Type::Mesh:
      return diff_mesh(std::get<Mesh>(a.v), std::get<Mesh>(b.v));
    case Type::Field: {
      const auto& fa = std::get<TorusScalarField>(a.v);
      const auto& fb = std::get<TorusScalarField>(b.v);
      if (std::bit_cast<std::uint64_t>(static_cast<double>(fa.delta)) !=
          std::bit_cast<std::uint64_t>(static_cast<double>(fb.delta)))
        return "grid spacing differs";
      return diff_mesh(fa.msf, fb.msf);
    }
    case Type::Tensor: {
      const Tensor& xa = std::get<Tensor>(a.v);
      const Tensor& xb = std::get<Tensor>(b.v);
      if (xa.rows != xb.rows || xa.cols != xb.cols) return "tensor dimensions differ";
      for (std::size_t i = 0; i < xa.comps.size(); ++i)
        if (auto d = diff_values(make_field(xa.comps[i]), make_field(xb.comps[i])))
          return "component " + std::to_string(i) + ": " + *d;
      return std::nullopt;
    }
    case Type::Real: {
      double x = std::get<double>(a.v), y = std::get<double>(b.v);
      if (std::bit_cast<std::uint64_t>(x) != std::bit_cast<std::uint64_t>(y)) {
        std::ostringstream os;
        os << "real differs: " << x << " vs " << y;
        return os.str();
      }
      return std::nullopt;
    }
    case Type::Int: {
      long long x = std::get<long long>(a.v), y = std::get<long long>(b.v);
      if (x != y)
        return "int differs: " + std::to_string(x) + " vs " + std::to_string(y);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace sph::dsl
