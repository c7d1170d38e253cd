#include "value_io.hpp"

#include <charconv>
#include <sstream>

namespace sph::dsl {

std::string format_real(double r) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, r);
  return std::string(buf, p);
}

namespace {

void format_mesh(const Mesh& m, std::ostream& os) {
  os << "extents:";
  for (auto e : m.extents()) os << " " << e;
  os << "\nelements:\n";
  auto el = m.elements();
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (i) os << (i % 8 == 0 ? "\n" : " ");
    os << format_real(static_cast<double>(el[i]));
  }
  os << "\n";
}

void format_field(const TorusScalarField& f, std::ostream& os) {
  os << "delta: " << format_real(static_cast<double>(f.delta)) << "\n";
  format_mesh(f.msf, os);
}

class Reader {
 public:
  explicit Reader(const std::string& text) : is_(text) {}

  std::string word() {
    std::string w;
    if (!(is_ >> w)) throw error(errc::io, "unexpected end of value text");
    return w;
  }

  std::string peek() {
    std::streampos pos = is_.tellg();
    std::string w;
    if (!(is_ >> w)) return "";
    is_.clear();
    is_.seekg(pos);
    return w;
  }

  void expect(const std::string& kw) {
    std::string w = word();
    if (w != kw) throw error(errc::io, "expected '" + kw + "', found '" + w + "'");
  }

  double number() {
    std::string w = word();
    const char* b = w.data();
    const char* e = b + w.size();
    double d;
    auto [p, ec] = std::from_chars(b, e, d);
    if (ec != std::errc{} || p != e)
      throw error(errc::io, "malformed number '" + w + "'");
    return d;
  }

  long long integer() {
    std::string w = word();
    const char* b = w.data();
    const char* e = b + w.size();
    long long v;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
      throw error(errc::io, "malformed integer '" + w + "'");
    return v;
  }

  Mesh mesh() {
    expect("extents:");
    std::vector<std::size_t> extents;
    while (peek() != "elements:") {
      long long e = integer();
      if (e <= 0) throw error(errc::io, "mesh extents must be positive");
      extents.push_back(static_cast<std::size_t>(e));
    }
    expect("elements:");
    std::size_t n = 1;
    for (auto e : extents) n *= e;
    std::vector<real> elems;
    elems.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      elems.push_back(static_cast<real>(number()));
    return Mesh::from_elements(std::move(extents), std::move(elems));
  }

  TorusScalarField field() {
    expect("delta:");
    double d = number();
    return TorusScalarField(mesh(), static_cast<real>(d));
  }

  Value value() {
    std::string kw = peek();
    if (kw == "extents:") return make_mesh(mesh());
    if (kw == "delta:") return make_field(field());
    if (kw == "rows:") {
      expect("rows:");
      long long r = integer();
      expect("cols:");
      long long c = integer();
      if (r <= 0 || c <= 0) throw error(errc::io, "tensor dimensions must be positive");
      std::vector<TorusScalarField> comps;
      comps.reserve(static_cast<std::size_t>(r * c));
      for (long long i = 0; i < r * c; ++i) comps.push_back(field());
      return make_tensor(Tensor(static_cast<std::size_t>(r),
                                static_cast<std::size_t>(c), std::move(comps)));
    }
    if (kw == "int:") {
      expect("int:");
      return make_int(integer());
    }
    if (kw == "real:") {
      expect("real:");
      return make_real(number());
    }
    throw error(errc::io, "unrecognized value text starting with '" + kw + "'");
  }

 private:
  std::istringstream is_;
};

}  // namespace

std::string format_value(const Value& v) {
  std::ostringstream os;
  switch (value_type(v)) {
    case Type::Mesh:
      format_mesh(std::get<Mesh>(v.v), os);
      break;
    case Type::Field:
      format_field(std::get<TorusScalarField>(v.v), os);
      break;
    case Type::Tensor: {
      const Tensor& t = std::get<Tensor>(v.v);
      os << "rows: " << t.rows << " cols: " << t.cols << "\n";
      for (const auto& c : t.comps) format_field(c, os);
      break;
    }
    case Type::Real:
      os << "real: " << format_real(std::get<double>(v.v)) << "\n";
      break;
    case Type::Int:
      os << "int: " << std::get<long long>(v.v) << "\n";
      break;
  }
  return os.str();
}

Value parse_value(const std::string& text) { return Reader(text).value(); }

}  // namespace sph::dsl
