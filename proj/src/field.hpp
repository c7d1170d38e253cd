#pragma once

#include <cstddef>
#include <vector>

#include "mesh.hpp"

namespace sph {

/// 4-point finite-difference derivative coefficients.
struct DerivCoeffs {
  static constexpr double c1 = 0.85315148548241;
  static constexpr double c2 = -0.25953977340489;
  static constexpr double c3 = 0.06942058732686;
  static constexpr double c4 = -0.01082798602277;
  static constexpr double value(int k) {
    switch (k) {
      case 1: return c1;
      case 2: return c2;
      case 3: return c3;
      default: return c4;
    }
  }
};

/// Scalar field sampled on a periodic mesh: grid-point data plus the
/// grid spacing delta.
struct TorusScalarField {
  Mesh msf;
  real delta = 1;

  TorusScalarField() = default;
  TorusScalarField(Mesh m, real d) : msf(std::move(m)), delta(d) {
    if (!(delta > 0)) throw error(errc::field, "grid spacing must be positive");
  }

  std::size_t rank() const { return msf.rank(); }
};

// Shape and delta must agree before two fields may be combined.
inline void check_compatible(const TorusScalarField& a, const TorusScalarField& b) {
  if (!a.msf.same_shape(b.msf)) throw error(errc::field, "scalar field shape mismatch");
  if (std::bit_cast<std::uint64_t>(static_cast<double>(a.delta)) !=
      std::bit_cast<std::uint64_t>(static_cast<double>(b.delta)))
    throw error(errc::field, "scalar field grid spacing mismatch");
}

inline void field_uplus(TorusScalarField& f, const TorusScalarField& rhs) {
  check_compatible(f, rhs);
  f.msf.uplus(rhs.msf);
}

inline void field_uminus(TorusScalarField& f, const TorusScalarField& rhs) {
  check_compatible(f, rhs);
  f.msf.uminus(rhs.msf);
}

inline void field_umult(TorusScalarField& f, real r) { f.msf.umult(r); }

inline void field_umult_elem(TorusScalarField& f, const TorusScalarField& rhs) {
  check_compatible(f, rhs);
  f.msf.umult_elem(rhs.msf);
}

inline void check_deriv_pre(const TorusScalarField& f, std::size_t d) {
  if (d >= f.rank())
    throw error(errc::dimension, "derivative dimension out of range");
  if (f.msf.extents()[d] < 9)
    throw error(errc::stencil,
                "extent " + std::to_string(f.msf.extents()[d]) +
                    " too small for the 4-point stencil (needs >= 9)");
}

/// 4-point derivative in dimension d, algebraic form. Four scaled
/// central differences are accumulated left to right, then the result
/// is scaled once by 1/delta.
inline void uderiv_algebraic(TorusScalarField& f, std::size_t d) {
  check_deriv_pre(f, d);
  const Mesh& msf = f.msf;
  Mesh ans = mul_scalar(sub(shift(msf, d, 1), shift(msf, d, -1)), real(DerivCoeffs::c1));
  ans = add(ans, mul_scalar(sub(shift(msf, d, 2), shift(msf, d, -2)), real(DerivCoeffs::c2)));
  ans = add(ans, mul_scalar(sub(shift(msf, d, 3), shift(msf, d, -3)), real(DerivCoeffs::c3)));
  ans = add(ans, mul_scalar(sub(shift(msf, d, 4), shift(msf, d, -4)), real(DerivCoeffs::c4)));
  f.msf = mul_scalar(ans, real(1) / f.delta);
}

/// Same derivative with incrementalized shifting: two working meshes
/// are cumulatively shifted one position per round and combined in a
/// reused scratch mesh. Allocates exactly three meshes; agrees with
/// uderiv_algebraic bit for bit.
inline void uderiv_incremental(TorusScalarField& f, std::size_t d) {
  check_deriv_pre(f, d);
  Mesh msa = f.msf;
  Mesh msb = f.msf;

  msa.ushift(d, 1);
  msb.ushift(d, -1);
  Mesh scratch = msa;
  scratch.uminus(msb);
  scratch.umult(real(DerivCoeffs::c1));
  f.msf = scratch;

  for (int k = 2; k <= 4; ++k) {
    msa.ushift(d, 1);
    msb.ushift(d, -1);
    scratch = msa;
    scratch.uminus(msb);
    scratch.umult(real(DerivCoeffs::value(k)));
    f.msf.uplus(scratch);
  }

  f.msf.umult(real(1) / f.delta);
}

// pure field helpers used by the interpreter's expression evaluation
inline TorusScalarField field_add(const TorusScalarField& a, const TorusScalarField& b) {
  TorusScalarField c = a;
  field_uplus(c, b);
  return c;
}
inline TorusScalarField field_sub(const TorusScalarField& a, const TorusScalarField& b) {
  TorusScalarField c = a;
  field_uminus(c, b);
  return c;
}
inline TorusScalarField field_mul_elem(const TorusScalarField& a, const TorusScalarField& b) {
  TorusScalarField c = a;
  field_umult_elem(c, b);
  return c;
}
inline TorusScalarField field_mul_scalar(const TorusScalarField& a, real r) {
  TorusScalarField c = a;
  field_umult(c, r);
  return c;
}

/// Grid of scalar-field components (rows x cols); rank-1 tensors have
/// cols == 1. All components share mesh shape and delta.
struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<TorusScalarField> comps;  // row-major

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c, std::vector<TorusScalarField> fields)
      : rows(r), cols(c), comps(std::move(fields)) {
    if (rows == 0 || cols == 0 || comps.size() != rows * cols)
      throw error(errc::tensor, "component count does not match tensor dimensions");
    for (std::size_t i = 1; i < comps.size(); ++i) check_compatible(comps[0], comps[i]);
  }

  const TorusScalarField& at(std::size_t r, std::size_t c) const { return comps[r * cols + c]; }
  TorusScalarField& at(std::size_t r, std::size_t c) { return comps[r * cols + c]; }
};

inline void check_compatible(const Tensor& a, const Tensor& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw error(errc::tensor, "tensor dimension mismatch");
  check_compatible(a.comps[0], b.comps[0]);
}

inline void tensor_uplus(Tensor& t, const Tensor& rhs) {
  check_compatible(t, rhs);
  for (std::size_t i = 0; i < t.comps.size(); ++i) field_uplus(t.comps[i], rhs.comps[i]);
}
inline void tensor_uminus(Tensor& t, const Tensor& rhs) {
  check_compatible(t, rhs);
  for (std::size_t i = 0; i < t.comps.size(); ++i) field_uminus(t.comps[i], rhs.comps[i]);
}
inline void tensor_umult_scalar(Tensor& t, real r) {
  for (auto& c : t.comps) field_umult(c, r);
}

struct TensorApplyResult {
  Tensor result;
  std::size_t traversals = 0;  // one per pointwise multiply or accumulating add
};

/// Matrix-style application X_j = sum_i A[j,i] * V[i] over pointwise
/// field multiplies and accumulating adds. For a 2x2 tensor this costs
/// 8 mesh traversals (4 multiplies, 4 adds), which the result reports.
inline TensorApplyResult tensor_apply(const Tensor& a, const Tensor& v) {
  if (v.cols != 1) throw error(errc::tensor, "tensor application expects a column vector");
  if (a.cols != v.rows) throw error(errc::tensor, "tensor application inner dimension mismatch");
  check_compatible(a.comps[0], v.comps[0]);

  TensorApplyResult out;
  std::vector<TorusScalarField> xs;
  xs.reserve(a.rows);
  for (std::size_t j = 0; j < a.rows; ++j) {
    TorusScalarField acc(Mesh(v.comps[0].msf.extents(), real(0)), v.comps[0].delta);
    for (std::size_t i = 0; i < a.cols; ++i) {
      TorusScalarField prod = a.at(j, i);
      field_umult_elem(prod, v.comps[i]);
      ++out.traversals;
      field_uplus(acc, prod);
      ++out.traversals;
    }
    xs.push_back(std::move(acc));
  }
  out.result = Tensor(a.rows, 1, std::move(xs));
  return out;
}

inline bool bit_equal(const TorusScalarField& a, const TorusScalarField& b) {
  if (std::bit_cast<std::uint64_t>(static_cast<double>(a.delta)) !=
      std::bit_cast<std::uint64_t>(static_cast<double>(b.delta)))
    return false;
  return bit_equal(a.msf, b.msf);
}

inline bool bit_equal(const Tensor& a, const Tensor& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (std::size_t i = 0; i < a.comps.size(); ++i)
    if (!bit_equal(a.comps[i], b.comps[i])) return false;
  return true;
}

}  // namespace sph
