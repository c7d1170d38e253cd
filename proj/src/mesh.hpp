#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "alloc_stats.hpp"
#include "error.hpp"

namespace sph {

#ifdef SPH_REAL_DOUBLE
using real = double;
#else
using real = float;
#endif

/// Rank-n periodic array of reals, stored flat in row-major order.
///
/// Pure operations return a fresh mesh and are implemented as
/// copy-then-mutate over the self-mutating members. Self-mutating
/// members update in place and allocate nothing.
template <typename T>
class BasicMesh {
 public:
  BasicMesh() = default;

  BasicMesh(std::vector<std::size_t> extents, T fill) {
    validate_extents(extents);
    extents_ = std::move(extents);
    elems_.assign(total(extents_), fill);
    detail::count_created();
  }

  static BasicMesh from_elements(std::vector<std::size_t> extents, std::vector<T> elems) {
    validate_extents(extents);
    if (elems.size() != total(extents))
      throw error(errc::shape, "element count does not match extents");
    BasicMesh m;
    m.extents_ = std::move(extents);
    m.elems_ = std::move(elems);
    detail::count_created();
    return m;
  }

  BasicMesh(const BasicMesh& other) : extents_(other.extents_), elems_(other.elems_) {
    if (!elems_.empty()) {
      detail::count_created();
      detail::count_copied();
    }
  }

  // Same-shape copy assignment reuses the existing storage.
  BasicMesh& operator=(const BasicMesh& other) {
    if (this == &other) return *this;
    if (extents_ == other.extents_ && !elems_.empty()) {
      std::copy(other.elems_.begin(), other.elems_.end(), elems_.begin());
      detail::count_written(elems_.size());
    } else {
      extents_ = other.extents_;
      elems_ = other.elems_;
      if (!elems_.empty()) {
        detail::count_created();
        detail::count_copied();
      }
    }
    return *this;
  }

  BasicMesh(BasicMesh&&) noexcept = default;
  BasicMesh& operator=(BasicMesh&&) noexcept = default;

  bool empty() const { return elems_.empty(); }
  std::size_t rank() const { return extents_.size(); }
  std::size_t size() const { return elems_.size(); }
  const std::vector<std::size_t>& extents() const { return extents_; }
  std::span<const T> elements() const { return elems_; }
  std::span<T> elements() { return elems_; }
  T at(std::size_t flat) const { return elems_[flat]; }

  bool same_shape(const BasicMesh& other) const { return extents_ == other.extents_; }

  // --- self-mutating operations -------------------------------------

  /// Circularly shifts this mesh i positions in dimension d, in place.
  void ushift(std::size_t d, long long i) {
    check_dim(d);
    const std::size_t len = extents_[d];
    const std::size_t inner = inner_stride(d);
    const std::size_t block = len * inner;
    const long long m = static_cast<long long>(len);
    const std::size_t s = static_cast<std::size_t>(((i % m) + m) % m);
    if (s == 0) return;
    for (std::size_t off = 0; off < elems_.size(); off += block) {
      auto first = elems_.begin() + static_cast<std::ptrdiff_t>(off);
      std::rotate(first, first + static_cast<std::ptrdiff_t>(s * inner),
                  first + static_cast<std::ptrdiff_t>(block));
    }
    detail::count_written(elems_.size());
  }

  /// Adds rhs elementwise to this mesh. rhs may be this mesh itself;
  /// elementwise updates are well defined under self-application.
  void uplus(const BasicMesh& rhs) {
    check_same_shape(rhs);
    for (std::size_t i = 0; i < elems_.size(); ++i) elems_[i] += rhs.elems_[i];
    detail::count_written(elems_.size());
  }

  /// Subtracts rhs elementwise from this mesh.
  void uminus(const BasicMesh& rhs) {
    check_same_shape(rhs);
    for (std::size_t i = 0; i < elems_.size(); ++i) elems_[i] -= rhs.elems_[i];
    detail::count_written(elems_.size());
  }

  /// Multiplies this mesh elementwise by the scalar r.
  void umult(T r) {
    for (auto& e : elems_) e *= r;
    detail::count_written(elems_.size());
  }

  /// Multiplies rhs elementwise into this mesh.
  void umult_elem(const BasicMesh& rhs) {
    check_same_shape(rhs);
    for (std::size_t i = 0; i < elems_.size(); ++i) elems_[i] *= rhs.elems_[i];
    detail::count_written(elems_.size());
  }

 private:
  static void validate_extents(const std::vector<std::size_t>& extents) {
    if (extents.empty()) throw error(errc::shape, "mesh requires at least one extent");
    for (auto e : extents)
      if (e == 0) throw error(errc::shape, "mesh extents must be positive");
  }

  static std::size_t total(const std::vector<std::size_t>& extents) {
    return std::accumulate(extents.begin(), extents.end(), std::size_t{1},
                           std::multiplies<>());
  }

  void check_dim(std::size_t d) const {
    if (d >= rank())
      throw error(errc::dimension, "dimension index " + std::to_string(d) +
                                       " out of range for rank " + std::to_string(rank()));
  }

  void check_same_shape(const BasicMesh& rhs) const {
    if (!same_shape(rhs)) throw error(errc::shape, "mesh shape mismatch");
  }

  std::size_t inner_stride(std::size_t d) const {
    std::size_t inner = 1;
    for (std::size_t k = d + 1; k < extents_.size(); ++k) inner *= extents_[k];
    return inner;
  }

  std::vector<std::size_t> extents_;
  std::vector<T> elems_;
};

// --- pure (algebraic) operations ------------------------------------
// Each returns a fresh mesh built by copying one operand and applying
// the matching self-mutating operation, the wrapper shape the
// self-mutating layer is specified against.

template <typename T>
BasicMesh<T> shift(const BasicMesh<T>& m, std::size_t d, long long i) {
  BasicMesh<T> c = m;
  c.ushift(d, i);
  return c;
}

template <typename T>
BasicMesh<T> add(const BasicMesh<T>& a, const BasicMesh<T>& b) {
  BasicMesh<T> c = a;
  c.uplus(b);
  return c;
}

template <typename T>
BasicMesh<T> sub(const BasicMesh<T>& a, const BasicMesh<T>& b) {
  BasicMesh<T> c = a;
  c.uminus(b);
  return c;
}

template <typename T>
BasicMesh<T> mul_elem(const BasicMesh<T>& a, const BasicMesh<T>& b) {
  BasicMesh<T> c = a;
  c.umult_elem(b);
  return c;
}

template <typename T>
BasicMesh<T> mul_scalar(const BasicMesh<T>& a, T r) {
  BasicMesh<T> c = a;
  c.umult(r);
  return c;
}

template <typename T>
BasicMesh<T> mesh_new(std::vector<std::size_t> extents, T fill) {
  return BasicMesh<T>(std::move(extents), fill);
}

/// Bitwise element equality; distinguishes values one ulp apart.
template <typename T>
bool bit_equal(const BasicMesh<T>& a, const BasicMesh<T>& b) {
  if (a.extents() != b.extents()) return false;
  auto ea = a.elements();
  auto eb = b.elements();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if constexpr (sizeof(T) == 4) {
      if (std::bit_cast<std::uint32_t>(ea[i]) != std::bit_cast<std::uint32_t>(eb[i]))
        return false;
    } else {
      if (std::bit_cast<std::uint64_t>(ea[i]) != std::bit_cast<std::uint64_t>(eb[i]))
        return false;
    }
  }
  return true;
}

template <typename T>
bool all_finite(const BasicMesh<T>& m) {
  for (auto e : m.elements())
    if (!std::isfinite(e)) return false;
  return true;
}

using Mesh = BasicMesh<real>;

}  // namespace sph
