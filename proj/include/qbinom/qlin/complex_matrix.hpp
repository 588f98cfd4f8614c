#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qbinom/error.hpp"
#include "qbinom/qlin/atom_operator.hpp"

namespace qbinom::qlin {

// Dense complex matrix with row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("ComplexMatrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                           std::to_string(data_.size()));
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix from(const AtomOperator& a) {
    return ComplexMatrix(2, 2, std::vector<cplx>(a.e.begin(), a.e.end()));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  cplx trace() const {
    require_square("trace");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  AtomOperator to_atom() const {
    if (rows_ != 2 || cols_ != 2) throw DimensionError("ComplexMatrix::to_atom: matrix is not 2x2");
    return {data_[0], data_[1], data_[2], data_[3]};
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionError("ComplexMatrix product: " + a.shape() + " times " + b.shape());
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx v = a(r, k);
        if (v == cplx(0.0)) continue;
        for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += v * b(k, c);
      }
    }
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_square(const char* what) const {
    if (!is_square()) throw DimensionError(std::string(what) + ": matrix " + shape() + " is not square");
  }
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionError(std::string("ComplexMatrix ") + op + ": " + shape() + " vs " + o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

inline double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("hermiticity_defect: matrix " + a.shape() + " is not square");
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - std::conj(a(c, r))));
  return m;
}

// Kronecker product; a is the leading (slow) factor.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const cplx v = a(ar, ac);
      if (v == cplx(0.0)) continue;
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
    }
  return out;
}

inline ComplexMatrix kron(const AtomOperator& a, const AtomOperator& b) {
  return kron(ComplexMatrix::from(a), ComplexMatrix::from(b));
}

// Places x on tensor factor `site` (0-based) of an n_sites two-level register,
// identity elsewhere. Site 0 is the most significant bit of the basis index.
inline ComplexMatrix embed_site(const AtomOperator& x, std::size_t site, std::size_t n_sites) {
  if (site >= n_sites) {
    throw DimensionError("embed_site: site " + std::to_string(site) + " outside register of " +
                         std::to_string(n_sites));
  }
  const std::size_t dim = std::size_t{1} << n_sites;
  const std::size_t shift = n_sites - 1 - site;
  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t rb = (r >> shift) & 1U;
    for (std::size_t cb = 0; cb < 2; ++cb) {
      const cplx v = x(static_cast<int>(rb), static_cast<int>(cb));
      if (v == cplx(0.0)) continue;
      const std::size_t c = (r & ~(std::size_t{1} << shift)) | (cb << shift);
      out(r, c) = v;
    }
  }
  return out;
}

// x acting on field slice i (1-based) of a k-slice field, identity on the other slices.
inline ComplexMatrix embed_slice(const AtomOperator& x, std::size_t i, std::size_t k) {
  if (i < 1 || i > k) {
    throw DimensionError("embed_slice: slice " + std::to_string(i) + " outside 1.." + std::to_string(k));
  }
  return embed_site(x, i - 1, k);
}

// A 4x4 operator on (atom, slice) embedded into atom (x) slices 1..k, with the
// atom as the leading factor. `slice` is 1-based.
inline ComplexMatrix embed_atom_slice(const ComplexMatrix& m, std::size_t slice, std::size_t k) {
  if (m.rows() != 4 || m.cols() != 4) throw DimensionError("embed_atom_slice: operator must be 4x4");
  if (slice < 1 || slice > k) {
    throw DimensionError("embed_atom_slice: slice " + std::to_string(slice) + " outside 1.." + std::to_string(k));
  }
  const std::size_t n = k + 1;
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t atom_shift = n - 1;
  const std::size_t slice_shift = n - 1 - slice;
  const std::size_t mask = (std::size_t{1} << atom_shift) | (std::size_t{1} << slice_shift);
  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t rl = 2 * ((r >> atom_shift) & 1U) + ((r >> slice_shift) & 1U);
    for (std::size_t cl = 0; cl < 4; ++cl) {
      const cplx v = m(rl, cl);
      if (v == cplx(0.0)) continue;
      const std::size_t c = (r & ~mask) | ((cl >> 1) << atom_shift) | ((cl & 1U) << slice_shift);
      out(r, c) = v;
    }
  }
  return out;
}

}  // namespace qbinom::qlin
