#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex matrices, row-major storage.
//
// Composite-system index convention (used by tensor / partial_trace /
// partial_transpose): for subsystem dimensions [d_0, d_1, ..., d_{m-1}]
// the flat index of digits (i_0, ..., i_{m-1}) is
//   i_0 * (d_1*...*d_{m-1}) + i_1 * (d_2*...*d_{m-1}) + ... + i_{m-1},
// i.e. the first subsystem is the most significant digit, matching the
// Kronecker product tensor(a, b)[(i*b.rows+k), (j*b.cols+l)] = a(i,j)*b(k,l).

namespace qfb {

using complex = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<complex>& entries() { return data_; }
  const std::vector<complex>& entries() const { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  complex trace() const {
    if (!square()) throw std::invalid_argument("trace: matrix is not square");
    complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  bool is_finite() const {
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  // Max-abs deviation from m == m^dagger; defined for square matrices only.
  double hermiticity_defect() const {
    if (!square()) throw std::invalid_argument("hermiticity_defect: matrix is not square");
    double d = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r; c < cols_; ++c)
        d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return d;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_shape(o, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_shape(o, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
  friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matmul: inner dimensions differ");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const complex arow = a(r, k);
        if (arow == complex{}) continue;
        for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += arow * b(k, c);
      }
    }
    return out;
  }

 private:
  void check_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string("matrix shapes differ in operator") + op);
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complex> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shapes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
  return d;
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

// Kronecker product: out[(i*b.rows+k), (j*b.cols+l)] = a(i,j) * b(k,l).
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const complex aij = a(i, j);
      if (aij == complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

namespace detail {

inline std::size_t dims_product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Strides of each subsystem digit in the flat composite index.
inline std::vector<std::size_t> dims_strides(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) strides[s - 1] = strides[s] * dims[s];
  return strides;
}

// Flat offsets of every multi-index over the chosen subsystems, enumerated in
// row-major order of those subsystems.
inline std::vector<std::size_t> subsystem_offsets(const std::vector<std::size_t>& dims,
                                                  const std::vector<std::size_t>& strides,
                                                  const std::vector<std::size_t>& subs) {
  std::size_t total = 1;
  for (std::size_t s : subs) total *= dims[s];
  std::vector<std::size_t> offsets(total, 0);
  std::size_t block = total;
  for (std::size_t s : subs) {
    block /= dims[s];
    for (std::size_t idx = 0; idx < total; ++idx) {
      const std::size_t digit = (idx / block) % dims[s];
      offsets[idx] += digit * strides[s];
    }
  }
  return offsets;
}

}  // namespace detail

// Reduced matrix on the kept subsystems; the complement is traced out.
// `keep` must be a sorted list of distinct subsystem indices.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& keep) {
  if (!m.square()) throw std::invalid_argument("partial_trace: matrix is not square");
  if (detail::dims_product(dims) != m.rows())
    throw std::invalid_argument("partial_trace: product of dims does not match matrix size");
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  if (!std::is_sorted(keep.begin(), keep.end()) ||
      std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    throw std::invalid_argument("partial_trace: keep indices must be sorted and distinct");
  if (keep.back() >= dims.size())
    throw std::invalid_argument("partial_trace: keep index out of range");

  std::vector<std::size_t> traced;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);

  const auto strides = detail::dims_strides(dims);
  const auto kept_off = detail::subsystem_offsets(dims, strides, keep);
  const auto traced_off = detail::subsystem_offsets(dims, strides, traced);

  ComplexMatrix out(kept_off.size(), kept_off.size());
  for (std::size_t r = 0; r < kept_off.size(); ++r)
    for (std::size_t c = 0; c < kept_off.size(); ++c) {
      complex acc = 0.0;
      for (std::size_t t : traced_off) acc += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  return out;
}

// Transpose of one leg of a bipartite matrix: an entrywise permutation,
// so trace and (for Hermitian input) Hermiticity are preserved exactly.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dim_a,
                                       std::size_t dim_b, std::size_t on) {
  if (!m.square()) throw std::invalid_argument("partial_transpose: matrix is not square");
  if (dim_a * dim_b != m.rows())
    throw std::invalid_argument("partial_transpose: d_A*d_B does not match matrix size");
  if (on > 1) throw std::invalid_argument("partial_transpose: subsystem index must be 0 or 1");

  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t a = 0; a < dim_a; ++a)
    for (std::size_t b = 0; b < dim_b; ++b)
      for (std::size_t ap = 0; ap < dim_a; ++ap)
        for (std::size_t bp = 0; bp < dim_b; ++bp) {
          const std::size_t row = a * dim_b + b, col = ap * dim_b + bp;
          const std::size_t src = (on == 0) ? ap * dim_b + b : a * dim_b + bp;
          const std::size_t srcc = (on == 0) ? a * dim_b + bp : ap * dim_b + b;
          out(row, col) = m(src, srcc);
        }
  return out;
}

struct HermitianEigen {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, same order as eigenvalues
};

namespace detail {

// Cyclic complex Jacobi rotations on a Hermitian matrix. Rotations zero one
// off-diagonal entry at a time; stops when the off-diagonal Frobenius mass
// drops below 1e-12 (relative to the matrix scale).
inline void jacobi_hermitian(ComplexMatrix& h, ComplexMatrix* vectors) {
  const std::size_t n = h.rows();
  if (vectors) *vectors = ComplexMatrix::identity(n);
  if (n < 2) return;

  const double scale = std::max(1.0, h.frobenius_norm());
  const double tol = 1e-12 * scale;

  auto off_mass = [&]() {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) s += std::norm(h(r, c));
    return std::sqrt(2.0 * s);
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_mass() <= tol) return;
    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = h(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;

        const complex phase = apq / r;  // e^{i phi}
        const double zeta = (h(p, p).real() - h(q, q).real()) / (2.0 * r);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Columns: A <- A V with V(p,p)=c, V(p,q)=-s*phase, V(q,p)=s*conj(phase), V(q,q)=c.
        for (std::size_t i = 0; i < n; ++i) {
          const complex hip = h(i, p), hiq = h(i, q);
          h(i, p) = c * hip + s * std::conj(phase) * hiq;
          h(i, q) = -s * phase * hip + c * hiq;
        }
        // Rows: A <- V^dagger A.
        for (std::size_t j = 0; j < n; ++j) {
          const complex hpj = h(p, j), hqj = h(q, j);
          h(p, j) = c * hpj + s * phase * hqj;
          h(q, j) = -s * std::conj(phase) * hpj + c * hqj;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = complex(h(p, p).real(), 0.0);
        h(q, q) = complex(h(q, q).real(), 0.0);

        if (vectors) {
          for (std::size_t i = 0; i < n; ++i) {
            const complex vip = (*vectors)(i, p), viq = (*vectors)(i, q);
            (*vectors)(i, p) = c * vip + s * std::conj(phase) * viq;
            (*vectors)(i, q) = -s * phase * vip + c * viq;
          }
        }
      }
    }
  }
  if (off_mass() > 1e-8 * scale)
    throw std::runtime_error("jacobi_hermitian: eigensolver failed to converge");
}

}  // namespace detail

// Eigendecomposition of a Hermitian matrix: m = V diag(lambda) V^dagger,
// eigenvalues ascending. Input must be Hermitian within `tol` (max-abs of
// m - m^dagger); it is symmetrized before the solve.
inline HermitianEigen eig_hermitian(const ComplexMatrix& m, double tol = 1e-10) {
  if (!m.square()) throw std::invalid_argument("eig_hermitian: matrix is not square");
  if (m.hermiticity_defect() > tol)
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian within tolerance");

  const std::size_t n = m.rows();
  ComplexMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      h(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));

  ComplexMatrix v;
  detail::jacobi_hermitian(h, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return h(a, a).real() < h(b, b).real(); });

  HermitianEigen out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = h(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

// Eigenvalues only (ascending); skips accumulating the eigenvector matrix.
inline std::vector<double> eigvals_hermitian(const ComplexMatrix& m, double tol = 1e-10) {
  if (!m.square()) throw std::invalid_argument("eigvals_hermitian: matrix is not square");
  if (m.hermiticity_defect() > tol)
    throw std::invalid_argument("eigvals_hermitian: matrix is not Hermitian within tolerance");

  const std::size_t n = m.rows();
  ComplexMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      h(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));

  detail::jacobi_hermitian(h, nullptr);
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = h(i, i).real();
  std::sort(vals.begin(), vals.end());
  return vals;
}

}  // namespace qfb
