#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qrad {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Dense complex matrix, row-major. Entries are always finite; every
/// constructor and mutating factory validates that.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix zero(std::size_t n) { return CMatrix(n, n); }
  static CMatrix zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const cplx> d);
  static CMatrix column(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  CMatrix adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;
  CVector col(std::size_t j) const;

  /// Copy of the rows×cols block starting at (r0, c0).
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;

  CMatrix& operator+=(const CMatrix& rhs);
  CMatrix& operator-=(const CMatrix& rhs);
  CMatrix& operator*=(cplx s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix lhs, const CMatrix& rhs);
CMatrix operator-(CMatrix lhs, const CMatrix& rhs);
CMatrix operator-(CMatrix m);
CMatrix operator*(cplx s, CMatrix m);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, std::span<const cplx> x);

CMatrix matrix_power(const CMatrix& a, unsigned n);

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const CMatrix& m, const char* what);

// Vector helpers. The inner product is linear in the first argument and
// conjugate-linear in the second: inner(x, y) = sum_i x_i * conj(y_i).
cplx inner(std::span<const cplx> x, std::span<const cplx> y);
double norm2(std::span<const cplx> x);
void normalize(std::span<cplx> x);
CVector axpy(cplx alpha, std::span<const cplx> x, std::span<const cplx> y);

}  // namespace qrad
