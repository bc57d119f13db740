#include "qrad/random.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qrad/error.hpp"
#include "qrad/linalg.hpp"

namespace qrad {

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = symmetric();
    v = symmetric();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

cplx CounterRng::complex_normal() noexcept {
  constexpr double kHalf = 0.70710678118654752440;
  const double re = normal();
  const double im = normal();
  return {re * kHalf, im * kHalf};
}

cplx CounterRng::unit_phase() noexcept {
  // Both disc coordinates come from the two 32-bit halves of one draw.
  constexpr double kScale = 0x1.0p-31;
  double u, v, s;
  do {
    const std::uint64_t bits = next_u64();
    u = static_cast<double>(static_cast<std::int32_t>(bits >> 32)) * kScale;
    v = static_cast<double>(static_cast<std::int32_t>(bits & 0xFFFFFFFFULL)) * kScale;
    s = u * u + v * v;
  } while (s >= 1.0 || s < 1e-8);
  const double inv = 1.0 / std::sqrt(s);
  return {u * inv, v * inv};
}

namespace {

constexpr std::array<std::string_view, 7> kEnsembleNames = {
    "ginibre", "hermitian", "unitary", "psd", "contraction01", "projection", "nilpotent_sq_zero"};

CMatrix ginibre(CounterRng& rng, std::size_t rows, std::size_t cols) {
  CMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

// Gram-Schmidt (two passes) on a Ginibre matrix. R has a positive diagonal,
// which is what makes Q Haar-distributed.
CMatrix haar_unitary(CounterRng& rng, std::size_t n) {
  CMatrix g = ginibre(rng, n, n);
  std::vector<CVector> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    CVector v = g.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const cplx c = inner(v, cols[k]);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * cols[k][i];
      }
    }
    normalize(v);
    cols[j] = std::move(v);
  }
  CMatrix u(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) u(i, j) = cols[j][i];
  return u;
}

CMatrix conjugate_diag(const CMatrix& u, const std::vector<double>& d) {
  std::vector<cplx> dc(d.begin(), d.end());
  return hermitian_part(u * CMatrix::diagonal(dc) * u.adjoint());
}

}  // namespace

std::string_view to_string(EnsembleKind kind) { return kEnsembleNames[static_cast<std::size_t>(kind)]; }

EnsembleKind ensemble_from_string(std::string_view name) {
  for (std::size_t k = 0; k < kEnsembleNames.size(); ++k)
    if (kEnsembleNames[k] == name) return static_cast<EnsembleKind>(k);
  throw Error(ErrorCode::ParseError, "unknown ensemble '" + std::string(name) + "'");
}

CMatrix gen_random(EnsembleKind kind, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::BadDimension, "ensemble dimension must be >= 1");
  if (kind == EnsembleKind::nilpotent_sq_zero && n < 2) {
    throw Error(ErrorCode::BadDimension, "nilpotent_sq_zero needs n >= 2");
  }
  CounterRng rng(seed, 0xE45E'0000ULL + static_cast<std::uint64_t>(kind) * 0x100 + n);

  switch (kind) {
    case EnsembleKind::ginibre:
      return ginibre(rng, n, n);
    case EnsembleKind::hermitian:
      return hermitian_part(ginibre(rng, n, n));
    case EnsembleKind::unitary:
      return haar_unitary(rng, n);
    case EnsembleKind::psd: {
      // Eigenvalues are set explicitly so that tiny negative round-off in
      // G G* cannot appear.
      const CMatrix u = haar_unitary(rng, n);
      std::vector<double> d(n);
      for (auto& x : d) {
        const cplx z = rng.complex_normal();
        x = 2.0 * std::norm(z);
      }
      return conjugate_diag(u, d);
    }
    case EnsembleKind::contraction01: {
      const CMatrix u = haar_unitary(rng, n);
      std::vector<double> d(n);
      for (auto& x : d) x = rng.uniform();
      return conjugate_diag(u, d);
    }
    case EnsembleKind::projection: {
      const CMatrix u = haar_unitary(rng, n);
      std::size_t rank = n == 1 ? rng.next_u64() % 2 : 1 + rng.next_u64() % (n - 1);
      std::vector<double> d(n, 0.0);
      for (std::size_t i = 0; i < rank; ++i) d[i] = 1.0;
      return conjugate_diag(u, d);
    }
    case EnsembleKind::nilpotent_sq_zero: {
      const std::size_t k = n / 2;
      const CMatrix u = haar_unitary(rng, n);
      const CMatrix b = ginibre(rng, k, n - k);
      const CMatrix core = block2x2(CMatrix(k, k), b, CMatrix(n - k, k), CMatrix(n - k, n - k));
      return u * core * u.adjoint();
    }
  }
  throw Error(ErrorCode::BadDimension, "unknown ensemble");
}

CVector random_gaussian_vector(CounterRng& rng, std::size_t n) {
  CVector v(n);
  for (auto& z : v) z = rng.complex_normal();
  return v;
}

CVector random_unit_vector(CounterRng& rng, std::size_t n) {
  CVector v;
  double nv = 0.0;
  do {
    v = random_gaussian_vector(rng, n);
    nv = norm2(v);
  } while (nv < 1e-12);
  for (auto& z : v) z /= nv;
  return v;
}

}  // namespace qrad
