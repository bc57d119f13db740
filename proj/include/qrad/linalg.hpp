#pragma once

#include <span>
#include <vector>

#include "qrad/cmatrix.hpp"

namespace qrad {

/// Eigen-decomposition of a Hermitian matrix: H = V diag(eigenvalues) V*.
struct HermEig {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // columns orthonormal
};

inline constexpr double kDefaultHermTol = 1e-12;

/// Cyclic complex Jacobi. Throws NotHermitian when ‖H − H*‖_F > tol·‖H‖_F
/// and NoConvergence if the sweep budget runs out.
HermEig herm_eig(const CMatrix& h, double tol = kDefaultHermTol);

/// Largest eigenvalue only (same solver, convenience).
double lambda_max(const CMatrix& h);

/// Largest singular value, sqrt(λ_max(A*A)). Works for rectangular A.
double spectral_norm(const CMatrix& a);

/// (A + A*)/2 and (A − A*)/(2i).
CMatrix hermitian_part(const CMatrix& a);
CMatrix skew_hermitian_part(const CMatrix& a);

/// Applies f to the spectrum of the Hermitian matrix h: V diag(f(λ)) V*.
template <class F>
CMatrix herm_function(const HermEig& eig, F&& f);

/// |S|^s = (S*S)^{s/2}. Negative round-off in the spectrum of S*S is clamped to 0.
CMatrix modulus_power(const CMatrix& s, double power);

/// sqrt(T − T²) for Hermitian T with spectrum in [−tol, 1+tol]; the spectrum is
/// clamped into [0, 1] before the function is applied. Throws SpectrumOutOfRange.
CMatrix psd_sqrt_clamped01(const CMatrix& t, double tol = 1e-10);

/// [[T, sqrt(T−T²)], [sqrt(T−T²), I−T]], an orthogonal projection whenever
/// 0 ≤ T ≤ I.
CMatrix projection_dilation(const CMatrix& t, double tol = 1e-10);

/// [[A, B], [C, D]] with conformal shapes (A m×m, B m×k, C k×m, D k×k).
CMatrix block2x2(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d);

/// Block-diagonal assembly of square blocks. Throws EmptyInput.
CMatrix direct_sum(std::span<const CMatrix> blocks);

struct Blocks2x2 {
  CMatrix a, b, c, d;
};
/// Inverse of block2x2 for a 2m×2m matrix split at m.
Blocks2x2 split2x2(const CMatrix& m, std::size_t split);

// Structural predicates, all with absolute/relative Frobenius tolerances.
bool is_hermitian(const CMatrix& h, double rel_tol = 1e-12);
bool is_unitary(const CMatrix& u, double tol = 1e-10);
bool is_projection(const CMatrix& p, double tol = 1e-10);
/// Hermitian with λ_min ≥ −1e-10·max(1, ‖H‖).
bool is_psd(const CMatrix& h);

// -- template implementation --------------------------------------------------

template <class F>
CMatrix herm_function(const HermEig& eig, F&& f) {
  const std::size_t n = eig.eigenvalues.size();
  const CMatrix& v = eig.eigenvectors;
  std::vector<double> fl(n);
  for (std::size_t k = 0; k < n; ++k) fl[k] = f(eig.eigenvalues[k]);
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += fl[k] * v(i, k) * std::conj(v(j, k));
      out(i, j) = acc;
      out(j, i) = std::conj(acc);
    }
    out(i, i) = out(i, i).real();
  }
  return out;
}

}  // namespace qrad
