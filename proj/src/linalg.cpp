#include "qrad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qrad/error.hpp"

namespace qrad {

namespace {

constexpr int kMaxJacobiSweeps = 80;

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p, q). W = diag(1, e^{-iφ}) · G
// with G the real symmetric-Jacobi rotation; a ← W* a W, v ← v W.
void rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx phase = apq / mag;  // e^{iφ}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cplx w_qp = -s * std::conj(phase);  // W(q, p)
  const cplx w_qq = c * std::conj(phase);   // W(q, q)
  const std::size_t n = a.rows();

  // columns: a ← a W
  for (std::size_t i = 0; i < n; ++i) {
    const cplx aip = a(i, p);
    const cplx aiq = a(i, q);
    a(i, p) = aip * c + aiq * w_qp;
    a(i, q) = aip * s + aiq * w_qq;
  }
  // rows: a ← W* a
  for (std::size_t j = 0; j < n; ++j) {
    const cplx apj = a(p, j);
    const cplx aqj = a(q, j);
    a(p, j) = c * apj + std::conj(w_qp) * aqj;
    a(q, j) = s * apj + std::conj(w_qq) * aqj;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t i = 0; i < n; ++i) {
    const cplx vip = v(i, p);
    const cplx viq = v(i, q);
    v(i, p) = vip * c + viq * w_qp;
    v(i, q) = vip * s + viq * w_qq;
  }
}

}  // namespace

bool is_hermitian(const CMatrix& h, double rel_tol) {
  if (!h.square()) return false;
  double diff = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) diff += std::norm(h(i, j) - std::conj(h(j, i)));
  return std::sqrt(diff) <= rel_tol * h.frobenius_norm();
}

HermEig herm_eig(const CMatrix& h, double tol) {
  if (!h.square()) throw Error(ErrorCode::NotHermitian, "matrix is not square");
  if (!is_hermitian(h, tol)) throw Error(ErrorCode::NotHermitian, "‖H − H*‖_F exceeds tolerance");
  const std::size_t n = h.rows();

  CMatrix a = hermitian_part(h);
  CMatrix v = CMatrix::identity(n);
  const double scale = a.frobenius_norm();

  // A rotation is skipped once |a_pq| is below round-off relative to its
  // diagonal pair; the iteration stops after a sweep with no rotations.
  const double floor = 1e-18 * scale;
  for (int sweep = 0; off_diagonal_norm(a) > 0.0; ++sweep) {
    if (sweep == kMaxJacobiSweeps) {
      throw Error(ErrorCode::NoConvergence, "Jacobi exceeded " + std::to_string(kMaxJacobiSweeps) + " sweeps");
    }
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        const double diag = std::abs(a(p, p).real()) + std::abs(a(q, q).real());
        if (mag <= floor || mag <= 1e-17 * diag) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

double lambda_max(const CMatrix& h) { return herm_eig(h).eigenvalues.back(); }

double spectral_norm(const CMatrix& a) {
  if (a.empty()) return 0.0;
  const CMatrix ah = a.adjoint();
  const CMatrix gram = a.rows() < a.cols() ? a * ah : ah * a;
  return std::sqrt(std::max(0.0, lambda_max(gram)));
}

CMatrix hermitian_part(const CMatrix& a) {
  CMatrix out = a + a.adjoint();
  out *= 0.5;
  return out;
}

CMatrix skew_hermitian_part(const CMatrix& a) {
  CMatrix out = a - a.adjoint();
  out *= cplx{0.0, -0.5};
  return out;
}

CMatrix modulus_power(const CMatrix& s, double power) {
  if (!s.square()) throw Error(ErrorCode::DimensionMismatch, "modulus_power needs a square matrix");
  if (power < 0.0) throw Error(ErrorCode::ParamOutOfRange, "modulus_power exponent must be >= 0");
  const HermEig eig = herm_eig(s.adjoint() * s);
  return herm_function(eig, [power](double lambda) {
    return std::pow(std::max(lambda, 0.0), 0.5 * power);
  });
}

CMatrix psd_sqrt_clamped01(const CMatrix& t, double tol) {
  const HermEig eig = herm_eig(t);
  for (double lambda : eig.eigenvalues) {
    if (lambda < -tol || lambda > 1.0 + tol) {
      throw Error(ErrorCode::SpectrumOutOfRange,
                  "eigenvalue " + std::to_string(lambda) + " outside [0, 1]");
    }
  }
  return herm_function(eig, [](double lambda) {
    const double mu = std::clamp(lambda, 0.0, 1.0);
    return std::sqrt(mu - mu * mu);
  });
}

CMatrix projection_dilation(const CMatrix& t, double tol) {
  const CMatrix root = psd_sqrt_clamped01(t, tol);
  return block2x2(t, root, root, CMatrix::identity(t.rows()) - t);
}

CMatrix block2x2(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d) {
  const std::size_t m = a.rows();
  const std::size_t k = d.rows();
  if (!a.square() || !d.square() || b.rows() != m || b.cols() != k || c.rows() != k || c.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "block2x2 blocks are not conformal");
  }
  CMatrix out(m + k, m + k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < k; ++j) out(i, m + j) = b(i, j);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < m; ++j) out(m + i, j) = c(i, j);
    for (std::size_t j = 0; j < k; ++j) out(m + i, m + j) = d(i, j);
  }
  return out;
}

Blocks2x2 split2x2(const CMatrix& m, std::size_t split) {
  if (!m.square() || split > m.rows()) throw Error(ErrorCode::DimensionMismatch, "split2x2");
  const std::size_t k = m.rows() - split;
  return {m.block(0, 0, split, split), m.block(0, split, split, k), m.block(split, 0, k, split),
          m.block(split, split, k, k)};
}

CMatrix direct_sum(std::span<const CMatrix> blocks) {
  if (blocks.empty()) throw Error(ErrorCode::EmptyInput, "direct_sum of no blocks");
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (!b.square()) throw Error(ErrorCode::DimensionMismatch, "direct_sum blocks must be square");
    n += b.rows();
  }
  CMatrix out(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (!u.square()) return false;
  return (u.adjoint() * u - CMatrix::identity(u.rows())).frobenius_norm() <= tol;
}

bool is_projection(const CMatrix& p, double tol) {
  if (!p.square()) return false;
  return (p * p - p).frobenius_norm() <= tol && (p - p.adjoint()).frobenius_norm() <= tol;
}

bool is_psd(const CMatrix& h) {
  if (!is_hermitian(h, 1e-10)) return false;
  const HermEig eig = herm_eig(h, 1e-10);
  const double scale = std::max({1.0, std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back())});
  return eig.eigenvalues.front() >= -1e-10 * scale;
}

}  // namespace qrad
