#include <cmath>
#include <cstring>

#include "qrad/kernels.hpp"
#include "qrad/random.hpp"
#include "kernels_common.hpp"

namespace qrad::kernels {

PackedMatrix PackedMatrix::pack(const CMatrix& m) {
  PackedMatrix p;
  p.n = m.rows();
  p.ld = (p.n + 3) & ~std::size_t{3};
  p.re.assign(p.ld * p.n, 0.0);
  p.im.assign(p.ld * p.n, 0.0);
  for (std::size_t j = 0; j < p.n; ++j) {
    for (std::size_t i = 0; i < p.n; ++i) {
      p.re[j * p.ld + i] = m(i, j).real();
      p.im[j * p.ld + i] = m(i, j).imag();
    }
  }
  return p;
}

void matvec_scalar(const PackedMatrix& a, const double* xr, const double* xi, double* yr, double* yi) {
  for (std::size_t i = 0; i < a.ld; ++i) {
    yr[i] = 0.0;
    yi[i] = 0.0;
  }
  for (std::size_t j = 0; j < a.n; ++j) {
    const double br = xr[j];
    const double bi = xi[j];
    const double* cr = a.re.data() + j * a.ld;
    const double* ci = a.im.data() + j * a.ld;
    for (std::size_t i = 0; i < a.ld; ++i) {
      yr[i] = yr[i] + (cr[i] * br - ci[i] * bi);
      yi[i] = yi[i] + (cr[i] * bi + ci[i] * br);
    }
  }
}

void pair2_values_scalar(const Matrix2& t, double q, double p, const Pair2Batch& b, double* out) {
  for (std::size_t k = 0; k < b.count; ++k) {
    const double x1 = b.s1[k];
    const double x2r = b.s2[k] * b.cos_beta[k];
    const double x2i = b.s2[k] * b.sin_beta[k];
    // Tx
    const double u1r = (t.re[0] * x1) + (t.re[1] * x2r - t.im[1] * x2i);
    const double u1i = (t.im[0] * x1) + (t.re[1] * x2i + t.im[1] * x2r);
    const double u2r = (t.re[2] * x1) + (t.re[3] * x2r - t.im[3] * x2i);
    const double u2i = (t.im[2] * x1) + (t.re[3] * x2i + t.im[3] * x2r);
    // a = x* T x
    const double ar = (x1 * u1r) + (x2r * u2r + x2i * u2i);
    const double ai = (x1 * u1i) + (x2r * u2i - x2i * u2r);
    // v = s1·(Tx)_2 − x2·(Tx)_1, then b = e^{−iφ} v
    const double vr = x1 * u2r - (x2r * u1r - x2i * u1i);
    const double vi = x1 * u2i - (x2r * u1i + x2i * u1r);
    const double br = b.cos_phi[k] * vr + b.sin_phi[k] * vi;
    const double bi = b.cos_phi[k] * vi - b.sin_phi[k] * vr;
    const double zr = q * ar + p * br;
    const double zi = q * ai + p * bi;
    out[k] = std::sqrt(zr * zr + zi * zi);
  }
}

namespace {

// Uniform phase: top two bits pick the quadrant, the next 52 the angle
// t ∈ [−π/4, π/4).
void phase_from_bits(std::uint64_t bits, double& c, double& s) {
  using namespace detail;
  const double t = (unit_from_bits(bits >> 10) - 0.5) * kHalfPi;
  const double t2 = t * t;
  double ps = kSin[0];
  for (int i = 1; i < 9; ++i) ps = ps * t2 + kSin[i];
  double pc = kCos[0];
  for (int i = 1; i < 10; ++i) pc = pc * t2 + kCos[i];
  const double sn = t * ps;
  // bit 62: (c, s) → (−s, c); bit 63: negate both (sign flip by xor).
  const bool swap = (bits >> 62) & 1U;
  const double cc = swap ? -sn : pc;
  const double ss = swap ? pc : sn;
  const std::uint64_t neg = (bits >> 63) << 63;
  std::uint64_t cb, sb;
  std::memcpy(&cb, &cc, sizeof cb);
  std::memcpy(&sb, &ss, sizeof sb);
  cb ^= neg;
  sb ^= neg;
  std::memcpy(&c, &cb, sizeof c);
  std::memcpy(&s, &sb, sizeof s);
}

}  // namespace

void pair2_draw_scalar(const Pair2Streams& st, std::uint64_t first, std::size_t count, const Pair2Buffers& out) {
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t idx = first + k + 1;
    const double u = detail::unit_from_bits(counter_draw(st.key_u, idx) >> 12);
    out.s1[k] = std::sqrt(u);
    out.s2[k] = std::sqrt(1.0 - u);
    phase_from_bits(counter_draw(st.key_beta, idx), out.cos_beta[k], out.sin_beta[k]);
    phase_from_bits(counter_draw(st.key_phi, idx), out.cos_phi[k], out.sin_phi[k]);
  }
}

}  // namespace qrad::kernels
