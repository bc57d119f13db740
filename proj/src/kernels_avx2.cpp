// Compiled with -mavx2 only (no -mfma), so mul/add pairs stay unfused and
// round exactly like the scalar reference.
#include <immintrin.h>

#include <cmath>

#include "qrad/kernels.hpp"
#include "qrad/random.hpp"
#include "kernels_common.hpp"

namespace qrad::kernels {

void matvec_avx2(const PackedMatrix& a, const double* xr, const double* xi, double* yr, double* yi) {
  for (std::size_t i = 0; i < a.ld; i += 4) {
    __m256d acc_r = _mm256_setzero_pd();
    __m256d acc_i = _mm256_setzero_pd();
    for (std::size_t j = 0; j < a.n; ++j) {
      const __m256d br = _mm256_set1_pd(xr[j]);
      const __m256d bi = _mm256_set1_pd(xi[j]);
      const __m256d cr = _mm256_loadu_pd(a.re.data() + j * a.ld + i);
      const __m256d ci = _mm256_loadu_pd(a.im.data() + j * a.ld + i);
      acc_r = _mm256_add_pd(acc_r, _mm256_sub_pd(_mm256_mul_pd(cr, br), _mm256_mul_pd(ci, bi)));
      acc_i = _mm256_add_pd(acc_i, _mm256_add_pd(_mm256_mul_pd(cr, bi), _mm256_mul_pd(ci, br)));
    }
    _mm256_storeu_pd(yr + i, acc_r);
    _mm256_storeu_pd(yi + i, acc_i);
  }
}

void pair2_values_avx2(const Matrix2& t, double q, double p, const Pair2Batch& b, double* out) {
  const __m256d t0r = _mm256_set1_pd(t.re[0]), t0i = _mm256_set1_pd(t.im[0]);
  const __m256d t1r = _mm256_set1_pd(t.re[1]), t1i = _mm256_set1_pd(t.im[1]);
  const __m256d t2r = _mm256_set1_pd(t.re[2]), t2i = _mm256_set1_pd(t.im[2]);
  const __m256d t3r = _mm256_set1_pd(t.re[3]), t3i = _mm256_set1_pd(t.im[3]);
  const __m256d vq = _mm256_set1_pd(q);
  const __m256d vp = _mm256_set1_pd(p);

  std::size_t k = 0;
  for (; k + 4 <= b.count; k += 4) {
    const __m256d x1 = _mm256_loadu_pd(b.s1 + k);
    const __m256d s2 = _mm256_loadu_pd(b.s2 + k);
    const __m256d x2r = _mm256_mul_pd(s2, _mm256_loadu_pd(b.cos_beta + k));
    const __m256d x2i = _mm256_mul_pd(s2, _mm256_loadu_pd(b.sin_beta + k));

    const __m256d u1r = _mm256_add_pd(_mm256_mul_pd(t0r, x1),
                                      _mm256_sub_pd(_mm256_mul_pd(t1r, x2r), _mm256_mul_pd(t1i, x2i)));
    const __m256d u1i = _mm256_add_pd(_mm256_mul_pd(t0i, x1),
                                      _mm256_add_pd(_mm256_mul_pd(t1r, x2i), _mm256_mul_pd(t1i, x2r)));
    const __m256d u2r = _mm256_add_pd(_mm256_mul_pd(t2r, x1),
                                      _mm256_sub_pd(_mm256_mul_pd(t3r, x2r), _mm256_mul_pd(t3i, x2i)));
    const __m256d u2i = _mm256_add_pd(_mm256_mul_pd(t2i, x1),
                                      _mm256_add_pd(_mm256_mul_pd(t3r, x2i), _mm256_mul_pd(t3i, x2r)));

    const __m256d ar = _mm256_add_pd(_mm256_mul_pd(x1, u1r),
                                     _mm256_add_pd(_mm256_mul_pd(x2r, u2r), _mm256_mul_pd(x2i, u2i)));
    const __m256d ai = _mm256_add_pd(_mm256_mul_pd(x1, u1i),
                                     _mm256_sub_pd(_mm256_mul_pd(x2r, u2i), _mm256_mul_pd(x2i, u2r)));

    const __m256d vr = _mm256_sub_pd(_mm256_mul_pd(x1, u2r),
                                     _mm256_sub_pd(_mm256_mul_pd(x2r, u1r), _mm256_mul_pd(x2i, u1i)));
    const __m256d vi = _mm256_sub_pd(_mm256_mul_pd(x1, u2i),
                                     _mm256_add_pd(_mm256_mul_pd(x2r, u1i), _mm256_mul_pd(x2i, u1r)));

    const __m256d cp = _mm256_loadu_pd(b.cos_phi + k);
    const __m256d sp = _mm256_loadu_pd(b.sin_phi + k);
    const __m256d br = _mm256_add_pd(_mm256_mul_pd(cp, vr), _mm256_mul_pd(sp, vi));
    const __m256d bi = _mm256_sub_pd(_mm256_mul_pd(cp, vi), _mm256_mul_pd(sp, vr));

    const __m256d zr = _mm256_add_pd(_mm256_mul_pd(vq, ar), _mm256_mul_pd(vp, br));
    const __m256d zi = _mm256_add_pd(_mm256_mul_pd(vq, ai), _mm256_mul_pd(vp, bi));
    _mm256_storeu_pd(out + k, _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(zr, zr), _mm256_mul_pd(zi, zi))));
  }
  if (k < b.count) {
    const Pair2Batch tail{b.s1 + k, b.s2 + k, b.cos_beta + k, b.sin_beta + k, b.cos_phi + k, b.sin_phi + k,
                          b.count - k};
    pair2_values_scalar(t, q, p, tail, out + k);
  }
}

namespace {

// Low 64 bits of z·m for a constant m, from three 32×32→64 products.
inline __m256i mul64(__m256i z, std::uint64_t m) {
  const __m256i mlo = _mm256_set1_epi64x(static_cast<long long>(m & 0xFFFFFFFFULL));
  const __m256i mhi = _mm256_set1_epi64x(static_cast<long long>(m >> 32));
  const __m256i lo = _mm256_mul_epu32(z, mlo);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(_mm256_srli_epi64(z, 32), mlo), _mm256_mul_epu32(z, mhi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64_x4(__m256i z) {
  z = _mm256_add_epi64(z, _mm256_set1_epi64x(static_cast<long long>(0x9E3779B97F4A7C15ULL)));
  z = mul64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 30)), 0xBF58476D1CE4E5B9ULL);
  z = mul64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 27)), 0x94D049BB133111EBULL);
  return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

inline __m256d unit_from_bits_x4(__m256i mantissa) {
  const __m256i b = _mm256_or_si256(_mm256_and_si256(mantissa, _mm256_set1_epi64x(static_cast<long long>(detail::kMantissa))),
                                    _mm256_set1_epi64x(static_cast<long long>(detail::kOneBits)));
  return _mm256_sub_pd(_mm256_castsi256_pd(b), _mm256_set1_pd(1.0));
}

inline void phase_from_bits_x4(__m256i bits, __m256d& c, __m256d& s) {
  const __m256d t = _mm256_mul_pd(_mm256_sub_pd(unit_from_bits_x4(_mm256_srli_epi64(bits, 10)), _mm256_set1_pd(0.5)),
                                  _mm256_set1_pd(detail::kHalfPi));
  const __m256d t2 = _mm256_mul_pd(t, t);
  __m256d ps = _mm256_set1_pd(detail::kSin[0]);
  for (int i = 1; i < 9; ++i) ps = _mm256_add_pd(_mm256_mul_pd(ps, t2), _mm256_set1_pd(detail::kSin[i]));
  __m256d pc = _mm256_set1_pd(detail::kCos[0]);
  for (int i = 1; i < 10; ++i) pc = _mm256_add_pd(_mm256_mul_pd(pc, t2), _mm256_set1_pd(detail::kCos[i]));
  const __m256d sn = _mm256_mul_pd(t, ps);

  const __m256d sign = _mm256_set1_pd(-0.0);
  // bit 62: (c, s) → (−s, c); bit 63: negate both.
  const __m256i b62 = _mm256_set1_epi64x(1LL << 62);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(bits, b62), b62));
  __m256d cc = _mm256_blendv_pd(pc, _mm256_xor_pd(sn, sign), swap);
  __m256d ss = _mm256_blendv_pd(sn, pc, swap);
  const __m256d neg = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_srli_epi64(bits, 63), 63));
  c = _mm256_xor_pd(cc, neg);
  s = _mm256_xor_pd(ss, neg);
}

}  // namespace

void pair2_draw_avx2(const Pair2Streams& st, std::uint64_t first, std::size_t count, const Pair2Buffers& out) {
  std::size_t k = 0;
  if (count >= 4) {
    auto lanes = [&](std::uint64_t key) {
      return _mm256_setr_epi64x(static_cast<long long>(key + kCounterStep * (first + 1)),
                                static_cast<long long>(key + kCounterStep * (first + 2)),
                                static_cast<long long>(key + kCounterStep * (first + 3)),
                                static_cast<long long>(key + kCounterStep * (first + 4)));
    };
    const __m256i step = _mm256_set1_epi64x(static_cast<long long>(kCounterStep * 4));
    __m256i cu = lanes(st.key_u), cb = lanes(st.key_beta), cp = lanes(st.key_phi);
    for (; k + 4 <= count; k += 4) {
      const __m256d u = unit_from_bits_x4(_mm256_srli_epi64(mix64_x4(cu), 12));
      _mm256_storeu_pd(out.s1 + k, _mm256_sqrt_pd(u));
      _mm256_storeu_pd(out.s2 + k, _mm256_sqrt_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), u)));
      __m256d c, s;
      phase_from_bits_x4(mix64_x4(cb), c, s);
      _mm256_storeu_pd(out.cos_beta + k, c);
      _mm256_storeu_pd(out.sin_beta + k, s);
      phase_from_bits_x4(mix64_x4(cp), c, s);
      _mm256_storeu_pd(out.cos_phi + k, c);
      _mm256_storeu_pd(out.sin_phi + k, s);
      cu = _mm256_add_epi64(cu, step);
      cb = _mm256_add_epi64(cb, step);
      cp = _mm256_add_epi64(cp, step);
    }
  }
  if (k < count) {
    const Pair2Buffers tail{out.s1 + k, out.s2 + k, out.cos_beta + k, out.sin_beta + k, out.cos_phi + k, out.sin_phi + k};
    pair2_draw_scalar(st, first + k, count - k, tail);
  }
}

}  // namespace qrad::kernels
