#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qrad/cmatrix.hpp"

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
// Both variants evaluate the same expressions in the same order without
// fused multiply-add, so their results are bit-identical.
namespace qrad::kernels {

/// Column-major split re/im planes, leading dimension padded to a multiple of 4.
struct PackedMatrix {
  std::size_t n = 0;
  std::size_t ld = 0;
  std::vector<double> re;
  std::vector<double> im;

  static PackedMatrix pack(const CMatrix& m);
};

/// Split re/im vector buffer sized to a packed leading dimension.
struct SplitVector {
  std::vector<double> re;
  std::vector<double> im;

  explicit SplitVector(std::size_t ld = 0) : re(ld, 0.0), im(ld, 0.0) {}
};

/// Inputs for a batch of 2×2 admissible pairs in Hopf coordinates:
/// x = (s1, s2·e^{iβ}), w = e^{iφ}(−conj(x2), conj(x1)), y = q·x + p·w.
struct Pair2Batch {
  const double* s1;
  const double* s2;
  const double* cos_beta;
  const double* sin_beta;
  const double* cos_phi;
  const double* sin_phi;
  std::size_t count;
};

/// Keys of the three counter streams feeding Pair2Batch: u (|x1|² = u),
/// β and φ. Sample k uses draw k+1 of each stream.
struct Pair2Streams {
  std::uint64_t key_u;
  std::uint64_t key_beta;
  std::uint64_t key_phi;
};

/// Output buffers of a pair draw, each holding `count` values.
struct Pair2Buffers {
  double* s1;
  double* s2;
  double* cos_beta;
  double* sin_beta;
  double* cos_phi;
  double* sin_phi;
};

struct Matrix2 {
  double re[4];  // row-major t00, t01, t10, t11
  double im[4];
};

enum class Variant { scalar, avx2 };

using MatvecFn = void (*)(const PackedMatrix& a, const double* xr, const double* xi, double* yr, double* yi);
using Pair2Fn = void (*)(const Matrix2& t, double q, double p, const Pair2Batch& batch, double* out);
using Pair2DrawFn = void (*)(const Pair2Streams& streams, std::uint64_t first, std::size_t count,
                             const Pair2Buffers& out);

struct KernelTable {
  Variant variant;
  MatvecFn matvec;
  Pair2Fn pair2_values;
  Pair2DrawFn pair2_draw;
};

/// y = A x on split vectors of length a.ld (padding lanes of y are written too).
void matvec_scalar(const PackedMatrix& a, const double* xr, const double* xi, double* yr, double* yi);
/// out[k] = |⟨T x_k, y_k⟩| for each pair in the batch.
void pair2_values_scalar(const Matrix2& t, double q, double p, const Pair2Batch& batch, double* out);
/// Samples first .. first+count−1: s1 = √u, s2 = √(1−u) with u uniform on
/// [0,1), and two uniform phases. Branch-free: each phase is a random
/// quadrant times e^{it}, t uniform on [−π/4, π/4), from Taylor polynomials.
void pair2_draw_scalar(const Pair2Streams& streams, std::uint64_t first, std::size_t count, const Pair2Buffers& out);

#if defined(QRAD_HAVE_AVX2)
void matvec_avx2(const PackedMatrix& a, const double* xr, const double* xi, double* yr, double* yi);
void pair2_values_avx2(const Matrix2& t, double q, double p, const Pair2Batch& batch, double* out);
void pair2_draw_avx2(const Pair2Streams& streams, std::uint64_t first, std::size_t count, const Pair2Buffers& out);
#endif

bool avx2_available();
const KernelTable& scalar_table();
/// Best table for this CPU. QRAD_KERNELS=scalar forces the reference path.
const KernelTable& active();
std::string_view to_string(Variant v);

}  // namespace qrad::kernels
