#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qrad/error.hpp"
#include "qrad/linalg.hpp"
#include "qrad/random.hpp"

using namespace qrad;

namespace {

double residual(const CMatrix& h, const HermEig& e) {
  std::vector<cplx> d(e.eigenvalues.begin(), e.eigenvalues.end());
  const CMatrix& v = e.eigenvectors;
  return (v * CMatrix::diagonal(d) * v.adjoint() - h).frobenius_norm();
}

// Independent oracle: power iteration on A*A.
double power_iteration_norm(const CMatrix& a, std::uint64_t seed) {
  const CMatrix g = a.adjoint() * a;
  CounterRng rng(seed, 99);
  CVector x = random_unit_vector(rng, a.cols());
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    CVector y = g * x;
    const double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    for (auto& z : y) z /= ny;
    const double next = inner(g * y, y).real();
    x = std::move(y);
    if (std::abs(next - lambda) <= 1e-15 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

}  // namespace

TEST(HermEig, DiagonalInput) {
  const CMatrix h{{3.0, 0.0}, {0.0, 1.0}};
  const HermEig e = herm_eig(h);
  EXPECT_EQ(e.eigenvalues[0], 1.0);
  EXPECT_EQ(e.eigenvalues[1], 3.0);
  EXPECT_EQ(std::abs(e.eigenvectors(1, 0)), 1.0);
  EXPECT_EQ(std::abs(e.eigenvectors(0, 1)), 1.0);
}

TEST(HermEig, SwapMatrix) {
  const CMatrix h{{0.0, 1.0}, {1.0, 0.0}};
  const HermEig e = herm_eig(h);
  EXPECT_NEAR(e.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-15);
}

TEST(HermEig, Random4x4Seed7) {
  const CMatrix h = gen_random(EnsembleKind::hermitian, 4, 7);
  const HermEig e = herm_eig(h);
  EXPECT_LE(residual(h, e), 1e-10 * std::max(1.0, h.frobenius_norm()));
}

TEST(HermEig, RejectsNonHermitian) {
  const CMatrix h{{0.0, 1.0}, {0.0, 0.0}};
  try {
    herm_eig(h);
    FAIL() << "expected NotHermitian";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NotHermitian);
  }
}

TEST(HermEig, ThousandRandomResidualsAndOrthonormality) {
  double worst_res = 0.0;
  double worst_orth = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const std::size_t n = 1 + s % 8;
    const CMatrix h = gen_random(EnsembleKind::hermitian, n, 1000 + s);
    const HermEig e = herm_eig(h);
    for (std::size_t k = 1; k < n; ++k) ASSERT_LE(e.eigenvalues[k - 1], e.eigenvalues[k]);
    worst_res = std::max(worst_res, residual(h, e) / std::max(1.0, h.frobenius_norm()));
    const CMatrix& v = e.eigenvectors;
    worst_orth = std::max(worst_orth, (v.adjoint() * v - CMatrix::identity(n)).frobenius_norm());
  }
  EXPECT_LE(worst_res, 1e-10);
  EXPECT_LE(worst_orth, 1e-10);
}

TEST(HermEig, RepeatedEigenvalues) {
  const CMatrix u = gen_random(EnsembleKind::unitary, 5, 3);
  std::vector<cplx> d{2.0, 2.0, 2.0, -1.0, -1.0};
  const CMatrix h = hermitian_part(u * CMatrix::diagonal(d) * u.adjoint());
  const HermEig e = herm_eig(h);
  EXPECT_LE(residual(h, e), 1e-12);
  EXPECT_NEAR(e.eigenvalues[0], -1.0, 1e-13);
  EXPECT_NEAR(e.eigenvalues[4], 2.0, 1e-13);
}

TEST(SpectralNorm, Trivial) {
  EXPECT_EQ(spectral_norm(CMatrix::zero(3)), 0.0);
  EXPECT_NEAR(spectral_norm(CMatrix{{0.0, 1.0}, {0.0, 0.0}}), 1.0, 1e-15);
}

TEST(SpectralNorm, MatchesPowerIteration) {
  const CMatrix a = gen_random(EnsembleKind::ginibre, 3, 11);
  EXPECT_NEAR(spectral_norm(a), power_iteration_norm(a, 11), 1e-10);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const CMatrix b = gen_random(EnsembleKind::ginibre, 2 + s % 5, 500 + s);
    EXPECT_NEAR(spectral_norm(b), power_iteration_norm(b, s), 1e-9 * std::max(1.0, spectral_norm(b)));
  }
}

TEST(SpectralNorm, Rectangular) {
  const CMatrix a(2, 3, {1.0, 0.0, 0.0, 0.0, 2.0, 0.0});
  EXPECT_NEAR(spectral_norm(a), 2.0, 1e-15);
  EXPECT_NEAR(spectral_norm(a.adjoint()), 2.0, 1e-15);
}

TEST(SpectralNorm, UnitaryInvariance) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 2 + s % 5;
    const CMatrix a = gen_random(EnsembleKind::ginibre, n, 2000 + s);
    const CMatrix u = gen_random(EnsembleKind::unitary, n, 3000 + s);
    const CMatrix v = gen_random(EnsembleKind::unitary, n, 4000 + s);
    EXPECT_NEAR(spectral_norm(u * a * v), spectral_norm(a), 1e-9);
  }
}

TEST(ModulusPower, SquareIsGram) {
  const CMatrix s = gen_random(EnsembleKind::ginibre, 4, 5);
  EXPECT_LE((modulus_power(s, 2.0) - s.adjoint() * s).frobenius_norm(), 1e-10);
}

TEST(ModulusPower, Shift) {
  const CMatrix shift{{0.0, 1.0}, {0.0, 0.0}};
  const CMatrix m = modulus_power(shift, 1.0);
  EXPECT_LE((m - CMatrix{{0.0, 0.0}, {0.0, 1.0}}).frobenius_norm(), 1e-15);
}

TEST(ModulusPower, SqrtOfPsdSquaresBack) {
  const CMatrix p = gen_random(EnsembleKind::psd, 4, 3);
  const CMatrix r = modulus_power(p, 0.5);
  EXPECT_LE((r * r - p).frobenius_norm(), 1e-8);
  EXPECT_TRUE(is_psd(r));
}

TEST(ModulusPower, ExponentsAdd) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const CMatrix m = gen_random(EnsembleKind::ginibre, 2 + s % 4, 6000 + s);
    const double a = 0.25 + 0.1 * static_cast<double>(s % 7);
    const double b = 1.5 - 0.2 * static_cast<double>(s % 5);
    const CMatrix lhs = modulus_power(m, a) * modulus_power(m, b);
    EXPECT_LE((lhs - modulus_power(m, a + b)).frobenius_norm(), 1e-8 * std::max(1.0, lhs.frobenius_norm()));
  }
}

TEST(ModulusPower, ZeroExponentOnSingular) {
  const CMatrix shift{{0.0, 1.0}, {0.0, 0.0}};
  EXPECT_LE((modulus_power(shift, 0.0) - CMatrix::identity(2)).frobenius_norm(), 1e-15);
}

TEST(PsdSqrt, HalfIdentity) {
  const CMatrix t = 0.5 * CMatrix::identity(2);
  EXPECT_LE((psd_sqrt_clamped01(t) - t).frobenius_norm(), 1e-15);
}

TEST(PsdSqrt, ProjectionGivesZero) {
  const CMatrix p = gen_random(EnsembleKind::projection, 4, 42);
  EXPECT_LE(psd_sqrt_clamped01(p).frobenius_norm(), 1e-7);
}

TEST(PsdSqrt, DilationIsProjection) {
  const CMatrix t = gen_random(EnsembleKind::contraction01, 3, 5);
  const CMatrix p = projection_dilation(t);
  EXPECT_LE((p * p - p).frobenius_norm(), 1e-8);
  EXPECT_LE((p - p.adjoint()).frobenius_norm(), 1e-12);
}

TEST(PsdSqrt, OutOfRangeSpectrum) {
  const CMatrix t{{1.5, 0.0}, {0.0, 0.2}};
  try {
    psd_sqrt_clamped01(t);
    FAIL() << "expected SpectrumOutOfRange";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::SpectrumOutOfRange);
  }
}

TEST(Blocks, Placement) {
  const CMatrix o = CMatrix::zero(2);
  const CMatrix t = gen_random(EnsembleKind::ginibre, 2, 1);
  const CMatrix s = gen_random(EnsembleKind::ginibre, 2, 2);
  const CMatrix m = block2x2(o, t, s, o);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(m(i, j), cplx{});
      EXPECT_EQ(m(i, j + 2), t(i, j));
      EXPECT_EQ(m(i + 2, j), s(i, j));
      EXPECT_EQ(m(i + 2, j + 2), cplx{});
    }
  }
  const CMatrix i2 = CMatrix::identity(2);
  EXPECT_EQ(block2x2(i2, o, o, i2), CMatrix::identity(4));
}

TEST(Blocks, RoundTripIsBitExact) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CMatrix a = gen_random(EnsembleKind::ginibre, 2, 10 + s);
    const CMatrix b(2, 3, std::vector<cplx>(6, cplx{0.5, -s * 1.0}));
    const CMatrix c = gen_random(EnsembleKind::ginibre, 3, 30 + s).block(0, 0, 3, 2);
    const CMatrix d = gen_random(EnsembleKind::hermitian, 3, 50 + s);
    const Blocks2x2 parts = split2x2(block2x2(a, b, c, d), 2);
    EXPECT_EQ(parts.a, a);
    EXPECT_EQ(parts.b, b);
    EXPECT_EQ(parts.c, c);
    EXPECT_EQ(parts.d, d);
  }
}

TEST(Blocks, ConformalityChecked) {
  EXPECT_THROW(block2x2(CMatrix::zero(2), CMatrix::zero(3), CMatrix::zero(2), CMatrix::zero(2)), Error);
}

TEST(DirectSum, Basics) {
  const CMatrix t = gen_random(EnsembleKind::ginibre, 3, 4);
  EXPECT_EQ(direct_sum(std::vector<CMatrix>{t}), t);
  const std::vector<CMatrix> scalars{CMatrix{{2.0}}, CMatrix{{3.0}}};
  EXPECT_EQ(direct_sum(scalars), (CMatrix{{2.0, 0.0}, {0.0, 3.0}}));
  EXPECT_THROW(direct_sum(std::vector<CMatrix>{}), Error);
}

TEST(DirectSum, NormIsMaxOfBlocks) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const CMatrix t = gen_random(EnsembleKind::ginibre, 2 + s % 3, 70 + s);
    const CMatrix u = gen_random(EnsembleKind::ginibre, 3, 170 + s);
    const std::vector<CMatrix> blocks{t, u};
    EXPECT_NEAR(spectral_norm(direct_sum(blocks)), std::max(spectral_norm(t), spectral_norm(u)), 1e-12);
  }
}

TEST(Ensembles, StructuralGuaranteesOnThousandDraws) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const std::size_t n = 2 + s % 5;
    const CMatrix h = gen_random(EnsembleKind::hermitian, n, s);
    ASSERT_EQ(h, h.adjoint());
    ASSERT_TRUE(is_unitary(gen_random(EnsembleKind::unitary, n, s)));
    const CMatrix p = gen_random(EnsembleKind::psd, n, s);
    ASSERT_TRUE(is_psd(p));
    const HermEig ce = herm_eig(gen_random(EnsembleKind::contraction01, n, s));
    ASSERT_GE(ce.eigenvalues.front(), -1e-12);
    ASSERT_LE(ce.eigenvalues.back(), 1.0 + 1e-12);
    ASSERT_TRUE(is_projection(gen_random(EnsembleKind::projection, n, s)));
    const CMatrix t = gen_random(EnsembleKind::nilpotent_sq_zero, n, s);
    ASSERT_LE((t * t).frobenius_norm(), 1e-10);
  }
}

TEST(Ensembles, SpecExamples) {
  const CMatrix p = gen_random(EnsembleKind::projection, 4, 42);
  EXPECT_LE((p * p - p).frobenius_norm(), 1e-10);
  const CMatrix t = gen_random(EnsembleKind::nilpotent_sq_zero, 4, 42);
  EXPECT_LE((t * t).frobenius_norm(), 1e-10);
  EXPECT_GT(t.frobenius_norm(), 0.1);
  EXPECT_EQ(gen_random(EnsembleKind::unitary, 3, 1), gen_random(EnsembleKind::unitary, 3, 1));
}

TEST(Ensembles, GinibreMoments) {
  double sum_sq = 0.0;
  cplx sum = 0.0;
  const int draws = 400;
  for (int s = 0; s < draws; ++s) {
    const CMatrix g = gen_random(EnsembleKind::ginibre, 5, static_cast<std::uint64_t>(s));
    for (const auto& z : g.data()) {
      sum += z;
      sum_sq += std::norm(z);
    }
  }
  const double count = draws * 25.0;
  EXPECT_NEAR(sum_sq / count, 1.0, 0.03);
  EXPECT_NEAR(std::abs(sum / count), 0.0, 0.03);
}

TEST(Ensembles, BadDimension) {
  EXPECT_THROW(gen_random(EnsembleKind::ginibre, 0, 1), Error);
  try {
    gen_random(EnsembleKind::nilpotent_sq_zero, 1, 1);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::BadDimension);
  }
}

TEST(Ensembles, NamesRoundTrip) {
  for (auto k : {EnsembleKind::ginibre, EnsembleKind::hermitian, EnsembleKind::unitary, EnsembleKind::psd,
                 EnsembleKind::contraction01, EnsembleKind::projection, EnsembleKind::nilpotent_sq_zero}) {
    EXPECT_EQ(ensemble_from_string(to_string(k)), k);
  }
}

TEST(CMatrixInvariants, RejectsNonFiniteAndWrongLength) {
  EXPECT_THROW(CMatrix(2, 2, std::vector<cplx>(3)), Error);
  EXPECT_THROW(CMatrix(1, 1, std::vector<cplx>{cplx{std::nan(""), 0.0}}), Error);
}

TEST(CounterRng, StreamsAreIndependentOfOrder) {
  CounterRng a(5, 1), b(5, 1), c(5, 2);
  for (int i = 0; i < 10; ++i) c.next_u64();
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  CounterRng d(5, 2);
  EXPECT_NE(a.next_u64(), d.next_u64());
}
