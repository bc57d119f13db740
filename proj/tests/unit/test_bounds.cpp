#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qrad/bounds.hpp"
#include "qrad/error.hpp"
#include "qrad/json_io.hpp"
#include "qrad/linalg.hpp"
#include "qrad/random.hpp"

using namespace qrad;

namespace {

const CMatrix kShift{{0.0, 1.0}, {0.0, 0.0}};

CheckContext ctx(std::uint64_t seed = 1) { return CheckContext{kVerifyEffort, seed, nullptr}; }

const IneqReport& find(const std::vector<IneqReport>& rs, std::string_view name) {
  for (const IneqReport& r : rs) {
    if (r.name == name) return r;
  }
  throw std::runtime_error("no report named " + std::string(name));
}

void expect_all_pass(const std::vector<IneqReport>& rs) {
  for (const IneqReport& r : rs) {
    EXPECT_TRUE(r.pass) << r.suite << "/" << r.name << " lhs=" << r.lhs << " rhs=" << r.rhs << " slack=" << r.slack;
  }
}

CMatrix ginibre(std::size_t n, std::uint64_t seed) { return gen_random(EnsembleKind::ginibre, n, seed); }

}  // namespace

TEST(Tolerances, PerClass) {
  EXPECT_EQ(class_tolerance(CheckClass::upper, false), 1e-8);
  EXPECT_EQ(class_tolerance(CheckClass::lower, false), 1e-6);
  EXPECT_EQ(class_tolerance(CheckClass::lower, true), 1e-10);
  EXPECT_EQ(class_tolerance(CheckClass::equality, false), 2e-6);
  EXPECT_EQ(class_tolerance(CheckClass::equality, true), 1e-8);
  EXPECT_EQ(class_tolerance(CheckClass::vector, false), 1e-12);
}

TEST(UpperSurrogate, BoundsEstimateFromAbove) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 3;
    const CMatrix t = ginibre(n, 900 + seed);
    for (double q : {0.2, 0.6, 1.0}) {
      const double hi = wq_upper(t, QValue(q));
      EXPECT_LE(estimate_wq(t, QValue(q), kVerifyEffort, seed).value, hi + 1e-12);
      EXPECT_LE(hi, spectral_norm(t) + 1e-12);
    }
  }
}

TEST(UpperSurrogate, ExactOnTwoByTwo) {
  const CMatrix t = ginibre(2, 5);
  EXPECT_EQ(wq_upper(t, QValue(0.4)), wq_2x2_exact(t, QValue(0.4)).value);
}

TEST(NormSandwich, ZeroHasZeroSlack) {
  for (const IneqReport& r : check_norm_sandwich(ctx(), CMatrix::zero(3), QValue(0.5))) {
    EXPECT_EQ(r.slack, 0.0);
    EXPECT_TRUE(r.pass);
  }
}

TEST(NormSandwich, ShiftMatrix) {
  const auto rs = check_norm_sandwich(ctx(), kShift, QValue(0.6));
  EXPECT_NEAR(find(rs, "norm_lower").lhs, 0.3, 1e-15);
  EXPECT_NEAR(find(rs, "norm_lower").rhs, 0.9, 1e-12);
  EXPECT_NEAR(find(rs, "norm_upper").rhs, 1.0, 1e-12);
  EXPECT_TRUE(find(rs, "norm_lower").exact);
  expect_all_pass(rs);
}

TEST(NormSandwich, IdentityThree) {
  const auto rs = check_norm_sandwich(ctx(), CMatrix::identity(3), QValue(0.5));
  EXPECT_NEAR(find(rs, "norm_lower").lhs, 0.25, 1e-15);
  EXPECT_NEAR(find(rs, "norm_upper").lhs, 0.5, 1e-9);
  EXPECT_NEAR(find(rs, "norm_upper").rhs, 1.0, 1e-12);
  expect_all_pass(rs);
}

TEST(PowerIneq, FirstPowerHolds) {
  const auto rs = check_power_ineq(ctx(), ginibre(3, 2), QValue(0.7), 1);
  EXPECT_GE(rs[0].slack, 0.0);
}

TEST(PowerIneq, NilpotentSquareHasZeroLhs) {
  const CMatrix t = gen_random(EnsembleKind::nilpotent_sq_zero, 4, 42);
  EXPECT_NEAR(check_power_ineq(ctx(), t, QValue(0.5), 2)[0].lhs, 0.0, 1e-9);
}

TEST(PowerIneq, DiagonalSign) {
  const CMatrix t{{1.0, 0.0}, {0.0, -1.0}};
  const IneqReport r = check_power_ineq(ctx(), t, QValue(0.6), 2)[0];
  EXPECT_NEAR(r.lhs, 0.36, 1e-12);
  EXPECT_NEAR(r.rhs, 1.0, 1e-12);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.pass);
}

TEST(BasicProps, ZeroScalar) {
  const CMatrix t = ginibre(2, 3);
  const auto rs = check_basic_props(ctx(), t, t, t, t, QValue(0.4), 0.3, 0.0);
  EXPECT_EQ(find(rs, "homogeneity").lhs, 0.0);
  EXPECT_EQ(find(rs, "homogeneity").rhs, 0.0);
}

TEST(BasicProps, BlockPhaseAtPi) {
  const auto rs = check_basic_props(ctx(17), ginibre(2, 170), ginibre(2, 171), ginibre(2, 172), ginibre(2, 173),
                                    QValue(0.6), std::numbers::pi, {0.3, -1.1});
  EXPECT_LE(std::abs(find(rs, "offdiag_phase").slack), 2e-6);
  expect_all_pass(rs);
}

TEST(BasicProps, DiagonalMatrixEqualsItsDiagonalPart) {
  const CMatrix z = CMatrix::zero(2);
  const auto rs = check_basic_props(ctx(), ginibre(2, 8), z, z, ginibre(2, 9), QValue(0.6), 1.0, 2.0);
  EXPECT_NEAR(find(rs, "diag_part_below_full").slack, 0.0, 2e-6);
  expect_all_pass(rs);
}

TEST(Sandwich, ZeroBlocks) {
  const CMatrix z = CMatrix::zero(2);
  for (SandwichKind k : {SandwichKind::diag, SandwichKind::sym, SandwichKind::skew, SandwichKind::direct_sum}) {
    for (const IneqReport& r : check_sandwich(ctx(), k, z, z, QValue(0.5))) {
      EXPECT_EQ(r.lhs, 0.0);
      EXPECT_EQ(r.rhs, 0.0);
    }
  }
}

TEST(Sandwich, DiagonalShift) {
  const auto rs = check_sandwich(ctx(), SandwichKind::diag, kShift, CMatrix::zero(2), QValue(0.6));
  const IneqReport& lo = find(rs, "diag_lower");
  const IneqReport& up = find(rs, "diag_upper");
  EXPECT_NEAR(lo.lhs, 0.9, 1e-12);
  EXPECT_GE(lo.rhs, 0.9 - 1e-9);
  EXPECT_NEAR(up.rhs, 11.0 / 3.0 * 0.9, 1e-12);
  EXPECT_LE(up.lhs, 3.3);
  expect_all_pass(rs);
}

TEST(Sandwich, SymmetricWithZeroFirstBlock) {
  const CMatrix b = ginibre(2, 12);
  const auto rs = check_sandwich(ctx(), SandwichKind::sym, CMatrix::zero(2), b, QValue(0.6));
  EXPECT_NEAR(find(rs, "sym_lower").lhs, wq_2x2_exact(b, QValue(0.6)).value, 1e-12);
  expect_all_pass(rs);
}

TEST(Sandwich, DirectSumOfThree) {
  const CMatrix blocks[] = {ginibre(2, 1), ginibre(3, 2), ginibre(2, 3)};
  expect_all_pass(check_direct_sum_sandwich(ctx(), blocks, QValue(0.5)));
}

TEST(AlphaR, ZeroMatrix) {
  const IneqReport r = check_alpha_r_upper(ctx(), CMatrix::zero(2), QValue(0.5), 0.5, 1.0)[0];
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_NEAR(r.rhs, 0.0, 1e-15);
}

TEST(AlphaR, ShiftArithmetic) {
  const IneqReport r = check_alpha_r_upper(ctx(), kShift, QValue(0.6), 0.5, 1.0)[0];
  EXPECT_NEAR(r.lhs, 0.81, 1e-12);
  EXPECT_NEAR(r.rhs, 0.36 * 0.5 + 0.64 * 1.0 + 0.96, 1e-12);
}

TEST(AlphaR, RandomThreeByThree) {
  const CMatrix s = ginibre(3, 23);
  for (double alpha : {0.0, 0.5, 1.0}) {
    for (double r : {1.0, 2.0}) expect_all_pass(check_alpha_r_upper(ctx(23), s, QValue(0.6), alpha, r));
  }
}

TEST(AlphaR, RejectsBadParameters) {
  EXPECT_THROW(check_alpha_r_upper(ctx(), kShift, QValue(1.0), 0.5, 1.0), Error);
  EXPECT_THROW(check_alpha_r_upper(ctx(), kShift, QValue(0.5), 1.5, 1.0), Error);
  EXPECT_THROW(check_alpha_r_upper(ctx(), kShift, QValue(0.5), 0.5, 0.5), Error);
}

TEST(FourBlock, ZeroAndSymmetricDiagonal) {
  const CMatrix z = CMatrix::zero(2);
  const IneqReport r = check_four_block_upper(ctx(), z, z, z, z, QValue(0.6))[0];
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  const CMatrix p = ginibre(2, 4);
  expect_all_pass(check_four_block_upper(ctx(), p, z, z, p, QValue(0.6)));
}

TEST(FourBlock, RandomBlocks) {
  expect_all_pass(
      check_four_block_upper(ctx(29), ginibre(2, 290), ginibre(2, 291), ginibre(2, 292), ginibre(2, 293), QValue(0.6)));
}

TEST(Nilpotent, ShiftClosedForm) {
  const auto rs = check_nilpotent_upper(ctx(), kShift, QValue(0.6));
  EXPECT_NEAR(find(rs, "nilpotent").lhs, 0.9, 1e-12);
  EXPECT_NEAR(find(rs, "nilpotent").rhs, 1.1, 1e-12);
  expect_all_pass(rs);
}

TEST(Nilpotent, ZeroAndQZero) {
  for (const IneqReport& r : check_nilpotent_upper(ctx(), CMatrix::zero(2), QValue(0.3))) EXPECT_EQ(r.slack, 0.0);
  const CMatrix t = gen_random(EnsembleKind::nilpotent_sq_zero, 4, 7);
  const auto rs = check_nilpotent_upper(ctx(), t, QValue(0.0));
  EXPECT_NEAR(find(rs, "nilpotent").rhs, spectral_norm(t), 1e-12);
  expect_all_pass(rs);
}

TEST(Nilpotent, RejectsNonNilpotent) {
  try {
    check_nilpotent_upper(ctx(), CMatrix::identity(2), QValue(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNilpotent);
  }
}

TEST(OffdiagBounds, ZeroBlocks) {
  const CMatrix z = CMatrix::zero(2);
  for (const IneqReport& r : check_offdiag_bounds(ctx(), z, z, QValue(0.5))) {
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
  }
}

TEST(OffdiagBounds, OppositeBlocksCancelTheNormTerm) {
  const CMatrix t = ginibre(2, 77);
  const IneqReport r = find(check_offdiag_bounds(ctx(), t, -t, QValue(0.5)), "offdiag_lower");
  EXPECT_EQ(r.params.at("norm_plus"), 0.0);
  EXPECT_NEAR(r.lhs, wq_2x2_exact(t, QValue(0.5)).value, 1e-12);
  EXPECT_TRUE(r.pass);
}

TEST(OffdiagBounds, RandomBlocks) {
  for (double q : {0.3, 0.6, 0.9}) expect_all_pass(check_offdiag_bounds(ctx(31), ginibre(2, 310), ginibre(2, 311), QValue(q)));
}

TEST(LowerProducts, ZeroProducts) {
  const auto rs = check_lower_products(ctx(), ginibre(2, 1), kShift, kShift, ginibre(2, 2), QValue(0.6), 2);
  EXPECT_EQ(find(rs, "product_lower").lhs, 0.0);
  EXPECT_EQ(find(rs, "power_lower").lhs, 0.0);
  expect_all_pass(rs);
}

TEST(LowerProducts, IdentityBlocks) {
  const CMatrix i2 = CMatrix::identity(2);
  const IneqReport r = find(check_lower_products(ctx(), i2, i2, i2, i2, QValue(0.6), 1), "product_lower");
  EXPECT_NEAR(r.lhs, 0.3 * 1.2, 1e-12);
  EXPECT_NEAR(r.rhs, 1.0, 1e-6);
  EXPECT_TRUE(r.pass);
}

TEST(LowerProducts, RandomBlocks) {
  for (unsigned n : {1u, 2u, 3u}) {
    expect_all_pass(check_lower_products(ctx(n), ginibre(2, 40), ginibre(2, 41), ginibre(2, 42), ginibre(2, 43),
                                         QValue(0.5), n));
  }
}

TEST(PowerStructure, FirstPowerIsExact) {
  const auto rs = check_power_structure(ctx(), ginibre(2, 3), ginibre(2, 4), QValue(0.6), 1);
  EXPECT_EQ(find(rs, "block_power_identity").lhs, 0.0);
}

TEST(PowerStructure, ZeroSecondBlock) {
  const IneqReport r = find(check_power_structure(ctx(), ginibre(3, 3), CMatrix::zero(3), QValue(0.6), 4),
                            "block_power_identity");
  EXPECT_LE(r.lhs, 1e-12);
}

TEST(PowerStructure, RandomCubes) {
  const auto rs = check_power_structure(ctx(37), ginibre(2, 370), ginibre(2, 371), QValue(0.6), 3);
  EXPECT_LE(find(rs, "block_power_identity").params.at("residual_sum"), 1e-8);
  EXPECT_LE(find(rs, "block_power_identity").params.at("residual_difference"), 1e-8);
  expect_all_pass(rs);
}

TEST(VectorInequalities, DegenerateCases) {
  CounterRng rng(5, 0);
  const CVector a = random_gaussian_vector(rng, 4);
  const CVector b = random_gaussian_vector(rng, 4);
  CVector c = a;
  normalize(c);
  const CMatrix s = ginibre(4, 1), pos = gen_random(EnsembleKind::psd, 4, 2);
  const IneqReport gram = find(check_vector_inequalities(ctx(), s, pos, a, a, c, 1.0, 0.5), "gram_gap");
  EXPECT_NEAR(gram.lhs, 0.0, 1e-12);
  EXPECT_EQ(gram.rhs, 0.0);
  EXPECT_TRUE(gram.pass);
  const IneqReport bz = find(check_vector_inequalities(ctx(), s, pos, a, b, c, 0.3, 0.5), "buzano");
  EXPECT_NEAR(bz.lhs, 2.0 * std::abs(inner(a, b)), 1e-12);
}

TEST(VectorInequalities, RandomTuples) {
  CounterRng rng(41, 0);
  long failures = 0;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const CMatrix s = gen_random(EnsembleKind::ginibre, 5, 4100 + k);
    const CMatrix pos = gen_random(EnsembleKind::psd, 5, 8200 + k);
    const CVector a = random_gaussian_vector(rng, 5), b = random_gaussian_vector(rng, 5);
    const CVector c = random_unit_vector(rng, 5);
    for (const IneqReport& r : check_vector_inequalities(ctx(), s, pos, a, b, c, rng.normal(), rng.uniform())) {
      worst = std::min(worst, r.slack);
      if (!r.pass) ++failures;
    }
  }
  EXPECT_EQ(failures, 0) << "worst slack " << worst;
}

TEST(VectorInequalities, RejectsIndefinite) {
  const CMatrix h{{1.0, 0.0}, {0.0, -1.0}};
  const CVector v{1.0, 0.0};
  try {
    check_vector_inequalities(ctx(), h, h, v, v, v, 0.0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositive);
  }
}

TEST(RadiusGap, HermitianAtLambdaOne) {
  const CMatrix h = gen_random(EnsembleKind::hermitian, 3, 6);
  const cplx one = 1.0;
  const IneqReport r = check_radius_gap(ctx(), h, QValue(0.6), std::span<const cplx>(&one, 1))[0];
  EXPECT_NEAR(r.rhs, 0.0, 1e-20);
  EXPECT_LE(r.lhs, 1e-9);
}

TEST(RadiusGap, ShiftAndZero) {
  const cplx one = 1.0;
  const IneqReport r = check_radius_gap(ctx(), kShift, QValue(0.6), std::span<const cplx>(&one, 1))[0];
  EXPECT_NEAR(r.lhs, 0.81, 1e-9);
  EXPECT_NEAR(r.rhs, 1.0 / 0.36, 1e-12);
  for (const IneqReport& z : check_radius_gap(ctx(), CMatrix::zero(2), QValue(0.6), default_lambda_grid(1))) {
    EXPECT_EQ(z.slack, 0.0);
  }
}

TEST(RadiusGap, DefaultGrid) {
  const auto grid = default_lambda_grid(9);
  ASSERT_EQ(grid.size(), 10u);
  for (int k = 4; k < 8; ++k) EXPECT_NEAR(std::abs(grid[k]), 1.0, 1e-15);
  EXPECT_EQ(grid[8], 0.5);
  EXPECT_EQ(grid[9], 2.0);
}

// Near-Hermitian T breaks the inequality: w_q(T)² stays near 1 while
// w(T²) and ‖λT − T*‖ are both close to their Hermitian values.
TEST(RadiusGap, FlagsKnownCounterexample) {
  const cplx e{0.0, 0.01};
  const CMatrix t{{1.0, e}, {e, -1.0}};
  const auto grid = default_lambda_grid(1);
  const auto rs = check_radius_gap(ctx(), t, QValue(0.6), grid);
  const IneqReport& at_one = rs[0];
  EXPECT_NEAR(at_one.lhs, 0.01616, 5e-5);
  EXPECT_NEAR(at_one.rhs, 0.00111, 5e-5);
  EXPECT_FALSE(at_one.pass);
}

TEST(OffdiagProduct, AdjointPair) {
  const CMatrix t = ginibre(2, 19);
  const IneqReport r = check_offdiag_product_upper(ctx(), t, t.adjoint(), QValue(0.6))[0];
  EXPECT_NEAR(r.rhs, spectral_norm(t), 1e-9);
  EXPECT_TRUE(r.pass);
}

TEST(OffdiagProduct, ZeroAndRandom) {
  const IneqReport z = check_offdiag_product_upper(ctx(), CMatrix::zero(2), CMatrix::zero(2), QValue(0.6))[0];
  EXPECT_EQ(z.slack, 0.0);
  expect_all_pass(check_offdiag_product_upper(ctx(43), ginibre(2, 430), ginibre(2, 431), QValue(0.6)));
}

// [[0,5],[4,0]] has w_q = c + p·d with c = 4.5, d = 0.5, while the bound
// gives √(20 + 1/q²).
TEST(OffdiagProduct, FlagsScalarCounterexample) {
  const CMatrix t{{5.0}}, s{{4.0}};
  const double q = 0.9, p = std::sqrt(1.0 - q * q);
  const IneqReport r = check_offdiag_product_upper(ctx(), t, s, QValue(q))[0];
  EXPECT_NEAR(r.lhs, 4.5 + 0.5 * p, 1e-12);
  EXPECT_NEAR(r.rhs, std::sqrt(20.0 + 1.0 / (q * q)), 1e-9);
  EXPECT_FALSE(r.pass);
}

TEST(Buzano, ZeroBlocks) {
  const CMatrix z = CMatrix::zero(2);
  for (const IneqReport& r : check_buzano_uppers(ctx(), z, z, z, z, QValue(0.6), CMatrix::identity(2))) {
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
  }
}

TEST(Buzano, AdjointPairWithIdentity) {
  const CMatrix p = ginibre(2, 61);
  const auto rs = check_buzano_uppers(ctx(), p, p.adjoint(), ginibre(2, 62), ginibre(2, 63), QValue(0.6),
                                      CMatrix::identity(2));
  EXPECT_NEAR(find(rs, "unitary_sum").rhs, 2.0 * spectral_norm(p), 1e-9);
  EXPECT_LE(find(rs, "unitary_sum").lhs, spectral_norm(p + p.adjoint()) + 1e-12);
  EXPECT_TRUE(find(rs, "unitary_sum").pass);
}

TEST(Buzano, RandomBlocks) {
  const auto rs = check_buzano_uppers(ctx(47), ginibre(2, 470), ginibre(2, 471), ginibre(2, 472), ginibre(2, 473),
                                      QValue(0.6), gen_random(EnsembleKind::unitary, 2, 474));
  EXPECT_EQ(rs.size(), 7u);
  expect_all_pass(rs);
}

TEST(Buzano, RejectsNonUnitary) {
  const CMatrix t = ginibre(2, 1);
  EXPECT_THROW(check_buzano_uppers(ctx(), t, t, t, t, QValue(0.5), t), Error);
}

TEST(Commutators, TrivialProjections) {
  const CMatrix t = ginibre(3, 50);
  for (const CMatrix& p : {CMatrix::identity(3), CMatrix::zero(3)}) {
    const IneqReport r = check_commutators(ctx(), CommutatorKind::projection, t, p, QValue(0.5))[0];
    EXPECT_NEAR(r.lhs, 0.0, 1e-12);
  }
}

TEST(Commutators, PolynomialCommutes) {
  const CMatrix t = gen_random(EnsembleKind::psd, 3, 51);
  const CMatrix x = t * t + cplx{0.0, 2.0} * t;
  const IneqReport r = check_commutators(ctx(), CommutatorKind::positive, t, x, QValue(0.5))[0];
  EXPECT_NEAR(r.lhs, 0.0, 1e-9);
}

TEST(Commutators, RandomPositive) {
  const CMatrix t = gen_random(EnsembleKind::psd, 3, 53);
  expect_all_pass(check_commutators(ctx(59), CommutatorKind::positive, t, ginibre(3, 59), QValue(0.6)));
  const CMatrix proj = gen_random(EnsembleKind::projection, 3, 60);
  expect_all_pass(check_commutators(ctx(59), CommutatorKind::projection, ginibre(3, 61), proj, QValue(0.6)));
}

TEST(Commutators, RejectsWrongStructure) {
  const CMatrix t = ginibre(2, 1);
  EXPECT_THROW(check_commutators(ctx(), CommutatorKind::projection, t, t, QValue(0.5)), Error);
  EXPECT_THROW(check_commutators(ctx(), CommutatorKind::positive, t, t, QValue(0.5)), Error);
}

TEST(Replay, ReproducesEverySuite) {
  const CMatrix a = ginibre(3, 1), b = ginibre(3, 2), c = ginibre(3, 3), d = ginibre(3, 4);
  const CMatrix u = gen_random(EnsembleKind::unitary, 3, 5);
  const CMatrix pos = gen_random(EnsembleKind::psd, 3, 6), proj = gen_random(EnsembleKind::projection, 3, 7);
  const QValue q(0.45);
  const CheckContext cx = ctx(99);
  CounterRng rng(3, 0);
  const CVector va = random_gaussian_vector(rng, 3), vb = random_gaussian_vector(rng, 3), vc = random_unit_vector(rng, 3);
  std::vector<std::vector<IneqReport>> all{
      check_norm_sandwich(cx, a, q),
      check_power_ineq(cx, a, q, 3),
      check_basic_props(cx, a, b, c, d, q, 0.7, {0.5, 0.5}),
      check_sandwich(cx, SandwichKind::skew, a, b, q),
      check_sandwich(cx, SandwichKind::direct_sum, a, b, q),
      check_alpha_r_upper(cx, a, q, 0.25, 2.0),
      check_four_block_upper(cx, a, b, c, d, q),
      check_nilpotent_upper(cx, gen_random(EnsembleKind::nilpotent_sq_zero, 4, 8), q),
      check_offdiag_bounds(cx, a, b, q),
      check_lower_products(cx, a, b, c, d, q, 2),
      check_power_structure(cx, a, b, q, 2),
      check_vector_inequalities(cx, a, pos, va, vb, vc, 0.4, 0.3),
      check_radius_gap(cx, a, q, default_lambda_grid(4)),
      check_offdiag_product_upper(cx, a, b, q),
      check_buzano_uppers(cx, a, b, c, d, q, u),
      check_commutators(cx, CommutatorKind::projection, a, proj, q),
      check_commutators(cx, CommutatorKind::positive, pos, a, q),
  };
  int replayed = 0;
  for (const auto& rs : all) {
    for (const IneqReport& r : rs) {
      const IneqReport back = replay(report_from_json(nlohmann::json::parse(report_to_json(r).dump())));
      EXPECT_NEAR(back.lhs, r.lhs, 1e-9) << r.suite << "/" << r.name;
      EXPECT_NEAR(back.rhs, r.rhs, 1e-9) << r.suite << "/" << r.name;
      ++replayed;
    }
  }
  EXPECT_GT(replayed, 40);
}

TEST(Audit, RecordsEstimatorCertificates) {
  CertificateAudit audit;
  const CheckContext cx{kVerifyEffort, 3, &audit};
  check_four_block_upper(cx, ginibre(2, 1), ginibre(2, 2), ginibre(2, 3), ginibre(2, 4), QValue(0.6));
  EXPECT_EQ(audit.checked, 1);
  EXPECT_EQ(audit.failures, 0);
  EXPECT_LE(audit.worst_value_gap, 1e-10);
}

TEST(Audit, FlagsForgedCertificate) {
  const CMatrix t = ginibre(3, 1);
  RadiusEstimate e = estimate_wq(t, QValue(0.5), 4, 50, 1);
  e.value += 1e-6;
  CertificateAudit audit;
  audit.record(t, e);
  EXPECT_EQ(audit.failures, 1);
}

// More restarts only add starting points, so the certified value cannot drop.
TEST(Effort, MoreRestartsNeverLowerTheCertifiedValue) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const CMatrix t = ginibre(4, 300 + seed);
    double prev = 0.0;
    for (int restarts : {1, 4, 16, 64}) {
      const double v = estimate_wq(t, QValue(0.35), restarts, 300, seed).value;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}
