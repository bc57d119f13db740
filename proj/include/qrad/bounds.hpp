#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrad/cmatrix.hpp"
#include "qrad/qradius.hpp"

// Inequalities for the q-numerical radius as checkable predicates.
//
// Every check returns IneqReports oriented so that slack = rhs − lhs ≥ 0
// when the inequality holds. For upper bounds the lhs w_q is a certified
// lower estimate (attained by a witness) and any w_q on the large side is
// replaced by a certified upper surrogate, so a failing report is a genuine
// counterexample or a bug, never optimizer noise.
namespace qrad {

enum class CheckClass { upper, lower, equality, vector };
std::string_view to_string(CheckClass c);

/// upper 1e-8; lower 1e-6 (1e-10 when every radius is exact);
/// equality 2e-6 (1e-8 exact or structural); vector 1e-12.
double class_tolerance(CheckClass c, bool exact);

struct IneqReport {
  std::string suite;  // check_* family that produced it
  std::string name;   // which inequality of the family
  CheckClass check_class = CheckClass::upper;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double q = 0.0;
  std::map<std::string, double> params;
  std::map<std::string, CMatrix> witnesses;  // inputs; vectors stored as columns
  bool exact = false;
  double tol = 0.0;
  bool pass = false;
  Effort effort;
  std::uint64_t seed = 0;
};

/// Re-checks every estimator certificate seen during a run.
struct CertificateAudit {
  long checked = 0;
  long failures = 0;
  double worst_value_gap = 0.0;
  double worst_admissibility = 0.0;

  void record(const CMatrix& t, const RadiusEstimate& e);
  void merge(const CertificateAudit& other);
};

struct CheckContext {
  Effort effort = kVerifyEffort;
  std::uint64_t seed = 0;
  CertificateAudit* audit = nullptr;
};

/// min(‖S‖, sqrt(q²‖(S*S + SS*)/2‖ + (1 − q² + 2q√(1−q²))‖S‖²)); the exact
/// value for 2×2 S.
double wq_upper(const CMatrix& s, QValue q);

enum class SandwichKind { diag, sym, skew, direct_sum };
std::string_view to_string(SandwichKind k);

enum class CommutatorKind { projection, positive };
std::string_view to_string(CommutatorKind k);

std::vector<IneqReport> check_norm_sandwich(const CheckContext& ctx, const CMatrix& t, QValue q);

std::vector<IneqReport> check_power_ineq(const CheckContext& ctx, const CMatrix& t, QValue q, unsigned n);

/// Homogeneity, subadditivity, unitary invariance and phase of q on T₁;
/// block swaps and phase on the 2×2 block matrices; diagonal and
/// off-diagonal parts against the full [[T₁,T₂],[T₃,T₄]].
std::vector<IneqReport> check_basic_props(const CheckContext& ctx, const CMatrix& t1, const CMatrix& t2,
                                          const CMatrix& t3, const CMatrix& t4, QValue q, double theta,
                                          cplx lambda);

/// diag: diag(A,B); sym: [[A,B],[B,A]]; skew: [[B,−A],[A,B]]. Brackets W(M)
/// between the max of the block radii and (q+2p)/q times it.
std::vector<IneqReport> check_sandwich(const CheckContext& ctx, SandwichKind kind, const CMatrix& a,
                                       const CMatrix& b, QValue q);
/// The same bracket for a direct sum of any number of blocks.
std::vector<IneqReport> check_direct_sum_sandwich(const CheckContext& ctx, std::span<const CMatrix> blocks,
                                                  QValue q);

/// W(S)^{2r} against the mixed |S|, |S*| power bound. Needs 0 < q < 1.
std::vector<IneqReport> check_alpha_r_upper(const CheckContext& ctx, const CMatrix& s, QValue q, double alpha,
                                            double r);

std::vector<IneqReport> check_four_block_upper(const CheckContext& ctx, const CMatrix& p, const CMatrix& q_blk,
                                               const CMatrix& r, const CMatrix& s, QValue q);

/// T² = 0: W(T) and W([[T,T],[−T,−T]]) against the nilpotent factor. Needs q < 1.
std::vector<IneqReport> check_nilpotent_upper(const CheckContext& ctx, const CMatrix& t, QValue q);

/// Upper and lower bounds on W([[O,T₂],[T₃,O]]). Needs 0 < q < 1.
std::vector<IneqReport> check_offdiag_bounds(const CheckContext& ctx, const CMatrix& t2, const CMatrix& t3,
                                             QValue q);

/// Lower bounds from (anti)commutators and powers of T₂T₃; the four-block
/// form uses T₁ and T₄ as diagonal blocks.
std::vector<IneqReport> check_lower_products(const CheckContext& ctx, const CMatrix& t1, const CMatrix& t2,
                                             const CMatrix& t3, const CMatrix& t4, QValue q, unsigned n);

/// Block structure of [[T₁,T₂],[T₂,T₁]]ⁿ, and W(M^{2n}) for M = [[T₁,T₂],[−T₂,−T₁]].
std::vector<IneqReport> check_power_structure(const CheckContext& ctx, const CMatrix& t1, const CMatrix& t2,
                                              QValue q, unsigned n);

/// Schwarz (positive `pos`), mixed Schwarz (S, α and α = ½) on the pair
/// (a, b), and the two Buzano-type vector inequalities with unit c and real t.
std::vector<IneqReport> check_vector_inequalities(const CheckContext& ctx, const CMatrix& s, const CMatrix& pos,
                                                  std::span<const cplx> a, std::span<const cplx> b,
                                                  std::span<const cplx> c, double t, double alpha);

/// W(T)² − w(T²) against ‖λT − T*‖²/q², one report per λ.
std::vector<IneqReport> check_radius_gap(const CheckContext& ctx, const CMatrix& t, QValue q,
                                         std::span<const cplx> lambdas);
/// {1, −1, i, −i}, four random unit-modulus scalars, {0.5, 2}.
std::vector<cplx> default_lambda_grid(std::uint64_t seed);

std::vector<IneqReport> check_offdiag_product_upper(const CheckContext& ctx, const CMatrix& t, const CMatrix& s,
                                                    QValue q);

/// W(PR ± R*Q) for both signs, the same with R = U unitary (and with Q = P),
/// and max{W(P), W(S)} for T = [[P,Q],[R,S]].
std::vector<IneqReport> check_buzano_uppers(const CheckContext& ctx, const CMatrix& p, const CMatrix& q_blk,
                                            const CMatrix& r, const CMatrix& s, QValue q, const CMatrix& u);

/// projection: W(TP − PT) with P = `x` a projection; positive: W(TX − XT)
/// with T = `t` positive.
std::vector<IneqReport> check_commutators(const CheckContext& ctx, CommutatorKind kind, const CMatrix& t,
                                          const CMatrix& x, QValue q);

/// Re-runs the check that produced `r` from its stored inputs and returns
/// the report with the same name. Throws ParseError if inputs are missing.
IneqReport replay(const IneqReport& r);

/// Every suite name accepted by the sweep, in order.
std::span<const std::string_view> suite_names();

}  // namespace qrad
