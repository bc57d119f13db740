#include "qrad/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qrad/error.hpp"
#include "qrad/linalg.hpp"
#include "qrad/random.hpp"

namespace qrad {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Radius {
  double value = 0.0;
  bool exact = false;
};

// Certified w_q values for one check. Each estimator call gets its own seed
// from a running counter, so re-running a check reproduces every number.
class Radii {
 public:
  Radii(const CheckContext& ctx, QValue q) : ctx_(ctx), q_(q) {}

  Radius low(const CMatrix& m) {
    const std::uint64_t seed = derive_seed(ctx_.seed, {0xB0D5ULL, calls_++});
    if (m.rows() == 2) return {wq_2x2_exact(m, q_).value, true};
    const RadiusEstimate e = estimate_wq(m, q_, ctx_.effort, seed);
    if (ctx_.audit != nullptr) ctx_.audit->record(m, e);
    return {e.value, false};
  }

  double high(const CMatrix& m) const { return wq_upper(m, q_); }

 private:
  const CheckContext& ctx_;
  QValue q_;
  std::uint64_t calls_ = 0;
};

class Builder {
 public:
  Builder(const CheckContext& ctx, std::string_view suite, double q) {
    base_.suite = suite;
    base_.q = q;
    base_.effort = ctx.effort;
    base_.seed = ctx.seed;
  }

  Builder& witness(const std::string& key, const CMatrix& m) {
    base_.witnesses[key] = m;
    return *this;
  }
  Builder& witness(const std::string& key, std::span<const cplx> v) { return witness(key, CMatrix::column(v)); }
  Builder& param(const std::string& key, double v) {
    base_.params[key] = v;
    return *this;
  }

  void add(std::string_view name, CheckClass c, double lhs, double rhs, bool exact,
           std::map<std::string, double> extra = {}) {
    IneqReport r = base_;
    r.name = name;
    r.check_class = c;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.exact = exact;
    r.tol = class_tolerance(c, exact);
    for (auto& [k, v] : extra) r.params[k] = v;
    if (std::isnan(r.slack)) {
      r.pass = false;
    } else if (c == CheckClass::equality) {
      r.pass = std::abs(r.slack) <= r.tol;
    } else {
      r.pass = r.slack >= -r.tol;
    }
    out_.push_back(std::move(r));
  }

  std::vector<IneqReport> take() { return std::move(out_); }

 private:
  IneqReport base_;
  std::vector<IneqReport> out_;
};

void require_square_same(std::initializer_list<const CMatrix*> ms, const char* what) {
  const std::size_t n = (*ms.begin())->rows();
  for (const CMatrix* m : ms) {
    if (!m->square() || m->rows() != n || n == 0) {
      throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": blocks must be square and of equal size");
    }
  }
}

void require_positive_q(QValue q, const char* what) {
  if (q.q() <= 0.0) throw Error(ErrorCode::ParamOutOfRange, std::string(what) + " divides by q; needs q > 0");
}

double sandwich_factor(QValue q) { return (q.q() + 2.0 * q.p()) / q.q(); }

double nilpotent_factor(QValue q) {
  return std::sqrt(1.0 - 0.75 * q.q() * q.q() + q.q() * q.p());
}

CMatrix offdiag(const CMatrix& b, const CMatrix& c) {
  return block2x2(CMatrix::zero(b.rows()), b, c, CMatrix::zero(c.rows()));
}

CMatrix blockdiag(const CMatrix& a, const CMatrix& d) {
  return block2x2(a, CMatrix::zero(a.rows(), d.cols()), CMatrix::zero(d.rows(), a.cols()), d);
}

/// min(‖A + B‖, ‖A − B‖), both recorded.
struct PmNorm {
  double plus = 0.0;
  double minus = 0.0;
  double min() const { return std::min(plus, minus); }
};
PmNorm pm_norm(const CMatrix& a, const CMatrix& b) { return {spectral_norm(a + b), spectral_norm(a - b)}; }

/// √(w + min_±‖A ± B‖²/q²)
double radius_gap_bound(double w, const PmNorm& pm, QValue q) {
  return std::sqrt(w + pm.min() * pm.min() / (q.q() * q.q()));
}

double re_inner(const CMatrix& m, std::span<const cplx> x) {
  return inner(m * x, x).real();
}

const CMatrix& need(const IneqReport& r, const std::string& key) {
  const auto it = r.witnesses.find(key);
  if (it == r.witnesses.end()) throw Error(ErrorCode::ParseError, "report " + r.name + " lacks witness " + key);
  return it->second;
}

double need_param(const IneqReport& r, const std::string& key) {
  const auto it = r.params.find(key);
  if (it == r.params.end()) throw Error(ErrorCode::ParseError, "report " + r.name + " lacks param " + key);
  return it->second;
}

constexpr std::array<std::string_view, 15> kSuites{
    "check_norm_sandwich",        "check_power_ineq",       "check_basic_props",
    "check_sandwich",             "check_alpha_r_upper",    "check_four_block_upper",
    "check_nilpotent_upper",      "check_offdiag_bounds",   "check_lower_products",
    "check_power_structure",      "check_vector_inequalities", "check_radius_gap",
    "check_offdiag_product_upper", "check_buzano_uppers",   "check_commutators",
};

}  // namespace

std::string_view to_string(CheckClass c) {
  switch (c) {
    case CheckClass::upper: return "upper";
    case CheckClass::lower: return "lower";
    case CheckClass::equality: return "equality";
    case CheckClass::vector: return "vector";
  }
  return "?";
}

double class_tolerance(CheckClass c, bool exact) {
  switch (c) {
    case CheckClass::upper: return 1e-8;
    case CheckClass::lower: return exact ? 1e-10 : 1e-6;
    case CheckClass::equality: return exact ? 1e-8 : 2e-6;
    case CheckClass::vector: return 1e-12;
  }
  return 0.0;
}

std::string_view to_string(SandwichKind k) {
  switch (k) {
    case SandwichKind::diag: return "diag";
    case SandwichKind::sym: return "sym";
    case SandwichKind::skew: return "skew";
    case SandwichKind::direct_sum: return "direct_sum";
  }
  return "?";
}

std::string_view to_string(CommutatorKind k) { return k == CommutatorKind::projection ? "projection" : "positive"; }

void CertificateAudit::record(const CMatrix& t, const RadiusEstimate& e) {
  ++checked;
  const double gap = std::abs(pair_value(t, e.witness) - e.value);
  const double adm = admissibility_error(e.witness, e.q);
  worst_value_gap = std::max(worst_value_gap, gap);
  worst_admissibility = std::max(worst_admissibility, adm);
  if (!(gap <= 1e-10 && adm <= 1e-10)) ++failures;
}

void CertificateAudit::merge(const CertificateAudit& o) {
  checked += o.checked;
  failures += o.failures;
  worst_value_gap = std::max(worst_value_gap, o.worst_value_gap);
  worst_admissibility = std::max(worst_admissibility, o.worst_admissibility);
}

double wq_upper(const CMatrix& s, QValue q) {
  if (s.rows() == 2 && s.cols() == 2) return wq_2x2_exact(s, q).value;
  const double norm = spectral_norm(s);
  const CMatrix sa = s.adjoint();
  const double mixed = lambda_max(hermitian_part(sa * s + s * sa)) / 2.0;
  const double qq = q.q();
  const double bound = qq * qq * std::max(mixed, 0.0) + (1.0 - qq * qq + 2.0 * qq * q.p()) * norm * norm;
  return std::min(norm, std::sqrt(bound));
}

std::vector<IneqReport> check_norm_sandwich(const CheckContext& ctx, const CMatrix& t, QValue q) {
  require_square_same({&t}, "check_norm_sandwich");
  Radii w(ctx, q);
  Builder b(ctx, "check_norm_sandwich", q);
  b.witness("T", t);
  const Radius wt = w.low(t);
  const double norm = spectral_norm(t);
  b.add("norm_lower", CheckClass::lower, q.q() * norm / 2.0, wt.value, wt.exact);
  b.add("norm_upper", CheckClass::upper, wt.value, norm, wt.exact);
  return b.take();
}

std::vector<IneqReport> check_power_ineq(const CheckContext& ctx, const CMatrix& t, QValue q, unsigned n) {
  require_square_same({&t}, "check_power_ineq");
  if (n < 1) throw Error(ErrorCode::ParamOutOfRange, "check_power_ineq needs n >= 1");
  Radii w(ctx, q);
  Builder b(ctx, "check_power_ineq", q);
  b.witness("T", t).param("n", n);
  const Radius wn = w.low(matrix_power(t, n));
  const double lhs = std::pow(q.q(), static_cast<double>(n) - 1.0) * wn.value;
  const double rhs = std::pow(w.high(t), static_cast<double>(n));
  b.add("power", CheckClass::upper, lhs, rhs, wn.exact && t.rows() == 2);
  return b.take();
}

std::vector<IneqReport> check_basic_props(const CheckContext& ctx, const CMatrix& t1, const CMatrix& t2,
                                          const CMatrix& t3, const CMatrix& t4, QValue q, double theta,
                                          cplx lambda) {
  require_square_same({&t1, &t2, &t3, &t4}, "check_basic_props");
  const std::size_t n = t1.rows();
  Radii w(ctx, q);
  Builder b(ctx, "check_basic_props", q);
  b.witness("T1", t1).witness("T2", t2).witness("T3", t3).witness("T4", t4);
  b.param("theta", theta).param("lambda_re", lambda.real()).param("lambda_im", lambda.imag());

  const Radius w1 = w.low(t1);
  const Radius wl = w.low(lambda * t1);
  b.add("homogeneity", CheckClass::equality, wl.value, std::abs(lambda) * w1.value, w1.exact && wl.exact);

  const Radius ws = w.low(t1 + t2);
  b.add("subadditivity", CheckClass::upper, ws.value, w.high(t1) + w.high(t2), ws.exact && n == 2);

  const CMatrix u = gen_random(EnsembleKind::unitary, n, derive_seed(ctx.seed, {0x0A17ULL}));
  const Radius wu = w.low(u.adjoint() * t1 * u);
  b.add("unitary_invariance", CheckClass::equality, wu.value, w1.value, w1.exact && wu.exact);

  const QValue rotated = QValue::from_complex(std::polar(q.q(), theta));
  const Radius wr = n == 2 ? Radius{wq_2x2_exact(t1, rotated).value, true}
                           : Radius{estimate_wq(t1, rotated, ctx.effort, derive_seed(ctx.seed, {0x0A18ULL})).value,
                                    false};
  b.add("phase_of_q", CheckClass::equality, wr.value, w1.value, w1.exact && wr.exact);

  const Radius off = w.low(offdiag(t2, t3));
  const Radius off_swapped = w.low(offdiag(t3, t2));
  b.add("offdiag_swap", CheckClass::equality, off_swapped.value, off.value, false);
  const Radius off_phase = w.low(offdiag(t2, std::polar(1.0, theta) * t3));
  b.add("offdiag_phase", CheckClass::equality, off_phase.value, off.value, false);

  const Radius dg = w.low(blockdiag(t1, t4));
  const Radius dg_swapped = w.low(blockdiag(t4, t1));
  b.add("diag_swap", CheckClass::equality, dg_swapped.value, dg.value, false);

  const Radius full = w.low(block2x2(t1, t2, t3, t4));
  b.add("diag_part_below_full", CheckClass::lower, dg.value, full.value, false);
  b.add("offdiag_part_below_full", CheckClass::lower, off.value, full.value, false);
  return b.take();
}

std::vector<IneqReport> check_sandwich(const CheckContext& ctx, SandwichKind kind, const CMatrix& a,
                                       const CMatrix& b, QValue q) {
  if (kind == SandwichKind::direct_sum) {
    const std::array<CMatrix, 2> blocks{a, b};
    return check_direct_sum_sandwich(ctx, blocks, q);
  }
  require_square_same({&a, &b}, "check_sandwich");
  require_positive_q(q, "check_sandwich");
  Radii w(ctx, q);
  Builder rep(ctx, "check_sandwich", q);
  rep.witness("A", a).witness("B", b).param("kind", static_cast<double>(kind));

  CMatrix m, c1, c2;
  switch (kind) {
    case SandwichKind::diag:
      m = blockdiag(a, b);
      c1 = a;
      c2 = b;
      break;
    case SandwichKind::sym:
      m = block2x2(a, b, b, a);
      c1 = a + b;
      c2 = a - b;
      break;
    default:
      m = block2x2(b, -a, a, b);
      c1 = a + kI * b;
      c2 = a - kI * b;
      break;
  }
  const Radius r1 = w.low(c1);
  const Radius r2 = w.low(c2);
  const Radius wm = w.low(m);
  const std::string prefix(to_string(kind));
  rep.add(prefix + "_lower", CheckClass::lower, std::max(r1.value, r2.value), wm.value,
          r1.exact && r2.exact && wm.exact);
  rep.add(prefix + "_upper", CheckClass::upper, wm.value, sandwich_factor(q) * std::max(w.high(c1), w.high(c2)),
          wm.exact);
  return rep.take();
}

std::vector<IneqReport> check_direct_sum_sandwich(const CheckContext& ctx, std::span<const CMatrix> blocks,
                                                  QValue q) {
  if (blocks.empty()) throw Error(ErrorCode::EmptyInput, "check_direct_sum_sandwich needs blocks");
  for (const CMatrix& m : blocks) require_square_same({&m}, "check_direct_sum_sandwich");
  require_positive_q(q, "check_direct_sum_sandwich");
  Radii w(ctx, q);
  Builder rep(ctx, "check_sandwich", q);
  rep.param("kind", static_cast<double>(SandwichKind::direct_sum)).param("blocks", static_cast<double>(blocks.size()));
  double low_max = 0.0, high_max = 0.0;
  bool exact = true;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    rep.witness("B" + std::to_string(k), blocks[k]);
    const Radius r = w.low(blocks[k]);
    low_max = std::max(low_max, r.value);
    high_max = std::max(high_max, w.high(blocks[k]));
    exact = exact && r.exact;
  }
  const Radius wm = w.low(direct_sum(blocks));
  rep.add("direct_sum_lower", CheckClass::lower, low_max, wm.value, exact && wm.exact);
  rep.add("direct_sum_upper", CheckClass::upper, wm.value, sandwich_factor(q) * high_max, wm.exact);
  return rep.take();
}

std::vector<IneqReport> check_alpha_r_upper(const CheckContext& ctx, const CMatrix& s, QValue q, double alpha,
                                            double r) {
  require_square_same({&s}, "check_alpha_r_upper");
  if (!(q.q() > 0.0 && q.q() < 1.0)) throw Error(ErrorCode::ParamOutOfRange, "check_alpha_r_upper needs 0 < q < 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "alpha must lie in [0, 1]");
  if (!(r >= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "r must be >= 1");
  Radii w(ctx, q);
  Builder b(ctx, "check_alpha_r_upper", q);
  b.witness("S", s).param("alpha", alpha).param("r", r);

  const CMatrix sa = s.adjoint();
  const CMatrix abs_s = modulus_power(s, 2.0 * r);
  const CMatrix abs_sa = modulus_power(sa, 2.0 * r);
  const double qq = q.q(), p = q.p();
  const double mixed = spectral_norm(alpha * abs_s + (1.0 - alpha) * abs_sa);
  const double split = alpha * spectral_norm(abs_s) + (1.0 - alpha) * spectral_norm(abs_sa);
  const double cross = spectral_norm(modulus_power(sa, 2.0 * r * (1.0 - alpha))) *
                       spectral_norm(modulus_power(s, 2.0 * r * alpha));
  const double rhs = qq * qq * mixed + (1.0 - qq * qq) * split + 2.0 * qq * p * cross;
  const Radius ws = w.low(s);
  b.add("alpha_r", CheckClass::upper, std::pow(ws.value, 2.0 * r), rhs, ws.exact);
  return b.take();
}

std::vector<IneqReport> check_four_block_upper(const CheckContext& ctx, const CMatrix& p, const CMatrix& q_blk,
                                               const CMatrix& r, const CMatrix& s, QValue q) {
  require_square_same({&p, &q_blk, &r, &s}, "check_four_block_upper");
  require_positive_q(q, "check_four_block_upper");
  Radii w(ctx, q);
  Builder b(ctx, "check_four_block_upper", q);
  b.witness("P", p).witness("Q", q_blk).witness("R", r).witness("S", s);
  const CMatrix rq = r - q_blk;
  const CMatrix ps = kI * (p + s);
  const double skew = std::max(w.high(rq + ps), w.high(rq - ps));
  const double rhs = sandwich_factor(q) / 2.0 * (skew + w.high(q_blk + r) + w.high(s - p));
  const Radius wm = w.low(block2x2(p, q_blk, r, s));
  b.add("four_block", CheckClass::upper, wm.value, rhs, wm.exact);
  return b.take();
}

std::vector<IneqReport> check_nilpotent_upper(const CheckContext& ctx, const CMatrix& t, QValue q) {
  require_square_same({&t}, "check_nilpotent_upper");
  const double scale = std::max(1.0, t.frobenius_norm() * t.frobenius_norm());
  if ((t * t).frobenius_norm() > 1e-10 * scale) throw Error(ErrorCode::NotNilpotent, "T² is not zero");
  if (!(q.q() < 1.0)) throw Error(ErrorCode::ParamOutOfRange, "check_nilpotent_upper needs q < 1");
  Radii w(ctx, q);
  Builder b(ctx, "check_nilpotent_upper", q);
  b.witness("T", t);
  const double f = nilpotent_factor(q);
  const double norm = spectral_norm(t);
  const Radius wt = w.low(t);
  b.add("nilpotent", CheckClass::upper, wt.value, f * norm, wt.exact);
  const Radius wb = w.low(block2x2(t, t, -t, -t));
  b.add("nilpotent_block", CheckClass::upper, wb.value, 2.0 * f * norm, wb.exact);
  return b.take();
}

std::vector<IneqReport> check_offdiag_bounds(const CheckContext& ctx, const CMatrix& t2, const CMatrix& t3,
                                             QValue q) {
  require_square_same({&t2, &t3}, "check_offdiag_bounds");
  if (!(q.q() > 0.0 && q.q() < 1.0)) throw Error(ErrorCode::ParamOutOfRange, "check_offdiag_bounds needs 0 < q < 1");
  Radii w(ctx, q);
  Builder b(ctx, "check_offdiag_bounds", q);
  b.witness("T2", t2).witness("T3", t3);
  const PmNorm pm = pm_norm(t2, t3);
  const double f = nilpotent_factor(q);
  const Radius wm = w.low(offdiag(t2, t3));
  const double upper = sandwich_factor(q) * std::min(w.high(t2), w.high(t3)) + f * pm.min();
  b.add("offdiag_upper", CheckClass::upper, wm.value, upper, wm.exact,
        {{"norm_plus", pm.plus}, {"norm_minus", pm.minus}});
  const Radius w2 = w.low(t2);
  const Radius w3 = w.low(t3);
  b.add("offdiag_lower", CheckClass::lower, std::max(w2.value, w3.value) - f * pm.min(), wm.value,
        w2.exact && w3.exact && wm.exact, {{"norm_plus", pm.plus}, {"norm_minus", pm.minus}});
  return b.take();
}

std::vector<IneqReport> check_lower_products(const CheckContext& ctx, const CMatrix& t1, const CMatrix& t2,
                                             const CMatrix& t3, const CMatrix& t4, QValue q, unsigned n) {
  require_square_same({&t1, &t2, &t3, &t4}, "check_lower_products");
  require_positive_q(q, "check_lower_products");
  if (n < 1) throw Error(ErrorCode::ParamOutOfRange, "check_lower_products needs n >= 1");
  Radii w(ctx, q);
  Builder b(ctx, "check_lower_products", q);
  b.witness("T1", t1).witness("T2", t2).witness("T3", t3).witness("T4", t4).param("n", n);
  const double qq = q.q();

  const CMatrix p23 = t2 * t3, p32 = t3 * t2;
  const Radius wm = w.low(offdiag(t2, t3));
  const Radius anti = w.low(p23 + p32);
  const Radius comm = w.low(p23 - p32);
  b.add("product_lower", CheckClass::lower, qq / 2.0 * std::max(anti.value, comm.value), wm.value * wm.value,
        anti.exact && comm.exact && wm.exact);

  const Radius w1 = w.low(t1);
  const Radius w4 = w.low(t4);
  const Radius full = w.low(block2x2(t1, t2, t3, t4));
  const double c = std::sqrt(qq / 2.0);
  const double block = std::max({w1.value, w4.value, c * std::sqrt(anti.value), c * std::sqrt(comm.value)});
  b.add("four_block_lower", CheckClass::lower, block, full.value,
        w1.exact && w4.exact && anti.exact && comm.exact && full.exact);

  const Radius pw23 = w.low(matrix_power(p23, n));
  const Radius pw32 = w.low(matrix_power(p32, n));
  const double k = 2.0 * n;
  const double lhs = std::pow(qq, k - 1.0) * std::pow(std::max(pw23.value, pw32.value), 1.0 / k);
  b.add("power_lower", CheckClass::lower, lhs, wm.value, pw23.exact && pw32.exact && wm.exact);
  return b.take();
}

std::vector<IneqReport> check_power_structure(const CheckContext& ctx, const CMatrix& t1, const CMatrix& t2,
                                              QValue q, unsigned n) {
  require_square_same({&t1, &t2}, "check_power_structure");
  require_positive_q(q, "check_power_structure");
  if (n < 1) throw Error(ErrorCode::ParamOutOfRange, "check_power_structure needs n >= 1");
  Radii w(ctx, q);
  Builder b(ctx, "check_power_structure", q);
  b.witness("T1", t1).witness("T2", t2).param("n", n);

  const std::size_t m = t1.rows();
  const Blocks2x2 pw = split2x2(matrix_power(block2x2(t1, t2, t2, t1), n), m);
  const double res_sum = (pw.a + pw.b - matrix_power(t1 + t2, n)).frobenius_norm();
  const double res_diff = (pw.a - pw.b - matrix_power(t1 - t2, n)).frobenius_norm();
  const double res_shape = (pw.a - pw.d).frobenius_norm() + (pw.b - pw.c).frobenius_norm();
  b.add("block_power_identity", CheckClass::equality, std::max({res_sum, res_diff, res_shape}), 0.0, true,
        {{"residual_sum", res_sum}, {"residual_difference", res_diff}, {"residual_shape", res_shape}});

  const CMatrix big = matrix_power(block2x2(t1, t2, -t2, -t1), 2 * n);
  const Radius wb = w.low(big);
  const double h1 = w.high(matrix_power((t1 - t2) * (t1 + t2), n));
  const double h2 = w.high(matrix_power((t1 + t2) * (t1 - t2), n));
  b.add("antisym_power_upper", CheckClass::upper, wb.value, sandwich_factor(q) * std::max(h1, h2), wb.exact);
  return b.take();
}

std::vector<IneqReport> check_vector_inequalities(const CheckContext& ctx, const CMatrix& s, const CMatrix& pos,
                                                  std::span<const cplx> a, std::span<const cplx> b,
                                                  std::span<const cplx> c, double t, double alpha) {
  require_square_same({&s, &pos}, "check_vector_inequalities");
  const std::size_t n = s.rows();
  if (a.size() != n || b.size() != n || c.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "check_vector_inequalities: vector length differs from matrix size");
  }
  if (std::abs(norm2(c) - 1.0) > 1e-12) throw Error(ErrorCode::ParamOutOfRange, "c must be a unit vector");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "alpha must lie in [0, 1]");
  if (!is_psd(pos)) throw Error(ErrorCode::NotPositive, "Schwarz inequality needs a positive matrix");

  Builder rep(ctx, "check_vector_inequalities", 0.0);
  rep.witness("S", s).witness("Pos", pos).witness("a", a).witness("b", b).witness("c", c);
  rep.param("t", t).param("alpha", alpha);

  const double pab = std::norm(inner(pos * a, b));
  rep.add("schwarz_positive", CheckClass::vector, pab, re_inner(pos, a) * re_inner(pos, b), false);

  const CMatrix sa = s.adjoint();
  const double sab = std::abs(inner(s * a, b));
  const double mixed = re_inner(modulus_power(s, 2.0 * alpha), a) * re_inner(modulus_power(sa, 2.0 * (1.0 - alpha)), b);
  rep.add("mixed_schwarz", CheckClass::vector, sab * sab, mixed, false);
  const double half = re_inner(modulus_power(s, 1.0), a) * re_inner(modulus_power(sa, 1.0), b);
  rep.add("mixed_schwarz_half", CheckClass::vector, sab, std::sqrt(std::max(half, 0.0)), false);

  const double na = norm2(a), nb = norm2(b);
  const cplx ab = inner(a, b);
  const double gram = na * na * nb * nb - std::norm(ab);
  const double shifted = norm2(axpy(-t, a, b));
  rep.add("gram_gap", CheckClass::vector, gram, na * na * shifted * shifted, false);
  rep.add("buzano", CheckClass::vector, 2.0 * std::abs(inner(a, c) * inner(c, b)), na * nb + std::abs(ab), false);
  return rep.take();
}

std::vector<cplx> default_lambda_grid(std::uint64_t seed) {
  std::vector<cplx> grid{1.0, -1.0, kI, -kI};
  CounterRng rng(seed, 0x1A4BDA00ULL);
  for (int k = 0; k < 4; ++k) grid.push_back(rng.unit_phase());
  grid.push_back(0.5);
  grid.push_back(2.0);
  return grid;
}

std::vector<IneqReport> check_radius_gap(const CheckContext& ctx, const CMatrix& t, QValue q,
                                         std::span<const cplx> lambdas) {
  require_square_same({&t}, "check_radius_gap");
  require_positive_q(q, "check_radius_gap");
  Radii w(ctx, q);
  Builder b(ctx, "check_radius_gap", q);
  b.witness("T", t);
  const Radius wt = w.low(t);
  const double w_sq = classical_radius(t * t);
  const CMatrix ta = t.adjoint();
  const double qq = q.q();
  for (const cplx lambda : lambdas) {
    const double d = spectral_norm(lambda * t - ta);
    b.add("radius_gap", CheckClass::upper, wt.value * wt.value - w_sq, d * d / (qq * qq), wt.exact,
          {{"lambda_re", lambda.real()}, {"lambda_im", lambda.imag()}});
  }
  return b.take();
}

std::vector<IneqReport> check_offdiag_product_upper(const CheckContext& ctx, const CMatrix& t, const CMatrix& s,
                                                    QValue q) {
  require_square_same({&t, &s}, "check_offdiag_product_upper");
  require_positive_q(q, "check_offdiag_product_upper");
  Radii w(ctx, q);
  Builder b(ctx, "check_offdiag_product_upper", q);
  b.witness("T", t).witness("S", s);
  const PmNorm pm = pm_norm(t, s.adjoint());
  const double wp = std::max(classical_radius(t * s), classical_radius(s * t));
  const Radius wm = w.low(offdiag(t, s));
  b.add("offdiag_product", CheckClass::upper, wm.value, radius_gap_bound(wp, pm, q), wm.exact,
        {{"norm_plus", pm.plus}, {"norm_minus", pm.minus}});
  return b.take();
}

std::vector<IneqReport> check_buzano_uppers(const CheckContext& ctx, const CMatrix& p, const CMatrix& q_blk,
                                            const CMatrix& r, const CMatrix& s, QValue q, const CMatrix& u) {
  require_square_same({&p, &q_blk, &r, &s, &u}, "check_buzano_uppers");
  require_positive_q(q, "check_buzano_uppers");
  if (!is_unitary(u)) throw Error(ErrorCode::NotUnitary, "check_buzano_uppers needs a unitary U");
  Radii w(ctx, q);
  Builder b(ctx, "check_buzano_uppers", q);
  b.witness("P", p).witness("Q", q_blk).witness("R", r).witness("S", s).witness("U", u);

  const CMatrix ra = r.adjoint(), qa = q_blk.adjoint(), ua = u.adjoint();
  {
    const CMatrix pr = p * r, rq = ra * q_blk;
    const double wp = std::max(classical_radius(pr * ra * q_blk), classical_radius(rq * pr));
    const double rhs = 2.0 * radius_gap_bound(wp, pm_norm(pr, qa * r), q);
    const Radius plus = w.low(pr + rq);
    const Radius minus = w.low(pr - rq);
    b.add("product_sum", CheckClass::upper, plus.value, rhs, plus.exact);
    b.add("product_difference", CheckClass::upper, minus.value, rhs, minus.exact);
  }
  {
    const CMatrix pu = p * u, uq = ua * q_blk;
    const double wp = std::max(classical_radius(p * q_blk), classical_radius(q_blk * p));
    const double rhs = 2.0 * radius_gap_bound(wp, pm_norm(p, qa), q);
    const Radius plus = w.low(pu + uq);
    const Radius minus = w.low(pu - uq);
    b.add("unitary_sum", CheckClass::upper, plus.value, rhs, plus.exact);
    b.add("unitary_difference", CheckClass::upper, minus.value, rhs, minus.exact);

    const CMatrix up = ua * p;
    const double rhs_same = 2.0 * radius_gap_bound(classical_radius(p * p), pm_norm(p, p.adjoint()), q);
    const Radius same_plus = w.low(pu + up);
    const Radius same_minus = w.low(pu - up);
    b.add("unitary_same_sum", CheckClass::upper, same_plus.value, rhs_same, same_plus.exact);
    b.add("unitary_same_difference", CheckClass::upper, same_minus.value, rhs_same, same_minus.exact);
  }
  {
    const CMatrix t = block2x2(p, q_blk, r, s);
    const double rhs = radius_gap_bound(classical_radius(t * t), pm_norm(t, t.adjoint()), q);
    const Radius wp = w.low(p);
    const Radius ws = w.low(s);
    b.add("diagonal_blocks", CheckClass::upper, std::max(wp.value, ws.value), rhs, wp.exact && ws.exact);
  }
  return b.take();
}

std::vector<IneqReport> check_commutators(const CheckContext& ctx, CommutatorKind kind, const CMatrix& t,
                                          const CMatrix& x, QValue q) {
  require_square_same({&t, &x}, "check_commutators");
  require_positive_q(q, "check_commutators");
  Radii w(ctx, q);
  Builder b(ctx, "check_commutators", q);
  b.witness("T", t).witness("X", x).param("kind", static_cast<double>(kind));
  if (kind == CommutatorKind::projection) {
    if (!is_projection(x)) throw Error(ErrorCode::NotProjection, "second argument must be an orthogonal projection");
    const double rhs = radius_gap_bound(classical_radius(t * t), pm_norm(t, t.adjoint()), q);
    const Radius wc = w.low(t * x - x * t);
    b.add("projection_commutator", CheckClass::upper, wc.value, rhs, wc.exact);
  } else {
    if (!is_psd(t)) throw Error(ErrorCode::NotPositive, "first argument must be positive");
    const double rhs = spectral_norm(t) * radius_gap_bound(classical_radius(x * x), pm_norm(x, x.adjoint()), q);
    const Radius wc = w.low(t * x - x * t);
    b.add("positive_commutator", CheckClass::upper, wc.value, rhs, wc.exact);
  }
  return b.take();
}

IneqReport replay(const IneqReport& r) {
  const CheckContext ctx{r.effort, r.seed, nullptr};
  const QValue q(r.q);
  auto nparam = [&](const char* key) { return static_cast<unsigned>(std::lround(need_param(r, key))); };
  std::vector<IneqReport> again;
  const std::string& s = r.suite;
  if (s == "check_norm_sandwich") {
    again = check_norm_sandwich(ctx, need(r, "T"), q);
  } else if (s == "check_power_ineq") {
    again = check_power_ineq(ctx, need(r, "T"), q, nparam("n"));
  } else if (s == "check_basic_props") {
    again = check_basic_props(ctx, need(r, "T1"), need(r, "T2"), need(r, "T3"), need(r, "T4"), q,
                              need_param(r, "theta"), {need_param(r, "lambda_re"), need_param(r, "lambda_im")});
  } else if (s == "check_sandwich") {
    const auto kind = static_cast<SandwichKind>(nparam("kind"));
    if (kind == SandwichKind::direct_sum) {
      std::vector<CMatrix> blocks;
      for (unsigned k = 0; k < nparam("blocks"); ++k) blocks.push_back(need(r, "B" + std::to_string(k)));
      again = check_direct_sum_sandwich(ctx, blocks, q);
    } else {
      again = check_sandwich(ctx, kind, need(r, "A"), need(r, "B"), q);
    }
  } else if (s == "check_alpha_r_upper") {
    again = check_alpha_r_upper(ctx, need(r, "S"), q, need_param(r, "alpha"), need_param(r, "r"));
  } else if (s == "check_four_block_upper") {
    again = check_four_block_upper(ctx, need(r, "P"), need(r, "Q"), need(r, "R"), need(r, "S"), q);
  } else if (s == "check_nilpotent_upper") {
    again = check_nilpotent_upper(ctx, need(r, "T"), q);
  } else if (s == "check_offdiag_bounds") {
    again = check_offdiag_bounds(ctx, need(r, "T2"), need(r, "T3"), q);
  } else if (s == "check_lower_products") {
    again = check_lower_products(ctx, need(r, "T1"), need(r, "T2"), need(r, "T3"), need(r, "T4"), q, nparam("n"));
  } else if (s == "check_power_structure") {
    again = check_power_structure(ctx, need(r, "T1"), need(r, "T2"), q, nparam("n"));
  } else if (s == "check_vector_inequalities") {
    again = check_vector_inequalities(ctx, need(r, "S"), need(r, "Pos"), need(r, "a").data(), need(r, "b").data(),
                                      need(r, "c").data(), need_param(r, "t"), need_param(r, "alpha"));
  } else if (s == "check_radius_gap") {
    const cplx lambda{need_param(r, "lambda_re"), need_param(r, "lambda_im")};
    again = check_radius_gap(ctx, need(r, "T"), q, std::span<const cplx>(&lambda, 1));
  } else if (s == "check_offdiag_product_upper") {
    again = check_offdiag_product_upper(ctx, need(r, "T"), need(r, "S"), q);
  } else if (s == "check_buzano_uppers") {
    again = check_buzano_uppers(ctx, need(r, "P"), need(r, "Q"), need(r, "R"), need(r, "S"), q, need(r, "U"));
  } else if (s == "check_commutators") {
    again = check_commutators(ctx, static_cast<CommutatorKind>(nparam("kind")), need(r, "T"), need(r, "X"), q);
  } else {
    throw Error(ErrorCode::ParseError, "unknown suite " + s);
  }
  for (IneqReport& x : again) {
    if (x.name == r.name) return x;
  }
  throw Error(ErrorCode::ParseError, "replay did not reproduce report " + r.name);
}

std::span<const std::string_view> suite_names() { return kSuites; }

}  // namespace qrad
