#include "qrad/qradius.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "qrad/error.hpp"
#include "qrad/kernels.hpp"
#include "qrad/linalg.hpp"
#include "qrad/random.hpp"

namespace qrad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void require_square(const CMatrix& t) {
  if (!t.square() || t.empty()) throw Error(ErrorCode::DimensionMismatch, "operator must be a non-empty square matrix");
  require_finite(t, "operator");
}

void require_admissible_dim(const CMatrix& t, const QValue& q) {
  require_square(t);
  if (t.rows() == 1 && q.q() < 1.0) {
    throw Error(ErrorCode::DimensionTooSmall, "no admissible pair exists for n = 1 and q < 1");
  }
}

// Unit vector orthogonal to x, built from the first standard basis vector
// that is not (numerically) parallel to x.
CVector basis_orthogonal(std::span<const cplx> x) {
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    CVector e(n, cplx{});
    e[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      const cplx c = inner(e, x);
      for (std::size_t i = 0; i < n; ++i) e[i] -= c * x[i];
    }
    const double ne = norm2(e);
    if (ne > 1e-6) {
      for (auto& z : e) z /= ne;
      return e;
    }
  }
  return CVector(n, cplx{});
}

CVector make_partner(std::span<const cplx> x, std::span<const cplx> z, double q, double p) {
  CVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = q * x[i] + p * z[i];
  return y;
}

// Objective value and Riemannian gradient with the packed kernels.
class Evaluator {
 public:
  Evaluator(const CMatrix& t, QValue q)
      : t_(kernels::PackedMatrix::pack(t)),
        ta_(kernels::PackedMatrix::pack(t.adjoint())),
        k_(kernels::active()),
        q_(q.q()),
        p_(q.p()),
        n_(t.rows()),
        xs_(t_.ld),
        tx_(t_.ld),
        tax_(t_.ld),
        rs_(t_.ld),
        tar_(t_.ld) {
    scale_ = std::max(t.frobenius_norm(), 1e-300);
  }

  double scale() const { return scale_; }

  double value(std::span<const cplx> x) {
    load(x);
    k_.matvec(t_, xs_.re.data(), xs_.im.data(), tx_.re.data(), tx_.im.data());
    const cplx a = quad();
    residual(a);
    return q_ * std::abs(a) + p_ * rnorm_;
  }

  // Value plus tangent gradient (2∂g/∂x̄ projected onto the sphere).
  double value_grad(std::span<const cplx> x, CVector& g) {
    const double f = value(x);
    const cplx a = a_;
    g.assign(n_, cplx{});
    const double abs_a = std::abs(a);
    if (q_ > 0.0 && abs_a > 1e-300) {
      k_.matvec(ta_, xs_.re.data(), xs_.im.data(), tax_.re.data(), tax_.im.data());
      const cplx ca = std::conj(a) / abs_a;
      const cplx aa = a / abs_a;
      for (std::size_t i = 0; i < n_; ++i) {
        const cplx txi{tx_.re[i], tx_.im[i]};
        const cplx taxi{tax_.re[i], tax_.im[i]};
        g[i] += q_ * (ca * txi + aa * taxi);
      }
    }
    if (p_ > 0.0 && rnorm_ > 1e-14 * scale_) {
      k_.matvec(ta_, rs_.re.data(), rs_.im.data(), tar_.re.data(), tar_.im.data());
      const cplx ca = std::conj(a);
      for (std::size_t i = 0; i < n_; ++i) {
        const cplx tari{tar_.re[i], tar_.im[i]};
        const cplx ri{rs_.re[i], rs_.im[i]};
        g[i] += (p_ / rnorm_) * (tari - ca * ri);
      }
    }
    const double radial = inner(g, x).real();
    for (std::size_t i = 0; i < n_; ++i) g[i] -= radial * x[i];
    return f;
  }

 private:
  void load(std::span<const cplx> x) {
    for (std::size_t i = 0; i < n_; ++i) {
      xs_.re[i] = x[i].real();
      xs_.im[i] = x[i].imag();
    }
  }

  cplx quad() {
    cplx a = 0.0;
    for (std::size_t i = 0; i < n_; ++i) a += cplx{tx_.re[i], tx_.im[i]} * cplx{xs_.re[i], -xs_.im[i]};
    a_ = a;
    return a;
  }

  void residual(cplx a) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const cplx ri = cplx{tx_.re[i], tx_.im[i]} - a * cplx{xs_.re[i], xs_.im[i]};
      rs_.re[i] = ri.real();
      rs_.im[i] = ri.imag();
      s += std::norm(ri);
    }
    rnorm_ = std::sqrt(s);
  }

  kernels::PackedMatrix t_, ta_;
  const kernels::KernelTable& k_;
  double q_, p_;
  std::size_t n_;
  kernels::SplitVector xs_, tx_, tax_, rs_, tar_;
  double scale_ = 1.0;
  cplx a_;
  double rnorm_ = 0.0;
};

CVector retract(std::span<const cplx> x, std::span<const cplx> d, double step) {
  CVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + step * d[i];
  normalize(out);
  return out;
}

CVector random_tangent(CounterRng& rng, std::span<const cplx> x) {
  CVector d = random_gaussian_vector(rng, x.size());
  const double radial = inner(d, x).real();
  for (std::size_t i = 0; i < x.size(); ++i) d[i] -= radial * x[i];
  normalize(d);
  return d;
}

struct AscentResult {
  CVector x;
  double f = 0.0;
  long iterations = 0;
};

AscentResult ascend(Evaluator& ev, CVector x, int max_iter, CounterRng& rng) {
  normalize(x);
  CVector g, g_new;
  double f = ev.value_grad(x, g);
  double eta = 1.0 / ev.scale();
  const double eta_min = 1e-12 / ev.scale();
  const double eta_max = 1e6 / ev.scale();
  int stalls = 0;
  int perturbations = 0;
  long it = 0;

  auto try_perturb = [&]() {
    if (perturbations >= 6) return false;
    ++perturbations;
    const CVector d = random_tangent(rng, x);
    for (double eps : {1e-3, 1e-5, 1e-7}) {
      CVector trial = retract(x, d, eps);
      CVector gt;
      const double ft = ev.value_grad(trial, gt);
      if (ft > f) {
        x = std::move(trial);
        g = std::move(gt);
        f = ft;
        return true;
      }
    }
    return false;
  };

  for (; it < max_iter; ++it) {
    const double gn2 = std::real(inner(g, g));
    if (std::sqrt(gn2) <= 1e-14 * ev.scale()) {
      if (try_perturb()) continue;
      break;
    }
    bool accepted = false;
    CVector trial;
    double ft = 0.0;
    for (int half = 0; half < 60; ++half) {
      trial = retract(x, g, eta);
      ft = ev.value_grad(trial, g_new);
      if (ft >= f + 1e-4 * eta * gn2) {
        accepted = true;
        break;
      }
      eta *= 0.5;
      if (eta < eta_min) break;
    }
    if (!accepted) {
      eta = 1.0 / ev.scale();
      if (try_perturb()) continue;
      break;
    }
    // Barzilai-Borwein step for the next iteration.
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const cplx s = trial[i] - x[i];
      const cplx y = g_new[i] - g[i];
      ss += std::norm(s);
      sy += (s * std::conj(y)).real();
    }
    eta = sy < 0.0 ? ss / -sy : 2.0 * eta;
    eta = std::clamp(eta, eta_min, eta_max);

    const double gain = ft - f;
    x = std::move(trial);
    g.swap(g_new);
    f = ft;
    if (gain <= 1e-16 * std::max(1.0, std::abs(f))) {
      if (++stalls >= 4) break;
    } else {
      stalls = 0;
    }
  }
  return {std::move(x), f, it};
}

std::vector<CVector> deterministic_starts(const CMatrix& t) {
  std::vector<CVector> starts;
  const std::size_t n = t.rows();
  const HermEig gram = herm_eig(hermitian_part(t.adjoint() * t));
  starts.push_back(gram.eigenvectors.col(n - 1));
  const HermEig re = herm_eig(hermitian_part(t));
  starts.push_back(re.eigenvectors.col(n - 1));
  starts.push_back(re.eigenvectors.col(0));
  const HermEig im = herm_eig(skew_hermitian_part(t));
  starts.push_back(im.eigenvectors.col(n - 1));
  starts.push_back(im.eigenvectors.col(0));
  return starts;
}

AdmissiblePair draw_pair(CounterRng& rng, std::size_t n, const QValue& q) {
  AdmissiblePair pair;
  pair.x = random_unit_vector(rng, n);
  CVector z(n, cplx{});
  if (q.p() > 0.0) {
    double nz = 0.0;
    do {
      z = random_gaussian_vector(rng, n);
      for (int pass = 0; pass < 2; ++pass) {
        const cplx c = inner(z, pair.x);
        for (std::size_t i = 0; i < n; ++i) z[i] -= c * pair.x[i];
      }
      nz = norm2(z);
    } while (nz < 1e-8);
    const cplx phase = rng.unit_phase();
    for (auto& v : z) v *= phase / nz;
  }
  pair.y = make_partner(pair.x, z, q.q(), q.p());
  return pair;
}

double lambda_max_rotated(const CMatrix& t, double theta) {
  const cplx e{std::cos(theta), std::sin(theta)};
  return lambda_max(hermitian_part(e * t));
}

}  // namespace

// -- QValue / pairs -----------------------------------------------------------

QValue::QValue(double q) : q_(q), p_(0.0) {
  if (!std::isfinite(q) || q < 0.0 || q > 1.0) {
    throw Error(ErrorCode::ParamOutOfRange, "q must lie in [0, 1], got " + std::to_string(q));
  }
  p_ = std::sqrt(std::max(0.0, 1.0 - q * q));
}

QValue QValue::from_complex(cplx q) {
  const double m = std::abs(q);
  if (m > 1.0 && m <= 1.0 + 1e-15) return QValue(1.0);
  return QValue(m);
}

double admissibility_error(const AdmissiblePair& pair, double q) {
  const double ex = std::abs(norm2(pair.x) - 1.0);
  const double ey = std::abs(norm2(pair.y) - 1.0);
  const double eq = std::abs(inner(pair.x, pair.y) - cplx{q, 0.0});
  return std::max({ex, ey, eq});
}

double pair_value(const CMatrix& t, const AdmissiblePair& pair) {
  const CVector tx = t * std::span<const cplx>(pair.x);
  return std::abs(inner(tx, pair.y));
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact2x2: return "exact2x2";
    case Method::optimize: return "optimize";
    case Method::sample: return "sample";
  }
  return "unknown";
}

// -- objective ----------------------------------------------------------------

ObjectiveResult objective(const CMatrix& t, QValue q, std::span<const cplx> x) {
  require_admissible_dim(t, q);
  if (x.size() != t.rows()) throw Error(ErrorCode::DimensionMismatch, "x has the wrong length");
  const std::size_t n = x.size();
  const CVector tx = t * x;
  const cplx a = inner(tx, x);
  CVector r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = tx[i] - a * x[i];
  const double rn = norm2(r);

  ObjectiveResult out;
  out.a = a;
  out.residual = rn;
  out.value = q.q() * std::abs(a) + q.p() * rn;
  if (q.p() == 0.0) {
    out.y.assign(x.begin(), x.end());
    return out;
  }
  CVector z;
  if (rn > 1e-12 * std::max(norm2(tx), 1e-300)) {
    const cplx omega = std::abs(a) > 0.0 ? std::conj(a) / std::abs(a) : cplx{1.0, 0.0};
    z.resize(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = omega * r[i] / rn;
    // Restore exact orthogonality lost to cancellation in r.
    const cplx c = inner(z, x);
    for (std::size_t i = 0; i < n; ++i) z[i] -= c * x[i];
    normalize(z);
  } else {
    z = basis_orthogonal(x);
  }
  out.y = make_partner(x, z, q.q(), q.p());
  return out;
}

// -- effort -------------------------------------------------------------------

Effort scaled_effort(Effort base, std::string_view level) {
  if (level == "fast") return {std::max(1, base.restarts / 4), std::max(1, base.max_iter / 2)};
  if (level == "high") return {base.restarts * 2, base.max_iter * 2};
  return base;
}

Effort scaled_effort(Effort base) {
  const char* env = std::getenv("QRAD_EFFORT");
  return scaled_effort(base, env == nullptr ? std::string_view("default") : std::string_view(env));
}

// -- estimator ----------------------------------------------------------------

RadiusEstimate estimate_wq(const CMatrix& t, QValue q, int restarts, int max_iter, std::uint64_t seed) {
  require_admissible_dim(t, q);
  if (restarts < 1) throw Error(ErrorCode::ParamOutOfRange, "restarts must be >= 1");
  if (max_iter < 0) throw Error(ErrorCode::ParamOutOfRange, "max_iter must be >= 0");
  const std::size_t n = t.rows();

  RadiusEstimate best;
  best.q = q.q();
  best.method = Method::optimize;
  best.restarts_used = restarts;
  best.value = -1.0;

  Evaluator ev(t, q);
  const std::vector<CVector> fixed = deterministic_starts(t);
  for (int k = 0; k < restarts; ++k) {
    CounterRng rng(seed, 0x5EA7'0000ULL + static_cast<std::uint64_t>(k));
    CVector start = static_cast<std::size_t>(k) < fixed.size() ? fixed[k] : random_unit_vector(rng, n);
    AscentResult res = ascend(ev, std::move(start), max_iter, rng);
    best.iterations_used += res.iterations;

    ObjectiveResult obj = objective(t, q, res.x);
    AdmissiblePair pair{std::move(res.x), std::move(obj.y)};
    const double certified = pair_value(t, pair);
    if (certified > best.value) {
      best.value = certified;
      best.witness = std::move(pair);
    }
  }
  return best;
}

// -- sampler ------------------------------------------------------------------

RadiusEstimate sample_wq(const CMatrix& t, QValue q, long n_samples, std::uint64_t seed) {
  require_admissible_dim(t, q);
  if (n_samples < 1) throw Error(ErrorCode::ParamOutOfRange, "n_samples must be >= 1");
  const std::size_t n = t.rows();
  CounterRng rng(seed, 0x5A3B'0000ULL + n);

  RadiusEstimate best;
  best.q = q.q();
  best.method = Method::sample;
  best.restarts_used = 1;
  best.iterations_used = n_samples;

  if (n != 2) {
    double best_val = -1.0;
    for (long s = 0; s < n_samples; ++s) {
      AdmissiblePair pair = draw_pair(rng, n, q);
      const double v = pair_value(t, pair);
      if (v > best_val) {
        best_val = v;
        best.witness = std::move(pair);
      }
    }
    best.value = pair_value(t, best.witness);
    return best;
  }

  // n = 2: Hopf coordinates x = (√u, √(1−u)e^{iβ}); x⊥ is spanned by
  // (−conj x2, conj x1), so z = e^{iφ}(−conj x2, conj x1).
  kernels::Matrix2 m2{};
  for (int k = 0; k < 4; ++k) {
    m2.re[k] = t(k / 2, k % 2).real();
    m2.im[k] = t(k / 2, k % 2).imag();
  }
  constexpr std::size_t kBatch = 2048;
  std::array<std::vector<double>, 6> buf;
  for (auto& b : buf) b.resize(kBatch);
  std::vector<double> out(kBatch);
  const auto& table = kernels::active();

  const kernels::Pair2Streams streams{derive_seed(seed, {0x5A3B'0001ULL}), derive_seed(seed, {0x5A3B'0002ULL}),
                                      derive_seed(seed, {0x5A3B'0003ULL})};
  double best_val = -1.0;
  std::array<double, 6> best_params{};
  for (long done = 0; done < n_samples;) {
    const std::size_t count = static_cast<std::size_t>(std::min<long>(kBatch, n_samples - done));
    table.pair2_draw(streams, static_cast<std::uint64_t>(done), count,
                     {buf[0].data(), buf[1].data(), buf[2].data(), buf[3].data(), buf[4].data(), buf[5].data()});
    const kernels::Pair2Batch batch{buf[0].data(), buf[1].data(), buf[2].data(), buf[3].data(),
                                    buf[4].data(), buf[5].data(), count};
    table.pair2_values(m2, q.q(), q.p(), batch, out.data());
    for (std::size_t k = 0; k < count; ++k) {
      if (out[k] > best_val) {
        best_val = out[k];
        for (int j = 0; j < 6; ++j) best_params[j] = buf[j][k];
      }
    }
    done += static_cast<long>(count);
  }

  const cplx x1 = best_params[0];
  const cplx x2 = best_params[1] * cplx{best_params[2], best_params[3]};
  const cplx phi{best_params[4], best_params[5]};
  const CVector x{x1, x2};
  const CVector z{-phi * std::conj(x2), phi * std::conj(x1)};
  best.witness = {x, make_partner(x, z, q.q(), q.p())};
  best.value = pair_value(t, best.witness);
  return best;
}

// -- 2×2 closed form ----------------------------------------------------------

CMatrix Canonical2x2::form() const {
  const cplx et = std::polar(1.0, t);
  const cplx eth = std::polar(1.0, theta);
  return et * CMatrix{{gamma, eth * a}, {eth * b, gamma}};
}

cplx Canonical2x2::boundary_point(double q, double s) const {
  const double p = std::sqrt(std::max(0.0, 1.0 - q * q));
  const double c = 0.5 * (a + b);
  const double d = 0.5 * (a - b);
  const cplx ellipse{(c + p * d) * std::cos(s), (d + p * c) * std::sin(s)};
  return std::polar(1.0, t) * (gamma * q + std::polar(1.0, theta) * ellipse);
}

Canonical2x2 canonical_2x2(const CMatrix& t) {
  if (t.rows() != 2 || t.cols() != 2) throw Error(ErrorCode::NotTwoByTwo, "canonical form needs a 2x2 matrix");
  require_finite(t, "operator");
  const cplx tau = 0.5 * t.trace();
  const CMatrix nz = t - tau * CMatrix::identity(2);
  Canonical2x2 c;
  // A trace at round-off level relative to T is treated as zero.
  c.gamma = std::abs(tau) > 1e-14 * t.frobenius_norm() ? std::abs(tau) : 0.0;

  // Rotate the traceless part to zero diagonal: u*N u = 0 needs both
  // u*H1u = 0 and u*H2u = 0 for the Hermitian/skew parts H1, H2.
  const HermEig e1 = herm_eig(hermitian_part(nz));
  const CVector ep = e1.eigenvectors.col(1);
  const CVector em = e1.eigenvectors.col(0);
  const CMatrix h2 = skew_hermitian_part(nz);
  const cplx m = inner(h2 * std::span<const cplx>(em), ep);  // ep* H2 em
  const double psi = std::abs(m) > 0.0 ? 0.5 * std::numbers::pi - std::arg(m) : 0.0;
  const cplx w = std::polar(1.0, psi);
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  CVector u(2), v(2);
  for (int i = 0; i < 2; ++i) {
    u[i] = kInvSqrt2 * (ep[i] + w * em[i]);
    v[i] = kInvSqrt2 * (ep[i] - w * em[i]);
  }
  cplx alpha = inner(nz * std::span<const cplx>(v), u);  // u* N v
  cplx beta = inner(nz * std::span<const cplx>(u), v);   // v* N u
  if (std::abs(alpha) < std::abs(beta)) {
    std::swap(u, v);
    std::swap(alpha, beta);
  }
  // a, b are the moduli of the off-diagonal entries; 2φ is their joint phase.
  c.a = std::abs(alpha);
  c.b = std::abs(beta);
  const double phi = c.b > 1e-14 * c.a ? 0.5 * std::arg(alpha * beta) : 0.0;
  const double chi = c.a > 0.0 ? phi - std::arg(alpha) : 0.0;
  const cplx ec = std::polar(1.0, chi);
  c.U = CMatrix{{u[0], ec * v[0]}, {u[1], ec * v[1]}};

  if (c.gamma > 0.0) {
    c.t = wrap_angle(std::arg(tau));
    c.theta = c.a > 0.0 ? wrap_angle(phi - c.t) : 0.0;
  } else {
    c.t = wrap_angle(phi);
    c.theta = 0.0;
  }
  return c;
}

Exact2x2 wq_2x2_exact(const CMatrix& t, QValue q) {
  Exact2x2 out;
  out.canon = canonical_2x2(t);
  const Canonical2x2& c = out.canon;
  const double p = q.p();
  const double cc = 0.5 * (c.a + c.b);
  const double dd = 0.5 * (c.a - c.b);
  const double ax = cc + p * dd;  // ≥ ay
  const double ay = dd + p * cc;
  const cplx centre = c.gamma * q.q() * std::polar(1.0, -c.theta);
  const double cx = centre.real();
  const double cy = centre.imag();

  // max over the unit circle of ‖c0 + M u‖², M = diag(ax, ay): a 2-D trust-region
  // problem u*Hu + 2 bᵀu with H = M², b = M c0.
  const double h1 = ax * ax, h2 = ay * ay;
  const double b1 = ax * cx, b2 = ay * cy;
  auto sq = [&](double s) {
    const double re = cx + ax * std::cos(s);
    const double im = cy + ay * std::sin(s);
    return re * re + im * im;
  };
  std::vector<double> cands{0.0, 0.5 * std::numbers::pi, std::numbers::pi, 1.5 * std::numbers::pi};

  auto secular = [&](double lam) {
    const double r1 = b1 / (lam - h1);
    const double r2 = lam > h2 ? b2 / (lam - h2) : 0.0;
    return r1 * r1 + r2 * r2 - 1.0;
  };
  if (b1 != 0.0) {
    // The root lies within |b| of h1; the floor keeps hi > h1 after rounding.
    double step = std::max(std::hypot(b1, b2), 4.0 * std::numeric_limits<double>::epsilon() * h1);
    double lo = h1, hi = h1 + step;
    while (secular(hi) > 0.0) hi = h1 + (step *= 2.0);
    for (int it = 0; it < 200 && hi > lo; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (secular(mid) > 0.0 ? lo : hi) = mid;
    }
    const double lam = hi;
    const double u1 = b1 / (lam - h1);
    const double u2 = (lam > h2) ? b2 / (lam - h2) : 0.0;
    cands.push_back(std::atan2(u2, u1));
  } else if (h1 > h2) {
    // Hard case: the multiplier sits at λ = h1.
    const double u2 = b2 / (h1 - h2);
    if (std::abs(u2) <= 1.0) {
      const double u1 = std::sqrt(1.0 - u2 * u2);
      cands.push_back(std::atan2(u2, u1));
      cands.push_back(std::atan2(u2, -u1));
    }
  }

  double best = 0.0;
  for (double s : cands) {
    // Newton polish on d/ds of the squared modulus, accepted only if it helps.
    for (int it = 0; it < 8; ++it) {
      const double cs = std::cos(s), sn = std::sin(s);
      const double re = cx + ax * cs, im = cy + ay * sn;
      const double d1 = -2.0 * ax * sn * re + 2.0 * ay * cs * im;
      const double d2 = -2.0 * ax * cs * re + 2.0 * ax * ax * sn * sn - 2.0 * ay * sn * im + 2.0 * ay * ay * cs * cs;
      if (d2 >= 0.0 || d1 == 0.0) break;
      const double next = s - d1 / d2;
      if (sq(next) < sq(s)) break;
      s = next;
    }
    best = std::max(best, sq(s));
  }
  out.value = std::sqrt(best);
  return out;
}

// -- classical radius ---------------------------------------------------------

double classical_radius(const CMatrix& t, double tol) {
  require_square(t);
  if (t.rows() == 1) return std::abs(t(0, 0));
  const double norm = spectral_norm(t);
  if (norm == 0.0) return 0.0;

  // Grid maxima within ‖T‖·h of the top value bracket every global maximizer;
  // each is refined by golden section down to a bracket of width tol.
  const std::size_t grid = 256;
  const double h = kTwoPi / static_cast<double>(grid);
  std::vector<double> f(grid);
  for (std::size_t k = 0; k < grid; ++k) f[k] = lambda_max_rotated(t, h * static_cast<double>(k));
  const double top = *std::max_element(f.begin(), f.end());

  double best = top;
  constexpr double kInvPhi = 0.61803398874989484820;
  for (std::size_t k = 0; k < grid; ++k) {
    const double prev = f[(k + grid - 1) % grid];
    const double next = f[(k + 1) % grid];
    if (f[k] < prev || f[k] < next || f[k] < top - norm * h) continue;
    double lo = h * static_cast<double>(k) - h;
    double hi = h * static_cast<double>(k) + h;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = lambda_max_rotated(t, x1), f2 = lambda_max_rotated(t, x2);
    while (hi - lo > std::max(tol, 1e-13)) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = lambda_max_rotated(t, x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = lambda_max_rotated(t, x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

// -- point clouds -------------------------------------------------------------

RangeCloud range_cloud(const CMatrix& t, QValue q, long n_points, std::uint64_t seed) {
  require_admissible_dim(t, q);
  if (n_points < 0) throw Error(ErrorCode::ParamOutOfRange, "n_points must be >= 0");
  RangeCloud cloud;
  cloud.q = q.q();
  CounterRng rng(seed, 0xC10D'0000ULL + t.rows());
  cloud.points.reserve(static_cast<std::size_t>(n_points));
  cloud.pairs.reserve(static_cast<std::size_t>(n_points));
  for (long k = 0; k < n_points; ++k) {
    AdmissiblePair pair = draw_pair(rng, t.rows(), q);
    const CVector tx = t * std::span<const cplx>(pair.x);
    cloud.points.push_back(inner(tx, pair.y));
    cloud.pairs.push_back(std::move(pair));
  }
  if (t.rows() == 2) {
    const Canonical2x2 c = canonical_2x2(t);
    std::vector<cplx> boundary(720);
    for (std::size_t k = 0; k < boundary.size(); ++k) {
      boundary[k] = c.boundary_point(q.q(), kTwoPi * static_cast<double>(k) / 720.0);
    }
    cloud.boundary = std::move(boundary);
  }
  return cloud;
}

}  // namespace qrad
