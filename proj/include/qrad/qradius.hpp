#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qrad/cmatrix.hpp"

namespace qrad {

/// q ∈ [0, 1]. A complex q is reduced to its modulus first, since
/// w_{λq}(T) = w_q(T) for |λ| = 1.
class QValue {
 public:
  explicit QValue(double q);
  static QValue from_complex(cplx q);

  double q() const noexcept { return q_; }
  /// sqrt(1 − q²)
  double p() const noexcept { return p_; }
  operator double() const noexcept { return q_; }

 private:
  double q_;
  double p_;
};

/// Unit vectors with ⟨x, y⟩ = q.
struct AdmissiblePair {
  CVector x;
  CVector y;
};

/// Max deviation over |‖x‖−1|, |‖y‖−1|, |⟨x,y⟩−q|.
double admissibility_error(const AdmissiblePair& pair, double q);
/// |⟨T x, y⟩|
double pair_value(const CMatrix& t, const AdmissiblePair& pair);

enum class Method { exact2x2, optimize, sample };
std::string_view to_string(Method m);

struct RadiusEstimate {
  double value = 0.0;
  AdmissiblePair witness;
  double q = 0.0;
  Method method = Method::optimize;
  int restarts_used = 0;
  long iterations_used = 0;
};

/// Unitary normal form U* T U = e^{it}[[γ, e^{iθ}a], [e^{iθ}b, γ]], 0 ≤ b ≤ a.
/// θ is 0 whenever tr T = 0 or a = 0.
struct Canonical2x2 {
  double t = 0.0;
  double gamma = 0.0;
  double a = 0.0;
  double b = 0.0;
  double theta = 0.0;
  CMatrix U;

  CMatrix form() const;
  /// Point of the boundary curve of W_q at parameter s.
  cplx boundary_point(double q, double s) const;
};

struct RangeCloud {
  std::vector<cplx> points;
  std::vector<AdmissiblePair> pairs;
  std::optional<std::vector<cplx>> boundary;
  double q = 0.0;
};

struct ObjectiveResult {
  double value = 0.0;  // q·|a| + p·‖r‖
  CVector y;           // maximizing partner of x
  cplx a;              // ⟨T x, x⟩
  double residual = 0.0;  // ‖T x − a x‖
};

/// Max of |⟨T x, y⟩| over admissible y, in closed form.
/// Throws DimensionTooSmall for n = 1, q < 1.
ObjectiveResult objective(const CMatrix& t, QValue q, std::span<const cplx> x);

struct Effort {
  int restarts = 32;
  int max_iter = 300;
};
inline constexpr Effort kComputeEffort{32, 300};
inline constexpr Effort kVerifyEffort{64, 500};

/// Applies QRAD_EFFORT (fast | default | high) to a base effort.
Effort scaled_effort(Effort base);
Effort scaled_effort(Effort base, std::string_view level);

/// Multi-start projected-gradient ascent of the objective on the unit sphere.
/// The value is |⟨T x, y⟩| re-evaluated at the returned witness.
RadiusEstimate estimate_wq(const CMatrix& t, QValue q, int restarts, int max_iter, std::uint64_t seed);
inline RadiusEstimate estimate_wq(const CMatrix& t, QValue q, Effort e, std::uint64_t seed) {
  return estimate_wq(t, q, e.restarts, e.max_iter, seed);
}

/// Monte-Carlo max over uniformly drawn admissible pairs.
RadiusEstimate sample_wq(const CMatrix& t, QValue q, long n_samples, std::uint64_t seed);

/// Throws NotTwoByTwo.
Canonical2x2 canonical_2x2(const CMatrix& t);

struct Exact2x2 {
  double value = 0.0;
  Canonical2x2 canon;
};
/// Exact w_q for 2×2 from the elliptical range. Throws NotTwoByTwo.
Exact2x2 wq_2x2_exact(const CMatrix& t, QValue q);

/// Classical numerical radius max_θ λ_max(Re(e^{iθ}T)).
double classical_radius(const CMatrix& t, double tol = 1e-10);

RangeCloud range_cloud(const CMatrix& t, QValue q, long n_points, std::uint64_t seed);

}  // namespace qrad
