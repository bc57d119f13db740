#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

#include "qrad/cmatrix.hpp"

namespace qrad {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Folds a list of tags into a seed; used to derive independent sub-streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x632BE59BD9B4E019ULL));
  return h;
}

inline constexpr std::uint64_t kCounterStep = 0xD1B54A32D192ED03ULL;

/// k-th draw (k ≥ 1) of the stream with this key.
constexpr std::uint64_t counter_draw(std::uint64_t key, std::uint64_t k) noexcept {
  return mix64(key + kCounterStep * k);
}

/// Counter-based generator: the k-th draw is a pure function of (key, k).
/// There is no shared state; two generators built from the same key produce
/// identical sequences regardless of what else runs in the process.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(derive_seed(seed, {stream})) {}

  std::uint64_t next_u64() noexcept { return counter_draw(key_, ++counter_); }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform on [-1, 1).
  double symmetric() noexcept { return 2.0 * uniform() - 1.0; }
  double normal() noexcept;
  /// Standard complex Gaussian, E|z|^2 = 1.
  cplx complex_normal() noexcept;
  /// Uniform point on the unit circle (disc rejection, no trigonometry).
  cplx unit_phase() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class EnsembleKind { ginibre, hermitian, unitary, psd, contraction01, projection, nilpotent_sq_zero };

std::string_view to_string(EnsembleKind kind);
EnsembleKind ensemble_from_string(std::string_view name);

/// Deterministic for fixed (kind, n, seed). Throws BadDimension for n = 0,
/// and for n < 2 with nilpotent_sq_zero.
CMatrix gen_random(EnsembleKind kind, std::size_t n, std::uint64_t seed);

CVector random_unit_vector(CounterRng& rng, std::size_t n);
CVector random_gaussian_vector(CounterRng& rng, std::size_t n);

}  // namespace qrad
