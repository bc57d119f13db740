#pragma once

#include <cstdint>
#include <cstring>

// Constants shared by the scalar and AVX2 pair-draw kernels.
namespace qrad::kernels::detail {

inline constexpr std::uint64_t kOneBits = 0x3FF0000000000000ULL;
inline constexpr std::uint64_t kMantissa = 0x000FFFFFFFFFFFFFULL;
inline constexpr double kHalfPi = 1.57079632679489661923;

// Taylor coefficients of sin t / t and cos t in t², highest degree first.
inline constexpr double kSin[9] = {1.0 / 355687428096000.0, -1.0 / 1307674368000.0, 1.0 / 6227020800.0,
                                   -1.0 / 39916800.0,       1.0 / 362880.0,         -1.0 / 5040.0,
                                   1.0 / 120.0,             -1.0 / 6.0,             1.0};
inline constexpr double kCos[10] = {-1.0 / 6402373705728000.0, 1.0 / 20922789888000.0, -1.0 / 87178291200.0,
                                    1.0 / 479001600.0,         -1.0 / 3628800.0,       1.0 / 40320.0,
                                    -1.0 / 720.0,              1.0 / 24.0,             -0.5,
                                    1.0};

// [1, 2) − 1 from 52 mantissa bits.
inline double unit_from_bits(std::uint64_t mantissa) {
  const std::uint64_t b = (mantissa & kMantissa) | kOneBits;
  double d;
  std::memcpy(&d, &b, sizeof d);
  return d - 1.0;
}

}  // namespace qrad::kernels::detail
