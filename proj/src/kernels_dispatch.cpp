#include <cstdlib>
#include <string_view>

#include "qrad/kernels.hpp"

namespace qrad::kernels {

namespace {

const KernelTable kScalar{Variant::scalar, &matvec_scalar, &pair2_values_scalar, &pair2_draw_scalar};
#if defined(QRAD_HAVE_AVX2)
const KernelTable kAvx2{Variant::avx2, &matvec_avx2, &pair2_values_avx2, &pair2_draw_avx2};
#endif

const KernelTable& select() {
  const char* forced = std::getenv("QRAD_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") return kScalar;
#if defined(QRAD_HAVE_AVX2)
  if (avx2_available()) return kAvx2;
#endif
  return kScalar;
}

}  // namespace

bool avx2_available() {
#if defined(QRAD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& scalar_table() { return kScalar; }

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view to_string(Variant v) { return v == Variant::avx2 ? "avx2" : "scalar"; }

}  // namespace qrad::kernels
