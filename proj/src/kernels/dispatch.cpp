#include <atomic>
#include <cstdlib>
#include <string>

#include "ahlfors/errors.hpp"
#include "ahlfors/kernels.hpp"

namespace ahlfors::kernels {
namespace {

bool cpu_has(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(AHLFORS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(AHLFORS_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Table* resolve_default() {
  if (const char* env = std::getenv("AHLFORS_KERNELS")) {
    if (std::string(env) == "scalar") return &detail::kScalarTable;
  }
#if defined(AHLFORS_HAVE_AVX2)
  if (cpu_has(Backend::Avx2)) return &detail::kAvx2Table;
#endif
#if defined(AHLFORS_HAVE_NEON)
  return &detail::kNeonTable;
#endif
  return &detail::kScalarTable;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{resolve_default()};
  return t;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool supported(Backend b) { return cpu_has(b); }

const Table& table(Backend b) {
  if (!cpu_has(b)) {
    throw InvalidArgument("kernel backend '" + std::string(backend_name(b)) +
                          "' is not available on this build/CPU");
  }
  switch (b) {
    case Backend::Scalar:
      return detail::kScalarTable;
#if defined(AHLFORS_HAVE_AVX2)
    case Backend::Avx2:
      return detail::kAvx2Table;
#endif
#if defined(AHLFORS_HAVE_NEON)
    case Backend::Neon:
      return detail::kNeonTable;
#endif
    default:
      break;
  }
  return detail::kScalarTable;
}

const Table& active() { return *current().load(std::memory_order_acquire); }

Backend select(Backend b) {
  const Table& t = table(b);
  return current().exchange(&t, std::memory_order_acq_rel)->backend;
}

}  // namespace ahlfors::kernels
