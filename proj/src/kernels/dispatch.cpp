#include <atomic>

#include "alignkit/error.hpp"
#include "kernel_tables.hpp"

namespace alignkit::kernels {
namespace {

std::atomic<Backend>& selected() {
  static std::atomic<Backend> backend{detect_backend()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(ALIGNKIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

Backend detect_backend() {
  return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

const KernelTable& table(Backend backend) {
  if (!backend_available(backend)) {
    throw ConfigError("kernel backend '" + std::string(backend_name(backend)) +
                      "' is not available on this machine");
  }
#if defined(ALIGNKIT_HAVE_AVX2)
  if (backend == Backend::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

Backend active_backend() { return selected().load(std::memory_order_relaxed); }

void set_active_backend(Backend backend) {
  table(backend);  // validates
  selected().store(backend, std::memory_order_relaxed);
}

const KernelTable& active() {
#if defined(ALIGNKIT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

}  // namespace alignkit::kernels
