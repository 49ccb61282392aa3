#pragma once

// Dense double-precision kernels used by the E-steps and decoders.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant compiled in its own translation unit. The variant is selected once at
// startup from CPUID and can be overridden (tests pin both and compare).

#include <cstddef>
#include <span>
#include <string_view>

namespace alignkit::kernels {

enum class Backend { scalar, avx2 };

struct KernelTable {
  /// Sum of x[0..n).
  double (*sum)(const double* x, std::size_t n);
  /// x[k] *= alpha.
  void (*scale)(double* x, std::size_t n, double alpha);
  /// out[k] = a[k] * b[k]. out may alias a or b.
  void (*multiply)(double* out, const double* a, const double* b, std::size_t n);
  /// Sum of a[k] * b[k].
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y[k] += alpha * x[k].
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// Index of the first maximum; 0 for empty input. NaNs never win.
  std::size_t (*argmax)(const double* x, std::size_t n);
};

std::string_view backend_name(Backend backend);

/// True when the variant was compiled in and the CPU supports it.
bool backend_available(Backend backend);

/// Best available backend on this machine.
Backend detect_backend();

const KernelTable& table(Backend backend);

/// The process-wide selected backend (detect_backend() unless overridden).
Backend active_backend();

/// Throws ConfigError if the backend is unavailable.
void set_active_backend(Backend backend);

const KernelTable& active();

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline void scale(std::span<double> x, double alpha) { active().scale(x.data(), x.size(), alpha); }

inline void multiply(std::span<double> out, std::span<const double> a, std::span<const double> b) {
  active().multiply(out.data(), a.data(), b.data(), out.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), y.size());
}

inline std::size_t argmax(std::span<const double> x) { return active().argmax(x.data(), x.size()); }

}  // namespace alignkit::kernels
