#include "kernel_tables.hpp"

#include <limits>

namespace alignkit::kernels {
namespace {

// The scalar sums use four interleaved accumulators so that the reference and
// the vector variant associate additions the same way for n >= 4.
double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc[0] += x[k];
    acc[1] += x[k + 1];
    acc[2] += x[k + 2];
    acc[3] += x[k + 3];
  }
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; k < n; ++k) total += x[k];
  return total;
}

void scale_scalar(double* x, std::size_t n, double alpha) {
  for (std::size_t k = 0; k < n; ++k) x[k] *= alpha;
}

void multiply_scalar(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * b[k];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc[0] += a[k] * b[k];
    acc[1] += a[k + 1] * b[k + 1];
    acc[2] += a[k + 2] * b[k + 2];
    acc[3] += a[k + 3] * b[k + 3];
  }
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; k < n; ++k) total += a[k] * b[k];
  return total;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

std::size_t argmax_scalar(const double* x, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (x[k] > best) best = x[k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (x[k] == best) return k;
  }
  return 0;
}

}  // namespace

const KernelTable& detail::scalar_table() {
  static const KernelTable kTable{sum_scalar, scale_scalar, multiply_scalar,
                                  dot_scalar, axpy_scalar,  argmax_scalar};
  return kTable;
}

}  // namespace alignkit::kernels
