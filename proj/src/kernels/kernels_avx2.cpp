// Compiled with -mavx2. Only reachable through the dispatch table after the
// CPUID check in dispatch.cpp.

#include <immintrin.h>

#include <limits>

#include "kernel_tables.hpp"

namespace alignkit::kernels {
namespace {

// Lane k of the accumulator plays the role of acc[k] in the scalar reference,
// and the horizontal reduction matches its (acc0 + acc2) + (acc1 + acc3)
// order, so both variants return bit-identical sums.
inline double reduce_lanes(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + k));
  double total = reduce_lanes(acc);
  for (; k < n; ++k) total += x[k];
  return total;
}

void scale_avx2(double* x, std::size_t n, double alpha) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) _mm256_storeu_pd(x + k, _mm256_mul_pd(_mm256_loadu_pd(x + k), a));
  for (; k < n; ++k) x[k] *= alpha;
}

void multiply_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  for (; k < n; ++k) out[k] = a[k] * b[k];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  double total = reduce_lanes(acc);
  for (; k < n; ++k) total += a[k] * b[k];
  return total;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d prod = _mm256_mul_pd(a, _mm256_loadu_pd(x + k));
    _mm256_storeu_pd(y + k, _mm256_add_pd(_mm256_loadu_pd(y + k), prod));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

std::size_t argmax_avx2(const double* x, std::size_t n) {
  // MAXPD returns its second operand when either is NaN, so NaNs are skipped.
  __m256d acc = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) acc = _mm256_max_pd(_mm256_loadu_pd(x + k), acc);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double best = lanes[0];
  for (int l = 1; l < 4; ++l) {
    if (lanes[l] > best) best = lanes[l];
  }
  for (; k < n; ++k) {
    if (x[k] > best) best = x[k];
  }

  const __m256d target = _mm256_set1_pd(best);
  k = 0;
  for (; k + 4 <= n; k += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + k), target, _CMP_EQ_OQ));
    if (mask != 0) return k + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; k < n; ++k) {
    if (x[k] == best) return k;
  }
  return 0;
}

}  // namespace

const KernelTable& detail::avx2_table() {
  static const KernelTable kTable{sum_avx2, scale_avx2, multiply_avx2,
                                  dot_avx2, axpy_avx2,  argmax_avx2};
  return kTable;
}

}  // namespace alignkit::kernels
