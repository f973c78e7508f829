// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "kernels_internal.hpp"

namespace qsp::kernels {
namespace {

// Vector paths need runs of at least 4 contiguous doubles, i.e. pos >= 2.
void ry_avx2(double* v, std::size_t dim, int pos, double c, double s) {
  if (pos < 2) return ry_scalar(v, dim, pos, c, s);
  const std::size_t stride = std::size_t{1} << pos;
  const __m256d vc = _mm256_set1_pd(c), vs = _mm256_set1_pd(s);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 4) {
      __m256d a0 = _mm256_loadu_pd(v + i);
      __m256d a1 = _mm256_loadu_pd(v + i + stride);
      __m256d r0 = _mm256_sub_pd(_mm256_mul_pd(vc, a0), _mm256_mul_pd(vs, a1));
      __m256d r1 = _mm256_add_pd(_mm256_mul_pd(vs, a0), _mm256_mul_pd(vc, a1));
      _mm256_storeu_pd(v + i, r0);
      _mm256_storeu_pd(v + i + stride, r1);
    }
  }
}

void x_avx2(double* v, std::size_t dim, int pos) {
  if (pos < 2) return x_scalar(v, dim, pos);
  const std::size_t stride = std::size_t{1} << pos;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 4) {
      __m256d a0 = _mm256_loadu_pd(v + i);
      __m256d a1 = _mm256_loadu_pd(v + i + stride);
      _mm256_storeu_pd(v + i, a1);
      _mm256_storeu_pd(v + i + stride, a0);
    }
  }
}

// Swaps blocks of 2^low contiguous amplitudes, low = min(control, target).
void cnot_avx2(double* v, std::size_t dim, int control_pos, int target_pos) {
  const int low = std::min(control_pos, target_pos);
  if (low < 2) return cnot_scalar(v, dim, control_pos, target_pos);
  const std::size_t cm = std::size_t{1} << control_pos;
  const std::size_t tm = std::size_t{1} << target_pos;
  const std::size_t run = std::size_t{1} << low;
  for (std::size_t base = 0; base < dim; base += run) {
    if (!(base & cm) || (base & tm)) continue;
    for (std::size_t i = base; i < base + run; i += 4) {
      __m256d a0 = _mm256_loadu_pd(v + i);
      __m256d a1 = _mm256_loadu_pd(v + (i | tm));
      _mm256_storeu_pd(v + i, a1);
      _mm256_storeu_pd(v + (i | tm), a0);
    }
  }
}

double dot_avx2(const double* a, const double* b, std::size_t dim) {
  if (dim < 4) return dot_scalar(a, b, dim);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= dim; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < dim; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", ry_avx2, x_avx2, cnot_avx2, dot_avx2};
  return table;
}

}  // namespace qsp::kernels
