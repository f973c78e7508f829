#pragma once

#include <cstddef>
#include <string_view>

namespace qsp::kernels {

// Dense real statevector kernels. `pos` arguments are bit positions
// (0 = least significant), not qubit numbers.
struct KernelTable {
  std::string_view name;
  void (*ry)(double* v, std::size_t dim, int pos, double c, double s);
  void (*x)(double* v, std::size_t dim, int pos);
  void (*cnot)(double* v, std::size_t dim, int control_pos, int target_pos);
  double (*dot)(const double* a, const double* b, std::size_t dim);
};

const KernelTable& scalar();
// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();
// Chosen once at startup: AVX2 when available unless QSPREP_SIMD=scalar.
const KernelTable& active();

}  // namespace qsp::kernels
