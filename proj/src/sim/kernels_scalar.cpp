#include "kernels_internal.hpp"

namespace qsp::kernels {

void ry_scalar(double* v, std::size_t dim, int pos, double c, double s) {
  const std::size_t stride = std::size_t{1} << pos;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const double a0 = v[i], a1 = v[i + stride];
      v[i] = c * a0 - s * a1;
      v[i + stride] = s * a0 + c * a1;
    }
  }
}

void x_scalar(double* v, std::size_t dim, int pos) {
  const std::size_t stride = std::size_t{1} << pos;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) std::swap(v[i], v[i + stride]);
  }
}

void cnot_scalar(double* v, std::size_t dim, int control_pos, int target_pos) {
  const std::size_t cm = std::size_t{1} << control_pos;
  const std::size_t tm = std::size_t{1} << target_pos;
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cm) && !(i & tm)) std::swap(v[i], v[i | tm]);
  }
}

double dot_scalar(const double* a, const double* b, std::size_t dim) {
  double s = 0;
  for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

const KernelTable& scalar() {
  static const KernelTable table{"scalar", ry_scalar, x_scalar, cnot_scalar, dot_scalar};
  return table;
}

}  // namespace qsp::kernels
