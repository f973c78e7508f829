#pragma once

#include <utility>

#include "qsprep/sim_kernels.hpp"

namespace qsp::kernels {

void ry_scalar(double* v, std::size_t dim, int pos, double c, double s);
void x_scalar(double* v, std::size_t dim, int pos);
void cnot_scalar(double* v, std::size_t dim, int control_pos, int target_pos);
double dot_scalar(const double* a, const double* b, std::size_t dim);

#if defined(QSPREP_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace qsp::kernels
