#pragma once

// Inner loops of spectral time propagation on split-complex vectors
// (separate real and imaginary arrays). Matrices are real, column-major,
// `rows x cols`, leading dimension `rows`.
//
// Every kernel has a scalar reference implementation; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. The two are held to agree
// within a few ulps by the equivalence tests.

#include <complex>
#include <cstddef>

namespace qrm::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  // y = A x
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* xr, const double* xi,
               double* yr, double* yi);
  // y = A^T x
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* xr, const double* xi,
                 double* yr, double* yi);
  // sum_k conj(a_k) b_k
  std::complex<double> (*dot_conj)(const double* ar, const double* ai, const double* br, const double* bi,
                                   std::size_t n);
  // sum_k |x_k|^2
  double (*norm_sq)(const double* xr, const double* xi, std::size_t n);
  // y -= s x
  void (*axpy_neg)(std::complex<double> s, const double* xr, const double* xi, double* yr, double* yi,
                   std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the binary or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();
// The table used by the library: AVX2 when available, unless QRM_FORCE_SCALAR is set.
const KernelTable& active();

// out_k = exp(-i e_k t) c_k. Shared by all tables (transcendental, not vectorized).
void phase_rotate(const double* energies, double t, const double* cr, const double* ci, double* outr,
                  double* outi, std::size_t n);

}  // namespace qrm::kernels
