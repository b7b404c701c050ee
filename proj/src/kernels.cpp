#include "qrm/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace qrm::kernels {

#if defined(QRM_HAVE_AVX2_TU)
const KernelTable& avx2_table_unchecked();
#endif

namespace {

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols, const double* xr, const double* xi,
                 double* yr, double* yi) {
  for (std::size_t i = 0; i < rows; ++i) yr[i] = yi[i] = 0.0;
  for (std::size_t k = 0; k < cols; ++k) {
    const double* col = a + k * rows;
    const double br = xr[k];
    const double bi = xi[k];
    for (std::size_t i = 0; i < rows; ++i) {
      yr[i] += col[i] * br;
      yi[i] += col[i] * bi;
    }
  }
}

void gemv_t_scalar(const double* a, std::size_t rows, std::size_t cols, const double* xr, const double* xi,
                   double* yr, double* yi) {
  for (std::size_t k = 0; k < cols; ++k) {
    const double* col = a + k * rows;
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      sr += col[i] * xr[i];
      si += col[i] * xi[i];
    }
    yr[k] = sr;
    yi[k] = si;
  }
}

std::complex<double> dot_conj_scalar(const double* ar, const double* ai, const double* br, const double* bi,
                                     std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    re += ar[k] * br[k] + ai[k] * bi[k];
    im += ar[k] * bi[k] - ai[k] * br[k];
  }
  return {re, im};
}

double norm_sq_scalar(const double* xr, const double* xi, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += xr[k] * xr[k] + xi[k] * xi[k];
  return s;
}

void axpy_neg_scalar(std::complex<double> s, const double* xr, const double* xi, double* yr, double* yi,
                     std::size_t n) {
  const double sr = s.real();
  const double si = s.imag();
  for (std::size_t k = 0; k < n; ++k) {
    yr[k] -= sr * xr[k] - si * xi[k];
    yi[k] -= sr * xi[k] + si * xr[k];
  }
}

constexpr KernelTable kScalar{Isa::scalar,   "scalar",       gemv_scalar, gemv_t_scalar,
                              dot_conj_scalar, norm_sq_scalar, axpy_neg_scalar};

bool cpu_has_avx2_fma() {
#if defined(QRM_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(QRM_HAVE_AVX2_TU)
  static const bool ok = cpu_has_avx2_fma();
  return ok ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* table = [] {
    if (std::getenv("QRM_FORCE_SCALAR") != nullptr) return &kScalar;
    const KernelTable* simd = avx2_table();
    return simd != nullptr ? simd : &kScalar;
  }();
  return *table;
}

void phase_rotate(const double* energies, double t, const double* cr, const double* ci, double* outr,
                  double* outi, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = energies[k] * t;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    // (c - i s)(cr + i ci)
    outr[k] = c * cr[k] + s * ci[k];
    outi[k] = c * ci[k] - s * cr[k];
  }
}

}  // namespace qrm::kernels
