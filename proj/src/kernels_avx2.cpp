// Compiled with -mavx2 -mfma. Nothing in here may be called before the
// runtime CPU check in kernels.cpp has passed.

#include <immintrin.h>

#include "qrm/kernels.hpp"

namespace qrm::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void gemv_avx2(const double* a, std::size_t rows, std::size_t cols, const double* xr, const double* xi,
               double* yr, double* yi) {
  for (std::size_t i = 0; i < rows; ++i) yr[i] = yi[i] = 0.0;
  const std::size_t body = rows & ~std::size_t{3};
  for (std::size_t k = 0; k < cols; ++k) {
    const double* col = a + k * rows;
    const __m256d br = _mm256_set1_pd(xr[k]);
    const __m256d bi = _mm256_set1_pd(xi[k]);
    std::size_t i = 0;
    for (; i < body; i += 4) {
      const __m256d c = _mm256_loadu_pd(col + i);
      _mm256_storeu_pd(yr + i, _mm256_fmadd_pd(c, br, _mm256_loadu_pd(yr + i)));
      _mm256_storeu_pd(yi + i, _mm256_fmadd_pd(c, bi, _mm256_loadu_pd(yi + i)));
    }
    for (; i < rows; ++i) {
      yr[i] += col[i] * xr[k];
      yi[i] += col[i] * xi[k];
    }
  }
}

void gemv_t_avx2(const double* a, std::size_t rows, std::size_t cols, const double* xr, const double* xi,
                 double* yr, double* yi) {
  const std::size_t body = rows & ~std::size_t{3};
  for (std::size_t k = 0; k < cols; ++k) {
    const double* col = a + k * rows;
    __m256d sr = _mm256_setzero_pd();
    __m256d si = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < body; i += 4) {
      const __m256d c = _mm256_loadu_pd(col + i);
      sr = _mm256_fmadd_pd(c, _mm256_loadu_pd(xr + i), sr);
      si = _mm256_fmadd_pd(c, _mm256_loadu_pd(xi + i), si);
    }
    double tr = hsum(sr);
    double ti = hsum(si);
    for (; i < rows; ++i) {
      tr += col[i] * xr[i];
      ti += col[i] * xi[i];
    }
    yr[k] = tr;
    yi[k] = ti;
  }
}

std::complex<double> dot_conj_avx2(const double* ar, const double* ai, const double* br, const double* bi,
                                   std::size_t n) {
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  const std::size_t body = n & ~std::size_t{3};
  std::size_t k = 0;
  for (; k < body; k += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + k);
    const __m256d xi = _mm256_loadu_pd(ai + k);
    const __m256d yr = _mm256_loadu_pd(br + k);
    const __m256d yi = _mm256_loadu_pd(bi + k);
    re = _mm256_fmadd_pd(xr, yr, re);
    re = _mm256_fmadd_pd(xi, yi, re);
    im = _mm256_fmadd_pd(xr, yi, im);
    im = _mm256_fnmadd_pd(xi, yr, im);
  }
  double sre = hsum(re);
  double sim = hsum(im);
  for (; k < n; ++k) {
    sre += ar[k] * br[k] + ai[k] * bi[k];
    sim += ar[k] * bi[k] - ai[k] * br[k];
  }
  return {sre, sim};
}

double norm_sq_avx2(const double* xr, const double* xi, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n & ~std::size_t{3};
  std::size_t k = 0;
  for (; k < body; k += 4) {
    const __m256d r = _mm256_loadu_pd(xr + k);
    const __m256d i = _mm256_loadu_pd(xi + k);
    acc = _mm256_fmadd_pd(r, r, acc);
    acc = _mm256_fmadd_pd(i, i, acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += xr[k] * xr[k] + xi[k] * xi[k];
  return s;
}

void axpy_neg_avx2(std::complex<double> s, const double* xr, const double* xi, double* yr, double* yi,
                   std::size_t n) {
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  const std::size_t body = n & ~std::size_t{3};
  std::size_t k = 0;
  for (; k < body; k += 4) {
    const __m256d r = _mm256_loadu_pd(xr + k);
    const __m256d i = _mm256_loadu_pd(xi + k);
    // re: y -= sr*r - si*i ; im: y -= sr*i + si*r
    __m256d tr = _mm256_fmsub_pd(sr, r, _mm256_mul_pd(si, i));
    __m256d ti = _mm256_fmadd_pd(sr, i, _mm256_mul_pd(si, r));
    _mm256_storeu_pd(yr + k, _mm256_sub_pd(_mm256_loadu_pd(yr + k), tr));
    _mm256_storeu_pd(yi + k, _mm256_sub_pd(_mm256_loadu_pd(yi + k), ti));
  }
  for (; k < n; ++k) {
    yr[k] -= s.real() * xr[k] - s.imag() * xi[k];
    yi[k] -= s.real() * xi[k] + s.imag() * xr[k];
  }
}

constexpr KernelTable kAvx2{Isa::avx2,   "avx2",       gemv_avx2,    gemv_t_avx2,
                            dot_conj_avx2, norm_sq_avx2, axpy_neg_avx2};

}  // namespace

const KernelTable& avx2_table_unchecked() { return kAvx2; }

}  // namespace qrm::kernels
