// AVX2 + FMA variants. This file is compiled with -mavx2 -mfma and is only
// reached through the dispatch table after a CPU feature check.

#include "ahlfors/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace ahlfors::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// [k0, k1] -> [k0, k0, k1, k1]
inline __m256d dup_pairs(const double* k) {
  const __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(k));
  return _mm256_permute4x64_pd(v, 0x50);
}

void lincomb(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), t));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void mul(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void fma_acc(double alpha, const double* x, const double* y, double* out,
             std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d r =
        _mm256_fmadd_pd(ax, _mm256_loadu_pd(y + i), _mm256_loadu_pd(out + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] += alpha * x[i] * y[i];
}

void scale(double alpha, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = alpha * x[i];
}

void div(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] / y[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d wx0 =
        _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    const __m256d wx1 =
        _mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(x + i + 4));
    acc0 = _mm256_fmadd_pd(wx0, _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(wx1, _mm256_loadu_pd(y + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::fmax(std::fmax(lanes[0], lanes[1]),
                       std::fmax(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

// i*k*(re + i im) = (-k im) + i (k re): swap re/im, then flip the sign of the
// real slot. Built per call so no AVX code runs during static initialization.
inline __m256d imag_sign() { return _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0); }

void spectral_ik(const double* k, const double* in, double* out,
                 std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d v = _mm256_loadu_pd(in + 2 * j);
    const __m256d swapped = _mm256_permute_pd(v, 0x5);
    const __m256d kk = _mm256_mul_pd(dup_pairs(k + j), imag_sign());
    _mm256_storeu_pd(out + 2 * j, _mm256_mul_pd(kk, swapped));
  }
  for (; j < n; ++j) {
    const double re = in[2 * j];
    const double im = in[2 * j + 1];
    out[2 * j] = -k[j] * im;
    out[2 * j + 1] = k[j] * re;
  }
}

void spectral_ik_acc(const double* k, const double* in, double* out,
                     std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d v = _mm256_loadu_pd(in + 2 * j);
    const __m256d swapped = _mm256_permute_pd(v, 0x5);
    const __m256d kk = _mm256_mul_pd(dup_pairs(k + j), imag_sign());
    _mm256_storeu_pd(out + 2 * j, _mm256_fmadd_pd(kk, swapped,
                                                  _mm256_loadu_pd(out + 2 * j)));
  }
  for (; j < n; ++j) {
    const double re = in[2 * j];
    const double im = in[2 * j + 1];
    out[2 * j] -= k[j] * im;
    out[2 * j + 1] += k[j] * re;
  }
}

void spectral_real(const double* m, const double* in, double* out,
                   std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    _mm256_storeu_pd(out + 2 * j,
                     _mm256_mul_pd(dup_pairs(m + j), _mm256_loadu_pd(in + 2 * j)));
  }
  for (; j < n; ++j) {
    out[2 * j] = m[j] * in[2 * j];
    out[2 * j + 1] = m[j] * in[2 * j + 1];
  }
}

}  // namespace

namespace detail {
const Table kAvx2Table{Backend::Avx2, lincomb, axpy,    mul,
                       fma_acc,       scale,   div,     dot,
                       wdot,          max_abs, spectral_ik,
                       spectral_ik_acc, spectral_real};
}  // namespace detail

}  // namespace ahlfors::kernels
