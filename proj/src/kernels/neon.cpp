// NEON variants for AArch64, where Advanced SIMD is architecturally
// guaranteed. Two doubles per register; complex coefficients map to one
// register each.

#include "ahlfors/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace ahlfors::kernels {
namespace {

void lincomb(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t t = vmulq_f64(vb, vld1q_f64(y + i));
    vst1q_f64(out + i, vfmaq_f64(t, va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void mul(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void fma_acc(double alpha, const double* x, const double* y, double* out,
             std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ax = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(out + i, vfmaq_f64(vld1q_f64(out + i), ax, vld1q_f64(y + i)));
  }
  for (; i < n; ++i) out[i] += alpha * x[i] * y[i];
}

void scale(double alpha, const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_n_f64(vld1q_f64(x + i), alpha));
  }
  for (; i < n; ++i) out[i] = alpha * x[i];
}

void div(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vdivq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] / y[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t wx = vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i));
    acc = vfmaq_f64(acc, wx, vld1q_f64(y + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

const float64x2_t kImagSign = {-1.0, 1.0};

void spectral_ik(const double* k, const double* in, double* out,
                 std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const float64x2_t v = vld1q_f64(in + 2 * j);
    const float64x2_t swapped = vextq_f64(v, v, 1);
    vst1q_f64(out + 2 * j, vmulq_f64(vmulq_n_f64(kImagSign, k[j]), swapped));
  }
}

void spectral_ik_acc(const double* k, const double* in, double* out,
                     std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const float64x2_t v = vld1q_f64(in + 2 * j);
    const float64x2_t swapped = vextq_f64(v, v, 1);
    vst1q_f64(out + 2 * j, vfmaq_f64(vld1q_f64(out + 2 * j),
                                     vmulq_n_f64(kImagSign, k[j]), swapped));
  }
}

void spectral_real(const double* m, const double* in, double* out,
                   std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    vst1q_f64(out + 2 * j, vmulq_n_f64(vld1q_f64(in + 2 * j), m[j]));
  }
}

}  // namespace

namespace detail {
const Table kNeonTable{Backend::Neon, lincomb, axpy,    mul,
                       fma_acc,       scale,   div,     dot,
                       wdot,          max_abs, spectral_ik,
                       spectral_ik_acc, spectral_real};
}  // namespace detail

}  // namespace ahlfors::kernels
