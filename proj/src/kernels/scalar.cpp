#include "ahlfors/kernels.hpp"

#include <cmath>

namespace ahlfors::kernels {
namespace {

void lincomb(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mul(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void fma_acc(double alpha, const double* x, const double* y, double* out,
             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += alpha * x[i] * y[i];
}

void scale(double alpha, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}

void div(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] / y[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

void spectral_ik(const double* k, const double* in, double* out,
                 std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double re = in[2 * j];
    const double im = in[2 * j + 1];
    out[2 * j] = -k[j] * im;
    out[2 * j + 1] = k[j] * re;
  }
}

void spectral_ik_acc(const double* k, const double* in, double* out,
                     std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double re = in[2 * j];
    const double im = in[2 * j + 1];
    out[2 * j] -= k[j] * im;
    out[2 * j + 1] += k[j] * re;
  }
}

void spectral_real(const double* m, const double* in, double* out,
                   std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    out[2 * j] = m[j] * in[2 * j];
    out[2 * j + 1] = m[j] * in[2 * j + 1];
  }
}

}  // namespace

namespace detail {
const Table kScalarTable{Backend::Scalar, lincomb, axpy,    mul,
                         fma_acc,         scale,   div,     dot,
                         wdot,            max_abs, spectral_ik,
                         spectral_ik_acc, spectral_real};
}  // namespace detail

}  // namespace ahlfors::kernels
