#pragma once
// Pointwise and spectral-multiplier kernels for grid fields.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2+FMA
// on x86-64, NEON on AArch64) are compiled in separate translation units and
// selected at startup from CPU feature detection. The equivalence tests in
// tests/unit/test_kernels.cpp pin the SIMD variants against the scalar ones.
//
// Complex spectra are passed as interleaved (re, im) double arrays, which is
// the layout of fftw_complex.

#include <cstddef>
#include <string_view>

namespace ahlfors::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);

struct Table {
  Backend backend;

  // out[i] = a * x[i] + b * y[i]
  void (*lincomb)(double a, const double* x, double b, const double* y,
                  double* out, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = x[i] * y[i]
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  // out[i] += alpha * x[i] * y[i]
  void (*fma_acc)(double alpha, const double* x, const double* y, double* out,
                  std::size_t n);
  // out[i] = alpha * x[i]
  void (*scale)(double alpha, const double* x, double* out, std::size_t n);
  // out[i] = x[i] / y[i]
  void (*div)(const double* x, const double* y, double* out, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i w[i] * x[i] * y[i]
  double (*wdot)(const double* w, const double* x, const double* y,
                 std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);

  // Spectral multipliers over n complex coefficients:
  //   ik:     out[j] = i * k[j] * in[j]
  //   ik_acc: out[j] += i * k[j] * in[j]
  //   real:   out[j] = m[j] * in[j]
  void (*spectral_ik)(const double* k, const double* in, double* out,
                      std::size_t n);
  void (*spectral_ik_acc)(const double* k, const double* in, double* out,
                          std::size_t n);
  void (*spectral_real)(const double* m, const double* in, double* out,
                        std::size_t n);
};

// Table currently used by the field arithmetic. Resolved once on first use:
// the widest supported SIMD backend, unless AHLFORS_KERNELS=scalar is set.
const Table& active();

// Table for a specific backend. Throws InvalidArgument when the backend was
// not compiled in or the CPU lacks the instructions.
const Table& table(Backend b);

bool supported(Backend b);

// Switches the active table and returns the previous backend. Not
// synchronized; intended for tests and benchmarks that compare backends.
Backend select(Backend b);

namespace detail {
extern const Table kScalarTable;
#if defined(AHLFORS_HAVE_AVX2)
extern const Table kAvx2Table;
#endif
#if defined(AHLFORS_HAVE_NEON)
extern const Table kNeonTable;
#endif
}  // namespace detail

}  // namespace ahlfors::kernels
