#include "ahlfors/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "ahlfors/errors.hpp"
#include "ahlfors/kernels.hpp"

namespace ahlfors {
namespace {

// The FFTW planner is not thread-safe; execution of finished plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void GridSpec::validate() const {
  if (dimension < 2) throw InvalidArgument("grid dimension must be >= 2");
  if (static_cast<int>(resolution.size()) != dimension)
    throw InvalidArgument("grid resolution needs one entry per axis");
  if (!periods.empty() && static_cast<int>(periods.size()) != dimension)
    throw InvalidArgument("grid periods need one entry per axis");
  for (int a = 0; a < dimension; ++a) {
    const int n = resolution[a];
    if (n < 8 || n % 2 != 0)
      throw InvalidArgument("axis " + std::to_string(a) +
                            ": resolution must be even and >= 8, got " +
                            std::to_string(n));
    if (!periods.empty() && !(periods[a] > 0.0 && std::isfinite(periods[a])))
      throw InvalidArgument("axis " + std::to_string(a) +
                            ": period must be positive");
  }
}

GridPtr Grid::create(GridSpec spec) {
  spec.validate();
  if (spec.periods.empty())
    spec.periods.assign(spec.dimension, 2.0 * std::numbers::pi);
  return GridPtr(new Grid(std::move(spec)));
}

Grid::Grid(GridSpec spec) : spec_(std::move(spec)) {
  const int n = spec_.dimension;
  size_ = 1;
  cell_volume_ = 1.0;
  for (int a = 0; a < n; ++a) {
    size_ *= static_cast<std::size_t>(points(a));
    cell_volume_ *= spacing(a);
  }
  const int last = points(n - 1) / 2 + 1;
  spectral_size_ = size_ / static_cast<std::size_t>(points(n - 1)) * last;

  // Half-spectrum index (j_0, ..., j_{n-1}) with j_{n-1} in [0, N/2].
  wavenumbers_.assign(n, std::vector<double>(spectral_size_, 0.0));
  std::vector<int> extent(spec_.resolution);
  extent[n - 1] = last;
  std::vector<int> j(n, 0);
  for (std::size_t c = 0; c < spectral_size_; ++c) {
    std::size_t rem = c;
    for (int a = n - 1; a >= 0; --a) {
      j[a] = static_cast<int>(rem % extent[a]);
      rem /= extent[a];
    }
    for (int a = 0; a < n; ++a) {
      const int N = points(a);
      int k = j[a] <= N / 2 ? j[a] : j[a] - N;
      if (j[a] == N / 2) k = 0;  // Nyquist
      wavenumbers_[a][c] = 2.0 * std::numbers::pi * k / period(a);
    }
  }

  std::lock_guard lock(planner_mutex());
  double* in = fftw_alloc_real(size_);
  fftw_complex* out = fftw_alloc_complex(spectral_size_);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c(n, spec_.resolution.data(), in, out, flags);
  backward_plan_ =
      fftw_plan_dft_c2r(n, spec_.resolution.data(), out, in, flags);
  fftw_free(in);
  fftw_free(out);
}

Grid::~Grid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= period(a);
  return v;
}

int Grid::band_limit() const {
  int m = points(0) / 4;
  for (int a = 1; a < dim(); ++a) m = std::min(m, points(a) / 4);
  return m;
}

double Grid::max_wavenumber() const {
  double k = 0.0;
  for (int a = 0; a < dim(); ++a)
    k = std::max(k, std::numbers::pi * points(a) / period(a));
  return k;
}

void Grid::unflatten(std::size_t p, std::span<int> index) const {
  for (int a = dim() - 1; a >= 0; --a) {
    index[a] = static_cast<int>(p % points(a));
    p /= points(a);
  }
}

void Grid::coordinates(std::size_t p, std::span<double> x) const {
  for (int a = dim() - 1; a >= 0; --a) {
    x[a] = static_cast<double>(p % points(a)) * spacing(a);
    p /= points(a);
  }
}

double Grid::phase(std::span<const int> wavevector, std::size_t p) const {
  // k_a i_a reduced mod N_a keeps the argument of cos/sin small and exact.
  double t = 0.0;
  for (int a = dim() - 1; a >= 0; --a) {
    const long long N = points(a);
    const long long i = static_cast<long long>(p % N);
    p /= N;
    const long long r = ((wavevector[a] * i) % N + N) % N;
    t += static_cast<double>(r) / static_cast<double>(N);
  }
  return 2.0 * std::numbers::pi * t;
}

void Grid::forward(std::span<const double> in,
                   std::span<std::complex<double>> out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_),
                       const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Grid::backward(std::span<std::complex<double>> in,
                    std::span<double> out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_plan_),
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
  kernels::active().scale(1.0 / static_cast<double>(size_), out.data(),
                          out.data(), out.size());
}

}  // namespace ahlfors
