#include "ahlfors/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ahlfors/errors.hpp"
#include "ahlfors/kernels.hpp"

namespace ahlfors {

using Spectrum = std::vector<std::complex<double>>;

ScalarField::ScalarField(GridPtr grid, double value)
    : grid_(std::move(grid)), values_(grid_->size(), value) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw InvalidArgument("field length " + std::to_string(values_.size()) +
                          " does not match grid size " +
                          std::to_string(grid_->size()));
}

ScalarField ScalarField::from_function(
    GridPtr grid, const std::function<double(std::span<const double>)>& f) {
  ScalarField out(grid);
  std::vector<double> x(grid->dim());
  for (std::size_t p = 0; p < grid->size(); ++p) {
    grid->coordinates(p, x);
    out.values_[p] = f(x);
  }
  return out;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid() == b.grid()) return;
  if (!a.grid() || !b.grid() ||
      a.grid()->spec().resolution != b.grid()->spec().resolution ||
      a.grid()->spec().periods != b.grid()->spec().periods)
    throw InvalidArgument("fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*this, o);
  kernels::active().axpy(1.0, o.data(), data(), size());
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*this, o);
  kernels::active().axpy(-1.0, o.data(), data(), size());
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  require_same_grid(*this, o);
  kernels::active().mul(data(), o.data(), data(), size());
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  kernels::active().scale(a, data(), data(), size());
  return *this;
}

ScalarField& ScalarField::add_scaled(double a, const ScalarField& x) {
  require_same_grid(*this, x);
  kernels::active().axpy(a, x.data(), data(), size());
  return *this;
}

ScalarField& ScalarField::add_product(double a, const ScalarField& x,
                                      const ScalarField& y) {
  require_same_grid(*this, x);
  require_same_grid(*this, y);
  kernels::active().fma_acc(a, x.data(), y.data(), data(), size());
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField out(a.grid());
  kernels::active().mul(a.data(), b.data(), out.data(), a.size());
  return out;
}

ScalarField operator*(double a, const ScalarField& f) {
  ScalarField out(f.grid());
  kernels::active().scale(a, f.data(), out.data(), f.size());
  return out;
}

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField out(a.grid());
  kernels::active().div(a.data(), b.data(), out.data(), a.size());
  return out;
}

ScalarField operator-(const ScalarField& f) { return -1.0 * f; }

double sup_norm(const ScalarField& f) {
  return kernels::active().max_abs(f.data(), f.size());
}

double mean(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / static_cast<double>(f.size());
}

double max_value(const ScalarField& f) {
  return *std::max_element(f.values().begin(), f.values().end());
}

double min_value(const ScalarField& f) {
  return *std::min_element(f.values().begin(), f.values().end());
}

bool all_finite(const ScalarField& f) {
  return std::all_of(f.values().begin(), f.values().end(),
                     [](double v) { return std::isfinite(v); });
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
  const Grid& g = *f.grid();
  if (axis < 0 || axis >= g.dim())
    throw InvalidArgument("derivative axis " + std::to_string(axis) +
                          " out of range for dimension " +
                          std::to_string(g.dim()));
  Spectrum spec(g.spectral_size());
  g.forward(f.values(), spec);
  auto* raw = reinterpret_cast<double*>(spec.data());
  kernels::active().spectral_ik(g.wavenumbers(axis).data(), raw, raw,
                                spec.size());
  ScalarField out(f.grid());
  g.backward(spec, out.values());
  return out;
}

OneForm gradient(const ScalarField& f) {
  const Grid& g = *f.grid();
  Spectrum spec(g.spectral_size());
  Spectrum work(g.spectral_size());
  g.forward(f.values(), spec);
  OneForm out(f.grid());
  const auto* in = reinterpret_cast<const double*>(spec.data());
  auto* w = reinterpret_cast<double*>(work.data());
  for (int a = 0; a < g.dim(); ++a) {
    kernels::active().spectral_ik(g.wavenumbers(a).data(), in, w, work.size());
    g.backward(work, out[a].values());
  }
  return out;
}

ScalarField divergence(std::span<const ScalarField> u) {
  const Grid& g = *u.front().grid();
  if (static_cast<int>(u.size()) != g.dim())
    throw InvalidArgument("divergence needs one field per axis");
  Spectrum spec(g.spectral_size());
  Spectrum acc(g.spectral_size(), {0.0, 0.0});
  auto* s = reinterpret_cast<double*>(spec.data());
  auto* out = reinterpret_cast<double*>(acc.data());
  for (int a = 0; a < g.dim(); ++a) {
    g.forward(u[a].values(), spec);
    kernels::active().spectral_ik_acc(g.wavenumbers(a).data(), s, out,
                                      spec.size());
  }
  ScalarField result(u.front().grid());
  g.backward(acc, result.values());
  return result;
}

double integrate(const ScalarField& f, const ScalarField& density) {
  require_same_grid(f, density);
  const auto d = density.values();
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (!(d[p] > 0.0)) {
      std::vector<double> x(f.grid()->dim());
      f.grid()->coordinates(p, x);
      throw DegenerateMetric("quadrature density is not positive at point " +
                                 std::to_string(p),
                             x);
    }
  }
  return f.grid()->cell_volume() *
         kernels::active().dot(f.data(), density.data(), f.size());
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return f.grid()->cell_volume() * s;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. Written
// out so the stream is identical across standard libraries.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ScalarField random_bandlimited_field(const GridPtr& grid, std::uint64_t seed,
                                     int max_mode, double amplitude) {
  if (max_mode < 1 || max_mode > grid->band_limit())
    throw BandLimitError("max_mode " + std::to_string(max_mode) +
                         " outside [1, " + std::to_string(grid->band_limit()) +
                         "] (N/4 band limit)");
  if (!(amplitude > 0.0))
    throw InvalidArgument("amplitude must be positive");

  const int n = grid->dim();
  std::mt19937_64 rng(seed);
  ScalarField f(grid);
  std::vector<int> k(n, -max_mode);
  // Half space of wavevectors: first nonzero component positive.
  while (true) {
    int first = 0;
    while (first < n && k[first] == 0) ++first;
    if (first < n && k[first] > 0) {
      const double a = unit_uniform(rng) - 0.5;
      const double ph = 2.0 * std::numbers::pi * unit_uniform(rng);
      double k2 = 0.0;
      for (int v : k) k2 += double(v) * v;
      const double c = a / (1.0 + k2);  // smooth spectrum
      for (std::size_t p = 0; p < grid->size(); ++p)
        f[p] += c * std::cos(grid->phase(k, p) + ph);
    }
    int a = n - 1;
    while (a >= 0 && k[a] == max_mode) k[a--] = -max_mode;
    if (a < 0) break;
    ++k[a];
  }
  const double s = sup_norm(f);
  f *= amplitude / s;
  return f;
}

}  // namespace ahlfors
