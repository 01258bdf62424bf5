#pragma once
// Real component fields on a periodic grid.
//
// ScalarField owns one value per grid point. Tensor-valued fields are a fixed
// list of ScalarField components whose count and index mapping come from a
// layout policy; the variance tag distinguishes covariant from contravariant
// objects that share a storage shape (one-forms vs vector fields, g_ab vs
// g^ab).

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ahlfors/grid.hpp"

namespace ahlfors {

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double value = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  // Samples f(x) at every grid point, x being the coordinate vector.
  static ScalarField from_function(
      GridPtr grid, const std::function<double(std::span<const double>)>& f);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double a);
  // this += a * x
  ScalarField& add_scaled(double a, const ScalarField& x);
  // this += a * x * y
  ScalarField& add_product(double a, const ScalarField& x,
                           const ScalarField& y);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double a, const ScalarField& f);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& f);

double sup_norm(const ScalarField& f);
double mean(const ScalarField& f);
double max_value(const ScalarField& f);
double min_value(const ScalarField& f);
bool all_finite(const ScalarField& f);

void require_same_grid(const ScalarField& a, const ScalarField& b);

enum class Variance { Covariant, Contravariant };

// Component layouts. index(n, a, b) maps tensor indices to storage.
struct Rank1Layout {
  static constexpr std::size_t count(int n) { return std::size_t(n); }
};

// Symmetric 2-tensor, upper triangle a <= b, row by row.
struct SymLayout {
  static constexpr std::size_t count(int n) {
    return std::size_t(n) * std::size_t(n + 1) / 2;
  }
  static constexpr std::size_t index(int n, int a, int b) {
    if (a > b) std::swap(a, b);
    return std::size_t(a * n - a * (a - 1) / 2 + (b - a));
  }
};

// General 2-tensor, all n^2 entries, row-major.
struct FullLayout {
  static constexpr std::size_t count(int n) {
    return std::size_t(n) * std::size_t(n);
  }
  static constexpr std::size_t index(int n, int a, int b) {
    return std::size_t(a * n + b);
  }
};

// Antisymmetric 2-tensor, strict upper triangle a < b, row by row.
struct AntiLayout {
  static constexpr std::size_t count(int n) {
    return std::size_t(n) * std::size_t(n - 1) / 2;
  }
  static constexpr std::size_t index(int n, int a, int b) {
    return std::size_t(a * (2 * n - a - 1) / 2 + (b - a - 1));
  }
};

template <class Layout>
concept TwoIndexLayout = requires(int n) {
  { Layout::index(n, 0, 0) } -> std::convertible_to<std::size_t>;
};

template <class Layout, Variance V>
class MultiField {
 public:
  static constexpr Variance variance = V;
  using layout = Layout;

  MultiField() = default;
  MultiField(GridPtr grid, int n) : dim_(n) {
    comps_.reserve(Layout::count(n));
    for (std::size_t i = 0; i < Layout::count(n); ++i)
      comps_.emplace_back(grid, 0.0);
  }
  explicit MultiField(const GridPtr& grid) : MultiField(grid, grid->dim()) {}
  MultiField(int n, std::vector<ScalarField> comps)
      : dim_(n), comps_(std::move(comps)) {
    if (comps_.size() != Layout::count(n))
      throw std::invalid_argument("component count does not match layout");
  }

  int dim() const { return dim_; }
  std::size_t count() const { return comps_.size(); }
  const GridPtr& grid() const { return comps_.front().grid(); }

  ScalarField& operator[](std::size_t i) { return comps_[i]; }
  const ScalarField& operator[](std::size_t i) const { return comps_[i]; }

  ScalarField& operator()(int a, int b)
    requires TwoIndexLayout<Layout>
  {
    return comps_[Layout::index(dim_, a, b)];
  }
  const ScalarField& operator()(int a, int b) const
    requires TwoIndexLayout<Layout>
  {
    return comps_[Layout::index(dim_, a, b)];
  }

  std::vector<ScalarField>& components() { return comps_; }
  const std::vector<ScalarField>& components() const { return comps_; }

  MultiField& operator+=(const MultiField& o) {
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
    return *this;
  }
  MultiField& operator-=(const MultiField& o) {
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
    return *this;
  }
  MultiField& operator*=(double a) {
    for (auto& c : comps_) c *= a;
    return *this;
  }
  MultiField& add_scaled(double a, const MultiField& o) {
    for (std::size_t i = 0; i < comps_.size(); ++i)
      comps_[i].add_scaled(a, o.comps_[i]);
    return *this;
  }

  friend MultiField operator+(MultiField a, const MultiField& b) {
    return a += b;
  }
  friend MultiField operator-(MultiField a, const MultiField& b) {
    return a -= b;
  }
  friend MultiField operator*(double s, MultiField a) { return a *= s; }

 private:
  int dim_ = 0;
  std::vector<ScalarField> comps_;
};

using OneForm = MultiField<Rank1Layout, Variance::Covariant>;
using VectorField = MultiField<Rank1Layout, Variance::Contravariant>;
using SymTensor2 = MultiField<SymLayout, Variance::Covariant>;
// Contravariant symmetric tensor, e.g. the inverse metric g^ab.
using SymTensor2Up = MultiField<SymLayout, Variance::Contravariant>;
using Tensor2 = MultiField<FullLayout, Variance::Covariant>;
using TwoForm = MultiField<AntiLayout, Variance::Covariant>;
using TwoFormUp = MultiField<AntiLayout, Variance::Contravariant>;

// Largest |component| over all points and components.
template <class L, Variance V>
double sup_norm(const MultiField<L, V>& f) {
  double m = 0.0;
  for (const auto& c : f.components()) m = std::max(m, sup_norm(c));
  return m;
}

template <class L, Variance V>
bool all_finite(const MultiField<L, V>& f) {
  for (const auto& c : f.components())
    if (!all_finite(c)) return false;
  return true;
}

// ---- grid operations --------------------------------------------------------

// Pseudo-spectral derivative along `axis`.
ScalarField partial_derivative(const ScalarField& f, int axis);

// All first partials with one forward transform.
OneForm gradient(const ScalarField& f);

// sum_a d_a u_a, accumulated in spectral space (one inverse transform).
ScalarField divergence(std::span<const ScalarField> u);

// (prod_a L_a/N_a) * sum_points f * density. Throws DegenerateMetric when the
// density is not strictly positive.
double integrate(const ScalarField& f, const ScalarField& density);
// Same with unit density.
double integrate(const ScalarField& f);

// Deterministic real field with zero mean, Fourier support |k_a| <= max_mode,
// and sup-norm equal to `amplitude`. Throws BandLimitError when max_mode
// exceeds the grid band limit.
ScalarField random_bandlimited_field(const GridPtr& grid, std::uint64_t seed,
                                     int max_mode, double amplitude);

}  // namespace ahlfors
