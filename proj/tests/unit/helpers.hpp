#pragma once
// Shared fixtures for the unit tests: grids, the metric families used
// throughout, and random band-limited tensor fields.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>

#include "ahlfors/constraints.hpp"
#include "ahlfors/soliton.hpp"

namespace testing {

using namespace ahlfors;
inline constexpr double kPi = std::numbers::pi;

inline GridPtr grid2(int n) { return Grid::create({2, {n, n}, {}}); }
inline GridPtr grid3(int n) { return Grid::create({3, {n, n, n}, {}}); }

inline ScalarField field(const GridPtr& g,
                         const std::function<double(std::span<const double>)>& f) {
  return ScalarField::from_function(g, f);
}

// g = delta + one random cosine mode per component, amplitude <= 0.05,
// |k_a| <= 2.
inline Metric perturbed(const GridPtr& g, std::uint64_t seed = 1) {
  return metric_from_spec(random_perturbation_spec(g->dim(), seed, 0.05, 2),
                          g);
}

// g = exp(2 a cos x1) delta
inline Metric conformal(const GridPtr& g, double a) {
  MetricSpec s;
  s.kind = MetricSpec::Kind::Conformal;
  std::vector<int> k(g->dim(), 0);
  k[0] = 1;
  s.conformal_factor = {{a, k, 0.0}};
  return metric_from_spec(s, g);
}

inline OneForm random_oneform(const GridPtr& g, std::uint64_t seed,
                              int max_mode = 2, double amp = 1.0) {
  OneForm t(g);
  for (std::size_t i = 0; i < t.count(); ++i)
    t[i] = random_bandlimited_field(g, seed * 101 + i, max_mode, amp);
  return t;
}

inline SymTensor2 random_sym(const GridPtr& g, std::uint64_t seed,
                             int max_mode = 2, double amp = 1.0) {
  SymTensor2 t(g);
  for (std::size_t i = 0; i < t.count(); ++i)
    t[i] = random_bandlimited_field(g, seed * 101 + i, max_mode, amp);
  return t;
}

inline TwoForm random_twoform(const GridPtr& g, std::uint64_t seed,
                              int max_mode = 2, double amp = 1.0) {
  TwoForm t(g);
  for (std::size_t i = 0; i < t.count(); ++i)
    t[i] = random_bandlimited_field(g, seed * 101 + i, max_mode, amp);
  return t;
}

inline SymTensor2 traceless(const Metric& g, SymTensor2 phi) {
  const ScalarField tr = trace_g(phi, g);
  for (std::size_t i = 0; i < phi.count(); ++i)
    phi[i].add_product(-1.0 / g.dim(), tr, g.covariant()[i]);
  return phi;
}

// |a - b| / max(|a|, |b|), 0 when both vanish.
inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

// Constant one-form dx^axis on g's grid.
inline OneForm constant_oneform(const GridPtr& g, int axis, double c = 1.0) {
  OneForm t(g);
  t[axis] = ScalarField(g, c);
  return t;
}

}  // namespace testing
