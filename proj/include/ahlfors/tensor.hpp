#pragma once
// Riemannian tensor calculus on the periodic grid: metric construction and
// validation, Levi-Civita connection, Ricci and scalar curvature, covariant
// and Lie derivatives, musical isomorphisms, traces and L2 inner products.
//
// Index conventions: all stored tensors are covariant unless their type says
// otherwise (VectorField, SymTensor2Up, TwoFormUp). Christoffel symbols are
// Gamma^c_ab, stored as one SymTensor2 in (a, b) per upper index c.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ahlfors/fields.hpp"

namespace ahlfors {

struct FourierMode {
  double amplitude = 0.0;
  std::vector<int> wavevector;
  double phase = 0.0;
};

// One entry of a symmetric-tensor description:
// phi_ab += amplitude * cos(k.x + phase) (and phi_ba by symmetry).
struct TensorMode {
  int a = 0;
  int b = 0;
  double amplitude = 0.0;
  std::vector<int> wavevector;
  double phase = 0.0;
};

struct MetricSpec {
  enum class Kind { Flat, Conformal, Perturbation };
  Kind kind = Kind::Flat;
  // Conformal: g = exp(2 f) * delta with f = sum of modes.
  std::vector<FourierMode> conformal_factor;
  // Perturbation: g_ab = delta_ab + sum of entries.
  std::vector<TensorMode> perturbation;
};

// Throws BandLimitError if any |k_a| exceeds N_a/4, InvalidArgument for a
// malformed wavevector or index.
void validate_mode(const GridPtr& grid, const std::vector<int>& wavevector);
ScalarField evaluate_modes(const GridPtr& grid,
                           const std::vector<FourierMode>& modes);
SymTensor2 evaluate_tensor_modes(const GridPtr& grid,
                                 const std::vector<TensorMode>& modes);

struct Christoffel {
  std::vector<SymTensor2> upper;  // upper[c](a, b) = Gamma^c_ab

  int dim() const { return static_cast<int>(upper.size()); }
  const ScalarField& operator()(int c, int a, int b) const {
    return upper[c](a, b);
  }
  ScalarField& operator()(int c, int a, int b) { return upper[c](a, b); }
};

class Metric {
 public:
  // Validates pointwise positive definiteness (smallest eigenvalue > 0) and
  // fills the inverse, volume density and connection. Throws DegenerateMetric
  // with the coordinates of the first offending point.
  static Metric from_components(SymTensor2 g);

  int dim() const { return g_.dim(); }
  const GridPtr& grid() const { return g_.grid(); }
  const SymTensor2& covariant() const { return g_; }
  const SymTensor2Up& inverse() const { return ginv_; }
  const ScalarField& volume_density() const { return sqrt_det_; }
  const Christoffel& connection() const { return gamma_; }
  // g^ab Gamma^c_ab, one entry per c.
  const VectorField& contracted_connection() const { return gamma_trace_; }
  // Smallest pointwise eigenvalue of [g_ab] over the grid.
  double min_eigenvalue() const { return min_eig_; }

 private:
  Metric() = default;

  SymTensor2 g_;
  SymTensor2Up ginv_;
  ScalarField sqrt_det_;
  Christoffel gamma_;
  VectorField gamma_trace_;
  double min_eig_ = 0.0;
};

Metric metric_from_spec(const MetricSpec& spec, const GridPtr& grid);

// Perturbation spec with `modes_per_component` random cosine modes on every
// g_ab (a <= b): amplitude uniform in [-amplitude, amplitude], integer
// wavevector components in [-max_mode, max_mode] (never all zero), phase
// uniform in [0, 2 pi). Deterministic in the seed.
MetricSpec random_perturbation_spec(int dim, std::uint64_t seed,
                                    double amplitude, int max_mode,
                                    int modes_per_component = 1);
Metric flat_metric(const GridPtr& grid);

// Levi-Civita connection computed from the metric components.
Christoffel christoffel(const Metric& g);

SymTensor2 ricci(const Metric& g);
ScalarField scalar_curvature(const Metric& g, const SymTensor2& ric);
SymTensor2 traceless_ricci(const Metric& g);

ScalarField trace_g(const SymTensor2& phi, const Metric& g);

// The metric itself as a SymTensor2 scaled pointwise by f.
SymTensor2 scaled_metric(const Metric& g, const ScalarField& f);

// (nabla theta)_ab = d_a theta_b - Gamma^c_ab theta_c; full n x n output.
Tensor2 covariant_derivative_oneform(const Metric& g, const OneForm& theta);
// L_xi g = nabla_a xi_b + nabla_b xi_a with xi_b = g_bc xi^c.
SymTensor2 lie_derivative_metric(const Metric& g, const VectorField& xi);

VectorField sharp(const Metric& g, const OneForm& theta);
OneForm flat(const Metric& g, const VectorField& xi);

// Index raising: phi^ab = g^ac g^bd phi_cd.
SymTensor2Up raise(const Metric& g, const SymTensor2& phi);
TwoFormUp raise(const Metric& g, const TwoForm& omega);
// T^ab = g^ac g^bd T_cd stored full (FullLayout, contravariant reading).
Tensor2 raise_full(const Metric& g, const Tensor2& t);
// phi_ab xi^b as a one-form.
OneForm contract(const SymTensor2& phi, const VectorField& xi);

// <x, y> = integral of g(x, y) dvol_g. Two-forms use the form inner product
// (sum over a < b), under which d and its codifferential are adjoint.
double l2_inner(const ScalarField& x, const ScalarField& y, const Metric& g);
double l2_inner(const OneForm& x, const OneForm& y, const Metric& g);
double l2_inner(const VectorField& x, const VectorField& y, const Metric& g);
double l2_inner(const SymTensor2& x, const SymTensor2& y, const Metric& g);
double l2_inner(const Tensor2& x, const Tensor2& y, const Metric& g);
double l2_inner(const TwoForm& x, const TwoForm& y, const Metric& g);

template <class T>
double l2_norm(const T& x, const Metric& g) {
  const double v = l2_inner(x, x, g);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

// Pointwise g(x, x) for symmetric tensors: g^ac g^bd x_ab x_cd.
ScalarField pointwise_norm2(const SymTensor2& x, const Metric& g);

}  // namespace ahlfors
