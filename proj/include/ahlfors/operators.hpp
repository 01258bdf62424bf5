#pragma once
// First-order operator stack on one-forms and symmetric 2-tensors:
// delta* (symmetrized covariant derivative), the divergences, the exterior
// derivative and codifferential, the Cauchy-Ahlfors operator
//   S theta = delta* theta + (1/n) (delta theta) g
// and the Ahlfors Laplacian Delta_A = delta o S.
//
// Sign conventions: every divergence carries the minus sign that makes it
// the formal adjoint of its first-order partner,
//   <phi, delta* theta> = <delta phi, theta>,
//   <d f, theta> = <f, delta theta>,  <d theta, omega> = <theta, delta omega>.
//
// div_sym and codiff_twoform are written in divergence form,
//   (delta phi)^b = -(1/sqrt g) d_a(sqrt g phi^ab) - Gamma^b_ac phi^ac,
// which makes them adjoint to delta* and d under the rectangle rule exactly,
// not just to spectral accuracy. delta_oneform is the pointwise trace
// -g^ab nabla_a theta_b, so that trace_g(S theta) vanishes to round-off.

#include "ahlfors/tensor.hpp"

namespace ahlfors {

// (delta* theta)_ab = 1/2 (nabla_a theta_b + nabla_b theta_a)
SymTensor2 delta_star(const Metric& g, const OneForm& theta);

// (delta phi)_a = -g^bc nabla_c phi_ba
OneForm div_sym(const Metric& g, const SymTensor2& phi);

// delta theta = -g^ab nabla_a theta_b
ScalarField delta_oneform(const Metric& g, const OneForm& theta);

OneForm ext_d_scalar(const ScalarField& f);
// (d theta)_ab = d_a theta_b - d_b theta_a, a < b
TwoForm ext_d_oneform(const OneForm& theta);
// (delta omega)_a = -g^bc nabla_c omega_ba
OneForm codiff_twoform(const Metric& g, const TwoForm& omega);

SymTensor2 cauchy_ahlfors_S(const Metric& g, const OneForm& theta);
// S* omega = delta omega on trace-free tensors.
inline OneForm cauchy_ahlfors_adjoint(const Metric& g, const SymTensor2& omega) {
  return div_sym(g, omega);
}
OneForm ahlfors_laplacian(const Metric& g, const OneForm& theta);

// Sign of the Ricci term in
//   Delta_A theta = 1/2 delta d theta + sigma Ric(theta^#, .)
//                   + (n-1)/n d delta theta.
// Fixed by calibrate_ricci_sign; the tests re-run the calibration.
inline constexpr int kRicciTermSign = -1;

// Ric_ab theta^b
OneForm ricci_action(const Metric& g, const SymTensor2& ric,
                     const OneForm& theta);

OneForm weitzenboeck_rhs(const Metric& g, const SymTensor2& ric,
                         const OneForm& theta, int sign = kRicciTermSign);
OneForm weitzenboeck_rhs(const Metric& g, const OneForm& theta,
                         int sign = kRicciTermSign);

struct SignCalibration {
  int sign = 0;                  // sign with the smaller residual
  double residual_plus = 0.0;    // relative L2 residual with sigma = +1
  double residual_minus = 0.0;   // relative L2 residual with sigma = -1
  double laplacian_norm = 0.0;   // ||delta S theta||
};

// Compares delta o S against both candidate right-hand sides on (g, theta).
SignCalibration calibrate_ricci_sign(const Metric& g, const OneForm& theta);

}  // namespace ahlfors
