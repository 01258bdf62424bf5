#pragma once
// Almost Ricci solitons Ric = 1/2 L_V g + lambda g: residuals, fitting via
// the decomposition of Ric_0, and the two-dimensional integral identity
//   integral s g(xi, xi) dvol_g = 2 <nabla xi, nabla xi>.

#include "ahlfors/decomp.hpp"

namespace ahlfors {

// Ric - 1/2 L_V g - lambda g.
SymTensor2 soliton_residual(const Metric& g, const VectorField& v,
                            const ScalarField& lambda);

struct SolitonFit {
  OneForm theta;
  // V = theta^#, so that delta* theta = 1/2 L_V g.
  VectorField v;
  ScalarField lambda;  // (s + delta theta) / n
  SymTensor2 phi_tt;
  // ||phi_tt|| / max(||Ric||, kDeviationFloor)
  double deviation = 0.0;
  double lambda_variation = 0.0;  // sup lambda - inf lambda
  double ricci_norm = 0.0;
  // ||Ric - 1/2 L_V g - lambda g - phi_tt|| / ||Ric||
  double reconstruction_residual = 0.0;
  // sup |s + delta theta - n lambda|
  double trace_identity_residual = 0.0;
  // integral of L_V s dvol_g
  double lie_scalar_integral = 0.0;
  Decomposition decomposition;
  // Configuration the decomposition ran with, including the Ricci-scaled
  // absolute floor.
  SolverConfig solver;
};

inline constexpr double kDeviationFloor = 1e-14;

SolitonFit fit_almost_soliton(const Metric& g, const SolverConfig& config);

struct IdentitySides {
  double lhs = 0.0;  // integral s g(xi, xi) dvol_g
  double rhs = 0.0;  // 2 <nabla xi, nabla xi>
};

// Throws InvalidArgument unless n = 2.
IdentitySides integral_identity_2d(const Metric& g, const VectorField& xi);

}  // namespace ahlfors
