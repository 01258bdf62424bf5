#pragma once
// Vacuum constraint tooling for initial data (g, K) on a spacelike slice:
//   Hamiltonian  s - g(K, K) + H^2 = 0
//   momentum     div_g K - dH = 0,  i.e.  -delta K - dH = 0
// with H = trace_g K. Also the splitting K_0 = S theta + phi^TT of the
// traceless part, construction of constant-mean-curvature data, TT
// projection and the umbilicity measure.

#include "ahlfors/decomp.hpp"

namespace ahlfors {

struct InitialData {
  Metric metric;
  SymTensor2 K;
  ScalarField H;  // trace_g K
};

InitialData make_initial_data(Metric g, SymTensor2 k);

struct ConstraintReport {
  ScalarField hamiltonian;
  OneForm momentum;
  double hamiltonian_l2 = 0.0;
  double momentum_l2 = 0.0;
  double hamiltonian_sup = 0.0;
  double momentum_sup = 0.0;
};

// cosmological_constant adds -2 Lambda; the vacuum case is Lambda = 0.
ScalarField hamiltonian_residual(const InitialData& data,
                                 double cosmological_constant = 0.0);
OneForm momentum_residual(const InitialData& data);
ConstraintReport evaluate_constraints(const InitialData& data,
                                      double cosmological_constant = 0.0);

struct KDecomposition {
  Decomposition decomposition;
  SymTensor2 k0;  // K - (H/n) g
  // ||Delta_A theta - (delta K + (1/n) dH)|| and the bound it is held to,
  // 10 * rel_tolerance * ||delta K_0||.
  double theta_equation_residual = 0.0;
  double theta_equation_threshold = 0.0;
};

KDecomposition decompose_K(const InitialData& data, const SolverConfig& config);

struct TTCheck {
  double trace_sup = 0.0;
  double divergence_l2 = 0.0;
  double norm_l2 = 0.0;
};

TTCheck check_tt(const Metric& g, const SymTensor2& phi);

// K = (H0/n) g + phi_tt. Throws InvalidArgument unless sup|trace| <= 1e-8
// and ||delta phi_tt|| <= 1e-6 ||phi_tt||.
InitialData build_cmc_data(const Metric& g, const SymTensor2& phi_tt,
                           double h0);

// phi^TT of the trace-free part of phi.
SymTensor2 tt_project(const Metric& g, const SymTensor2& phi,
                      const SolverConfig& config);

// ||K_0|| / max(||K||, 1e-14)
double umbilicity_defect(const InitialData& data);

}  // namespace ahlfors
