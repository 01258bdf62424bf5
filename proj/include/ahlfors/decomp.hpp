#pragma once
// Elliptic solve for Delta_A theta = rhs and the splitting of a trace-free
// symmetric tensor into S theta + phi^TT with delta phi^TT = 0.
//
// cg_solve runs conjugate gradients in the L2(dvol_g) inner product on
// one-forms, in which Delta_A = delta o S is self-adjoint and non-negative.
// Iterates are re-projected against the deflation basis every step, so the
// returned theta is the minimal-norm representative modulo the kernel.

#include <vector>

#include "ahlfors/operators.hpp"

namespace ahlfors {

struct SolverConfig {
  double rel_tolerance = 1e-10;
  // 0 selects 10 * (number of grid points).
  int max_iterations = 0;
  // Stop once the residual L2 norm falls below this value even if the
  // relative target has not been met. 0 disables it.
  double abs_tolerance = 0.0;
  // Kernel elements to project out; need not be orthonormal.
  std::vector<OneForm> deflation;
  // Preconditioner built from the flat Ahlfors Laplacian in Fourier space.
  bool flat_preconditioner = false;

  // Throws InvalidArgument on an out-of-range setting.
  void validate() const;
  int iteration_limit(const Grid& grid) const;
};

struct CgResult {
  OneForm solution;
  int iterations = 0;
  double rhs_norm = 0.0;
  // ||Delta_A theta - rhs|| / ||rhs||, recomputed from the solution.
  double final_residual = 0.0;
  std::vector<double> history;
};

// Throws InconsistentSystem when rhs has a component along the deflation
// basis larger than 1e-8 relative, SolverFailure when the iteration limit is
// reached.
CgResult cg_solve(const Metric& g, const OneForm& rhs,
                  const SolverConfig& config);

// Constant one-forms dx^a with ||S kappa|| / ||kappa|| below 1e-8.
std::vector<OneForm> kernel_basis(const Metric& g);

struct DecompositionDiagnostics {
  int cg_iterations = 0;
  double final_residual = 0.0;
  // |<S theta, phi_tt>| / (||S theta|| ||phi_tt||), 0 when either part is
  // at most rel_tolerance * ||phi0||.
  double orthogonality_defect = 0.0;
  double tt_divergence_norm = 0.0;
  // sup of |trace_g| over both parts.
  double trace_norm = 0.0;
  // sup |phi0 - S theta - phi_tt| / max(1, sup |phi0|)
  double reconstruction_error = 0.0;
  double rhs_norm = 0.0;              // ||delta phi0||
  double s_theta_norm = 0.0;
  double phi_tt_norm = 0.0;
  double input_norm = 0.0;
  int kernel_dimension = 0;
};

struct Decomposition {
  OneForm theta;
  SymTensor2 s_theta;
  SymTensor2 phi_tt;
  DecompositionDiagnostics diagnostics;
};

// Threshold pairs used by the invariant checks; echoed in reports.
struct DecompositionLimits {
  double trace = 1e-10;
  double orthogonality = 1e-8;
  double tt_divergence_factor = 10.0;  // times rel_tolerance * ||delta phi0||
  double reconstruction = 1e-12;
};

bool decomposition_ok(const Decomposition& d, const SolverConfig& config,
                      const DecompositionLimits& limits = {});

// Throws InvalidArgument when sup|trace_g phi0| exceeds
// 1e-8 * max(1, sup|phi0|).
Decomposition decompose_traceless(const Metric& g, const SymTensor2& phi0,
                                  const SolverConfig& config);

struct RicciPotentialReport {
  Decomposition decomposition;
  bool decomposition_ok = false;
  // For Ric_0 = S theta + phi^TT:
  // ||Delta_A theta - c ds|| / ||ds|| with c = -(n-2)/(2n), and the same with
  // twice that constant for comparison. With ds = 0 the absolute norm is
  // reported.
  double c_derived = 0.0;
  double c_doubled = 0.0;
  double ds_norm = 0.0;
  double ds_relation_derived = 0.0;
  double ds_relation_doubled = 0.0;
  // Least-squares c fitted from <Delta_A theta, ds> / <ds, ds>.
  double c_fitted = 0.0;
  // <S theta, S theta> against c * integral of xi^a d_a s.
  double energy_lhs = 0.0;
  double energy_rhs_derived = 0.0;
  double energy_rhs_doubled = 0.0;
  double energy_derived = 0.0;  // relative; 0 when both sides vanish
  double energy_doubled = 0.0;
};

RicciPotentialReport verify_ricci_potential(const Metric& g, const SolverConfig& config);

}  // namespace ahlfors
