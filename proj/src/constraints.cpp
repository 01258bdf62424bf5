#include "ahlfors/constraints.hpp"

#include <algorithm>
#include <sstream>

#include "ahlfors/errors.hpp"

namespace ahlfors {
namespace {

SymTensor2 traceless_part(const Metric& g, const SymTensor2& phi,
                          const ScalarField& trace) {
  SymTensor2 out = phi;
  const double inv_n = 1.0 / g.dim();
  for (std::size_t i = 0; i < out.count(); ++i)
    out[i].add_product(-inv_n, trace, g.covariant()[i]);
  return out;
}

}  // namespace

InitialData make_initial_data(Metric g, SymTensor2 k) {
  if (k.dim() != g.dim())
    throw InvalidArgument("K dimension does not match the metric");
  ScalarField h = trace_g(k, g);
  return InitialData{std::move(g), std::move(k), std::move(h)};
}

ScalarField hamiltonian_residual(const InitialData& data,
                                 double cosmological_constant) {
  const Metric& g = data.metric;
  ScalarField r = scalar_curvature(g, ricci(g));
  r -= pointwise_norm2(data.K, g);
  r.add_product(1.0, data.H, data.H);
  if (cosmological_constant != 0.0)
    r += ScalarField(g.grid(), -2.0 * cosmological_constant);
  return r;
}

OneForm momentum_residual(const InitialData& data) {
  OneForm r = div_sym(data.metric, data.K);
  r *= -1.0;
  r -= ext_d_scalar(data.H);
  return r;
}

ConstraintReport evaluate_constraints(const InitialData& data,
                                      double cosmological_constant) {
  ConstraintReport rep;
  rep.hamiltonian = hamiltonian_residual(data, cosmological_constant);
  rep.momentum = momentum_residual(data);
  rep.hamiltonian_l2 = l2_norm(rep.hamiltonian, data.metric);
  rep.momentum_l2 = l2_norm(rep.momentum, data.metric);
  rep.hamiltonian_sup = sup_norm(rep.hamiltonian);
  rep.momentum_sup = sup_norm(rep.momentum);
  return rep;
}

KDecomposition decompose_K(const InitialData& data, const SolverConfig& config) {
  const Metric& g = data.metric;
  KDecomposition out;
  out.k0 = traceless_part(g, data.K, data.H);
  out.decomposition = decompose_traceless(g, out.k0, config);

  OneForm expected = div_sym(g, data.K);
  expected.add_scaled(1.0 / g.dim(), ext_d_scalar(data.H));
  const OneForm lap = ahlfors_laplacian(g, out.decomposition.theta);
  out.theta_equation_residual = l2_norm(lap - expected, g);
  out.theta_equation_threshold = std::max(
      10.0 * config.rel_tolerance * out.decomposition.diagnostics.rhs_norm,
      config.abs_tolerance);
  return out;
}

TTCheck check_tt(const Metric& g, const SymTensor2& phi) {
  TTCheck c;
  c.trace_sup = sup_norm(trace_g(phi, g));
  c.divergence_l2 = l2_norm(div_sym(g, phi), g);
  c.norm_l2 = l2_norm(phi, g);
  return c;
}

InitialData build_cmc_data(const Metric& g, const SymTensor2& phi_tt,
                           double h0) {
  const TTCheck c = check_tt(g, phi_tt);
  if (c.trace_sup > 1e-8 || c.divergence_l2 > 1e-6 * c.norm_l2) {
    std::ostringstream msg;
    msg << "tensor is not TT: sup |trace_g| = " << c.trace_sup
        << ", ||delta phi|| = " << c.divergence_l2
        << ", ||phi|| = " << c.norm_l2;
    throw InvalidArgument(msg.str());
  }
  SymTensor2 k = phi_tt;
  k.add_scaled(h0 / g.dim(), g.covariant());
  return make_initial_data(g, std::move(k));
}

SymTensor2 tt_project(const Metric& g, const SymTensor2& phi,
                      const SolverConfig& config) {
  const SymTensor2 phi0 = traceless_part(g, phi, trace_g(phi, g));
  return decompose_traceless(g, phi0, config).phi_tt;
}

double umbilicity_defect(const InitialData& data) {
  const Metric& g = data.metric;
  const SymTensor2 k0 = traceless_part(g, data.K, data.H);
  return l2_norm(k0, g) / std::max(l2_norm(data.K, g), 1e-14);
}

}  // namespace ahlfors
