#include "ahlfors/soliton.hpp"

#include <algorithm>
#include <cmath>

#include "ahlfors/errors.hpp"

namespace ahlfors {

SymTensor2 soliton_residual(const Metric& g, const VectorField& v,
                            const ScalarField& lambda) {
  SymTensor2 r = ricci(g);
  r.add_scaled(-0.5, lie_derivative_metric(g, v));
  for (std::size_t i = 0; i < r.count(); ++i)
    r[i].add_product(-1.0, lambda, g.covariant()[i]);
  return r;
}

SolitonFit fit_almost_soliton(const Metric& g, const SolverConfig& config) {
  const int n = g.dim();
  const SymTensor2 ric = ricci(g);
  const ScalarField s = scalar_curvature(g, ric);
  SymTensor2 ric0 = ric;
  for (std::size_t i = 0; i < ric0.count(); ++i)
    ric0[i].add_product(-1.0 / n, s, g.covariant()[i]);

  // Measure the solve against the full Ricci divergence. In dimension 2 the
  // traceless part is round-off, and a relative target on it cannot be met.
  SolverConfig cfg = config;
  cfg.abs_tolerance = std::max(
      cfg.abs_tolerance, cfg.rel_tolerance * l2_norm(div_sym(g, ric), g));

  SolitonFit fit;
  fit.decomposition = decompose_traceless(g, ric0, cfg);
  fit.solver = cfg;
  fit.theta = fit.decomposition.theta;
  fit.phi_tt = fit.decomposition.phi_tt;
  fit.v = sharp(g, fit.theta);

  const ScalarField div = delta_oneform(g, fit.theta);
  fit.lambda = (1.0 / n) * (s + div);
  fit.lambda_variation = max_value(fit.lambda) - min_value(fit.lambda);
  fit.ricci_norm = l2_norm(ric, g);
  fit.deviation =
      l2_norm(fit.phi_tt, g) / std::max(fit.ricci_norm, kDeviationFloor);

  SymTensor2 rec = soliton_residual(g, fit.v, fit.lambda);
  rec -= fit.phi_tt;
  fit.reconstruction_residual =
      l2_norm(rec, g) / std::max(fit.ricci_norm, kDeviationFloor);

  ScalarField trace_id = s + div;
  trace_id.add_scaled(-double(n), fit.lambda);
  fit.trace_identity_residual = sup_norm(trace_id);

  fit.lie_scalar_integral = l2_inner(fit.theta, ext_d_scalar(s), g);
  return fit;
}

IdentitySides integral_identity_2d(const Metric& g, const VectorField& xi) {
  if (g.dim() != 2)
    throw InvalidArgument("the integral identity is stated for n = 2");
  const ScalarField s = scalar_curvature(g, ricci(g));
  const OneForm xi_flat = flat(g, xi);
  ScalarField norm2(g.grid());
  for (int a = 0; a < 2; ++a) norm2.add_product(1.0, xi_flat[a], xi[a]);
  IdentitySides out;
  out.lhs = integrate(s * norm2, g.volume_density());
  const Tensor2 nabla = covariant_derivative_oneform(g, xi_flat);
  out.rhs = 2.0 * l2_inner(nabla, nabla, g);
  return out;
}

}  // namespace ahlfors
