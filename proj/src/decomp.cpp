#include "ahlfors/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>

#include "ahlfors/errors.hpp"
#include "ahlfors/kernels.hpp"

namespace ahlfors {
namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : num; }

// Orthonormal (in L2(dvol_g)) copy of a list of one-forms. Elements that are
// linearly dependent on earlier ones are dropped.
std::vector<OneForm> orthonormalize(const Metric& g,
                                    const std::vector<OneForm>& basis) {
  std::vector<OneForm> out;
  for (const auto& k : basis) {
    OneForm v = k;
    const double n0 = l2_norm(v, g);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) v.add_scaled(-l2_inner(q, v, g), q);
    const double n1 = l2_norm(v, g);
    if (n1 > 1e-10 * n0) {
      v *= 1.0 / n1;
      out.push_back(std::move(v));
    }
  }
  return out;
}

void project_out(const Metric& g, const std::vector<OneForm>& q, OneForm& v) {
  for (const auto& e : q) v.add_scaled(-l2_inner(e, v, g), e);
}

// Fourier multiplier 1 / (|k|^2 / 2 + k_min^2 / 2): inverse of the dominant
// part of the flat Ahlfors Laplacian, shifted to stay finite at k = 0.
class FlatPreconditioner {
 public:
  explicit FlatPreconditioner(const Grid& grid) : grid_(grid) {
    double kmin2 = 1e300;
    for (int a = 0; a < grid.dim(); ++a) {
      const double k = 2.0 * std::numbers::pi / grid.period(a);
      kmin2 = std::min(kmin2, k * k);
    }
    multiplier_.assign(grid.spectral_size(), 0.0);
    for (std::size_t j = 0; j < multiplier_.size(); ++j) {
      double k2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) {
        const double k = grid.wavenumbers(a)[j];
        k2 += k * k;
      }
      multiplier_[j] = 2.0 / (k2 + kmin2);
    }
    spec_.resize(grid.spectral_size());
  }

  void apply(ScalarField& f) {
    grid_.forward(f.values(), spec_);
    auto* raw = reinterpret_cast<double*>(spec_.data());
    kernels::active().spectral_real(multiplier_.data(), raw, raw, spec_.size());
    grid_.backward(spec_, f.values());
  }

 private:
  const Grid& grid_;
  std::vector<double> multiplier_;
  std::vector<std::complex<double>> spec_;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(rel_tolerance > 0.0 && rel_tolerance < 1.0))
    throw InvalidArgument("rel_tolerance must lie in (0, 1)");
  if (max_iterations < 0)
    throw InvalidArgument("max_iterations must be >= 1 (0 selects the default)");
  if (!(abs_tolerance >= 0.0))
    throw InvalidArgument("abs_tolerance must be >= 0");
}

int SolverConfig::iteration_limit(const Grid& grid) const {
  if (max_iterations > 0) return max_iterations;
  const std::size_t n = 10 * grid.size();
  return n > 1000000000u ? 1000000000 : static_cast<int>(n);
}

CgResult cg_solve(const Metric& g, const OneForm& rhs,
                  const SolverConfig& config) {
  config.validate();
  const auto q = orthonormalize(g, config.deflation);
  CgResult res;
  res.rhs_norm = l2_norm(rhs, g);
  res.solution = OneForm(g.grid());
  if (res.rhs_norm == 0.0) return res;

  for (const auto& e : q) {
    const double c = l2_inner(e, rhs, g);
    if (std::abs(c) > 1e-8 * res.rhs_norm) {
      std::ostringstream msg;
      msg << "right-hand side has kernel component " << std::abs(c) / res.rhs_norm
          << " (relative), above 1e-8";
      throw InconsistentSystem(msg.str());
    }
  }
  OneForm b = rhs;
  project_out(g, q, b);
  const double bnorm = l2_norm(b, g);
  const double target =
      std::max(config.rel_tolerance * res.rhs_norm, config.abs_tolerance);
  const int limit = config.iteration_limit(*g.grid());

  std::unique_ptr<FlatPreconditioner> pre;
  if (config.flat_preconditioner)
    pre = std::make_unique<FlatPreconditioner>(*g.grid());
  // z = P (W r) with W = sqrt(g) g^ab, so that <r, z>_g = (W r) . P (W r).
  auto precondition = [&](const OneForm& r) {
    if (!pre) return r;
    VectorField w = sharp(g, r);
    OneForm z(g.grid());
    for (int a = 0; a < r.dim(); ++a) {
      z[a] = w[a] * g.volume_density();
      pre->apply(z[a]);
    }
    project_out(g, q, z);
    return z;
  };

  OneForm& x = res.solution;
  OneForm r = b;
  double rnorm = bnorm;
  bool restarted = false;
  while (true) {
    OneForm z = precondition(r);
    OneForm p = z;
    double rz = l2_inner(r, z, g);
    while (rnorm > target && res.iterations < limit) {
      OneForm ap = ahlfors_laplacian(g, p);
      project_out(g, q, ap);
      const double pap = l2_inner(p, ap, g);
      if (!(pap > 0.0)) break;  // direction in the numerical kernel
      const double alpha = rz / pap;
      x.add_scaled(alpha, p);
      r.add_scaled(-alpha, ap);
      project_out(g, q, r);
      rnorm = l2_norm(r, g);
      ++res.iterations;
      res.history.push_back(rnorm / res.rhs_norm);
      z = precondition(r);
      const double rz_new = l2_inner(r, z, g);
      const double beta = rz_new / rz;
      rz = rz_new;
      p *= beta;
      p += z;
    }
    // Recursive residuals drift; confirm against the true residual once.
    project_out(g, q, x);
    r = b - ahlfors_laplacian(g, x);
    project_out(g, q, r);
    rnorm = l2_norm(r, g);
    if (rnorm <= target || res.iterations >= limit || restarted) break;
    restarted = true;
  }
  res.final_residual = rnorm / res.rhs_norm;
  if (rnorm > target) {
    std::ostringstream msg;
    msg << "conjugate gradients stopped after " << res.iterations
        << " iterations at relative residual " << res.final_residual
        << " (target " << config.rel_tolerance << ")";
    throw SolverFailure(msg.str(), res.history);
  }
  return res;
}

std::vector<OneForm> kernel_basis(const Metric& g) {
  std::vector<OneForm> out;
  for (int a = 0; a < g.dim(); ++a) {
    OneForm k(g.grid());
    k[a] = ScalarField(g.grid(), 1.0);
    const double ratio_s = l2_norm(cauchy_ahlfors_S(g, k), g) / l2_norm(k, g);
    if (ratio_s < 1e-8) out.push_back(std::move(k));
  }
  return out;
}

bool decomposition_ok(const Decomposition& d, const SolverConfig& config,
                      const DecompositionLimits& limits) {
  const auto& x = d.diagnostics;
  return x.trace_norm <= limits.trace &&
         x.orthogonality_defect <= limits.orthogonality &&
         x.tt_divergence_norm <= std::max(limits.tt_divergence_factor *
                                              config.rel_tolerance * x.rhs_norm,
                                          config.abs_tolerance) &&
         x.reconstruction_error <= limits.reconstruction;
}

Decomposition decompose_traceless(const Metric& g, const SymTensor2& phi0,
                                  const SolverConfig& config) {
  const double scale = std::max(1.0, sup_norm(phi0));
  const double tr = sup_norm(trace_g(phi0, g));
  if (tr > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "input is not trace-free: sup |trace_g| = " << tr;
    throw InvalidArgument(msg.str());
  }
  SolverConfig cfg = config;
  for (auto& k : kernel_basis(g)) cfg.deflation.push_back(std::move(k));

  Decomposition d;
  const OneForm rhs = div_sym(g, phi0);
  CgResult cg = cg_solve(g, rhs, cfg);
  d.theta = std::move(cg.solution);
  d.s_theta = cauchy_ahlfors_S(g, d.theta);
  d.phi_tt = phi0 - d.s_theta;

  auto& x = d.diagnostics;
  x.cg_iterations = cg.iterations;
  x.final_residual = cg.final_residual;
  x.rhs_norm = cg.rhs_norm;
  x.kernel_dimension = static_cast<int>(cfg.deflation.size());
  x.s_theta_norm = l2_norm(d.s_theta, g);
  x.phi_tt_norm = l2_norm(d.phi_tt, g);
  x.input_norm = l2_norm(phi0, g);
  // A part below the solver resolution is zero: its direction is noise.
  const double resolved = cfg.rel_tolerance * x.input_norm;
  x.orthogonality_defect =
      std::min(x.s_theta_norm, x.phi_tt_norm) > resolved
          ? std::abs(l2_inner(d.s_theta, d.phi_tt, g)) /
                (x.s_theta_norm * x.phi_tt_norm)
          : 0.0;
  x.tt_divergence_norm = l2_norm(div_sym(g, d.phi_tt), g);
  x.trace_norm = std::max(sup_norm(trace_g(d.s_theta, g)),
                          sup_norm(trace_g(d.phi_tt, g)));
  x.reconstruction_error =
      sup_norm(phi0 - (d.s_theta + d.phi_tt)) / std::max(1.0, sup_norm(phi0));
  return d;
}

RicciPotentialReport verify_ricci_potential(const Metric& g, const SolverConfig& config) {
  const int n = g.dim();
  if (n < 3)
    throw InvalidArgument("the Delta_A theta = c ds checks need dimension >= 3");
  RicciPotentialReport rep;
  const SymTensor2 ric = ricci(g);
  const ScalarField s = scalar_curvature(g, ric);
  SymTensor2 ric0 = ric;
  for (std::size_t i = 0; i < ric0.count(); ++i)
    ric0[i].add_product(-1.0 / n, s, g.covariant()[i]);

  rep.decomposition = decompose_traceless(g, ric0, config);
  rep.decomposition_ok = ahlfors::decomposition_ok(rep.decomposition, config);
  rep.c_derived = -double(n - 2) / (2.0 * n);
  rep.c_doubled = -double(n - 2) / n;

  const OneForm ds = ext_d_scalar(s);
  const OneForm lap = ahlfors_laplacian(g, rep.decomposition.theta);
  rep.ds_norm = l2_norm(ds, g);
  auto ds_relation = [&](double c) {
    OneForm diff = lap;
    diff.add_scaled(-c, ds);
    return ratio(l2_norm(diff, g), rep.ds_norm);
  };
  rep.ds_relation_derived = ds_relation(rep.c_derived);
  rep.ds_relation_doubled = ds_relation(rep.c_doubled);
  rep.c_fitted = rep.ds_norm > 0.0
                     ? l2_inner(lap, ds, g) / (rep.ds_norm * rep.ds_norm)
                     : 0.0;

  // integral of xi^a d_a s dvol_g = <theta, ds>
  const double lie = l2_inner(rep.decomposition.theta, ds, g);
  const SymTensor2& st = rep.decomposition.s_theta;
  rep.energy_lhs = l2_inner(st, st, g);
  rep.energy_rhs_derived = rep.c_derived * lie;
  rep.energy_rhs_doubled = rep.c_doubled * lie;
  auto energy = [&](double rhs) {
    const double scale = std::max(std::abs(rep.energy_lhs), std::abs(rhs));
    return scale > 0.0 ? std::abs(rep.energy_lhs - rhs) / scale : 0.0;
  };
  rep.energy_derived = energy(rep.energy_rhs_derived);
  rep.energy_doubled = energy(rep.energy_rhs_doubled);
  return rep;
}

}  // namespace ahlfors
