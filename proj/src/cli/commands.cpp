#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ahlfors/constraints.hpp"
#include "ahlfors/kernels.hpp"
#include "ahlfors/soliton.hpp"

namespace ahlfors::cli {
namespace {

// Independent random streams derived from the configured seed.
std::uint64_t stream_seed(std::uint64_t seed, int stream, int index) {
  return seed * 1000003u + std::uint64_t(stream) * 1009u + std::uint64_t(index);
}

template <class T>
T random_multi(const GridPtr& grid, std::uint64_t seed, int stream, int index,
               int max_mode, double amp) {
  T t(grid);
  for (std::size_t i = 0; i < t.count(); ++i)
    t[i] = random_bandlimited_field(
        grid, stream_seed(seed, stream, int(index * 64 + i)), max_mode, amp);
  return t;
}

SymTensor2 traceless_part(const Metric& g, SymTensor2 phi) {
  const ScalarField tr = trace_g(phi, g);
  for (std::size_t i = 0; i < phi.count(); ++i)
    phi[i].add_product(-1.0 / g.dim(), tr, g.covariant()[i]);
  return phi;
}

SymTensor2 traceless_ricci_of(const Metric& g) { return traceless_part(g, ricci(g)); }

OneForm oneform_from_modes(const GridPtr& grid, const std::vector<OneFormMode>& modes) {
  OneForm t(grid);
  for (const auto& m : modes) t[m.a] += evaluate_modes(grid, {{m.amplitude, m.wavevector, m.phase}});
  return t;
}

// theta minus its L2 projection onto span(basis).
OneForm modulo(const Metric& g, OneForm theta, const std::vector<OneForm>& basis) {
  std::vector<OneForm> q;
  for (const auto& b : basis) {
    OneForm v = b;
    for (const auto& e : q) v.add_scaled(-l2_inner(e, v, g), e);
    const double n = l2_norm(v, g);
    if (n > 0.0) q.push_back((1.0 / n) * v);
  }
  for (const auto& e : q) theta.add_scaled(-l2_inner(e, theta, g), e);
  return theta;
}

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

Json grid_json(const Grid& g) {
  Json j;
  j["dimension"] = g.dim();
  j["resolution"] = g.spec().resolution;
  j["periods"] = g.spec().periods;
  j["band_limit"] = g.band_limit();
  return j;
}

Json solver_json(const SolverConfig& s) {
  Json j;
  j["rel_tolerance"] = s.rel_tolerance;
  j["max_iterations"] = s.max_iterations;
  j["abs_tolerance"] = s.abs_tolerance;
  j["flat_preconditioner"] = s.flat_preconditioner;
  return j;
}

Json diagnostics_json(const DecompositionDiagnostics& d) {
  Json j;
  j["cg_iterations"] = d.cg_iterations;
  j["final_residual"] = d.final_residual;
  j["kernel_dimension"] = d.kernel_dimension;
  j["rhs_norm"] = d.rhs_norm;
  j["input_norm"] = d.input_norm;
  j["s_theta_norm"] = d.s_theta_norm;
  j["phi_tt_norm"] = d.phi_tt_norm;
  j["trace_norm"] = d.trace_norm;
  j["orthogonality_defect"] = d.orthogonality_defect;
  j["tt_divergence_norm"] = d.tt_divergence_norm;
  j["reconstruction_error"] = d.reconstruction_error;
  return j;
}

void add_decomposition_checks(std::vector<Check>& checks, const std::string& prefix,
                              const Decomposition& d, const SolverConfig& solver) {
  const DecompositionLimits lim;
  const auto& x = d.diagnostics;
  checks.push_back(at_most(prefix + "trace", x.trace_norm, lim.trace, "sup |trace_g| of both parts"));
  checks.push_back(at_most(prefix + "orthogonality", x.orthogonality_defect, lim.orthogonality,
                           "|<S theta, phi_tt>| / (||S theta|| ||phi_tt||)"));
  checks.push_back(at_most(
      prefix + "tt_divergence", x.tt_divergence_norm,
      std::max(lim.tt_divergence_factor * solver.rel_tolerance * x.rhs_norm, solver.abs_tolerance),
      "||delta phi_tt|| against 10 * rel_tolerance * ||delta phi0||"));
  checks.push_back(at_most(prefix + "reconstruction", x.reconstruction_error, lim.reconstruction,
                           "sup |phi0 - S theta - phi_tt| / max(1, sup |phi0|)"));
}

Json header(const std::string& command, const RunConfig& cfg, const Metric& g) {
  Json r;
  r["command"] = command;
  r["config"] = cfg.source;
  r["grid"] = grid_json(*g.grid());
  r["metric"] = {{"min_eigenvalue", g.min_eigenvalue()}};
  r["solver"] = solver_json(cfg.solver);
  r["kernels"] = std::string(kernels::backend_name(kernels::active().backend));
  return r;
}

void finish(CommandOutput& out, std::vector<Check> checks) {
  out.pass = all_pass(checks);
  out.report["checks"] = to_json(checks);
  out.report["pass"] = out.pass;
}

struct Setup {
  GridPtr grid;
  Metric g;
};

Setup setup(const RunConfig& cfg) {
  GridPtr grid = Grid::create(cfg.grid);
  Metric g = metric_from_spec(cfg.metric, grid);
  return {grid, std::move(g)};
}

}  // namespace

CommandOutput run_verify(const RunConfig& cfg) {
  const auto [grid, g] = setup(cfg);
  const int n = g.dim();
  const int mm = cfg.random.max_mode;
  const double amp = cfg.random.amplitude;
  CommandOutput out;
  out.report = header("verify", cfg, g);
  std::vector<Check> checks;

  double adj_star = 0.0, adj_d = 0.0, adj_d0 = 0.0, trace_s = 0.0;
  for (int i = 0; i < cfg.verify_pairs; ++i) {
    const auto theta = random_multi<OneForm>(grid, cfg.seed, 1, i, mm, amp);
    const auto phi = random_multi<SymTensor2>(grid, cfg.seed, 2, i, mm, amp);
    const auto omega = random_multi<TwoForm>(grid, cfg.seed, 3, i, mm, amp);
    const ScalarField f = random_bandlimited_field(grid, stream_seed(cfg.seed, 4, i), mm, amp);
    const double nt = l2_norm(theta, g);
    adj_star = std::max(adj_star, std::abs(l2_inner(delta_star(g, theta), phi, g) -
                                           l2_inner(theta, div_sym(g, phi), g)) /
                                      (nt * l2_norm(phi, g)));
    adj_d = std::max(adj_d, std::abs(l2_inner(ext_d_oneform(theta), omega, g) -
                                     l2_inner(theta, codiff_twoform(g, omega), g)) /
                                (nt * l2_norm(omega, g)));
    adj_d0 = std::max(adj_d0, std::abs(l2_inner(ext_d_scalar(f), theta, g) -
                                       l2_inner(f, delta_oneform(g, theta), g)) /
                                  (nt * l2_norm(f, g)));
    const SymTensor2 st = cauchy_ahlfors_S(g, theta);
    trace_s = std::max(trace_s, sup_norm(trace_g(st, g)) / std::max(1.0, sup_norm(st)));
  }
  const std::string pairs = std::to_string(cfg.verify_pairs) + " random pairs, worst case";
  checks.push_back(at_most("adjoint_delta_star", adj_star, 1e-9, pairs));
  checks.push_back(at_most("adjoint_d_oneform", adj_d, 1e-9, pairs));
  checks.push_back(at_most("adjoint_d_scalar", adj_d0, 1e-9, pairs));
  checks.push_back(at_most("trace_free_S", trace_s, 1e-10, "sup |trace_g S theta| / max(1, sup |S theta|)"));

  const SymTensor2 ric = ricci(g);
  const ScalarField s = scalar_curvature(g, ric);
  const OneForm ds = ext_d_scalar(s);
  OneForm bianchi = div_sym(g, ric);
  bianchi.add_scaled(0.5, ds);
  const double ds_norm = l2_norm(ds, g);
  const bool curved_s = ds_norm > 1e-10;
  checks.push_back(at_most("bianchi", curved_s ? l2_norm(bianchi, g) / ds_norm : l2_norm(bianchi, g),
                           1e-7,
                           curved_s ? "||delta Ric + ds/2|| / ||ds||" : "||delta Ric + ds/2|| (ds = 0)"));
  if (n == 2) {
    const SymTensor2 half = scaled_metric(g, 0.5 * s);
    checks.push_back(at_most("ricci_pure_trace_2d",
                             relative(l2_norm(ric - half, g), l2_norm(ric, g)), 1e-9,
                             "||Ric - (s/2) g|| / ||Ric||"));
  }

  OneForm smooth(grid);
  for (int a = 0; a < n; ++a)
    smooth[a] = random_bandlimited_field(grid, stream_seed(cfg.seed, 5, a), 1, 1.0);
  const SignCalibration cal = calibrate_ricci_sign(g, smooth);
  const double calibrated = kRicciTermSign < 0 ? cal.residual_minus : cal.residual_plus;
  const double rejected = kRicciTermSign < 0 ? cal.residual_plus : cal.residual_minus;
  checks.push_back(at_most("weitzenboeck_calibrated", calibrated, 1e-7,
                           "relative residual with the fixed Ricci sign"));
  const bool curved = l2_norm(ric, g) > 1e-8;
  Json w;
  w["fixed_sign"] = kRicciTermSign;
  w["calibrated_sign"] = cal.sign;
  w["residual_plus"] = cal.residual_plus;
  w["residual_minus"] = cal.residual_minus;
  if (curved) {
    checks.push_back(at_least("weitzenboeck_rejected", rejected, 0.1,
                              "relative residual with the opposite sign"));
    checks.push_back(at_most("ricci_sign_mismatch", cal.sign == kRicciTermSign ? 0.0 : 1.0, 0.0));
  } else {
    w["note"] = "Ric = 0: both signs agree, the sign is not determined here";
  }
  out.report["weitzenboeck"] = w;

  if (n >= 3) {
    const RicciPotentialReport p = verify_ricci_potential(g, cfg.solver);
    add_decomposition_checks(checks, "ricci_decomposition_", p.decomposition, cfg.solver);
    checks.push_back(at_most("laplacian_theta_vs_ds", p.ds_relation_derived, 1e-6,
                             "||Delta_A theta - c ds|| / ||ds||, c = -(n-2)/(2n)"));
    checks.push_back(at_most("s_theta_energy", p.energy_derived, 1e-6,
                             "<S theta, S theta> against c * integral of theta^# (ds)"));
    Json j;
    j["diagnostics"] = diagnostics_json(p.decomposition.diagnostics);
    j["c_derived"] = p.c_derived;
    j["c_doubled"] = p.c_doubled;
    j["c_fitted"] = p.c_fitted;
    j["ds_norm"] = p.ds_norm;
    j["laplacian_theta_vs_ds_derived"] = p.ds_relation_derived;
    j["laplacian_theta_vs_ds_doubled"] = p.ds_relation_doubled;
    j["energy_lhs"] = p.energy_lhs;
    j["energy_rhs_derived"] = p.energy_rhs_derived;
    j["energy_rhs_doubled"] = p.energy_rhs_doubled;
    j["energy_derived"] = p.energy_derived;
    j["energy_doubled"] = p.energy_doubled;
    out.report["ricci_potential"] = j;
    add_components(out.fields, "theta", p.decomposition.theta);
    add_components(out.fields, "phi_tt", p.decomposition.phi_tt);
  } else {
    out.report["ricci_potential"] = {{"note", "needs dimension >= 3"}};
  }
  add_components(out.fields, "ricci", ric);
  out.fields.emplace("scalar_curvature", s);
  finish(out, std::move(checks));
  return out;
}

CommandOutput run_decompose(const RunConfig& cfg) {
  const auto [grid, g] = setup(cfg);
  CommandOutput out;
  out.report = header("decompose", cfg, g);

  SymTensor2 phi0(grid);
  OneForm theta_hat(grid);
  switch (cfg.tensor.kind) {
    case TensorSource::Kind::Ricci:
      phi0 = traceless_ricci_of(g);
      break;
    case TensorSource::Kind::Random:
      phi0 = traceless_part(g, random_multi<SymTensor2>(grid, cfg.seed, 6, 0, cfg.random.max_mode,
                                                        cfg.random.amplitude));
      break;
    case TensorSource::Kind::Modes:
      phi0 = traceless_part(g, evaluate_tensor_modes(grid, cfg.tensor.modes));
      break;
    case TensorSource::Kind::STheta:
      theta_hat = oneform_from_modes(grid, cfg.tensor.theta_modes);
      phi0 = cauchy_ahlfors_S(g, theta_hat);
      break;
  }
  out.report["source"] = to_string(cfg.tensor.kind);

  const Decomposition d = decompose_traceless(g, phi0, cfg.solver);
  std::vector<Check> checks;
  add_decomposition_checks(checks, "", d, cfg.solver);
  const double input = d.diagnostics.input_norm;
  out.report["diagnostics"] = diagnostics_json(d.diagnostics);
  out.report["tt_norm"] = d.diagnostics.phi_tt_norm;
  if (cfg.tensor.kind == TensorSource::Kind::STheta) {
    const auto kernel = kernel_basis(g);
    const OneForm ref = modulo(g, theta_hat, kernel);
    const OneForm err = modulo(g, d.theta - theta_hat, kernel);
    checks.push_back(at_most("tt_norm_relative", relative(d.diagnostics.phi_tt_norm, input), 1e-9,
                             "||phi_tt|| / ||phi0|| for phi0 = S theta-hat"));
    checks.push_back(at_most("theta_recovery", relative(l2_norm(err, g), l2_norm(ref, g)), 1e-8,
                             "||theta - theta-hat|| / ||theta-hat|| modulo the kernel"));
  }
  add_components(out.fields, "phi0", phi0);
  add_components(out.fields, "theta", d.theta);
  add_components(out.fields, "s_theta", d.s_theta);
  add_components(out.fields, "phi_tt", d.phi_tt);
  finish(out, std::move(checks));
  return out;
}

CommandOutput run_soliton(const RunConfig& cfg) {
  const auto [grid, g] = setup(cfg);
  CommandOutput out;
  out.report = header("soliton", cfg, g);
  const SolitonFit f = fit_almost_soliton(g, cfg.solver);
  std::vector<Check> checks;
  add_decomposition_checks(checks, "ricci_decomposition_", f.decomposition, f.solver);
  checks.push_back(at_most("reconstruction", f.reconstruction_residual, 1e-8,
                           "||Ric - L_V g / 2 - lambda g - phi_tt|| / ||Ric||"));
  checks.push_back(at_most("trace_identity", f.trace_identity_residual, 1e-10,
                           "sup |s + delta theta - n lambda|"));
  if (g.dim() == 2)
    checks.push_back(at_most("deviation_2d", f.deviation, 1e-8, "||phi_tt|| / ||Ric|| in two dimensions"));

  Json j;
  j["deviation"] = f.deviation;
  j["deviation_floor"] = kDeviationFloor;
  j["lambda_variation"] = f.lambda_variation;
  j["lambda_mean"] = mean(f.lambda);
  j["ricci_norm"] = f.ricci_norm;
  j["lie_scalar_integral"] = f.lie_scalar_integral;
  j["vector_field"] = "V = theta^#";
  if (g.dim() == 2) {
    const IdentitySides id = integral_identity_2d(g, f.v);
    j["integral_identity"] = {{"lhs", id.lhs}, {"rhs", id.rhs}, {"asserted", false}};
  }
  out.report["soliton"] = j;
  out.report["diagnostics"] = diagnostics_json(f.decomposition.diagnostics);
  add_components(out.fields, "theta", f.theta);
  add_components(out.fields, "v", f.v);
  out.fields.emplace("lambda", f.lambda);
  add_components(out.fields, "phi_tt", f.phi_tt);
  finish(out, std::move(checks));
  return out;
}

CommandOutput run_constraints(const RunConfig& cfg) {
  const auto [grid, g] = setup(cfg);
  const auto& c = cfg.constraints;
  CommandOutput out;
  out.report = header("constraints", cfg, g);
  out.report["kind"] = to_string(c.kind);

  std::vector<Check> checks;
  const InitialData data = [&] {
    if (c.kind == ConstraintsSpec::Kind::General) {
      SymTensor2 k = evaluate_tensor_modes(grid, c.k_modes);
      if (c.trace != 0.0) k.add_scaled(c.trace, g.covariant());
      if (c.random)
        k += random_multi<SymTensor2>(grid, cfg.seed, 7, 0, cfg.random.max_mode,
                                      cfg.random.amplitude);
      return make_initial_data(g, std::move(k));
    }
    SymTensor2 phi = evaluate_tensor_modes(grid, c.tt_modes);
    if (c.project) phi = tt_project(g, phi, cfg.solver);
    return build_cmc_data(g, phi, c.h0);
  }();

  const ConstraintReport rep = evaluate_constraints(data, c.cosmological_constant);
  const KDecomposition kd = decompose_K(data, cfg.solver);
  add_decomposition_checks(checks, "k_decomposition_", kd.decomposition, cfg.solver);
  checks.push_back(at_most("theta_equation", kd.theta_equation_residual, kd.theta_equation_threshold,
                           "||Delta_A theta - (delta K + dH / n)|| against 10 * rel_tolerance * ||delta K_0||"));
  if (c.kind == ConstraintsSpec::Kind::Cmc)
    checks.push_back(at_most("cmc_momentum_sup", rep.momentum_sup, 1e-8,
                             "momentum constraint holds by construction for constant H and TT phi"));

  Json j;
  j["hamiltonian_l2"] = rep.hamiltonian_l2;
  j["hamiltonian_sup"] = rep.hamiltonian_sup;
  j["momentum_l2"] = rep.momentum_l2;
  j["momentum_sup"] = rep.momentum_sup;
  j["cosmological_constant"] = c.cosmological_constant;
  j["mean_curvature_min"] = min_value(data.H);
  j["mean_curvature_max"] = max_value(data.H);
  j["umbilicity_defect"] = umbilicity_defect(data);
  j["theta_equation_residual"] = kd.theta_equation_residual;
  j["theta_equation_threshold"] = kd.theta_equation_threshold;
  out.report["constraints"] = j;
  out.report["diagnostics"] = diagnostics_json(kd.decomposition.diagnostics);

  add_components(out.fields, "K", data.K);
  out.fields.emplace("H", data.H);
  out.fields.emplace("hamiltonian", rep.hamiltonian);
  add_components(out.fields, "momentum", rep.momentum);
  add_components(out.fields, "theta", kd.decomposition.theta);
  add_components(out.fields, "phi_tt", kd.decomposition.phi_tt);
  finish(out, std::move(checks));
  return out;
}

CommandOutput run_gen_tt(const RunConfig& cfg) {
  const auto [grid, g] = setup(cfg);
  CommandOutput out;
  out.report = header("gen-tt", cfg, g);
  const SymTensor2 phi0 = traceless_part(
      g, random_multi<SymTensor2>(grid, cfg.seed, 8, 0, cfg.random.max_mode, cfg.random.amplitude));
  const Decomposition d = decompose_traceless(g, phi0, cfg.solver);
  std::vector<Check> checks;
  add_decomposition_checks(checks, "", d, cfg.solver);
  const TTCheck tt = check_tt(g, d.phi_tt);
  out.report["tt"] = {{"trace_sup", tt.trace_sup},
                      {"divergence_l2", tt.divergence_l2},
                      {"norm_l2", tt.norm_l2}};
  out.report["diagnostics"] = diagnostics_json(d.diagnostics);
  add_components(out.fields, "phi_tt", d.phi_tt);
  finish(out, std::move(checks));
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify", "decompose", "soliton",
                                                 "constraints", "gen-tt"};
  return names;
}

CommandOutput run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "verify") return run_verify(cfg);
  if (name == "decompose") return run_decompose(cfg);
  if (name == "soliton") return run_soliton(cfg);
  if (name == "constraints") return run_constraints(cfg);
  if (name == "gen-tt") return run_gen_tt(cfg);
  throw ConfigError("unknown command \"" + name + "\"");
}

int execute(const std::string& name, const RunConfig& cfg, std::ostream& out,
            std::ostream& err) {
  CommandOutput result;
  try {
    result = run_command(name, cfg);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateMetric& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "failure: " << e.what() << '\n';
    return kExitFail;
  }

  try {
    if (cfg.report_path.empty()) {
      write_json(out, result.report);
    } else {
      const std::filesystem::path p(cfg.report_path);
      if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
      std::ofstream f(p);
      if (!f) throw std::runtime_error("cannot write " + p.string());
      write_json(f, result.report);
    }
    if (!cfg.dump_dir.empty()) write_dumps(cfg.dump_dir, result.fields);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!result.pass) {
    for (const auto& c : result.report["checks"])
      if (!c["pass"].get<bool>())
        err << "check failed: " << c["name"].get<std::string>() << " = "
            << c["value"].dump() << " (" << c["comparison"].get<std::string>() << ' '
            << c["threshold"].dump() << ")\n";
    return kExitFail;
  }
  return kExitPass;
}

int execute_file(const std::string& name, const std::string& config_path,
                 const std::string& report_override, const std::string& dump_override,
                 std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    if (std::find(command_names().begin(), command_names().end(), name) ==
        command_names().end())
      throw ConfigError("unknown command \"" + name + "\"");
    cfg = load_config(config_path);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!report_override.empty()) cfg.report_path = report_override;
  if (!dump_override.empty()) cfg.dump_dir = dump_override;
  return execute(name, cfg, out, err);
}

}  // namespace ahlfors::cli
