// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed here.
// Exit status is the number of failed criteria (0 when all pass).
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ahlfors/constraints.hpp"
#include "ahlfors/soliton.hpp"
#include "commands.hpp"

using namespace ahlfors;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr grid2(int n) { return Grid::create({2, {n, n}, {}}); }
GridPtr grid3(int n) { return Grid::create({3, {n, n, n}, {}}); }

// The standard perturbed test metric.
Metric test_metric(const GridPtr& g, std::uint64_t seed = 1) {
  return metric_from_spec(random_perturbation_spec(g->dim(), seed, 0.05, 2), g);
}

template <class T>
T random_multi(const GridPtr& g, std::uint64_t seed, int max_mode = 2) {
  T t(g);
  for (std::size_t i = 0; i < t.count(); ++i)
    t[i] = random_bandlimited_field(g, seed * 101 + i, max_mode, 1.0);
  return t;
}

SymTensor2 traceless(const Metric& g, SymTensor2 phi) {
  const ScalarField tr = trace_g(phi, g);
  for (std::size_t i = 0; i < phi.count(); ++i)
    phi[i].add_product(-1.0 / g.dim(), tr, g.covariant()[i]);
  return phi;
}

SolverConfig solver() {
  SolverConfig c;
  c.flat_preconditioner = true;
  return c;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Line {
  std::string text;
  bool pass;
};

// Collects the sub-conditions of one criterion.
struct Criterion {
  std::vector<Line> parts;
  void at_most(const std::string& what, double v, double lim) {
    parts.push_back({what + " " + fmt(v) + " <= " + fmt(lim), std::isfinite(v) && v <= lim});
  }
  void at_least(const std::string& what, double v, double lim) {
    parts.push_back({what + " " + fmt(v) + " >= " + fmt(lim), std::isfinite(v) && v >= lim});
  }
  void require(const std::string& what, bool ok) { parts.push_back({what, ok}); }
  void info(const std::string& what) { parts.push_back({"(info) " + what, true}); }
  bool pass() const {
    for (const auto& p : parts)
      if (!p.pass) return false;
    return true;
  }
};

// 1. adjointness on flat and perturbed metrics, 2D 64^2 and 3D 24^3
Criterion adjointness() {
  Criterion c;
  for (auto grid : {grid2(64), grid3(24)}) {
    for (bool flat : {true, false}) {
      const Metric g = flat ? flat_metric(grid) : test_metric(grid);
      double ws = 0.0, wd = 0.0;
      for (std::uint64_t k = 1; k <= 20; ++k) {
        const auto th = random_multi<OneForm>(grid, k);
        const auto phi = random_multi<SymTensor2>(grid, k + 100);
        const auto om = random_multi<TwoForm>(grid, k + 200);
        const double nt = l2_norm(th, g);
        ws = std::max(ws, std::abs(l2_inner(phi, delta_star(g, th), g) -
                                   l2_inner(div_sym(g, phi), th, g)) /
                              (nt * l2_norm(phi, g)));
        wd = std::max(wd, std::abs(l2_inner(ext_d_oneform(th), om, g) -
                                   l2_inner(th, codiff_twoform(g, om), g)) /
                              (nt * l2_norm(om, g)));
      }
      const std::string tag = std::to_string(grid->dim()) + "D " + (flat ? "flat" : "perturbed");
      c.at_most(tag + " <phi, delta* theta> - <delta phi, theta>", ws, 1e-9);
      c.at_most(tag + " <d theta, omega> - <theta, delta omega>", wd, 1e-9);
    }
  }
  return c;
}

// 2. conformal T^2 scalar curvature against -2 exp(-2f) Delta_0 f
Criterion curvature_oracle() {
  Criterion c;
  auto error = [](int n) {
    const auto g = grid2(n);
    MetricSpec s;
    s.kind = MetricSpec::Kind::Conformal;
    s.conformal_factor = {{0.1, {1, 0}, 0.0}, {0.05, {0, 1}, -kPi / 2}};
    const Metric m = metric_from_spec(s, g);
    const ScalarField oracle = ScalarField::from_function(g, [](auto x) {
      const double f = 0.1 * std::cos(x[0]) + 0.05 * std::sin(x[1]);
      const double lap = -0.1 * std::cos(x[0]) - 0.05 * std::sin(x[1]);
      return -2.0 * std::exp(-2.0 * f) * lap;
    });
    return sup_norm(scalar_curvature(m, ricci(m)) - oracle);
  };
  const double e16 = error(16), e32 = error(32), e64 = error(64);
  c.at_most("sup error at 64^2", e64, 1e-8);
  c.at_least("error(32^2) / error(64^2)", e32 / e64, 1e4);
  c.info("sup error at 16^2 " + fmt(e16) + ", 32^2 " + fmt(e32) +
         "; 32^2 is already at round-off");
  return c;
}

// 3. contracted Bianchi identity
Criterion bianchi() {
  Criterion c;
  const Metric g = test_metric(grid3(24));
  const SymTensor2 ric = ricci(g);
  const OneForm ds = ext_d_scalar(scalar_curvature(g, ric));
  OneForm r = div_sym(g, ric);
  r.add_scaled(0.5, ds);
  c.at_most("||delta Ric + ds/2|| / ||ds||", l2_norm(r, g) / l2_norm(ds, g), 1e-7);
  return c;
}

// 4. flat eigenform
Criterion eigenform() {
  Criterion c;
  const auto grid = grid2(32);
  const Metric flat = flat_metric(grid);
  OneForm th(grid);
  th[0] = ScalarField::from_function(grid, [](auto x) { return std::sin(x[0]); });
  const OneForm half = 0.5 * th;
  c.at_most("sup |delta S theta - theta/2|", sup_norm(ahlfors_laplacian(flat, th) - half), 1e-11);
  c.at_most("sup |Weitzenboeck rhs - theta/2|", sup_norm(weitzenboeck_rhs(flat, th) - half), 1e-11);
  return c;
}

// 5. Weitzenboeck sign calibration on perturbed metrics
Criterion weitzenboeck() {
  Criterion c;
  const auto grid = grid3(24);
  for (std::uint64_t seed : {1, 2, 3}) {
    const Metric g = test_metric(grid, seed);
    OneForm th(grid);
    for (int a = 0; a < 3; ++a) th[a] = random_bandlimited_field(grid, 10 + a, 1, 1.0);
    const SignCalibration cal = calibrate_ricci_sign(g, th);
    const std::string tag = "metric seed " + std::to_string(seed) + ": ";
    c.require(tag + "calibrated sign " + std::to_string(cal.sign) + " matches the fixed sign",
              cal.sign == kRicciTermSign);
    const double good = kRicciTermSign < 0 ? cal.residual_minus : cal.residual_plus;
    const double bad = kRicciTermSign < 0 ? cal.residual_plus : cal.residual_minus;
    c.at_most(tag + "calibrated residual", good, 1e-7);
    c.at_least(tag + "rejected residual", bad, 0.1);
  }
  return c;
}

// 6 and 7 share one decomposition of Ric_0.
struct RicciRun {
  RicciPotentialReport rep;
  SolverConfig cfg;
};

const RicciRun& ricci_run() {
  static const RicciRun run = [] {
    const Metric g = test_metric(grid3(24));
    RicciRun r{verify_ricci_potential(g, solver()), solver()};
    return r;
  }();
  return run;
}

Criterion ricci_decomposition() {
  Criterion c;
  const auto& r = ricci_run();
  const auto& d = r.rep.decomposition.diagnostics;
  c.at_most("sup |trace|", d.trace_norm, 1e-10);
  c.at_most("||delta phi_tt||", d.tt_divergence_norm, 10.0 * r.cfg.rel_tolerance * d.rhs_norm);
  c.at_most("|<S theta, phi_tt>| / (||S theta|| ||phi_tt||)", d.orthogonality_defect, 1e-8);
  c.at_most("sup |Ric_0 - S theta - phi_tt| / max(1, sup |Ric_0|)", d.reconstruction_error, 1e-12);
  return c;
}

Criterion ds_relation() {
  Criterion c;
  const auto& r = ricci_run().rep;
  c.at_most("||Delta_A theta - c ds|| / ||ds||, c = -1/6", r.ds_relation_derived, 1e-6);
  c.at_most("energy identity, c = -1/6", r.energy_derived, 1e-6);
  c.info("with c = -1/3: ds relation " + fmt(r.ds_relation_doubled) + ", energy identity " +
         fmt(r.energy_doubled) + "; fitted c = " + fmt(r.c_fitted));
  return c;
}

// 8. recovery of constructed inputs
Criterion recovery() {
  Criterion c;
  const auto grid = grid3(24);
  const Metric g = test_metric(grid);
  const OneForm hat = random_multi<OneForm>(grid, 41);
  const SymTensor2 phi0 = cauchy_ahlfors_S(g, hat);
  const Decomposition d = decompose_traceless(g, phi0, solver());
  c.require("kernel is trivial on the test metric", kernel_basis(g).empty());
  c.at_most("||phi_tt|| / ||S theta-hat||", l2_norm(d.phi_tt, g) / l2_norm(phi0, g), 1e-9);
  c.at_most("||theta - theta-hat|| / ||theta-hat||", l2_norm(d.theta - hat, g) / l2_norm(hat, g), 1e-8);

  SolverConfig tight = solver();
  tight.rel_tolerance = 1e-12;
  const SymTensor2 tt = tt_project(g, random_multi<SymTensor2>(grid, 43), tight);
  const Decomposition e = decompose_traceless(g, tt, solver());
  c.at_most("TT input: ||S theta|| / ||phi0||", l2_norm(e.s_theta, g) / l2_norm(tt, g), 1e-9);
  return c;
}

// 9. solitons
Criterion soliton() {
  Criterion c;
  {
    const auto grid = grid2(32);
    VectorField v(grid);
    v[0] = ScalarField(grid, 0.4);
    v[1] = ScalarField(grid, -1.2);
    c.at_most("flat T^2, constant V, lambda = 0: sup residual",
              sup_norm(soliton_residual(flat_metric(grid), v, ScalarField(grid))), 1e-11);
  }
  const auto grid = grid2(64);
  double dev = 0.0, trace_id = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const SolitonFit f = fit_almost_soliton(test_metric(grid, seed), solver());
    dev = std::max(dev, f.deviation);
    trace_id = std::max(trace_id, f.trace_identity_residual);
  }
  MetricSpec s;
  s.kind = MetricSpec::Kind::Conformal;
  s.conformal_factor = {{0.1, {1, 0}, 0.0}, {0.05, {0, 1}, -kPi / 2}};
  const SolitonFit f = fit_almost_soliton(metric_from_spec(s, grid), solver());
  dev = std::max(dev, f.deviation);
  trace_id = std::max(trace_id, f.trace_identity_residual);
  c.at_most("2D deviation (3 perturbed + 1 conformal, 64^2)", dev, 1e-8);
  const SolitonFit f3 = fit_almost_soliton(test_metric(grid3(24)), solver());
  trace_id = std::max(trace_id, f3.trace_identity_residual);
  c.at_most("sup |s + delta theta - n lambda| (2D and 3D fits)", trace_id, 1e-10);
  c.info("3D test metric deviation " + fmt(f3.deviation));
  return c;
}

// 10. constraints
Criterion constraints() {
  Criterion c;
  const double amp = 0.1;
  const auto g3 = grid3(24);
  const Metric flat = flat_metric(g3);
  SymTensor2 tt(g3);
  tt(0, 0) = ScalarField::from_function(g3, [amp](auto x) { return amp * std::cos(x[2]); });
  tt(1, 1) = -1.0 * tt(0, 0);
  const InitialData d = build_cmc_data(flat, tt, 0.0);
  c.at_most("CMC momentum residual (sup)", sup_norm(momentum_residual(d)), 1e-8);
  const ScalarField expect = ScalarField::from_function(g3, [amp](auto x) {
    return -2.0 * amp * amp * std::cos(x[2]) * std::cos(x[2]);
  });
  c.at_most("sup |Hamiltonian + 2 A^2 cos^2 x3|", sup_norm(hamiltonian_residual(d) - expect), 1e-9);

  auto ratio = [](const Metric& g, const SymTensor2& k, double& res, double& lim) {
    const KDecomposition kd = decompose_K(make_initial_data(g, k), solver());
    res = kd.theta_equation_residual;
    lim = kd.theta_equation_threshold;
  };
  const auto g2 = grid2(64);
  for (std::uint64_t seed : {1, 2, 3}) {
    double r, l;
    ratio(test_metric(g2, seed), random_multi<SymTensor2>(g2, seed + 20), r, l);
    c.at_most("theta equation, random K, 2D perturbed seed " + std::to_string(seed), r, l);
  }
  {
    double r, l;
    ratio(flat, random_multi<SymTensor2>(g3, 9, 6), r, l);
    c.at_most("theta equation, random K, 3D flat 24^3", r, l);
  }
  {
    double r, l;
    ratio(test_metric(g3), random_multi<SymTensor2>(g3, 9, 2), r, l);
    c.info("3D perturbed 24^3, random K (max_mode 2): residual " + fmt(r) + " vs bound " + fmt(l) +
           " (aliasing floor, not gated)");
  }
  return c;
}

// 11. byte-stable reports and dumps
Criterion determinism() {
  Criterion c;
  const fs::path base = fs::temp_directory_path() / ("ahlfors_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  const fs::path configs = AHLFORS_CONFIG_DIR;
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"gen-tt", "gen_tt.json"},          {"verify", "verify_perturbed3d.json"},
      {"decompose", "decompose_ricci.json"}, {"soliton", "soliton_2d.json"},
      {"constraints", "constraints_cmc.json"}};
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  for (const auto& [cmd, file] : runs) {
    bool same = true;
    int files = 0;
    for (int rep = 0; rep < 2; ++rep) {
      cli::RunConfig cfg = cli::load_config(configs / file);
      const fs::path dir = base / cmd / std::to_string(rep);
      cfg.report_path = (dir / "report.json").string();
      cfg.dump_dir = (dir / "dump").string();
      std::ostringstream out, err;
      cli::execute(cmd, cfg, out, err);
    }
    const fs::path a = base / cmd / "0", b = base / cmd / "1";
    same = fs::exists(a / "report.json") && slurp(a / "report.json") == slurp(b / "report.json");
    if (fs::exists(a / "dump"))
      for (const auto& e : fs::directory_iterator(a / "dump")) {
        ++files;
        same = same && slurp(e.path()) == slurp(b / "dump" / e.path().filename());
      }
    c.require(cmd + " (" + file + "): report and " + std::to_string(files) +
                  " CSV dumps identical across reruns",
              same && files > 0);
  }
  fs::remove_all(base);
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
      {"operator adjointness", adjointness},
      {"curvature oracle", curvature_oracle},
      {"contracted Bianchi identity", bianchi},
      {"flat eigenform", eigenform},
      {"Weitzenboeck calibration", weitzenboeck},
      {"traceless Ricci decomposition", ricci_decomposition},
      {"Delta_A theta = c ds with c = -(n-2)/(2n)", ds_relation},
      {"recovery of constructed inputs", recovery},
      {"almost Ricci solitons", soliton},
      {"constraint tooling", constraints},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const Criterion c = criteria[i].second();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = c.pass();
    failed += ok ? 0 : 1;
    std::printf("%s %2zu %s (%.1f s)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs);
    for (const auto& p : c.parts)
      std::printf("       %s %s\n", p.pass ? "ok  " : "FAIL", p.text.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed;
}
