#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "helpers.hpp"

namespace fs = std::filesystem;
using namespace ahlfors::cli;
using OJson = nlohmann::ordered_json;

namespace {

const std::string kTool = AHLFORS_CLI_PATH;
const fs::path kConfigs = AHLFORS_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     ("ahlfors_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_tool(const std::string& args) {
  const std::string cmd = kTool + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig parse(const std::string& text) { return parse_config(OJson::parse(text)); }

const OJson* find_check(const Json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config parsing") {
    const RunConfig c = parse(R"({"grid": {"resolution": [16, 16]}})");
    CHECK(c.grid.dimension == 2);
    CHECK(c.metric.kind == ahlfors::MetricSpec::Kind::Flat);
    CHECK(c.seed == 1);
    CHECK(c.verify_pairs == 20);

    const RunConfig p = parse(R"({
      "grid": {"dimension": 3, "resolution": 12},
      "metric": {"kind": "perturbation",
                 "modes": [{"a": 1, "b": 3, "amplitude": 0.1, "wavevector": [1, 0, 0]}]},
      "solver": {"rel_tolerance": 1e-9, "max_iterations": 50, "flat_preconditioner": true},
      "tensor": {"source": "s_theta", "theta_modes": [{"a": 2, "amplitude": 1, "wavevector": [0, 1, 0]}]}
    })");
    CHECK(p.grid.resolution == std::vector<int>{12, 12, 12});
    REQUIRE(p.metric.perturbation.size() == 1);
    CHECK(p.metric.perturbation[0].a == 0);
    CHECK(p.metric.perturbation[0].b == 2);
    CHECK(p.solver.rel_tolerance == 1e-9);
    CHECK(p.solver.max_iterations == 50);
    CHECK(p.solver.flat_preconditioner);
    CHECK(p.tensor.kind == TensorSource::Kind::STheta);
    CHECK(p.tensor.theta_modes[0].a == 1);
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse(R"({})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16}, "extra": 1})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 15}})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": "16"}})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16}, "metric": {"kind": "round"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16}, "metric": {"kind": "flat", "seed": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16}, "solver": {"rel_tolerance": 2}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16}, "tensor": {"source": "modes"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16},
      "metric": {"kind": "perturbation", "modes": [{"a": 3, "b": 1, "amplitude": 1, "wavevector": [1, 0]}]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16},
      "metric": {"kind": "conformal", "modes": [{"amplitude": 1, "wavevector": [1]}]}})"),
                    ConfigError);
  }

  TEST_CASE("band limit violations") {
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16}, "random": {"max_mode": 5}})"),
                    ahlfors::BandLimitError);
    CHECK_THROWS_AS(parse(R"({"grid": {"resolution": 16},
      "metric": {"kind": "random_perturbation", "max_mode": 5}})"),
                    ahlfors::BandLimitError);
    // explicit modes are checked when the metric is built
    const RunConfig c = parse(R"({"grid": {"resolution": 16},
      "metric": {"kind": "conformal", "modes": [{"amplitude": 0.1, "wavevector": [5, 0]}]}})");
    std::ostringstream out, err;
    CHECK(execute("verify", c, out, err) == kExitUsage);
    CHECK(err.str().find("band limit") != std::string::npos);
  }

  TEST_CASE("binary exit codes") {
    const fs::path dir = scratch("exit");
    std::ofstream(dir / "bad.json") << R"({"grid": {"resolution": 16}, "random": {"max_mode": 9}})";
    std::ofstream(dir / "broken.json") << "{\"grid\": ";
    CHECK(run_tool("verify --config " + (dir / "bad.json").string()) == 2);
    CHECK(run_tool("verify --config " + (dir / "broken.json").string()) == 2);
    CHECK(run_tool("verify --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_tool("verify") == 2);
    CHECK(run_tool("frobnicate --config x.json") == 2);
    CHECK(run_tool("verify --config " + (kConfigs / "verify_flat3d.json").string() +
                   " --out " + (dir / "r.json").string()) == 0);
    const OJson r = OJson::parse(slurp(dir / "r.json"));
    CHECK(r["command"] == "verify");
    CHECK(r["pass"] == true);

    std::ofstream(dir / "fail.json")
        << R"({"grid": {"dimension": 3, "resolution": 12}, "metric": {"kind": "random_perturbation"},
               "solver": {"max_iterations": 2}})";
    CHECK(run_tool("gen-tt --config " + (dir / "fail.json").string()) == 1);
  }

  TEST_CASE("every check echoes its threshold") {
    const RunConfig c = load_config(kConfigs / "verify_flat3d.json");
    const CommandOutput o = run_verify(c);
    CHECK(o.pass);
    for (const auto& chk : o.report["checks"]) {
      CHECK(chk.contains("threshold"));
      CHECK(chk.contains("value"));
      CHECK(chk.contains("comparison"));
    }
    CHECK(o.report.dump().find("time") == std::string::npos);
  }

  TEST_CASE("perturbed verify reports the ds relation") {
    const RunConfig c = load_config(kConfigs / "verify_perturbed3d.json");
    const CommandOutput o = run_verify(c);
    const OJson* ds = find_check(o.report, "laplacian_theta_vs_ds");
    REQUIRE(ds != nullptr);
    CHECK((*ds)["value"].get<double>() <= 1e-6);
    CHECK(o.report["ricci_potential"]["laplacian_theta_vs_ds_doubled"].get<double>() > 0.1);
    CHECK(o.pass);
  }

  TEST_CASE("decompose recovers a constructed S theta") {
    const CommandOutput o = run_decompose(load_config(kConfigs / "decompose_s_theta_flat.json"));
    CHECK(o.pass);
    CHECK(o.report["tt_norm"].get<double>() <= 1e-9);
  }

  TEST_CASE("CMC constraints") {
    const CommandOutput o = run_constraints(load_config(kConfigs / "constraints_cmc.json"));
    CHECK(o.pass);
    CHECK(o.report["constraints"]["momentum_l2"].get<double>() <= 1e-8);
    const CommandOutput r = run_constraints(load_config(kConfigs / "constraints_random.json"));
    CHECK(r.pass);
  }

  TEST_CASE("soliton on a conformal torus") {
    const CommandOutput o = run_soliton(load_config(kConfigs / "soliton_2d.json"));
    CHECK(o.pass);
    CHECK(o.report["soliton"]["deviation"].get<double>() <= 1e-8);
  }

  TEST_CASE("gen-tt output is byte-stable") {
    const fs::path a = scratch("a"), b = scratch("b");
    const std::string cfg = (kConfigs / "gen_tt.json").string();
    REQUIRE(run_tool("gen-tt --config " + cfg + " --out " + (a / "r.json").string() +
                     " --dump " + (a / "dump").string()) == 0);
    REQUIRE(run_tool("gen-tt --config " + cfg + " --out " + (b / "r.json").string() +
                     " --dump " + (b / "dump").string()) == 0);
    CHECK(slurp(a / "r.json") == slurp(b / "r.json"));
    int files = 0;
    for (const auto& e : fs::directory_iterator(a / "dump")) {
      ++files;
      CHECK(slurp(e.path()) == slurp(b / "dump" / e.path().filename()));
    }
    CHECK(files == 6);
  }

  TEST_CASE("CSV layout") {
    const fs::path dir = scratch("csv");
    const RunConfig c = parse(R"({"grid": {"resolution": [8, 12], "periods": [2.0, 3.0]}})");
    ahlfors::ScalarField f = ahlfors::ScalarField::from_function(
        ahlfors::Grid::create(c.grid), [](auto x) { return x[0] + 10.0 * x[1]; });
    write_csv(dir / "f.csv", f);
    std::ifstream in(dir / "f.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "x1,x2,value");
    int rows = 0;
    double x1 = 0, x2 = 0, v = 0, max1 = 0, max2 = 0;
    char comma;
    while (std::getline(in, line)) {
      std::istringstream s(line);
      s >> x1 >> comma >> x2 >> comma >> v;
      CHECK(v == doctest::Approx(x1 + 10.0 * x2));
      if (rows == 1) CHECK(x2 == doctest::Approx(0.25));  // last axis fastest
      max1 = std::max(max1, x1);
      max2 = std::max(max2, x2);
      ++rows;
    }
    CHECK(rows == 96);
    CHECK(max1 < 2.0);
    CHECK(max2 < 3.0);
  }
}
