#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>

namespace ahlfors::cli {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  require_object(j, path);
  for (const auto& item : j.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* k) { return item.key() == k; });
    if (!ok) fail(path, "unknown key \"" + item.key() + "\"");
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double get_double(const Json& j, const std::string& path, const char* key,
                  double def) {
  if (!j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(join(path, key), "must be finite");
  return x;
}

long long get_int(const Json& j, const std::string& path, const char* key,
                  long long def, long long lo, long long hi) {
  if (!j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
    fail(join(path, key), "must lie in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
  return x;
}

std::uint64_t get_seed(const Json& j, const std::string& path, const char* key,
                       std::uint64_t def) {
  if (!j.contains(key)) return def;
  const Json& v = j.at(key);
  if (!v.is_number_unsigned()) fail(join(path, key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const Json& j, const std::string& path, const char* key, bool def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_boolean()) fail(join(path, key), "expected true or false");
  return j.at(key).get<bool>();
}

std::string get_string(const Json& j, const std::string& path, const char* key,
                       const std::string& def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_string()) fail(join(path, key), "expected a string");
  return j.at(key).get<std::string>();
}

const Json* get_array(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) return nullptr;
  if (!j.at(key).is_array()) fail(join(path, key), "expected an array");
  return &j.at(key);
}

std::vector<int> parse_wavevector(const Json& j, const std::string& path, int dim) {
  if (!j.contains("wavevector")) fail(path, "missing \"wavevector\"");
  const Json& v = j.at("wavevector");
  if (!v.is_array() || int(v.size()) != dim)
    fail(path + ".wavevector", "expected " + std::to_string(dim) + " integers");
  std::vector<int> k;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(path + ".wavevector", "expected integers");
    k.push_back(e.get<int>());
  }
  return k;
}

int parse_index(const Json& j, const std::string& path, const char* key, int dim) {
  if (!j.contains(key)) fail(path, std::string("missing \"") + key + "\"");
  return static_cast<int>(get_int(j, path, key, 1, 1, dim)) - 1;
}

std::vector<FourierMode> parse_scalar_modes(const Json* arr, const std::string& path,
                                            int dim) {
  std::vector<FourierMode> out;
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Json& m = (*arr)[i];
    check_keys(m, p, {"amplitude", "wavevector", "phase"});
    out.push_back({get_double(m, p, "amplitude", 0.0), parse_wavevector(m, p, dim),
                   get_double(m, p, "phase", 0.0)});
  }
  return out;
}

std::vector<TensorMode> parse_tensor_modes(const Json* arr, const std::string& path,
                                           int dim) {
  std::vector<TensorMode> out;
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Json& m = (*arr)[i];
    check_keys(m, p, {"a", "b", "amplitude", "wavevector", "phase"});
    TensorMode t;
    t.a = parse_index(m, p, "a", dim);
    t.b = parse_index(m, p, "b", dim);
    if (t.a > t.b) std::swap(t.a, t.b);
    t.amplitude = get_double(m, p, "amplitude", 0.0);
    t.wavevector = parse_wavevector(m, p, dim);
    t.phase = get_double(m, p, "phase", 0.0);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<OneFormMode> parse_oneform_modes(const Json* arr, const std::string& path,
                                             int dim) {
  std::vector<OneFormMode> out;
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Json& m = (*arr)[i];
    check_keys(m, p, {"a", "amplitude", "wavevector", "phase"});
    OneFormMode t;
    t.a = parse_index(m, p, "a", dim);
    t.amplitude = get_double(m, p, "amplitude", 0.0);
    t.wavevector = parse_wavevector(m, p, dim);
    t.phase = get_double(m, p, "phase", 0.0);
    out.push_back(std::move(t));
  }
  return out;
}

GridSpec parse_grid(const Json& j) {
  check_keys(j, "grid", {"dimension", "resolution", "periods"});
  GridSpec g;
  if (!j.contains("resolution")) fail("grid", "missing \"resolution\"");
  const Json& r = j.at("resolution");
  const int dim_default = r.is_array() ? static_cast<int>(r.size()) : 2;
  g.dimension = static_cast<int>(get_int(j, "grid", "dimension", dim_default, 2, 8));
  if (r.is_number_integer()) {
    g.resolution.assign(g.dimension, r.get<int>());
  } else if (r.is_array()) {
    for (const auto& e : r) {
      if (!e.is_number_integer()) fail("grid.resolution", "expected integers");
      g.resolution.push_back(e.get<int>());
    }
  } else {
    fail("grid.resolution", "expected an integer or an array of integers");
  }
  if (j.contains("periods")) {
    const Json& p = j.at("periods");
    if (p.is_number()) {
      g.periods.assign(g.dimension, p.get<double>());
    } else if (p.is_array()) {
      for (const auto& e : p) {
        if (!e.is_number()) fail("grid.periods", "expected numbers");
        g.periods.push_back(e.get<double>());
      }
    } else {
      fail("grid.periods", "expected a number or an array of numbers");
    }
  }
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    fail("grid", e.what());
  }
  return g;
}

int band_limit(const GridSpec& g) {
  return *std::min_element(g.resolution.begin(), g.resolution.end()) / 4;
}

void check_max_mode(int max_mode, const GridSpec& g, const std::string& path) {
  if (max_mode > band_limit(g))
    throw BandLimitError(path + ": max_mode " + std::to_string(max_mode) +
                         " exceeds the band limit N/4 = " +
                         std::to_string(band_limit(g)));
}

MetricSpec parse_metric(const Json* j, const GridSpec& grid) {
  MetricSpec m;
  if (!j) return m;
  const std::string path = "metric";
  check_keys(*j, path, {"kind", "modes", "seed", "amplitude", "max_mode",
                        "modes_per_component"});
  const std::string kind = get_string(*j, path, "kind", "flat");
  const int dim = grid.dimension;
  if (kind == "flat") {
    m.kind = MetricSpec::Kind::Flat;
  } else if (kind == "conformal") {
    m.kind = MetricSpec::Kind::Conformal;
    m.conformal_factor = parse_scalar_modes(get_array(*j, path, "modes"), path + ".modes", dim);
  } else if (kind == "perturbation") {
    m.kind = MetricSpec::Kind::Perturbation;
    m.perturbation = parse_tensor_modes(get_array(*j, path, "modes"), path + ".modes", dim);
  } else if (kind == "random_perturbation") {
    const auto seed = get_seed(*j, path, "seed", 1);
    const double amp = get_double(*j, path, "amplitude", 0.05);
    const int max_mode = static_cast<int>(get_int(*j, path, "max_mode", 2, 1, 1 << 20));
    const int per = static_cast<int>(get_int(*j, path, "modes_per_component", 1, 1, 64));
    check_max_mode(max_mode, grid, path);
    m = random_perturbation_spec(dim, seed, amp, max_mode, per);
  } else {
    fail(path + ".kind",
         "expected flat, conformal, perturbation or random_perturbation, got \"" +
             kind + "\"");
  }
  if (kind != "random_perturbation")
    for (const char* k : {"seed", "amplitude", "max_mode", "modes_per_component"})
      if (j->contains(k)) fail(path, std::string("\"") + k + "\" needs kind random_perturbation");
  if ((kind == "flat" || kind == "random_perturbation") && j->contains("modes"))
    fail(path, "\"modes\" needs kind conformal or perturbation");
  return m;
}

SolverConfig parse_solver(const Json* j) {
  SolverConfig s;
  if (!j) return s;
  const std::string path = "solver";
  check_keys(*j, path, {"rel_tolerance", "max_iterations", "abs_tolerance",
                        "flat_preconditioner"});
  s.rel_tolerance = get_double(*j, path, "rel_tolerance", s.rel_tolerance);
  s.max_iterations = static_cast<int>(get_int(*j, path, "max_iterations", 0, 0,
                                              std::numeric_limits<int>::max()));
  s.abs_tolerance = get_double(*j, path, "abs_tolerance", s.abs_tolerance);
  s.flat_preconditioner = get_bool(*j, path, "flat_preconditioner", false);
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
  return s;
}

TensorSource parse_tensor(const Json* j, int dim) {
  TensorSource t;
  if (!j) return t;
  const std::string path = "tensor";
  check_keys(*j, path, {"source", "modes", "theta_modes"});
  const std::string src = get_string(*j, path, "source", "ricci");
  if (src == "ricci") t.kind = TensorSource::Kind::Ricci;
  else if (src == "random") t.kind = TensorSource::Kind::Random;
  else if (src == "modes") t.kind = TensorSource::Kind::Modes;
  else if (src == "s_theta") t.kind = TensorSource::Kind::STheta;
  else fail(path + ".source", "expected ricci, random, modes or s_theta, got \"" + src + "\"");
  t.modes = parse_tensor_modes(get_array(*j, path, "modes"), path + ".modes", dim);
  t.theta_modes =
      parse_oneform_modes(get_array(*j, path, "theta_modes"), path + ".theta_modes", dim);
  if (t.kind == TensorSource::Kind::Modes && t.modes.empty())
    fail(path, "source \"modes\" needs a non-empty \"modes\" list");
  if (t.kind == TensorSource::Kind::STheta && t.theta_modes.empty())
    fail(path, "source \"s_theta\" needs a non-empty \"theta_modes\" list");
  return t;
}

ConstraintsSpec parse_constraints(const Json* j, int dim) {
  ConstraintsSpec c;
  if (!j) return c;
  const std::string path = "constraints";
  check_keys(*j, path, {"kind", "K_modes", "trace", "random", "H0", "tt_modes",
                        "project", "cosmological_constant"});
  const std::string kind = get_string(*j, path, "kind", "general");
  if (kind == "general") c.kind = ConstraintsSpec::Kind::General;
  else if (kind == "cmc") c.kind = ConstraintsSpec::Kind::Cmc;
  else fail(path + ".kind", "expected general or cmc, got \"" + kind + "\"");
  c.k_modes = parse_tensor_modes(get_array(*j, path, "K_modes"), path + ".K_modes", dim);
  c.trace = get_double(*j, path, "trace", 0.0);
  c.random = get_bool(*j, path, "random", false);
  c.h0 = get_double(*j, path, "H0", 0.0);
  c.tt_modes = parse_tensor_modes(get_array(*j, path, "tt_modes"), path + ".tt_modes", dim);
  c.project = get_bool(*j, path, "project", false);
  c.cosmological_constant = get_double(*j, path, "cosmological_constant", 0.0);
  return c;
}

}  // namespace

RunConfig parse_config(const Json& j) {
  check_keys(j, "config", {"grid", "metric", "solver", "seed", "random", "tensor",
                           "constraints", "verify", "output"});
  RunConfig c;
  if (!j.contains("grid")) fail("config", "missing \"grid\"");
  c.grid = parse_grid(j.at("grid"));
  const int dim = c.grid.dimension;
  c.metric = parse_metric(j.contains("metric") ? &j.at("metric") : nullptr, c.grid);
  c.solver = parse_solver(j.contains("solver") ? &j.at("solver") : nullptr);
  c.seed = get_seed(j, "", "seed", 1);

  if (j.contains("random")) {
    const Json& r = j.at("random");
    check_keys(r, "random", {"max_mode", "amplitude"});
    c.random.max_mode = static_cast<int>(get_int(r, "random", "max_mode", 2, 1, 1 << 20));
    c.random.amplitude = get_double(r, "random", "amplitude", 1.0);
    if (!(c.random.amplitude > 0.0)) fail("random.amplitude", "must be positive");
  }
  check_max_mode(c.random.max_mode, c.grid, "random");

  c.tensor = parse_tensor(j.contains("tensor") ? &j.at("tensor") : nullptr, dim);
  c.constraints =
      parse_constraints(j.contains("constraints") ? &j.at("constraints") : nullptr, dim);

  if (j.contains("verify")) {
    const Json& v = j.at("verify");
    check_keys(v, "verify", {"pairs"});
    c.verify_pairs = static_cast<int>(get_int(v, "verify", "pairs", 20, 1, 1000));
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    check_keys(o, "output", {"report", "dump"});
    c.report_path = get_string(o, "output", "report", "");
    c.dump_dir = get_string(o, "output", "dump", "");
  }
  c.source = j;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

std::string to_string(TensorSource::Kind k) {
  switch (k) {
    case TensorSource::Kind::Ricci: return "ricci";
    case TensorSource::Kind::Random: return "random";
    case TensorSource::Kind::Modes: return "modes";
    case TensorSource::Kind::STheta: return "s_theta";
  }
  return "?";
}

std::string to_string(ConstraintsSpec::Kind k) {
  return k == ConstraintsSpec::Kind::Cmc ? "cmc" : "general";
}

}  // namespace ahlfors::cli
