#pragma once
// Run configuration for the command-line front end. Parsing is strict:
// unknown keys, wrong types and out-of-range values raise ConfigError.
// Tensor and one-form indices are 1-based in the JSON, as in x1, x2, x3.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ahlfors/decomp.hpp"
#include "ahlfors/errors.hpp"
#include "json.hpp"

namespace ahlfors::cli {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// theta_a += amplitude * cos(k.x + phase)
struct OneFormMode {
  int a = 0;
  double amplitude = 0.0;
  std::vector<int> wavevector;
  double phase = 0.0;
};

struct RandomSpec {
  int max_mode = 2;
  double amplitude = 1.0;
};

struct TensorSource {
  enum class Kind { Ricci, Random, Modes, STheta };
  Kind kind = Kind::Ricci;
  std::vector<TensorMode> modes;         // Modes: trace-free part is used
  std::vector<OneFormMode> theta_modes;  // STheta: input is S theta-hat
};

struct ConstraintsSpec {
  enum class Kind { General, Cmc };
  Kind kind = Kind::General;
  // General: K = modes + trace * g (+ a random field when random is set).
  std::vector<TensorMode> k_modes;
  double trace = 0.0;
  bool random = false;
  // Cmc: K = (H0/n) g + phi, phi from tt_modes (TT-projected if project).
  double h0 = 0.0;
  std::vector<TensorMode> tt_modes;
  bool project = false;
  double cosmological_constant = 0.0;
};

struct RunConfig {
  GridSpec grid;
  MetricSpec metric;
  SolverConfig solver;
  std::uint64_t seed = 1;
  RandomSpec random;
  TensorSource tensor;
  ConstraintsSpec constraints;
  int verify_pairs = 20;
  std::string report_path;  // empty: standard output
  std::string dump_dir;     // empty: no dumps
  nlohmann::ordered_json source;  // normalized echo of the input
};

RunConfig parse_config(const nlohmann::ordered_json& j);
RunConfig load_config(const std::filesystem::path& path);

std::string to_string(TensorSource::Kind k);
std::string to_string(ConstraintsSpec::Kind k);

}  // namespace ahlfors::cli
