#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "thinfilm_gl/field_model.hpp"
#include "thinfilm_gl/gl2d.hpp"
#include "thinfilm_gl/io.hpp"

namespace tfgl {

// A small TOML subset: [table] headers, key = value with optional dotted
// keys, '#' comments, and values that are numbers, booleans, basic strings
// or single-line arrays of numbers or strings.
struct ConfigValue {
  std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>> data;
  int line = 0;
  bool integer = false;  // written without fraction or exponent
};

// Flat map from "table.key" to value, in file order of first appearance.
using ConfigTable = std::map<std::string, ConfigValue>;

// Throws Error(kParseError) naming the line.
ConfigTable parse_config_text(const std::string& text, const std::string& source = "<config>");

struct ExperimentConfig {
  std::string preset;  // optional; supplies the defaults below when set

  // [domain]
  double radius = 1.0;
  int n = 101;

  // [thickness]
  std::string f = "0";
  std::string g = "1";

  // [field]; lambda_over_hc1 > 0 overrides lambda with a multiple of H_c1
  double lambda = 0.0;
  double lambda_over_hc1 = 0.0;
  Vec3 alpha{0.0, 0.0, 1.0};
  double kappa = 20.0;

  // [regime]
  std::string law = "critical";
  double coefficient = 1.0;
  double exponent = 1.0;

  // [xi]
  double xi_tol = 1e-10;
  int xi_max_iters = 100000;
  std::string xi_rhs = "auto";
  double cluster_radius = 0.0;  // 0 selects 4h
  double lambda_rel_tol = 1e-2;

  // [minimize]
  int max_iters = 20000;
  double grad_tol = 1e-8;
  int restart_every = 200;
  std::string gamma_mode = "one";
  std::string start = "lowest-energy";  // coulomb | lambda-seeded | lowest-energy
  std::vector<std::uint64_t> seeds{0};

  // [nucleation]; the factors are a calibration knob, not a derived value
  std::vector<double> nucleation_factors{1.08, 0.8};
  double match_radius = 0.15;
  int min_matched_seeds = 8;
  int min_vortex_free_seeds = 9;

  // [gamma]
  std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
  int nz = 8;
  double order_threshold = 0.9;

  // [equilibrium]
  std::string curve = "circle:r=0.57735026918962584";
  int cells = 256;
  double measure_tol = 1e-9;
  int measure_max_iters = 200000;

  // [output]
  std::string out_dir = "out";

  RegimeSpec regime_spec() const;
  GammaMode gamma_kind() const;
  void validate() const;
};

// Defaults for a named preset; throws kInvalidConfig for unknown names.
ExperimentConfig preset_config(const std::string& name);
const std::vector<std::string>& preset_names();

// Applies the table on top of `base`; unknown keys and type mismatches throw
// Error(kInvalidConfig) naming the key and line.
ExperimentConfig apply_config(const ConfigTable& table, ExperimentConfig base = {});
ExperimentConfig load_config_text(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

// Canonical TOML echo (17 significant digits) that reloads to an equal config.
std::string config_to_toml(const ExperimentConfig& cfg);
Json config_to_json(const ExperimentConfig& cfg);

}  // namespace tfgl
