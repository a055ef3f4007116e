// thinfilm-gl: command-line driver over the C API.
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thinfilm_gl.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

int exit_code_for(tfgl_status s) {
  switch (s) {
    case TFGL_OK: return kExitPass;
    case TFGL_PARSE_ERROR:
    case TFGL_INVALID_CONFIG:
    case TFGL_INVALID_THICKNESS:
    case TFGL_IO_ERROR:
      return kExitConfig;
    default: return kExitNumerical;
  }
}

int report_error(tfgl_status s) {
  std::fprintf(stderr, "thinfilm-gl: %s: %s\n", tfgl_status_name(s), tfgl_last_error());
  return exit_code_for(s);
}

struct Common {
  std::string config;
  std::string out = "out";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c, bool with_config = true) {
  if (with_config) cmd->add_option("--config", c.config, "configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--set", c.overrides, "override a config key, e.g. --set domain.n=65");
}

// Owns the config handle for the lifetime of a command.
class Config {
 public:
  ~Config() { tfgl_config_free(cfg_); }
  tfgl_status init(const std::string& preset, const Common& c) {
    tfgl_status s = preset.empty() ? tfgl_config_default(&cfg_) : tfgl_config_preset(preset.c_str(), &cfg_);
    if (s != TFGL_OK) return s;
    if (!c.config.empty() && (s = tfgl_config_merge_file(cfg_, c.config.c_str())) != TFGL_OK) return s;
    for (const std::string& kv : c.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "thinfilm-gl: --set expects key=value, got '%s'\n", kv.c_str());
        return TFGL_INVALID_CONFIG;
      }
      s = tfgl_config_set(cfg_, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
      if (s != TFGL_OK) return s;
    }
    return TFGL_OK;
  }
  tfgl_status set(const std::string& key, const std::string& literal) {
    return tfgl_config_set(cfg_, key.c_str(), literal.c_str());
  }
  const tfgl_config* get() const { return cfg_; }

 private:
  tfgl_config* cfg_ = nullptr;
};

// Takes the slot, not the pointer: the command fills it in as the first
// argument is evaluated.
int finish(tfgl_status s, tfgl_result** slot) {
  if (s != TFGL_OK) return report_error(s);
  tfgl_result* res = *slot;
  std::printf("%s\n", tfgl_result_json(res));
  const int code = tfgl_result_passed(res) ? kExitPass : kExitNumerical;
  tfgl_result_free(res);
  return code;
}

std::string toml_string(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thin-film Ginzburg-Landau limit functionals"};
  app.set_version_flag("--version", std::string(tfgl_version()));
  app.require_subcommand(1);

  Common xi_opts;
  auto* xi_cmd = app.add_subcommand("solve-xi", "solve the auxiliary Dirichlet problem, Lambda and H_c1");
  add_common(xi_cmd, xi_opts);

  Common min_opts;
  std::uint64_t seed = 0;
  auto* min_cmd = app.add_subcommand("minimize", "minimize the reduced 2D energy and detect vortices");
  add_common(min_cmd, min_opts);
  min_cmd->add_option("--seed", seed, "random seed for the initial state");

  Common gamma_opts;
  std::string regime = "critical";
  auto* gamma_cmd = app.add_subcommand("gamma-check", "recovery-sequence convergence study");
  add_common(gamma_cmd, gamma_opts);
  gamma_cmd->add_option("--regime", regime, "critical, sub-finite, sub-infinite or super")
      ->check(CLI::IsMember({"critical", "sub-finite", "sub-infinite", "super"}));

  Common eq_opts;
  std::string curve;
  int cells = 0;
  auto* eq_cmd = app.add_subcommand("equilibrium", "equilibrium measure on a curve");
  add_common(eq_cmd, eq_opts);
  eq_cmd->add_option("--curve", curve, "curve spec, e.g. circle:r=0.5774");
  eq_cmd->add_option("--cells", cells, "number of arc cells")->check(CLI::PositiveNumber);

  Common preset_opts;
  std::string preset;
  std::vector<std::uint64_t> seeds;
  auto* preset_cmd = app.add_subcommand("preset", "run a named example end to end");
  add_common(preset_cmd, preset_opts);
  preset_cmd->add_option("name", preset, "preset name")->required();
  preset_cmd->add_option("--seeds", seeds, "seed list")->delimiter(',');

  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "print the verdict of a finished run");
  report_cmd->add_option("dir", report_dir, "output directory of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  tfgl_result* res = nullptr;
  Config cfg;
  tfgl_status s = TFGL_OK;

  if (*xi_cmd) {
    if ((s = cfg.init("", xi_opts)) != TFGL_OK) return report_error(s);
    return finish(tfgl_run_solve_xi(cfg.get(), xi_opts.out.c_str(), &res), &res);
  }
  if (*min_cmd) {
    if ((s = cfg.init("", min_opts)) != TFGL_OK) return report_error(s);
    return finish(tfgl_run_minimize(cfg.get(), seed, min_opts.out.c_str(), &res), &res);
  }
  if (*gamma_cmd) {
    if ((s = cfg.init("", gamma_opts)) != TFGL_OK) return report_error(s);
    return finish(tfgl_run_gamma_check(cfg.get(), regime.c_str(), gamma_opts.out.c_str(), &res), &res);
  }
  if (*eq_cmd) {
    if ((s = cfg.init("", eq_opts)) != TFGL_OK) return report_error(s);
    if (!curve.empty() && (s = cfg.set("equilibrium.curve", toml_string(curve))) != TFGL_OK) return report_error(s);
    if (cells > 0 && (s = cfg.set("equilibrium.cells", std::to_string(cells))) != TFGL_OK) return report_error(s);
    return finish(tfgl_run_equilibrium(cfg.get(), eq_opts.out.c_str(), &res), &res);
  }
  if (*preset_cmd) {
    if ((s = cfg.init(preset, preset_opts)) != TFGL_OK) return report_error(s);
    if (!seeds.empty()) {
      std::string list = "[";
      for (std::size_t k = 0; k < seeds.size(); ++k) list += (k ? ", " : "") + std::to_string(seeds[k]);
      if ((s = cfg.set("run.seeds", list + "]")) != TFGL_OK) return report_error(s);
    }
    return finish(tfgl_run_preset(cfg.get(), preset_opts.out.c_str(), &res), &res);
  }
  if (*report_cmd) return finish(tfgl_read_report(report_dir.c_str(), &res), &res);
  return kExitConfig;
}
