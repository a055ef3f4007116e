#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "thinfilm_gl/config.hpp"
#include "thinfilm_gl/equilibrium.hpp"
#include "thinfilm_gl/gamma3d.hpp"
#include "thinfilm_gl/vortex.hpp"

namespace tfgl {

inline constexpr int kSchemaVersion = 1;
const char* library_version();

// Worker count from THINFILM_GL_THREADS (default: hardware concurrency).
unsigned thread_budget();
// Runs fn(0..count-1) on up to thread_budget() threads; every index writes
// its own slot, so results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

struct Problem {
  Grid2D grid;
  ThicknessProfile thick;
  EffectivePotential pot;
};

// The critical law uses the oblique potential, the others the
// perpendicular one.
Problem build_problem(const ExperimentConfig& cfg);

struct XiReport {
  XiField xi;
  LambdaSet lambda;
  double max_abs = 0.0;
  double hc1 = 0.0;
};

XiReport run_xi(const Problem& p, const ExperimentConfig& cfg);
// lambda_over_hc1 * H_c1 when set, otherwise field.lambda.
double effective_lambda(const ExperimentConfig& cfg, const XiReport& xi);

// Coulomb-gauge start with one phase vortex of the predicted sign placed at
// each Lambda point, jittered by up to 0.2 from a seed-derived stream.
OrderParameterField lambda_seeded_start(const GLModel& model, const std::vector<double>& theta,
                                        const LambdaSet& lambda, std::uint64_t seed);

struct RunResult {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  MinimizeResult min;
  VortexSet vortices;
  MatchReport match;
  std::string start;           // start that produced `min`
  double coulomb_energy = 0.0;  // NaN when that start was not run
  double seeded_energy = 0.0;
};

RunResult run_minimize(const Problem& p, const ExperimentConfig& cfg, const XiReport& xi,
                       double lambda, std::uint64_t seed);

struct NucleationRow {
  double factor = 0.0;
  double lambda = 0.0;
  std::vector<RunResult> runs;
  int matched = 0;       // seeds with every Lambda point matched
  int vortex_free = 0;   // seeds with no vortex at all
};

std::vector<NucleationRow> run_nucleation(const Problem& p, const ExperimentConfig& cfg,
                                          const XiReport& xi);

// Smooth non-constant (v, b) used by the recovery checks.
void smooth_payload(const Grid2D& grid, std::vector<cplx>& v, std::vector<cplx>& b);

struct GammaCheck {
  ConvergenceStudy study;
  bool pass = false;
};

GammaCheck run_gamma_check(const Problem& p, const ExperimentConfig& cfg, Regime regime);

// "circle:r=R[,cx=X][,cy=Y]".
Curve parse_curve(const std::string& spec, int cells);

struct EquilibriumReport {
  MeasureResult result;
  double uniform_energy = 0.0;
  double max_uniform_deviation = 0.0;  // max |w N - 1|
};

EquilibriumReport run_equilibrium(const Curve& curve, const ExperimentConfig& cfg);

// Report writers. Every JSON file carries schema_version, library_version
// and the exact configuration.
Json report_header(const ExperimentConfig& cfg);
void write_report_json(const std::string& dir, const std::string& name,
                       const ExperimentConfig& cfg, const Json& payload);
void write_config_echo(const std::string& dir, const ExperimentConfig& cfg);
void write_xi_outputs(const std::string& dir, const ExperimentConfig& cfg, const Problem& p,
                      const XiReport& xi);
void write_run_outputs(const std::string& dir, const ExperimentConfig& cfg, const Problem& p,
                       const RunResult& r);
void write_gamma_outputs(const std::string& dir, const ExperimentConfig& cfg,
                         const GammaCheck& g);
void write_equilibrium_outputs(const std::string& dir, const ExperimentConfig& cfg,
                               const Curve& curve, const EquilibriumReport& e);

struct Check {
  std::string name;
  double value = 0.0;
  std::string threshold;
  bool pass = false;
};

struct PresetReport {
  std::string name;
  std::vector<Check> checks;
  bool pass = false;
};

// Full pipeline for cfg.preset, writing every artefact plus summary.json
// into `dir`. Stage failures are rethrown with the stage name prefixed.
PresetReport run_preset(const ExperimentConfig& cfg, const std::string& dir);

// Command entry points shared by the C API and the CLI. Each writes its
// artefacts into `dir` and returns a summary plus an overall verdict.
struct CommandResult {
  Json summary;
  bool pass = false;
};

CommandResult command_solve_xi(const ExperimentConfig& cfg, const std::string& dir);
CommandResult command_minimize(const ExperimentConfig& cfg, std::uint64_t seed,
                               const std::string& dir);
CommandResult command_gamma_check(const ExperimentConfig& cfg, const std::string& regime,
                                  const std::string& dir);
CommandResult command_equilibrium(const ExperimentConfig& cfg, const std::string& dir);
CommandResult command_preset(const ExperimentConfig& cfg, const std::string& dir);
// Reads summary.json or verdict.json back from a finished run.
CommandResult command_report(const std::string& dir);

Regime parse_regime(const std::string& name);

}  // namespace tfgl
