#include "thinfilm_gl.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "thinfilm_gl/error.hpp"
#include "thinfilm_gl/pipeline.hpp"

struct tfgl_config {
  tfgl::ExperimentConfig cfg;
};

struct tfgl_result {
  std::string json;
  bool pass = false;
};

struct tfgl_xi {
  tfgl::Problem problem;
  tfgl::XiReport report;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
tfgl_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return TFGL_OK;
  } catch (const tfgl::Error& e) {
    g_last_error = e.what();
    return static_cast<tfgl_status>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TFGL_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown exception";
    return TFGL_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  tfgl::require(p != nullptr, tfgl::ErrorCode::kInvalidArgument,
                std::string(what) + " must not be null");
}

tfgl_status make_result(tfgl_result** out, tfgl::CommandResult (*run)(const tfgl::ExperimentConfig&, const std::string&),
                        const tfgl_config* cfg, const char* dir) {
  return guarded([&] {
    need(cfg, "cfg");
    need(dir, "out_dir");
    need(out, "out");
    const tfgl::CommandResult r = run(cfg->cfg, dir);
    *out = new tfgl_result{r.summary.dump(2), r.pass};
  });
}

}  // namespace

extern "C" {

const char* tfgl_version(void) { return tfgl::library_version(); }

const char* tfgl_status_name(tfgl_status status) {
  if (status == TFGL_OK) return "ok";
  if (status == TFGL_INTERNAL_ERROR) return "internal-error";
  return tfgl::error_code_name(static_cast<tfgl::ErrorCode>(status));
}

const char* tfgl_last_error(void) { return g_last_error.c_str(); }

tfgl_status tfgl_config_default(tfgl_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new tfgl_config{};
  });
}

tfgl_status tfgl_config_preset(const char* name, tfgl_config** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new tfgl_config{tfgl::preset_config(name)};
  });
}

tfgl_status tfgl_config_load(const char* path, tfgl_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new tfgl_config{tfgl::load_config(path)};
  });
}

tfgl_status tfgl_config_parse(const char* text, tfgl_config** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new tfgl_config{tfgl::load_config_text(text)};
  });
}

tfgl_status tfgl_config_merge_file(tfgl_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "cfg");
    need(path, "path");
    std::ifstream in(path);
    tfgl::require(in.good(), tfgl::ErrorCode::kIoError, std::string("cannot open config ") + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    cfg->cfg = tfgl::apply_config(tfgl::parse_config_text(ss.str(), path), cfg->cfg);
  });
}

tfgl_status tfgl_config_set(tfgl_config* cfg, const char* key, const char* literal) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(literal, "literal");
    const std::string k = key;
    const auto dot = k.find('.');
    std::string text = dot == std::string::npos
                           ? k + " = " + literal
                           : "[" + k.substr(0, dot) + "]\n" + k.substr(dot + 1) + " = " + literal;
    cfg->cfg = tfgl::apply_config(tfgl::parse_config_text(text, "override"), cfg->cfg);
  });
}

tfgl_status tfgl_config_to_toml(const tfgl_config* cfg, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    need(cfg, "cfg");
    const std::string s = tfgl::config_to_toml(cfg->cfg);
    if (needed) *needed = s.size() + 1;
    if (buf && cap > 0) {
      const std::size_t n = std::min(cap - 1, s.size());
      std::memcpy(buf, s.data(), n);
      buf[n] = '\0';
    }
  });
}

void tfgl_config_free(tfgl_config* cfg) { delete cfg; }

tfgl_status tfgl_run_solve_xi(const tfgl_config* cfg, const char* out_dir, tfgl_result** out) {
  return make_result(out, tfgl::command_solve_xi, cfg, out_dir);
}

tfgl_status tfgl_run_minimize(const tfgl_config* cfg, uint64_t seed, const char* out_dir,
                              tfgl_result** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out_dir, "out_dir");
    need(out, "out");
    const tfgl::CommandResult r = tfgl::command_minimize(cfg->cfg, seed, out_dir);
    *out = new tfgl_result{r.summary.dump(2), r.pass};
  });
}

tfgl_status tfgl_run_gamma_check(const tfgl_config* cfg, const char* regime, const char* out_dir,
                                 tfgl_result** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(regime, "regime");
    need(out_dir, "out_dir");
    need(out, "out");
    const tfgl::CommandResult r = tfgl::command_gamma_check(cfg->cfg, regime, out_dir);
    *out = new tfgl_result{r.summary.dump(2), r.pass};
  });
}

tfgl_status tfgl_run_equilibrium(const tfgl_config* cfg, const char* out_dir, tfgl_result** out) {
  return make_result(out, tfgl::command_equilibrium, cfg, out_dir);
}

tfgl_status tfgl_run_preset(const tfgl_config* cfg, const char* out_dir, tfgl_result** out) {
  return make_result(out, tfgl::command_preset, cfg, out_dir);
}

tfgl_status tfgl_read_report(const char* dir, tfgl_result** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    const tfgl::CommandResult r = tfgl::command_report(dir);
    *out = new tfgl_result{r.summary.dump(2), r.pass};
  });
}

int tfgl_result_passed(const tfgl_result* res) { return res && res->pass ? 1 : 0; }

const char* tfgl_result_json(const tfgl_result* res) { return res ? res->json.c_str() : ""; }

void tfgl_result_free(tfgl_result* res) { delete res; }

tfgl_status tfgl_xi_solve(const tfgl_config* cfg, tfgl_xi** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    cfg->cfg.validate();
    tfgl::Problem p = tfgl::build_problem(cfg->cfg);
    tfgl::XiReport r = tfgl::run_xi(p, cfg->cfg);
    *out = new tfgl_xi{std::move(p), std::move(r)};
  });
}

size_t tfgl_xi_num_nodes(const tfgl_xi* xi) { return xi ? xi->problem.grid.num_nodes() : 0; }

tfgl_status tfgl_xi_node(const tfgl_xi* xi, size_t node, double* x1, double* x2, double* value,
                         int* interior) {
  return guarded([&] {
    need(xi, "xi");
    tfgl::require(node < xi->problem.grid.num_nodes(), tfgl::ErrorCode::kInvalidArgument,
                  "node index out of range");
    const tfgl::Vec2 p = xi->problem.grid.position(node);
    if (x1) *x1 = p.x;
    if (x2) *x2 = p.y;
    if (value) *value = xi->report.xi.xi0[node];
    if (interior) *interior = xi->problem.grid.interior(node) ? 1 : 0;
  });
}

double tfgl_xi_hc1(const tfgl_xi* xi) { return xi ? xi->report.hc1 : 0.0; }

double tfgl_xi_max_abs(const tfgl_xi* xi) { return xi ? xi->report.max_abs : 0.0; }

size_t tfgl_xi_lambda_count(const tfgl_xi* xi) { return xi ? xi->report.lambda.points.size() : 0; }

tfgl_status tfgl_xi_lambda_point(const tfgl_xi* xi, size_t k, double* x1, double* x2,
                                 int* degree_sign) {
  return guarded([&] {
    need(xi, "xi");
    tfgl::require(k < xi->report.lambda.points.size(), tfgl::ErrorCode::kInvalidArgument,
                  "lambda point index out of range");
    const tfgl::LambdaPoint& lp = xi->report.lambda.points[k];
    if (x1) *x1 = lp.position.x;
    if (x2) *x2 = lp.position.y;
    if (degree_sign) *degree_sign = lp.degree_sign;
  });
}

void tfgl_xi_free(tfgl_xi* xi) { delete xi; }

tfgl_status tfgl_green_disk(double x1, double x2, double y1, double y2, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = tfgl::green_disk({x1, x2}, {y1, y2});
  });
}

}  // extern "C"
