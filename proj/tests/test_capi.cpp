#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>
#include <thread>

#include "thinfilm_gl.h"

namespace {

struct ConfigPtr {
  tfgl_config* p = nullptr;
  ~ConfigPtr() { tfgl_config_free(p); }
};

std::string out_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / (std::string("tfgl_capi_") + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string config_text(const tfgl_config* cfg) {
  size_t needed = 0;
  REQUIRE(tfgl_config_to_toml(cfg, nullptr, 0, &needed) == TFGL_OK);
  std::string buf(needed, '\0');
  REQUIRE(tfgl_config_to_toml(cfg, buf.data(), buf.size(), &needed) == TFGL_OK);
  buf.resize(needed - 1);
  return buf;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(tfgl_version()).size() > 0);
  CHECK(std::string(tfgl_status_name(TFGL_OK)) == "ok");
  CHECK(std::string(tfgl_status_name(TFGL_PARSE_ERROR)) == "parse-error");
  CHECK(std::string(tfgl_status_name(TFGL_INVALID_CONFIG)) == "invalid-config");
  CHECK(std::string(tfgl_status_name(static_cast<tfgl_status>(42))) == "unknown");
}

TEST_CASE("config handles report errors through status and last_error") {
  ConfigPtr cfg;
  CHECK(tfgl_config_parse("[field]\nlambda = \n", &cfg.p) == TFGL_PARSE_ERROR);
  CHECK(cfg.p == nullptr);
  CHECK(std::string(tfgl_last_error()).find(":2:") != std::string::npos);

  CHECK(tfgl_config_parse("fild.lambda = 1\n", &cfg.p) == TFGL_INVALID_CONFIG);
  CHECK(std::string(tfgl_last_error()).find("fild.lambda") != std::string::npos);

  CHECK(tfgl_config_preset("example3", &cfg.p) == TFGL_INVALID_CONFIG);
  CHECK(tfgl_config_load("/nonexistent/c.toml", &cfg.p) == TFGL_IO_ERROR);
  CHECK(tfgl_config_default(nullptr) == TFGL_INVALID_ARGUMENT);

  REQUIRE(tfgl_config_default(&cfg.p) == TFGL_OK);
  CHECK(tfgl_config_set(cfg.p, "domain.n", "33") == TFGL_OK);
  CHECK(config_text(cfg.p).find("n = 33") != std::string::npos);
  CHECK(tfgl_config_set(cfg.p, "domain.m", "33") == TFGL_INVALID_CONFIG);
  CHECK(tfgl_config_set(cfg.p, "domain.n", "\"many\"") == TFGL_INVALID_CONFIG);
  // A failed set leaves the handle unchanged.
  CHECK(config_text(cfg.p).find("n = 33") != std::string::npos);
}

TEST_CASE("to_toml reports the needed size and truncates") {
  ConfigPtr cfg;
  REQUIRE(tfgl_config_preset("vertical-disk", &cfg.p) == TFGL_OK);
  const std::string full = config_text(cfg.p);
  char small[8];
  size_t needed = 0;
  CHECK(tfgl_config_to_toml(cfg.p, small, sizeof small, &needed) == TFGL_OK);
  CHECK(needed == full.size() + 1);
  CHECK(std::string(small) == full.substr(0, 7));

  ConfigPtr back;
  REQUIRE(tfgl_config_parse(full.c_str(), &back.p) == TFGL_OK);
  CHECK(config_text(back.p) == full);
}

TEST_CASE("last_error is per thread") {
  ConfigPtr cfg;
  CHECK(tfgl_config_parse("x = = 1\n", &cfg.p) == TFGL_PARSE_ERROR);
  const std::string mine = tfgl_last_error();
  std::string theirs = "unset";
  std::thread t([&] { theirs = tfgl_last_error(); });
  t.join();
  CHECK(theirs.empty());
  CHECK(std::string(tfgl_last_error()) == mine);
}

TEST_CASE("xi handle exposes nodes, Lambda and H_c1") {
  ConfigPtr cfg;
  REQUIRE(tfgl_config_preset("vertical-disk", &cfg.p) == TFGL_OK);
  REQUIRE(tfgl_config_set(cfg.p, "domain.n", "65") == TFGL_OK);
  tfgl_xi* xi = nullptr;
  REQUIRE(tfgl_xi_solve(cfg.p, &xi) == TFGL_OK);
  CHECK(tfgl_xi_num_nodes(xi) == 65u * 65u);
  CHECK(tfgl_xi_max_abs(xi) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(tfgl_xi_hc1(xi) == doctest::Approx(2.0 * std::log(20.0)).epsilon(1e-9));

  double x1, x2, v;
  int interior;
  const size_t centre = 32 * 65 + 32;
  REQUIRE(tfgl_xi_node(xi, centre, &x1, &x2, &v, &interior) == TFGL_OK);
  CHECK(interior == 1);
  CHECK(std::abs(x1) < 1e-15);
  CHECK(v == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(tfgl_xi_node(xi, 0, &x1, &x2, &v, &interior) == TFGL_OK);
  CHECK(interior == 0);
  CHECK(v == 0.0);
  CHECK(tfgl_xi_node(xi, 65 * 65, &x1, &x2, &v, &interior) == TFGL_INVALID_ARGUMENT);

  REQUIRE(tfgl_xi_lambda_count(xi) == 1);
  int sign = 0;
  CHECK(tfgl_xi_lambda_point(xi, 0, &x1, &x2, &sign) == TFGL_OK);
  CHECK(sign == 1);
  CHECK(std::hypot(x1, x2) < 1e-12);
  CHECK(tfgl_xi_lambda_point(xi, 1, &x1, &x2, &sign) == TFGL_INVALID_ARGUMENT);
  tfgl_xi_free(xi);
}

TEST_CASE("commands return results and verdicts") {
  ConfigPtr cfg;
  REQUIRE(tfgl_config_preset("supercritical-normal", &cfg.p) == TFGL_OK);
  const std::string dir = out_dir("preset");
  tfgl_result* res = nullptr;
  REQUIRE(tfgl_run_preset(cfg.p, dir.c_str(), &res) == TFGL_OK);
  CHECK(tfgl_result_passed(res) == 1);
  CHECK(std::string(tfgl_result_json(res)).find("\"PASS\"") != std::string::npos);
  tfgl_result_free(res);

  res = nullptr;
  REQUIRE(tfgl_read_report(dir.c_str(), &res) == TFGL_OK);
  CHECK(tfgl_result_passed(res) == 1);
  tfgl_result_free(res);

  res = nullptr;
  CHECK(tfgl_read_report(out_dir("missing").c_str(), &res) == TFGL_IO_ERROR);
  CHECK(res == nullptr);

  CHECK(tfgl_run_gamma_check(cfg.p, "hyper", dir.c_str(), &res) == TFGL_INVALID_CONFIG);
  CHECK(tfgl_result_passed(nullptr) == 0);
  tfgl_result_free(nullptr);
  std::filesystem::remove_all(dir);
}

TEST_CASE("invalid thickness surfaces as its own status") {
  ConfigPtr cfg;
  REQUIRE(tfgl_config_parse("[domain]\nn = 17\n[thickness]\ng = \"f - 1\"\n", &cfg.p) ==
          TFGL_OK);
  tfgl_xi* xi = nullptr;
  CHECK(tfgl_xi_solve(cfg.p, &xi) == TFGL_INVALID_THICKNESS);
  CHECK(xi == nullptr);
}

TEST_CASE("green function through the C layer") {
  double g = 0.0;
  CHECK(tfgl_green_disk(0.3, 0.0, -0.2, 0.1, &g) == TFGL_OK);
  double g2 = 0.0;
  CHECK(tfgl_green_disk(-0.2, 0.1, 0.3, 0.0, &g2) == TFGL_OK);
  CHECK(g == doctest::Approx(g2).epsilon(1e-14));
  CHECK(tfgl_green_disk(0.3, 0.0, 0.3, 0.0, &g) == TFGL_SINGULAR_EVALUATION);
  CHECK(tfgl_green_disk(1.3, 0.0, 0.3, 0.0, &g) == TFGL_OUT_OF_DOMAIN);
}
