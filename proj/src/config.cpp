#include "thinfilm_gl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "thinfilm_gl/error.hpp"

namespace tfgl {

namespace {

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& msg) {
  fail(ErrorCode::kParseError, source + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }) && k.front() != '.' && k.back() != '.' && k.find("..") == std::string::npos;
}

// Cuts a trailing comment, ignoring '#' inside strings.
std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_str && c == '\\') {
      ++i;
      continue;
    }
    if (c == '"') in_str = !in_str;
    if (c == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

class ValueParser {
 public:
  ValueParser(std::string_view s, const std::string& source, int line)
      : s_(s), source_(source), line_(line) {}

  ConfigValue parse() {
    ConfigValue v;
    v.line = line_;
    skip();
    if (peek() == '[') {
      ++pos_;
      std::vector<double> nums;
      std::vector<std::string> strs;
      skip();
      while (peek() != ']') {
        if (peek() == '"') {
          if (!nums.empty()) error("arrays must not mix strings and numbers");
          strs.push_back(string());
        } else {
          if (!strs.empty()) error("arrays must not mix strings and numbers");
          bool integer = false;
          nums.push_back(number(integer));
        }
        skip();
        if (peek() == ',') {
          ++pos_;
          skip();
        } else if (peek() != ']') {
          error("expected ',' or ']' in array");
        }
      }
      ++pos_;
      if (!strs.empty()) v.data = std::move(strs);
      else v.data = std::move(nums);
    } else if (peek() == '"') {
      v.data = string();
    } else if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      v.data = true;
    } else if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      v.data = false;
    } else {
      v.data = number(v.integer);
    }
    skip();
    if (pos_ != s_.size()) error("unexpected trailing characters");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const { parse_fail(source_, line_, msg); }
  char peek() const {
    if (pos_ >= s_.size()) error("unexpected end of value");
    return s_[pos_];
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  std::string string() {
    ++pos_;
    std::string out;
    while (true) {
      const char c = peek();
      ++pos_;
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = peek();
      ++pos_;
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: error(std::string("unsupported escape '\\") + e + "'");
      }
    }
  }
  double number(bool& integer) {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '.' ||
                                s_[pos_] == '_'))
      ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    tok.erase(std::remove(tok.begin(), tok.end(), '_'), tok.end());
    if (tok.empty()) error("expected a value");
    const bool ok_chars = std::all_of(tok.begin(), tok.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
             c == 'e' || c == 'E';
    });
    std::size_t used = 0;
    double v = 0.0;
    try {
      if (ok_chars) v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (!ok_chars || used != tok.size() || !std::isfinite(v))
      error("malformed value '" + tok + "'");
    integer = tok.find_first_of(".eE") == std::string::npos;
    return v;
  }

  std::string_view s_;
  const std::string& source_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

ConfigTable parse_config_text(const std::string& text, const std::string& source) {
  ConfigTable out;
  std::istringstream in(text);
  std::string raw, table;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(source, line_no, "unterminated table header");
      table = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!valid_key(table) || table.find('.') != std::string::npos)
        parse_fail(source, line_no, "invalid table name '" + table + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) parse_fail(source, line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (!valid_key(key)) parse_fail(source, line_no, "invalid key '" + key + "'");
    const std::string full = table.empty() ? key : table + "." + key;
    if (out.count(full)) parse_fail(source, line_no, "duplicate key '" + full + "'");
    out[full] = ValueParser(std::string_view(line).substr(eq + 1), source, line_no).parse();
  }
  return out;
}

RegimeSpec ExperimentConfig::regime_spec() const {
  RegimeSpec s{parse_rho_law(law), coefficient, law == "critical" ? 1.0 : exponent};
  if (s.law == RhoLaw::kConstant) s.exponent = 0.0;
  s.validate();
  return s;
}

GammaMode ExperimentConfig::gamma_kind() const {
  if (gamma_mode == "one") return GammaMode::kOne;
  if (gamma_mode == "critical") return GammaMode::kCritical;
  fail(ErrorCode::kInvalidConfig, "minimize.gamma_mode must be 'one' or 'critical'");
}

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    require(ok, ErrorCode::kInvalidConfig, msg);
  };
  check(radius > 0.0, "domain.radius must be positive");
  check(n >= 5, "domain.n must be at least 5");
  check(lambda >= 0.0, "field.lambda must be >= 0");
  check(lambda_over_hc1 >= 0.0, "field.lambda_over_hc1 must be >= 0");
  check(kappa > 0.0, "field.kappa must be positive");
  const double an = std::sqrt(alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2]);
  check(std::abs(an - 1.0) <= 1e-12, "field.alpha must be a unit vector");
  regime_spec();
  gamma_kind();
  check(xi_tol > 0.0 && xi_max_iters > 0, "xi.tol and xi.max_iters must be positive");
  check(xi_rhs == "auto" || xi_rhs == "analytic" || xi_rhs == "discrete",
        "xi.rhs must be auto, analytic or discrete");
  check(cluster_radius >= 0.0, "xi.cluster_radius must be >= 0");
  check(lambda_rel_tol > 0.0 && lambda_rel_tol < 1.0, "xi.lambda_rel_tol must lie in (0, 1)");
  check(max_iters > 0 && grad_tol > 0.0 && restart_every > 0,
        "minimize.max_iters, grad_tol and restart_every must be positive");
  check(start == "coulomb" || start == "lambda-seeded" || start == "lowest-energy",
        "minimize.start must be coulomb, lambda-seeded or lowest-energy");
  check(!seeds.empty(), "run.seeds must not be empty");
  check(!nucleation_factors.empty(), "nucleation.factors must not be empty");
  check(match_radius > 0.0, "nucleation.match_radius must be positive");
  check(eps_ladder.size() >= 3, "gamma.eps_ladder needs at least three entries");
  for (std::size_t k = 1; k < eps_ladder.size(); ++k)
    check(eps_ladder[k] < eps_ladder[k - 1] && eps_ladder[k] > 0.0,
          "gamma.eps_ladder must be strictly decreasing and positive");
  check(nz >= 2, "gamma.nz must be at least 2");
  check(cells >= 1, "equilibrium.cells must be positive");
  check(measure_tol > 0.0 && measure_max_iters > 0,
        "equilibrium.tol and max_iters must be positive");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"example1-tilted-paraboloid",
                                              "example2-circle-concentration",
                                              "vertical-disk", "supercritical-normal"};
  return names;
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  if (name == "example1-tilted-paraboloid") {
    c.f = "paraboloid";
    c.g = "f + 1";
    c.alpha = {1.0, 0.0, 0.0};
    c.kappa = 20.0;
    c.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  } else if (name == "example2-circle-concentration") {
    c.f = "circle-concentration";
    c.g = "f + 1";
    c.alpha = {1.0, 0.0, 0.0};
    c.n = 257;
  } else if (name == "vertical-disk") {
    c.alpha = {0.0, 0.0, 1.0};
    c.n = 129;
  } else if (name == "supercritical-normal") {
    c.f = "paraboloid";
    c.g = "f + 1";
    c.alpha = {0.6, 0.0, 0.8};
    c.lambda = 2.0;
    c.kappa = 2.0;
    c.n = 33;
    c.law = "supercritical";
    c.coefficient = 1.0;
    c.exponent = 2.0;
  } else {
    std::string all;
    for (const auto& p : preset_names()) all += (all.empty() ? "" : ", ") + p;
    fail(ErrorCode::kInvalidConfig, "unknown preset '" + name + "' (" + all + ")");
  }
  return c;
}

namespace {

class Reader {
 public:
  explicit Reader(const ConfigTable& t) : t_(t) {}

  void num(const char* key, double& dst) {
    if (const ConfigValue* v = find(key)) dst = as_number(*v, key);
  }
  void integer(const char* key, int& dst) {
    if (const ConfigValue* v = find(key)) {
      const double x = as_number(*v, key);
      if (!v->integer || std::abs(x) > 1e9) type_error(*v, key, "an integer");
      dst = static_cast<int>(x);
    }
  }
  void str(const char* key, std::string& dst) {
    if (const ConfigValue* v = find(key)) {
      if (!std::holds_alternative<std::string>(v->data)) type_error(*v, key, "a string");
      dst = std::get<std::string>(v->data);
    }
  }
  void nums(const char* key, std::vector<double>& dst) {
    if (const ConfigValue* v = find(key)) {
      if (!std::holds_alternative<std::vector<double>>(v->data))
        type_error(*v, key, "an array of numbers");
      dst = std::get<std::vector<double>>(v->data);
    }
  }
  void vec3(const char* key, Vec3& dst) {
    std::vector<double> a;
    nums(key, a);
    if (!a.empty() || find(key)) {
      if (a.size() != 3) type_error(*find(key), key, "an array of three numbers");
      dst = {a[0], a[1], a[2]};
    }
  }
  void seeds(const char* key, std::vector<std::uint64_t>& dst) {
    std::vector<double> a;
    const ConfigValue* v = find(key);
    if (!v) return;
    nums(key, a);
    dst.clear();
    for (double x : a) {
      if (x < 0.0 || x != std::floor(x) || x > 9007199254740992.0)
        type_error(*v, key, "an array of nonnegative integers");
      dst.push_back(static_cast<std::uint64_t>(x));
    }
  }

  void finish() const {
    for (const auto& [k, v] : t_)
      if (!used_.count(k))
        fail(ErrorCode::kInvalidConfig,
             "unknown key '" + k + "' at line " + std::to_string(v.line));
  }

 private:
  const ConfigValue* find(const char* key) {
    auto it = t_.find(key);
    if (it == t_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }
  [[noreturn]] static void type_error(const ConfigValue& v, const char* key, const char* want) {
    fail(ErrorCode::kInvalidConfig, std::string(key) + ": expected " + want + " at line " +
                                        std::to_string(v.line));
  }
  static double as_number(const ConfigValue& v, const char* key) {
    if (!std::holds_alternative<double>(v.data)) type_error(v, key, "a number");
    return std::get<double>(v.data);
  }

  const ConfigTable& t_;
  std::set<std::string> used_;
};

}  // namespace

ExperimentConfig apply_config(const ConfigTable& table, ExperimentConfig c) {
  Reader r(table);
  std::string preset;
  r.str("preset", preset);
  if (!preset.empty() && preset != c.preset) c = preset_config(preset);

  r.num("domain.radius", c.radius);
  r.integer("domain.n", c.n);
  r.str("thickness.f", c.f);
  r.str("thickness.g", c.g);
  r.num("field.lambda", c.lambda);
  r.num("field.lambda_over_hc1", c.lambda_over_hc1);
  r.vec3("field.alpha", c.alpha);
  r.num("field.kappa", c.kappa);
  r.str("regime.law", c.law);
  r.num("regime.coefficient", c.coefficient);
  r.num("regime.exponent", c.exponent);
  r.num("xi.tol", c.xi_tol);
  r.integer("xi.max_iters", c.xi_max_iters);
  r.str("xi.rhs", c.xi_rhs);
  r.num("xi.cluster_radius", c.cluster_radius);
  r.num("xi.lambda_rel_tol", c.lambda_rel_tol);
  r.integer("minimize.max_iters", c.max_iters);
  r.num("minimize.grad_tol", c.grad_tol);
  r.integer("minimize.restart_every", c.restart_every);
  r.str("minimize.gamma_mode", c.gamma_mode);
  r.str("minimize.start", c.start);
  r.seeds("run.seeds", c.seeds);
  r.nums("nucleation.factors", c.nucleation_factors);
  r.num("nucleation.match_radius", c.match_radius);
  r.integer("nucleation.min_matched_seeds", c.min_matched_seeds);
  r.integer("nucleation.min_vortex_free_seeds", c.min_vortex_free_seeds);
  r.nums("gamma.eps_ladder", c.eps_ladder);
  r.integer("gamma.nz", c.nz);
  r.num("gamma.order_threshold", c.order_threshold);
  r.str("equilibrium.curve", c.curve);
  r.integer("equilibrium.cells", c.cells);
  r.num("equilibrium.tol", c.measure_tol);
  r.integer("equilibrium.max_iters", c.measure_max_iters);
  r.str("output.dir", c.out_dir);
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config_text(const std::string& text, const std::string& source) {
  return apply_config(parse_config_text(text, source));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIoError, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), path);
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '\t') {
      out += "\\t";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

template <typename T>
std::string array(const std::vector<T>& xs) {
  std::string out = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += format_double(xs[k]);
    else out += std::to_string(xs[k]);
  }
  return out + "]";
}

}  // namespace

std::string config_to_toml(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto d = [](double v) { return format_double(v); };
  if (!c.preset.empty()) o << "preset = " << quote(c.preset) << "\n";
  o << "\n[domain]\nradius = " << d(c.radius) << "\nn = " << c.n << "\n";
  o << "\n[thickness]\nf = " << quote(c.f) << "\ng = " << quote(c.g) << "\n";
  o << "\n[field]\nlambda = " << d(c.lambda) << "\nlambda_over_hc1 = " << d(c.lambda_over_hc1)
    << "\nalpha = " << array(std::vector<double>(c.alpha.begin(), c.alpha.end()))
    << "\nkappa = " << d(c.kappa) << "\n";
  o << "\n[regime]\nlaw = " << quote(c.law) << "\ncoefficient = " << d(c.coefficient)
    << "\nexponent = " << d(c.exponent) << "\n";
  o << "\n[xi]\ntol = " << d(c.xi_tol) << "\nmax_iters = " << c.xi_max_iters
    << "\nrhs = " << quote(c.xi_rhs) << "\ncluster_radius = " << d(c.cluster_radius)
    << "\nlambda_rel_tol = " << d(c.lambda_rel_tol) << "\n";
  o << "\n[minimize]\nmax_iters = " << c.max_iters << "\ngrad_tol = " << d(c.grad_tol)
    << "\nrestart_every = " << c.restart_every << "\ngamma_mode = " << quote(c.gamma_mode)
    << "\nstart = " << quote(c.start) << "\n";
  o << "\n[run]\nseeds = " << array(c.seeds) << "\n";
  o << "\n[nucleation]\nfactors = " << array(c.nucleation_factors)
    << "\nmatch_radius = " << d(c.match_radius)
    << "\nmin_matched_seeds = " << c.min_matched_seeds
    << "\nmin_vortex_free_seeds = " << c.min_vortex_free_seeds << "\n";
  o << "\n[gamma]\neps_ladder = " << array(c.eps_ladder) << "\nnz = " << c.nz
    << "\norder_threshold = " << d(c.order_threshold) << "\n";
  o << "\n[equilibrium]\ncurve = " << quote(c.curve) << "\ncells = " << c.cells
    << "\ntol = " << d(c.measure_tol) << "\nmax_iters = " << c.measure_max_iters << "\n";
  o << "\n[output]\ndir = " << quote(c.out_dir) << "\n";
  return o.str();
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["domain"] = {{"radius", c.radius}, {"n", c.n}};
  j["thickness"] = {{"f", c.f}, {"g", c.g}};
  j["field"] = {{"lambda", c.lambda},
                {"lambda_over_hc1", c.lambda_over_hc1},
                {"alpha", {c.alpha[0], c.alpha[1], c.alpha[2]}},
                {"kappa", c.kappa}};
  j["regime"] = {{"law", c.law}, {"coefficient", c.coefficient}, {"exponent", c.exponent}};
  j["xi"] = {{"tol", c.xi_tol},
             {"max_iters", c.xi_max_iters},
             {"rhs", c.xi_rhs},
             {"cluster_radius", c.cluster_radius},
             {"lambda_rel_tol", c.lambda_rel_tol}};
  j["minimize"] = {{"max_iters", c.max_iters},
                   {"grad_tol", c.grad_tol},
                   {"restart_every", c.restart_every},
                   {"gamma_mode", c.gamma_mode},
                   {"start", c.start}};
  j["run"] = {{"seeds", c.seeds}};
  j["nucleation"] = {{"factors", c.nucleation_factors},
                     {"factors_note", "calibration knob, not a derived value"},
                     {"match_radius", c.match_radius},
                     {"min_matched_seeds", c.min_matched_seeds},
                     {"min_vortex_free_seeds", c.min_vortex_free_seeds}};
  j["gamma"] = {{"eps_ladder", c.eps_ladder}, {"nz", c.nz}, {"order_threshold", c.order_threshold}};
  j["equilibrium"] = {{"curve", c.curve},
                      {"cells", c.cells},
                      {"tol", c.measure_tol},
                      {"max_iters", c.measure_max_iters}};
  j["output"] = {{"dir", c.out_dir}};
  return j;
}

}  // namespace tfgl
