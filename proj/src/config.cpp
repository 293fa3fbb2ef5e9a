#include "hdsa/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>

#include "hdsa/errors.hpp"
#include "hdsa/thread_pool.hpp"

namespace hdsa {

std::vector<double> ExperimentConfig::etas() const {
  if (!eta_grid.empty()) return eta_grid;
  std::vector<double> out(eta_count);
  const double lo = std::log(eta_min), hi = std::log(eta_max);
  for (int i = 0; i < eta_count; ++i) {
    const double f = (eta_count == 1) ? 0.0 : static_cast<double>(i) / (eta_count - 1);
    out[i] = std::exp(lo + f * (hi - lo));
  }
  return out;
}

int ExperimentConfig::p_for(double zeta) const {
  const double raw = static_cast<double>(n) * zeta;
  const int p = static_cast<int>(std::lround(raw));
  if (p < 1) {
    std::ostringstream msg;
    msg << "config: n * zeta = " << raw << " rounds to p < 1";
    throw ConfigError(msg.str());
  }
  return p;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
  if (n < 1) fail("n must be >= 1");
  if (zeta_grid.empty()) fail("zeta_grid must be nonempty");
  for (double z : zeta_grid)
    if (!(z > 0.0)) fail("zeta values must be > 0");
  if (eta_grid.empty()) {
    if (eta_count < 1) fail("eta_count must be >= 1");
    if (!(eta_min > 0.0) || !(eta_max >= eta_min)) fail("bad eta range");
  } else {
    for (double e : eta_grid)
      if (!(e > 0.0)) fail("eta values must be > 0");
  }
  if (!(alpha > 0.0)) fail("alpha must be > 0");
  if (knot_count < 2) fail("knot_count must be >= 2");
  if (reps < 1) fail("reps must be >= 1");
  if (population_m < 2) fail("population_m must be >= 2");
  if (!(rs_tol > 0.0)) fail("rs_tol must be > 0");
  if (!(rs_damping > 0.0 && rs_damping <= 1.0)) fail("rs_damping must lie in (0,1]");
  if (rs_max_iter < 1) fail("rs_max_iter must be >= 1");
  if (n_test < 0) fail("n_test must be >= 0");
  if (metrics_m < 0) fail("metrics_m must be >= 0");
  if (!(beta0_norm > 0.0)) fail("beta0_norm must be > 0");
  if (!(censor_lo >= 0.0) || !(censor_hi > censor_lo))
    fail("need 0 <= censor_lo < censor_hi");
  if (!(grad_tol > 0.0)) fail("grad_tol must be > 0");
  if (fit_max_iter < 1) fail("fit_max_iter must be >= 1");
  for (double z : zeta_grid) (void)p_for(z);
}

namespace {

struct Value {
  bool is_array = false;
  std::string scalar;
  std::vector<std::string> items;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double to_double(const std::string& key, std::string_view raw) {
  try {
    std::size_t used = 0;
    const std::string s(raw);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has a malformed number: '" +
                      std::string(raw) + "'");
  }
}

long long to_int(const std::string& key, std::string_view raw) {
  const double v = to_double(key, raw);
  const double r = std::round(v);
  if (std::abs(v - r) > 0.0)
    throw ConfigError("config: key '" + key + "' must be an integer");
  return static_cast<long long>(r);
}

bool to_bool(const std::string& key, std::string_view raw) {
  if (raw == "true") return true;
  if (raw == "false") return false;
  throw ConfigError("config: key '" + key + "' must be true or false");
}

std::vector<double> to_double_array(const std::string& key, const Value& v) {
  std::vector<double> out;
  if (!v.is_array)
    throw ConfigError("config: key '" + key + "' must be an array");
  out.reserve(v.items.size());
  for (const auto& item : v.items) out.push_back(to_double(key, item));
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (const auto hash = s.find('#'); hash != std::string_view::npos)
      s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      throw ConfigError("config: line " + std::to_string(lineno) +
                        ": tables are not used; keys are flat (see README)");
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key(trim(s.substr(0, eq)));
    std::string_view raw = trim(s.substr(eq + 1));
    if (key.empty() || raw.empty())
      throw ConfigError("config: line " + std::to_string(lineno) +
                        ": empty key or value");

    Value val;
    if (raw.front() == '[') {
      if (raw.back() != ']')
        throw ConfigError("config: line " + std::to_string(lineno) +
                          ": unterminated array");
      val.is_array = true;
      std::string_view body = raw.substr(1, raw.size() - 2);
      while (!body.empty()) {
        const auto comma = body.find(',');
        std::string_view item = trim(body.substr(0, comma));
        if (!item.empty()) val.items.emplace_back(item);
        if (comma == std::string_view::npos) break;
        body = body.substr(comma + 1);
      }
    } else {
      val.scalar = std::string(raw);
    }

    auto scalar = [&]() -> std::string_view {
      if (val.is_array)
        throw ConfigError("config: key '" + key + "' must be a scalar");
      return val.scalar;
    };

    if (key == "n") cfg.n = static_cast<int>(to_int(key, scalar()));
    else if (key == "zeta_grid") cfg.zeta_grid = to_double_array(key, val);
    else if (key == "eta_grid") cfg.eta_grid = to_double_array(key, val);
    else if (key == "eta_min") cfg.eta_min = to_double(key, scalar());
    else if (key == "eta_max") cfg.eta_max = to_double(key, scalar());
    else if (key == "eta_count") cfg.eta_count = static_cast<int>(to_int(key, scalar()));
    else if (key == "alpha") cfg.alpha = to_double(key, scalar());
    else if (key == "knot_count") cfg.knot_count = static_cast<int>(to_int(key, scalar()));
    else if (key == "reps") cfg.reps = static_cast<int>(to_int(key, scalar()));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, scalar()));
    else if (key == "population_m") cfg.population_m = static_cast<int>(to_int(key, scalar()));
    else if (key == "rs_tol") cfg.rs_tol = to_double(key, scalar());
    else if (key == "rs_damping") cfg.rs_damping = to_double(key, scalar());
    else if (key == "rs_max_iter") cfg.rs_max_iter = static_cast<int>(to_int(key, scalar()));
    else if (key == "n_test") cfg.n_test = static_cast<int>(to_int(key, scalar()));
    else if (key == "metrics_m") cfg.metrics_m = static_cast<int>(to_int(key, scalar()));
    else if (key == "beta0_norm") cfg.beta0_norm = to_double(key, scalar());
    else if (key == "censor_lo") cfg.censor_lo = to_double(key, scalar());
    else if (key == "censor_hi") cfg.censor_hi = to_double(key, scalar());
    else if (key == "grad_tol") cfg.grad_tol = to_double(key, scalar());
    else if (key == "fit_max_iter") cfg.fit_max_iter = static_cast<int>(to_int(key, scalar()));
    else if (key == "workers") cfg.workers = static_cast<unsigned>(to_int(key, scalar()));
    else if (key == "plots") cfg.plots = to_bool(key, scalar());
    else
      throw ConfigError("config: unknown key '" + key + "' (line " +
                        std::to_string(lineno) + ")");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

unsigned resolve_workers(unsigned configured) {
  if (const char* env = std::getenv("HDSA_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  if (configured >= 1) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

}  // namespace hdsa
