#include "peds/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "peds/error.hpp"

namespace peds {

namespace {

const std::vector<double> kFigureCoeffs = {9.85, 10.0, 2.0, -0.395};
const std::vector<double> kSingleMinimumCoeffs = {9.85, -10.0, -2.0, 0.0};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

template <typename I>
I to_integer(const std::string& key, const std::string& v) {
  I out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

// shortest text that reads back to the same double
std::string fmt(double d) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

}  // namespace

ScenarioConfig default_config(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "quartic1d") {
    c.method = "euler";
    c.dt = 0.01;
    c.steps = 20000;
    c.record_stride = 100;
    c.seed = 42;
    c.mean = -0.51;
    c.ensemble_size = 50;
    c.coeffs = kFigureCoeffs;
  } else if (name == "map_compare") {
    c.steps = 20000;
    c.record_stride = 100;
    c.seed = 5;
    c.mean = -3.0;
    c.sigma = 0.5;
    c.coeffs = kSingleMinimumCoeffs;
  } else if (name == "potential2d") {
    c.method = "euler";
    c.dt = 0.1;
    c.steps = 1000;
    c.record_stride = 1;
    c.seed = 7;
    c.mean = 0.5;
    c.mean_y = 0.3;
  } else if (name == "hamiltonian") {
    c.method = "euler";
    c.dt = 0.001;
    c.steps = 40000;
    c.record_stride = 100;
    c.seed = 11;
    c.mean = -3.0;
    c.mean_y = 0.0;
    c.coeffs = kSingleMinimumCoeffs;
  } else if (name == "random_projector") {
    c.steps = 20000;
    c.record_stride = 100;
    c.seed = 3;
    c.mean = -3.0;
    c.coeffs = kSingleMinimumCoeffs;
  } else if (name == "memristor") {
    c.alpha = 1.0;
    c.steps = 3000;
    c.record_stride = 10;
    c.seed = 13;
    c.mean = 0.5;
    c.chi = 0.9;
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return c;
}

void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "n") c.n = to_integer<int>(key, v);
  else if (key == "alpha") c.alpha = to_double(key, v);
  else if (key == "alpha_x") c.alpha_x = to_double(key, v);
  else if (key == "alpha_p") c.alpha_p = to_double(key, v);
  else if (key == "dt") c.dt = to_double(key, v);
  else if (key == "steps") c.steps = to_integer<long>(key, v);
  else if (key == "method") c.method = v;
  else if (key == "record_stride") c.record_stride = to_integer<long>(key, v);
  else if (key == "seed") c.seed = to_integer<std::uint64_t>(key, v);
  else if (key == "ensemble_size") c.ensemble_size = to_integer<int>(key, v);
  else if (key == "map") c.map = v;
  else if (key == "ordering") c.ordering = v;
  else if (key == "output") c.output = v;
  else if (key == "full_state") c.full_state = to_bool(key, v);
  else if (key == "mean") c.mean = to_double(key, v);
  else if (key == "mean_y") c.mean_y = to_double(key, v);
  else if (key == "sigma") c.sigma = to_double(key, v);
  else if (key == "coeffs") {
    std::vector<double> a;
    std::stringstream s(v);
    std::string item;
    while (std::getline(s, item, ',')) a.push_back(to_double(key, trim(item)));
    if (a.size() != 4) throw ConfigError("config key 'coeffs': expected four values a1,a2,a3,a4");
    c.coeffs = a;
  } else if (key == "mass") c.mass = to_double(key, v);
  else if (key == "chi") c.chi = to_double(key, v);
  else if (key == "k") c.k = to_integer<int>(key, v);
  else if (key == "basis") c.basis = v;
  else if (key == "projector") c.projector = v;
  else if (key == "projector_file") c.projector_file = v;
  else if (key == "beta") c.beta = to_double(key, v);
  else if (key == "voltage") c.voltage = to_double(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& c) {
  std::string coeffs;
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) coeffs += (i ? "," : "") + fmt(c.coeffs[i]);
  return {
      {"n", std::to_string(c.n)},
      {"alpha", fmt(c.alpha)},
      {"alpha_x", fmt(c.alpha_x)},
      {"alpha_p", fmt(c.alpha_p)},
      {"dt", fmt(c.dt)},
      {"steps", std::to_string(c.steps)},
      {"method", c.method},
      {"record_stride", std::to_string(c.record_stride)},
      {"seed", std::to_string(c.seed)},
      {"ensemble_size", std::to_string(c.ensemble_size)},
      {"map", c.map},
      {"ordering", c.ordering},
      {"output", c.output},
      {"full_state", c.full_state ? "true" : "false"},
      {"mean", fmt(c.mean)},
      {"mean_y", fmt(c.mean_y)},
      {"sigma", fmt(c.sigma)},
      {"coeffs", coeffs},
      {"mass", fmt(c.mass)},
      {"chi", fmt(c.chi)},
      {"k", std::to_string(c.k)},
      {"basis", c.basis},
      {"projector", c.projector},
      {"projector_file", c.projector_file},
      {"beta", fmt(c.beta)},
      {"voltage", fmt(c.voltage)},
  };
}

void apply_config_stream(ScenarioConfig& cfg, std::istream& in) {
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (!section.empty() && section != "common" && section != cfg.name) continue;
    set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void apply_config_file(ScenarioConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_config_stream(cfg, in);
}

void validate_config(const ScenarioConfig& c) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), c.name) == names.end()) throw ConfigError("unknown scenario '" + c.name + "'");
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError(std::string("config key '") + key + "' must be positive");
  };
  positive("n", c.n);
  positive("dt", c.dt);
  positive("steps", static_cast<double>(c.steps));
  positive("record_stride", static_cast<double>(c.record_stride));
  positive("ensemble_size", c.ensemble_size);
  positive("alpha", c.alpha);
  positive("alpha_x", c.alpha_x);
  positive("alpha_p", c.alpha_p);
  positive("mass", c.mass);
  positive("beta", c.beta);
  positive("k", c.k);
  if (c.sigma < 0.0) throw ConfigError("config key 'sigma' must be non-negative");
  if (c.chi < 0.0) throw ConfigError("config key 'chi' must be non-negative");
  if (c.name == "memristor" && c.chi > 1.0) throw ConfigError("memristor: chi must lie in [0, 1]");
  if (c.name == "random_projector" && c.k > c.n) throw ConfigError("random_projector: k must not exceed n");
  if (c.basis != "uniform" && c.basis != "ones") throw ConfigError("config key 'basis' must be uniform or ones");
}

void dump_config(std::ostream& out, const ScenarioConfig& cfg) {
  out << '[' << cfg.name << "]\n";
  for (const auto& [k, v] : config_entries(cfg)) out << k << " = " << v << '\n';
}

}  // namespace peds
