#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "peds/analysis.hpp"
#include "peds/config.hpp"
#include "peds/error.hpp"
#include "peds/scenarios.hpp"
#include "peds/verify.hpp"

namespace {

struct Overrides {
  std::string config_file;
  std::vector<std::string> assignments;
  std::vector<std::pair<std::string, std::string>> flags;
};

// Named flags map onto config keys; each only applies when given on the command line.
void add_config_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_file, "Config file with [section] headers")->check(CLI::ExistingFile);
  cmd->add_option("--set", ov.assignments, "Override a config key (key=value), repeatable");
  for (const char* key : {"n", "alpha", "alpha_x", "alpha_p", "dt", "steps", "method", "record_stride", "seed", "ensemble_size",
                          "map", "ordering", "output", "mean", "mean_y", "sigma", "coeffs", "k", "basis", "projector", "projector_file", "chi",
                          "beta", "voltage", "mass"}) {
    std::string flag = std::string("--") + key;
    for (auto& c : flag)
      if (c == '_') c = '-';
    cmd->add_option_function<std::string>(flag, [&ov, key](const std::string& v) { ov.flags.emplace_back(key, v); },
                                          std::string("Config key ") + key);
  }
  cmd->add_flag_function("--full-state", [&ov](std::int64_t) { ov.flags.emplace_back("full_state", "true"); },
                         "Write every replica component to the CSV");
}

peds::ScenarioConfig resolve(const std::string& scenario, const Overrides& ov) {
  peds::ScenarioConfig cfg = peds::default_config(scenario);
  if (!ov.config_file.empty()) peds::apply_config_file(cfg, ov.config_file);
  for (const auto& a : ov.assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw peds::ConfigError("--set expects key=value, got '" + a + "'");
    peds::set_config_value(cfg, a.substr(0, eq), a.substr(eq + 1));
  }
  for (const auto& [k, v] : ov.flags) peds::set_config_value(cfg, k, v);
  peds::validate_config(cfg);
  return cfg;
}

int cmd_run(const std::string& scenario, const Overrides& ov) {
  const auto cfg = resolve(scenario, ov);
  const auto res = peds::run_scenario(cfg);
  std::cout << "# " << peds::provenance(cfg) << '\n';
  for (const auto& line : res.summary) std::cout << line << '\n';
  for (const auto& c : res.checks) peds::write_property_line(std::cout, c);
  for (const auto& f : res.files) std::cout << "wrote " << f << '\n';
  if (!res.divergences.empty()) std::cout << "DIVERGED " << res.divergences.size() << " run(s)\n";
  return res.exit_code();
}

int cmd_jacobian(const std::string& scenario, const Overrides& ov, const std::vector<double>& at, const std::string& out_path) {
  const auto cfg = resolve(scenario, ov);
  auto setup = peds::jacobian_setup(cfg);
  std::vector<Eigen::VectorXd> points = setup.fixed_points;
  if (!at.empty()) {
    if (static_cast<int>(at.size()) != setup.system.m())
      throw peds::DimensionError("--at expects " + std::to_string(setup.system.m()) + " value(s)");
    points = {Eigen::Map<const Eigen::VectorXd>(at.data(), static_cast<Eigen::Index>(at.size()))};
  }
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw peds::ConfigError("cannot write '" + out_path + "'");
  }
  std::cout << std::setprecision(10);
  for (const auto& x : points) {
    const auto rep = peds::peds_jacobian_closed_form(setup.system, x);
    std::cout << "x* = (";
    for (Eigen::Index i = 0; i < x.size(); ++i) std::cout << (i ? ", " : "") << x(i);
    std::cout << ") target " << peds::to_string(rep.target_classification) << " -> embedding "
              << peds::to_string(rep.classification) << '\n';
    peds::write_eigenvalues_csv(file.is_open() ? static_cast<std::ostream&>(file) : std::cout, rep);
  }
  if (points.empty()) std::cout << "no fixed points found\n";
  return 0;
}

int cmd_verify(double alpha, bool flip, std::uint64_t seed) {
  peds::VerifyOptions opt;
  opt.alpha = alpha;
  opt.flip_decay_sign = flip;
  opt.seed = seed;
  const auto checks = peds::run_verify(opt);
  for (const auto& c : checks) peds::write_property_line(std::cout, c);
  return peds::all_passed(checks) ? 0 : 2;
}

int cmd_dump(const std::string& scenario, const Overrides& ov) {
  if (!scenario.empty()) {
    peds::dump_config(std::cout, resolve(scenario, ov));
    return 0;
  }
  bool first = true;
  for (const auto& name : peds::scenario_names()) {
    if (!first) std::cout << '\n';
    first = false;
    peds::dump_config(std::cout, resolve(name, ov));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective embedding of dynamical systems: scenarios, Jacobians and property checks"};
  app.require_subcommand(1);

  std::string scenario;
  Overrides ov;
  auto* run = app.add_subcommand("run", "Run a named scenario");
  run->add_option("scenario", scenario, "Scenario name")->required()->check(CLI::IsMember(peds::scenario_names()));
  add_config_options(run, ov);

  std::vector<double> at;
  std::string eig_out;
  auto* jac = app.add_subcommand("jacobian", "Closed-form Jacobian spectra at the scenario's fixed points");
  jac->add_option("scenario", scenario, "Scenario name")->required()->check(CLI::IsMember(peds::scenario_names()));
  jac->add_option("--at", at, "Evaluate at this target point instead")->expected(1, -1);
  jac->add_option("--eig-out", eig_out, "Write eigenvalue CSV here instead of stdout");
  add_config_options(jac, ov);

  double alpha = 0.5;
  bool flip = false;
  std::uint64_t seed = 2024;
  auto* ver = app.add_subcommand("verify", "Run the property suite");
  ver->add_option("--alpha", alpha, "Decay rate for the convergence property (0 skips it)");
  ver->add_flag("--flip-decay-sign", flip, "Mutation test: reverse the decay term");
  ver->add_option("--seed", seed, "Seed of the random cases");

  auto* dump = app.add_subcommand("dump-config", "Print default configuration");
  dump->add_option("scenario", scenario, "Scenario name (all when omitted)")->check(CLI::IsMember(peds::scenario_names()));
  add_config_options(dump, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, ov);
    if (*jac) return cmd_jacobian(scenario, ov, at, eig_out);
    if (*ver) return cmd_verify(alpha, flip, seed);
    if (*dump) return cmd_dump(scenario, ov);
  } catch (const peds::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const peds::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const peds::ScopeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const peds::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
