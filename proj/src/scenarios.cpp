#include "peds/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "peds/analysis.hpp"
#include "peds/error.hpp"

#ifndef PEDS_VERSION
#define PEDS_VERSION "unknown"
#endif

namespace peds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RunOutcome {
  std::optional<Trajectory> trajectory;
  long divergence_step = -1;
  double divergence_time = 0.0;
};

RunOutcome run_guarded(const RhsFunction& rhs, const Projector& omega, const Eigen::MatrixXd& x0, const IntegrationConfig& ic) {
  RunOutcome out;
  try {
    out.trajectory = integrate(rhs, omega, x0, ic);
  } catch (const DivergenceError& e) {
    out.divergence_step = e.step();
    out.divergence_time = e.time();
  }
  return out;
}

// Members run concurrently; results come back in input order.
std::vector<RunOutcome> run_ensemble(const RhsFunction& rhs, const Projector& omega,
                                     const std::vector<Eigen::MatrixXd>& x0s, const IntegrationConfig& ic) {
  std::vector<std::future<RunOutcome>> jobs;
  jobs.reserve(x0s.size());
  for (const auto& x0 : x0s)
    jobs.push_back(std::async(std::launch::async, [&rhs, &omega, &x0, &ic] { return run_guarded(rhs, omega, x0, ic); }));
  std::vector<RunOutcome> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

IntegrationConfig integration_config(const ScenarioConfig& cfg) {
  IntegrationConfig ic;
  ic.dt = cfg.dt;
  ic.steps = cfg.steps;
  ic.method = parse_method(cfg.method);
  ic.record_stride = cfg.record_stride;
  return ic;
}

std::string output_path(const ScenarioConfig& cfg, const std::string& tag, std::size_t run) {
  std::string base = cfg.output;
  if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") base.resize(base.size() - 4);
  if (!tag.empty()) base += "_" + tag;
  if (cfg.ensemble_size > 1) base += "_r" + std::to_string(run);
  return base + ".csv";
}

void write_runs(ScenarioResult& res, const ScenarioConfig& cfg, const std::string& tag,
                const std::vector<RunOutcome>& runs, const Projector& omega) {
  if (cfg.output.empty()) return;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!runs[r].trajectory) continue;
    const std::string path = output_path(cfg, tag, r);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    write_trajectory_csv(out, *runs[r].trajectory, omega, provenance(cfg), cfg.full_state);
    res.files.push_back(path);
  }
}

// Records divergences; returns true when every run finished.
bool collect_divergences(ScenarioResult& res, const std::string& label, const std::vector<RunOutcome>& runs) {
  bool ok = true;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].trajectory) continue;
    ok = false;
    res.divergences.push_back({label + "[" + std::to_string(r) + "]", runs[r].divergence_step, runs[r].divergence_time});
    std::ostringstream s;
    s << label << " run " << r << " diverged at step " << runs[r].divergence_step << " (t=" << runs[r].divergence_time << ")";
    res.summary.push_back(s.str());
  }
  return ok;
}

std::vector<Eigen::MatrixXd> draw_states(std::mt19937_64& rng, const ScenarioConfig& cfg, const std::vector<double>& means) {
  std::vector<Eigen::MatrixXd> out;
  for (int r = 0; r < cfg.ensemble_size; ++r) out.push_back(gaussian_state(rng, cfg.n, means, cfg.sigma));
  return out;
}

RhsFunction rhs_of(const PedsSystem& sys) {
  return [&sys](const Eigen::MatrixXd& x) { return sys.rhs(x); };
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

struct QuarticCritical {
  double x;
  double curvature;
  double potential;
};

std::vector<QuarticCritical> quartic_critical_points(const std::vector<double>& a) {
  std::vector<QuarticCritical> out;
  for (double r : polynomial_real_roots({a[0], a[1], a[2], a[3]}))
    out.push_back({r, a[1] + 2.0 * a[2] * r + 3.0 * a[3] * r * r, quartic_potential(a, r)});
  return out;
}

std::optional<double> global_minimum(const std::vector<QuarticCritical>& cps) {
  std::optional<double> best;
  double best_v = kInf;
  for (const auto& c : cps)
    if (c.curvature > 0.0 && c.potential < best_v) {
      best_v = c.potential;
      best = c.x;
    }
  return best;
}

void summarize_critical_points(ScenarioResult& res, const std::vector<QuarticCritical>& cps) {
  if (cps.empty()) res.summary.push_back("V' has no real roots");
  for (const auto& c : cps)
    res.summary.push_back("critical point x=" + fmt(c.x) + " V=" + fmt(c.potential) + " " +
                          (c.curvature > 0 ? "minimum" : c.curvature < 0 ? "maximum" : "degenerate"));
}

double max_trajectory_gap(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size()) return kInf;
  double gap = 0.0;
  for (std::size_t r = 0; r < a.states.size(); ++r) gap = std::max(gap, (a.states[r] - b.states[r]).cwiseAbs().maxCoeff());
  return gap;
}

std::vector<Eigen::VectorXd> grid_seeds(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<Eigen::VectorXd> out;
  for (double x : xs)
    for (double y : ys) out.push_back(Eigen::Vector2d(x, y));
  return out;
}

std::vector<Eigen::VectorXd> potential2d_roots() {
  const auto search = find_fixed_points(potential2d_gradient(), grid_seeds({-0.5, 0.0, 0.5}, {-1.2, -0.6, 0.0, 0.6, 1.2}));
  std::vector<Eigen::VectorXd> out;
  for (const auto& r : search.roots) out.push_back(r.x_star);
  return out;
}

std::vector<double> memristor_roots(const ScenarioConfig& cfg) {
  const double upper = cfg.chi > 0.0 ? 1.0 / cfg.chi : 10.0 * cfg.voltage / (cfg.alpha * cfg.beta) + 1.0;
  std::vector<Eigen::VectorXd> seeds;
  for (int i = 0; i <= 40; ++i) seeds.push_back(Eigen::VectorXd::Constant(1, -0.5 + (upper + 0.5) * i / 41.0));
  const auto search = find_fixed_points(memristor_target(cfg.chi, cfg.alpha, cfg.beta, cfg.voltage), seeds);
  std::vector<double> out;
  for (const auto& r : search.roots) out.push_back(r.x_star(0));
  std::sort(out.begin(), out.end());
  return out;
}

Projector file_projector(const ScenarioConfig& cfg) {
  Projector omega = load_projector(cfg.projector_file);
  if (omega.dim() != cfg.n)
    throw ConfigError("projector file '" + cfg.projector_file + "' has N=" + std::to_string(omega.dim()) + ", config n=" + std::to_string(cfg.n));
  return omega;
}

Projector memristor_projector(const ScenarioConfig& cfg) {
  if (!cfg.projector_file.empty()) return file_projector(cfg);
  const ProjectorKind kind = parse_projector_kind(cfg.projector);
  switch (kind) {
    case ProjectorKind::UniformMeanField: return Projector::uniform_mean_field(cfg.n);
    case ProjectorKind::Trivial: return Projector::trivial(cfg.n);
    case ProjectorKind::Gram: return random_gram_projector(cfg.k, cfg.n, cfg.seed);
    case ProjectorKind::Custom: break;
  }
  throw ConfigError("memristor: projector must be mean_field, trivial or gram");
}

double nearest_distance(double x, const std::vector<double>& roots) {
  double d = kInf;
  for (double r : roots) d = std::min(d, std::abs(x - r));
  return d;
}

// ---------------------------------------------------------------------------

ScenarioResult run_quartic1d(const ScenarioConfig& cfg) {
  ScenarioResult res;
  const auto& a = cfg.coeffs;
  const auto cps = quartic_critical_points(a);
  summarize_critical_points(res, cps);
  const auto x_min = global_minimum(cps);

  const TargetSystem target = quartic_gradient(a[0], a[1], a[2], a[3]);
  const PedsSystem peds(target, Projector::uniform_mean_field(cfg.n), make_map(cfg), {Decay::standard(cfg.alpha)});
  const PedsSystem uncoupled(target, Projector::trivial(cfg.n), make_map(cfg), {Decay::standard(cfg.alpha)});

  std::mt19937_64 rng(cfg.seed);
  const auto x0s = draw_states(rng, cfg, {cfg.mean});
  const auto ic = integration_config(cfg);
  auto peds_job = std::async(std::launch::async, [&] { return run_ensemble(rhs_of(peds), peds.omega(), x0s, ic); });
  const auto ref_runs = run_ensemble(rhs_of(uncoupled), uncoupled.omega(), x0s, ic);
  const auto peds_runs = peds_job.get();
  const bool peds_ok = collect_divergences(res, "peds", peds_runs);
  const bool ref_ok = collect_divergences(res, "uncoupled", ref_runs);
  write_runs(res, cfg, "", peds_runs, peds.omega());
  write_runs(res, cfg, "uncoupled", ref_runs, uncoupled.omega());

  const std::string no_min = "potential has no minimum";
  if (!x_min) {
    res.checks.push_back(check_at_most("quartic1d.peds_global_minimum", kInf, 1e-3, no_min));
    res.checks.push_back(check_at_most("quartic1d.uncoupled_split", kInf, 0.0, no_min));
    return res;
  }
  res.summary.push_back("global minimum x=" + fmt(*x_min));

  double worst = peds_ok ? 0.0 : kInf;
  long members = 0, at_min = 0;
  for (const auto& run : peds_runs) {
    if (!run.trajectory) continue;
    const Eigen::MatrixXd& xt = run.trajectory->states.back();
    for (Eigen::Index k = 0; k < xt.rows(); ++k) {
      const double d = std::abs(xt(k, 0) - *x_min);
      worst = std::max(worst, d);
      ++members;
      at_min += d <= 1e-3;
    }
  }
  res.metrics["peds_fraction_at_global_minimum"] = members ? static_cast<double>(at_min) / members : 0.0;
  res.checks.push_back(check_at_most("quartic1d.peds_global_minimum", worst, 1e-3, peds_ok ? "" : "diverged"));

  std::vector<double> minima;
  for (const auto& c : cps)
    if (c.curvature > 0.0) minima.push_back(c.x);
  std::vector<bool> hit(minima.size(), false);
  for (const auto& run : ref_runs) {
    if (!run.trajectory) continue;
    const Eigen::MatrixXd& xt = run.trajectory->states.back();
    for (Eigen::Index k = 0; k < xt.rows(); ++k)
      for (std::size_t j = 0; j < minima.size(); ++j) hit[j] = hit[j] || std::abs(xt(k, 0) - minima[j]) <= 1e-3;
  }
  const double basins = static_cast<double>(std::count(hit.begin(), hit.end(), true));
  res.metrics["uncoupled_basins_reached"] = basins;
  // measured = number of missing basins out of two
  res.checks.push_back(check_at_most("quartic1d.uncoupled_split", ref_ok ? std::max(0.0, 2.0 - basins) : kInf, 0.0,
                                     ref_ok ? "" : "diverged"));
  return res;
}

ScenarioResult run_map_compare(const ScenarioConfig& cfg) {
  ScenarioResult res;
  const auto& a = cfg.coeffs;
  summarize_critical_points(res, quartic_critical_points(a));
  const TargetSystem target = quartic_gradient(a[0], a[1], a[2], a[3]);
  const Projector omega = Projector::uniform_mean_field(cfg.n);
  const PedsSystem comm(target, omega, MapKind::commutative(), {Decay::standard(cfg.alpha)});
  const PedsSystem nc(target, omega, MapKind::noncommutative(parse_ordering(cfg.ordering)), {Decay::standard(cfg.alpha)});

  std::mt19937_64 rng(cfg.seed);
  const auto x0s = draw_states(rng, cfg, {cfg.mean});
  const auto ic = integration_config(cfg);
  double rhs_gap = 0.0;
  for (const auto& x0 : x0s) rhs_gap = std::max(rhs_gap, (comm.rhs(x0) - nc.rhs(x0)).cwiseAbs().maxCoeff());
  auto comm_job = std::async(std::launch::async, [&] { return run_ensemble(rhs_of(comm), omega, x0s, ic); });
  const auto nc_runs = run_ensemble(rhs_of(nc), omega, x0s, ic);
  const auto comm_runs = comm_job.get();
  const bool ok = collect_divergences(res, "noncommutative", nc_runs) & collect_divergences(res, "commutative", comm_runs);
  write_runs(res, cfg, "", nc_runs, omega);
  write_runs(res, cfg, "commutative", comm_runs, omega);

  double gap = ok ? 0.0 : kInf, terminal = ok ? 0.0 : kInf;
  for (std::size_t r = 0; ok && r < nc_runs.size(); ++r) {
    gap = std::max(gap, max_trajectory_gap(*nc_runs[r].trajectory, *comm_runs[r].trajectory));
    const double a = nc_runs[r].trajectory->projected.back()(0), b = comm_runs[r].trajectory->projected.back()(0);
    terminal = std::max(terminal, std::abs(a - b));
    res.summary.push_back("run " + std::to_string(r) + " terminal x~ noncommutative=" + fmt(a) + " commutative=" + fmt(b));
  }
  res.summary.push_back("max rhs gap at t=0: " + fmt(rhs_gap) + ", max trajectory gap: " + fmt(gap));
  res.metrics["rhs_gap"] = rhs_gap;
  res.metrics["trajectory_gap"] = gap;
  res.checks.push_back(check_at_most("map_compare.terminal_agreement", terminal, 1e-6));
  return res;
}

ScenarioResult run_potential2d(const ScenarioConfig& cfg) {
  ScenarioResult res;
  for (const auto& r : potential2d_roots()) {
    const auto eigs = eigenvalues(potential2d_gradient().jacobian(r));
    res.summary.push_back("target fixed point (" + fmt(r(0)) + ", " + fmt(r(1)) + ") " + to_string(classify_equilibrium(eigs)));
  }
  const Projector omega = Projector::uniform_mean_field(cfg.n);
  const PedsSystem factorized(potential2d_gradient(), omega, make_map(cfg), {Decay::standard(cfg.alpha), Decay::standard(cfg.alpha)});
  const RhsFunction joint = potential2d_joint_rhs(omega, cfg.alpha);

  std::mt19937_64 rng(cfg.seed);
  const auto x0s = draw_states(rng, cfg, {cfg.mean, cfg.mean_y});
  const auto ic = integration_config(cfg);
  auto joint_job = std::async(std::launch::async, [&] { return run_ensemble(joint, omega, x0s, ic); });
  const auto fact_runs = run_ensemble(rhs_of(factorized), omega, x0s, ic);
  const auto joint_runs = joint_job.get();
  const bool ok = collect_divergences(res, "factorized", fact_runs) & collect_divergences(res, "joint", joint_runs);
  write_runs(res, cfg, "", fact_runs, omega);
  write_runs(res, cfg, "joint", joint_runs, omega);

  double gap = ok ? 0.0 : kInf, x_err = ok ? 0.0 : kInf, y_err = ok ? 0.0 : kInf;
  for (std::size_t r = 0; ok && r < fact_runs.size(); ++r) {
    gap = std::max(gap, max_trajectory_gap(*fact_runs[r].trajectory, *joint_runs[r].trajectory));
    const Eigen::VectorXd& xt = fact_runs[r].trajectory->projected.back();
    x_err = std::max(x_err, std::abs(xt(0)));
    y_err = std::max(y_err, std::min(std::abs(xt(1) - 1.0), std::abs(xt(1) + 1.0)));
    res.summary.push_back("run " + std::to_string(r) + " terminal (x~, y~)=(" + fmt(xt(0)) + ", " + fmt(xt(1)) + ")");
  }
  res.metrics["ordering_gap"] = gap;
  res.checks.push_back(check_at_most("potential2d.ordering_gap", gap, 1e-8));
  res.checks.push_back(check_at_most("potential2d.terminal_x", x_err, 1e-3));
  res.checks.push_back(check_at_most("potential2d.terminal_y", y_err, 1e-3));
  return res;
}

ScenarioResult run_hamiltonian(const ScenarioConfig& cfg) {
  ScenarioResult res;
  const auto cps = quartic_critical_points(cfg.coeffs);
  summarize_critical_points(res, cps);
  std::vector<double> roots;
  for (const auto& c : cps) roots.push_back(c.x);

  const Projector omega = Projector::uniform_mean_field(cfg.n);
  const PedsSystem sys(damped_hamiltonian(cfg.coeffs, cfg.mass, cfg.chi), omega, make_map(cfg),
                       {Decay::standard(cfg.alpha_x), Decay::standard(cfg.alpha_p)});
  std::mt19937_64 rng(cfg.seed);
  const auto x0s = draw_states(rng, cfg, {cfg.mean, cfg.mean_y});
  const auto runs = run_ensemble(rhs_of(sys), omega, x0s, integration_config(cfg));
  const bool ok = collect_divergences(res, "peds", runs);
  write_runs(res, cfg, "", runs, omega);

  double p_err = ok ? 0.0 : kInf, x_err = ok ? 0.0 : kInf;
  for (std::size_t r = 0; ok && r < runs.size(); ++r) {
    const Eigen::VectorXd& xt = runs[r].trajectory->projected.back();
    p_err = std::max(p_err, std::abs(xt(1)));
    x_err = std::max(x_err, nearest_distance(xt(0), roots));
    res.summary.push_back("run " + std::to_string(r) + " terminal (x~, p~)=(" + fmt(xt(0)) + ", " + fmt(xt(1)) + ")");
  }
  res.checks.push_back(check_at_most("hamiltonian.terminal_momentum", p_err, 1e-3));
  res.checks.push_back(check_at_most("hamiltonian.terminal_position", x_err, 1e-3));
  return res;
}

ScenarioResult run_random_projector(const ScenarioConfig& cfg) {
  ScenarioResult res;
  const auto cps = quartic_critical_points(cfg.coeffs);
  summarize_critical_points(res, cps);
  const auto x_min = global_minimum(cps);

  int draws = 1;
  Eigen::MatrixXd ones_row = Eigen::MatrixXd::Ones(1, cfg.n);
  if (cfg.basis == "ones" && cfg.k != 1) throw ConfigError("random_projector: basis=ones requires k=1");
  const Projector omega = !cfg.projector_file.empty() ? file_projector(cfg)
                          : cfg.basis == "ones"       ? Projector::gram(ones_row)
                                                      : random_gram_projector(cfg.k, cfg.n, cfg.seed, &draws);
  res.summary.push_back("projector rank " + std::to_string(omega.rank()) + " after " + std::to_string(draws) +
                        " draw(s), idempotence error " + fmt(idempotence_error(omega.matrix())));
  const Eigen::VectorXd b = omega.apply(Eigen::VectorXd::Ones(cfg.n));
  const PedsSystem sys(quartic_gradient(cfg.coeffs[0], cfg.coeffs[1], cfg.coeffs[2], cfg.coeffs[3]), omega, make_map(cfg),
                       {Decay::standard(cfg.alpha)}, {b});

  std::mt19937_64 rng(cfg.seed);
  const auto x0s = draw_states(rng, cfg, {cfg.mean});
  const auto runs = run_ensemble(rhs_of(sys), omega, x0s, integration_config(cfg));
  const bool ok = collect_divergences(res, "peds", runs);
  write_runs(res, cfg, "", runs, omega);

  double err = ok && x_min ? 0.0 : kInf;
  for (std::size_t r = 0; ok && x_min && r < runs.size(); ++r) {
    const double xt = runs[r].trajectory->projected.back()(0);
    err = std::max(err, std::abs(xt - *x_min));
    res.summary.push_back("run " + std::to_string(r) + " terminal x~=" + fmt(xt));
  }
  res.checks.push_back(check_at_most("random_projector.terminal_minimum", err, 1e-2, x_min ? "" : "potential has no minimum"));
  return res;
}

ScenarioResult run_memristor(const ScenarioConfig& cfg) {
  ScenarioResult res;
  const auto roots = memristor_roots(cfg);
  const double s = cfg.voltage / (cfg.alpha * cfg.beta);
  for (double r : roots) res.summary.push_back("stationary point x=" + fmt(r) + " V=" + fmt(memristor_potential(r, s, cfg.chi)));

  const Projector omega = memristor_projector(cfg);
  const RhsFunction rhs = memristor_network_rhs(omega, cfg.chi, cfg.alpha, cfg.beta, cfg.voltage);
  const double hi = (cfg.chi > 0.0 ? std::min(1.0, 1.0 / cfg.chi) : 1.0) - 1e-6;
  std::mt19937_64 rng(cfg.seed);
  auto x0s = draw_states(rng, cfg, {cfg.mean});
  for (auto& x0 : x0s) x0 = x0.cwiseMax(0.0).cwiseMin(hi);

  std::vector<RunOutcome> runs;
  try {
    runs = run_ensemble(rhs, omega, x0s, integration_config(cfg));
  } catch (const NumericError& e) {
    res.summary.push_back(e.what());
    res.checks.push_back(check_at_most("memristor.terminal_stationary", kInf, 1e-4, "singular network matrix"));
    return res;
  }
  const bool ok = collect_divergences(res, "peds", runs);
  write_runs(res, cfg, "", runs, omega);

  long exits = 0;
  for (const auto& run : runs)
    if (run.trajectory)
      for (const auto& st : run.trajectory->states) exits += (st.array() < 0.0 || st.array() >= 1.0).count();
  if (exits) res.summary.push_back("domain exit: " + std::to_string(exits) + " recorded entries outside [0, 1)");
  res.metrics["domain_exits"] = static_cast<double>(exits);

  if (!omega.is_mean_field()) {
    res.checks.push_back(skipped("memristor.terminal_stationary", 1e-4, "asserted for the mean-field projector only"));
    for (std::size_t r = 0; ok && r < runs.size(); ++r)
      res.summary.push_back("run " + std::to_string(r) + " terminal mean=" + fmt(runs[r].trajectory->states.back().mean()));
    return res;
  }
  double err = ok && !roots.empty() ? 0.0 : kInf;
  for (std::size_t r = 0; ok && r < runs.size(); ++r) {
    const double mean = runs[r].trajectory->states.back().mean();
    err = std::max(err, nearest_distance(mean, roots));
    res.summary.push_back("run " + std::to_string(r) + " terminal mean=" + fmt(mean));
  }
  res.checks.push_back(check_at_most("memristor.terminal_stationary", err, 1e-4));
  return res;
}

}  // namespace

int ScenarioResult::exit_code() const {
  if (!divergences.empty()) return 3;
  return all_passed(checks) ? 0 : 2;
}

std::string build_version() { return PEDS_VERSION; }

std::string provenance(const ScenarioConfig& cfg) {
  std::ostringstream s;
  s << "seed=" << cfg.seed << " N=" << cfg.n;
  if (cfg.name == "hamiltonian")
    s << " alpha_x=" << cfg.alpha_x << " alpha_p=" << cfg.alpha_p;
  else
    s << " alpha=" << cfg.alpha;
  s << " dt=" << cfg.dt << " map=" << cfg.map << " ordering=" << cfg.ordering << " method=" << cfg.method
    << " scenario=" << cfg.name << " version=" << build_version();
  return s.str();
}

MapKind make_map(const ScenarioConfig& cfg) {
  switch (parse_map_kind(cfg.map)) {
    case MapKind::Tag::StandardCommutative: return MapKind::commutative();
    case MapKind::Tag::MixedCommutative: return MapKind::mixed();
    case MapKind::Tag::StandardNonCommutative: break;
  }
  return MapKind::noncommutative(parse_ordering(cfg.ordering));
}

Eigen::MatrixXd gaussian_state(std::mt19937_64& rng, int n, const std::vector<double>& means, double sigma) {
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(means.size()));
  for (std::size_t i = 0; i < means.size(); ++i) {
    std::normal_distribution<double> dist(means[i], sigma);
    for (int k = 0; k < n; ++k) x(k, static_cast<Eigen::Index>(i)) = sigma > 0.0 ? dist(rng) : means[i];
  }
  return x;
}

Projector random_gram_projector(int k, int n, std::uint64_t seed, int* draws) {
  for (int attempt = 0; attempt < 5; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd b(k, n);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < n; ++c) b(r, c) = u(rng);
    try {
      Projector p = Projector::gram(b);
      if (draws) *draws = attempt + 1;
      return p;
    } catch (const SingularGramError&) {
    }
  }
  throw SingularGramError("random_gram_projector: five consecutive singular draws");
}

RhsFunction potential2d_joint_rhs(const Projector& omega, double alpha) {
  return [omega, alpha](const Eigen::MatrixXd& state) -> Eigen::MatrixXd {
    if (state.cols() != 2 || state.rows() != omega.dim()) throw DimensionError("potential2d_joint_rhs: state must be N x 2");
    const Eigen::MatrixXd& om = omega.matrix();
    const Eigen::MatrixXd ax = om * state.col(0).asDiagonal();
    const Eigen::MatrixXd ay = om * state.col(1).asDiagonal();
    const Eigen::MatrixXd ay2 = ay * ay;
    const Eigen::MatrixXd exponent = 0.5 * ax * ax - 0.5 * ay2 + 0.25 * ay2 * ay2;
    const Eigen::MatrixXd v = exponent.exp();
    const Eigen::VectorXd v1 = v * Eigen::VectorXd::Ones(omega.dim());
    Eigen::MatrixXd out(state.rows(), 2);
    out.col(0) = om * (-(ax * v1)) - alpha * complement_project(omega, state.col(0));
    out.col(1) = om * (ay * v1 - ay * (ay2 * v1)) - alpha * complement_project(omega, state.col(1));
    return out;
  };
}

RhsFunction memristor_network_rhs(const Projector& omega, double chi, double alpha, double beta, double voltage) {
  const Eigen::VectorXd source = omega.apply(Eigen::VectorXd::Constant(omega.dim(), voltage));
  return [omega, chi, alpha, beta, source](const Eigen::MatrixXd& state) -> Eigen::MatrixXd {
    if (state.cols() != 1 || state.rows() != omega.dim()) throw DimensionError("memristor_network_rhs: state must be N x 1");
    const Eigen::Index n = omega.dim();
    const Eigen::VectorXd x = state.col(0);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - chi * (omega.matrix() * x.asDiagonal());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (!(lu.rcond() > 1e-13)) throw NumericError("memristor_network_rhs: I - chi Omega X is singular");
    const Eigen::VectorXd y = lu.solve(source);
    Eigen::MatrixXd out(n, 1);
    out.col(0) = omega.apply(y / beta - alpha * x) - alpha * complement_project(omega, x);
    return out;
  };
}

JacobianSetup jacobian_setup(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const Projector omega = Projector::uniform_mean_field(cfg.n);
  const auto& a = cfg.coeffs;
  auto as_points = [](const std::vector<double>& xs) {
    std::vector<Eigen::VectorXd> out;
    for (double x : xs) out.push_back(Eigen::VectorXd::Constant(1, x));
    return out;
  };
  if (cfg.name == "quartic1d" || cfg.name == "map_compare") {
    const MapKind map = cfg.name == "map_compare" ? MapKind::noncommutative(parse_ordering(cfg.ordering)) : make_map(cfg);
    return {PedsSystem(quartic_gradient(a[0], a[1], a[2], a[3]), omega, map, {Decay::standard(cfg.alpha)}),
            as_points(polynomial_real_roots({a[0], a[1], a[2], a[3]}))};
  }
  if (cfg.name == "potential2d")
    return {PedsSystem(potential2d_gradient(), omega, make_map(cfg), {Decay::standard(cfg.alpha), Decay::standard(cfg.alpha)}),
            potential2d_roots()};
  if (cfg.name == "hamiltonian") {
    std::vector<Eigen::VectorXd> pts;
    for (double r : polynomial_real_roots({a[0], a[1], a[2], a[3]})) pts.push_back(Eigen::Vector2d(r, 0.0));
    return {PedsSystem(damped_hamiltonian(a, cfg.mass, cfg.chi), omega, make_map(cfg),
                       {Decay::standard(cfg.alpha_x), Decay::standard(cfg.alpha_p)}),
            pts};
  }
  if (cfg.name == "memristor") {
    if (parse_projector_kind(cfg.projector) != ProjectorKind::UniformMeanField || !cfg.projector_file.empty())
      throw ScopeError("jacobian: memristor closed form requires projector=mean_field");
    return {PedsSystem(memristor_target(cfg.chi, cfg.alpha, cfg.beta, cfg.voltage), omega, make_map(cfg), {Decay::standard(cfg.alpha)}),
            as_points(memristor_roots(cfg))};
  }
  throw ScopeError("jacobian: scenario '" + cfg.name + "' uses a non-mean-field projector; no closed form");
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  ScenarioResult res;
  if (cfg.name == "quartic1d") res = run_quartic1d(cfg);
  else if (cfg.name == "map_compare") res = run_map_compare(cfg);
  else if (cfg.name == "potential2d") res = run_potential2d(cfg);
  else if (cfg.name == "hamiltonian") res = run_hamiltonian(cfg);
  else if (cfg.name == "random_projector") res = run_random_projector(cfg);
  else res = run_memristor(cfg);
  res.name = cfg.name;
  return res;
}

}  // namespace peds
