// Acceptance suite: one PASS/FAIL line per criterion, measured against independent oracles.
#include <CLI11.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "peds/analysis.hpp"
#include "peds/error.hpp"
#include "peds/scenarios.hpp"

using namespace peds;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  double measured = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> details;
  bool extra_ok = true;  // secondary conditions folded into the verdict
};

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Eigen::VectorXd uniform_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

Eigen::MatrixXd dense_mean_field(int n) { return Eigen::MatrixXd::Constant(n, n, 1.0 / n); }

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

TargetSystem linear_target(double a) {
  TargetSystem t(1);
  t.add_monomial(0, a, {1});
  return t;
}

TargetSystem logistic_target() {
  TargetSystem t(1);
  t.add_monomial(0, 1.0, {1}).add_monomial(0, -1.0, {2});
  return t;
}

// V(x) = a1 x + a2 x^2/2 + a3 x^3/3 + a4 x^4/4
double quartic_v(const std::vector<double>& a, double x) {
  return a[0] * x + a[1] * x * x / 2 + a[2] * x * x * x / 3 + a[3] * x * x * x * x / 4;
}
double quartic_dv(const std::vector<double>& a, double x) { return a[0] + a[1] * x + a[2] * x * x + a[3] * x * x * x; }
double quartic_ddv(const std::vector<double>& a, double x) { return a[1] + 2 * a[2] * x + 3 * a[3] * x * x; }

// Critical points of V by sign changes on a fine grid, refined by bisection.
std::vector<double> quartic_critical_points(const std::vector<double>& a) {
  std::vector<double> roots;
  const double lo = -100.0, step = 1e-3;
  double x0 = lo, f0 = quartic_dv(a, x0);
  for (int i = 1; i <= 200000; ++i) {
    const double x1 = lo + i * step, f1 = quartic_dv(a, x1);
    if (f0 == 0.0) roots.push_back(x0);
    else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
      double l = x0, r = x1;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (l + r);
        ((quartic_dv(a, l) < 0) == (quartic_dv(a, mid) < 0) ? l : r) = mid;
      }
      roots.push_back(0.5 * (l + r));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

std::vector<double> quartic_local_minima(const std::vector<double>& a) {
  std::vector<double> out;
  for (double x : quartic_critical_points(a))
    if (quartic_ddv(a, x) > 0) out.push_back(x);
  return out;
}

// Global minimum exists only when V is bounded below.
std::optional<double> quartic_global_minimum(const std::vector<double>& a) {
  const bool bounded = a[3] > 0 || (a[3] == 0 && a[2] == 0 && a[1] > 0);
  const auto minima = quartic_local_minima(a);
  if (!bounded || minima.empty()) return std::nullopt;
  return *std::min_element(minima.begin(), minima.end(), [&](double x, double y) { return quartic_v(a, x) < quartic_v(a, y); });
}

const std::vector<double> kFigureCoeffs = {9.85, 10.0, 2.0, -0.395};
const std::vector<double> kSingleMinimumCoeffs = {9.85, -10.0, -2.0, 0.0};

// Target Jacobian of the 2D gradient system at (0, y), y in {0, +-1}.
Eigen::Matrix2d vxy_jacobian(double y) {
  const double v = std::exp(-0.5 * y * y + 0.25 * y * y * y * y);
  Eigen::Matrix2d j;
  j << -v, 0.0, 0.0, (1.0 - 3.0 * y * y) * v;
  return j;
}

std::vector<std::complex<double>> oracle_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

double sorted_gap(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return kInf;
  auto less = [](const auto& x, const auto& y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

std::string oracle_class(const std::vector<std::complex<double>>& eig) {
  bool neg = false, pos = false, zero = false;
  for (const auto& z : eig) {
    if (std::abs(z.real()) <= 1e-8) zero = true;
    else (z.real() < 0 ? neg : pos) = true;
  }
  if (zero) return "Marginal";
  if (neg && pos) return "Saddle";
  return neg ? "Stable" : "Unstable";
}

std::string map_name(const MapKind& m) {
  std::string s = to_string(m.tag);
  if (m.tag == MapKind::Tag::StandardNonCommutative) s += "/" + to_string(m.ordering.kind);
  return s;
}

// 1. Projector laws
Outcome projector_laws() {
  Outcome o{0.0, 1e-10, {}, true};
  std::mt19937_64 rng(101);
  std::vector<Projector> cases;
  for (int n : {2, 10, 50}) cases.push_back(Projector::uniform_mean_field(n));
  std::uniform_int_distribution<int> size(3, 50);
  while (cases.size() < 23) {
    const int n = size(rng);
    const int k = std::uniform_int_distribution<int>(1, n - 1)(rng);
    Eigen::MatrixXd b(k, n);
    for (int i = 0; i < k; ++i) b.row(i) = uniform_vector(rng, n, 0.0, 1.0).transpose();
    cases.push_back(Projector::gram(b));
  }
  double eig_err = 0.0;
  for (const auto& p : cases) {
    const Eigen::MatrixXd& m = p.matrix();
    o.measured = std::max(o.measured, max_abs(m * m - m));
    for (const auto& z : oracle_eigenvalues(m)) eig_err = std::max(eig_err, std::min(std::abs(z), std::abs(z - 1.0)));
  }
  o.details.push_back("idempotence " + num(o.measured) + " over 3 mean-field + 20 Gram; eigenvalue distance to {0,1} " + num(eig_err) + " (tol 1e-8)");
  o.extra_ok = eig_err <= 1e-8;
  return o;
}

// 2. Mean-field collapse
Outcome mean_field_collapse() {
  Outcome o{0.0, 1e-12, {}, true};
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 30)(rng);
    const Eigen::VectorXd x = uniform_vector(rng, n, -1.0, 1.0);
    const Projector om = Projector::uniform_mean_field(n);
    const Eigen::MatrixXd omx = dense_mean_field(n) * x.asDiagonal();
    const double mean = x.sum() / n;
    for (int k = 1; k <= 6; ++k) {
      const Eigen::MatrixXd lhs = noncommutative_monomial(om, {{x, k}}, Ordering::standard());
      o.measured = std::max(o.measured, max_abs(lhs - std::pow(mean, k - 1) * omx));
    }
    const Eigen::MatrixXd sandwich = om.matrix() * x.asDiagonal() * om.matrix();
    o.measured = std::max(o.measured, max_abs(sandwich - mean * dense_mean_field(n)));
  }
  return o;
}

// 3. Banality / containment
Outcome banality_containment() {
  const IntegrationConfig cfg{0.01, 1000, Method::RungeKutta4, 1};
  Outcome o{0.0, 10 * cfg.dt, {}, true};
  struct Case {
    std::string name;
    TargetSystem sys;
    Eigen::VectorXd x0;
  };
  const std::vector<Case> cases = {{"exp a=-0.5", linear_target(-0.5), Eigen::VectorXd::Constant(1, 1.3)},
                                   {"x-x^2", logistic_target(), Eigen::VectorXd::Constant(1, 0.2)},
                                   {"vxy", potential2d_gradient(), Eigen::Vector2d(0.3, 0.5)}};
  for (const auto& c : cases) {
    const TargetTrajectory ref = integrate_target(c.sys, c.x0, cfg);
    if (c.name.rfind("exp", 0) == 0) {
      double analytic = 0.0;
      for (std::size_t r = 0; r < ref.times.size(); ++r)
        analytic = std::max(analytic, std::abs(ref.states[r](0) - 1.3 * std::exp(-0.5 * ref.times[r])));
      o.details.push_back("exp target vs x0 e^{at}: " + num(analytic));
      o.measured = std::max(o.measured, analytic);
    }
    for (const MapKind& map : {MapKind::commutative(), MapKind::mixed(), MapKind::noncommutative()}) {
      const PedsSystem sys(c.sys, Projector::uniform_mean_field(10), map, std::vector<Decay>(c.sys.dim(), Decay::standard(0.1)));
      const Trajectory tr = integrate(sys, sys.uniform_state(c.x0), cfg);
      double gap = 0.0;
      for (std::size_t r = 0; r < ref.times.size(); ++r) gap = std::max(gap, (tr.projected[r] - ref.states[r]).cwiseAbs().maxCoeff());
      o.details.push_back(c.name + " " + map_name(map) + ": " + num(gap));
      o.measured = std::max(o.measured, gap);
    }
  }
  return o;
}

// 4. Convergence to the mean
Outcome convergence_to_mean() {
  Outcome o{0.0, 0.05, {}, true};
  const IntegrationConfig cfg{0.01, 1000, Method::RungeKutta4, 1};
  std::mt19937_64 rng(404);
  const int n = 20;
  const Projector om = Projector::uniform_mean_field(n);
  for (double alpha : {0.1, 0.5, 2.0}) {
    const PedsSystem sys(logistic_target(), om, MapKind::noncommutative(), {Decay::standard(alpha)});
    Eigen::MatrixXd x0(n, 1);
    x0.col(0) = uniform_vector(rng, n, 0.2, 0.8);
    const Trajectory tr = integrate(sys, x0, cfg);
    // least-squares slope of log ||(I - Omega) X|| against t, from an independent complement
    double st = 0, sl = 0, stt = 0, stl = 0;
    int cnt = 0;
    for (std::size_t r = 0; r < tr.times.size(); ++r) {
      const Eigen::VectorXd c = tr.states[r].col(0).array() - tr.states[r].col(0).mean();
      const double nrm = c.norm();
      if (!(nrm > 1e-250)) break;
      const double t = tr.times[r], l = std::log(nrm);
      st += t, sl += l, stt += t * t, stl += t * l, ++cnt;
    }
    const double slope = (cnt * stl - st * sl) / (cnt * stt - st * st);
    const double rel = std::abs(-slope - alpha) / alpha;
    o.details.push_back("standard alpha=" + num(alpha) + ": rate " + num(-slope) + " rel err " + num(rel));
    o.measured = std::max(o.measured, rel);
  }
  long rises = 0;
  for (int fam = 0; fam < 2; ++fam)
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd d1 = uniform_vector(rng, n, 0.05, 2.0), d2 = uniform_vector(rng, n, 0.05, 2.0);
      const std::vector<Decay> decays = fam == 0 ? std::vector<Decay>{Decay::gen_a(d1), Decay::gen_a(d2)} : std::vector<Decay>{Decay::gen_b(d1), Decay::gen_b(d2)};
      const PedsSystem sys(potential2d_gradient(), om, MapKind::noncommutative(), decays);
      Eigen::MatrixXd x0(n, 2);
      x0.col(0) = uniform_vector(rng, n, -0.5, 0.5);
      x0.col(1) = uniform_vector(rng, n, -1.2, 1.2);
      const Trajectory tr = integrate(sys, x0, {0.01, 500, Method::RungeKutta4, 1});
      double prev = kInf;
      for (const auto& x : tr.states) {
        double v = 0.0;
        for (int i = 0; i < 2; ++i) v += (x.col(i).array() - x.col(i).mean()).matrix().squaredNorm();
        if (v > prev * (1.0 + 1e-12)) ++rises;
        prev = v;
      }
    }
  o.details.push_back("GenA/GenB Lyapunov increases: " + std::to_string(rises) + " over 10 runs");
  o.extra_ok = rises == 0;
  return o;
}

// 5. Jacobian oracle
Outcome jacobian_oracle() {
  Outcome o{0.0, 1e-5, {}, true};
  struct Case {
    std::string name;
    TargetSystem sys;
    std::vector<Eigen::VectorXd> points;
  };
  std::vector<Case> cases;
  {
    std::vector<Eigen::VectorXd> pts;
    for (double x : quartic_critical_points(kSingleMinimumCoeffs)) pts.push_back(Eigen::VectorXd::Constant(1, x));
    for (double x : quartic_critical_points(kFigureCoeffs)) pts.push_back(Eigen::VectorXd::Constant(1, x));
    cases.push_back({"quartic", quartic_gradient(9.85, -10.0, -2.0, 0.0), {pts[0], pts[1]}});
    cases.push_back({"quartic fig4", quartic_gradient(9.85, 10.0, 2.0, -0.395), {pts[2]}});
  }
  cases.push_back({"vxy", potential2d_gradient(), {Eigen::Vector2d(0, -1), Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1)}});
  const std::vector<MapKind> maps = {MapKind::commutative(), MapKind::mixed(), MapKind::noncommutative(Ordering::standard()),
                                     MapKind::noncommutative(Ordering::balanced())};
  int evaluated = 0, failed = 0;
  for (const auto& c : cases)
    for (const auto& map : maps)
      for (int n : {2, 5, 20})
        for (const auto& xs : c.points) {
          const PedsSystem sys(c.sys, Projector::uniform_mean_field(n), map, std::vector<Decay>(c.sys.dim(), Decay::standard(0.3)));
          double gap;
          try {
            const Eigen::MatrixXd fd = peds_jacobian_fd(sys, sys.uniform_state(xs), 1e-5);
            gap = fd.allFinite() ? max_abs(fd - peds_jacobian_closed_form(sys, xs).closed_form) : kInf;
          } catch (const DomainError&) {
            gap = kInf;
          }
          ++evaluated;
          o.measured = std::max(o.measured, gap);
          if (!(gap <= o.tolerance)) {
            ++failed;
            std::ostringstream s;
            s << c.name << " " << map_name(map) << " N=" << n << " at (" << xs.transpose() << "): " << num(gap);
            o.details.push_back(s.str());
          }
        }
  o.details.insert(o.details.begin(), std::to_string(evaluated - failed) + "/" + std::to_string(evaluated) + " cases within tolerance");
  return o;
}

// 6. Spectrum theorem and classification transfer
Outcome spectrum_theorem() {
  Outcome o{0.0, 1e-8, {}, true};
  struct Root {
    std::string name;
    TargetSystem sys;
    Eigen::VectorXd x;
    Eigen::MatrixXd jac;
  };
  std::vector<Root> roots;
  for (const auto& a : {kFigureCoeffs, kSingleMinimumCoeffs})
    for (double x : quartic_critical_points(a))
      roots.push_back({"quartic x=" + num(x), quartic_gradient(a[0], a[1], a[2], a[3]), Eigen::VectorXd::Constant(1, x),
                       Eigen::MatrixXd::Constant(1, 1, -quartic_ddv(a, x))});
  for (double y : {-1.0, 0.0, 1.0}) roots.push_back({"vxy y=" + num(y), potential2d_gradient(), Eigen::Vector2d(0, y), vxy_jacobian(y)});
  long transfers = 0, bad_transfers = 0;
  for (const auto& r : roots)
    for (int n : {2, 5, 20, 50})
      for (double alpha : {0.1, 0.7}) {
        const int m = r.sys.dim();
        const PedsSystem sys(r.sys, Projector::uniform_mean_field(n), MapKind::noncommutative(), std::vector<Decay>(m, Decay::standard(alpha)));
        const JacobianReport rep = peds_jacobian_closed_form(sys, r.x);
        auto expect = oracle_eigenvalues(r.jac);
        const std::string target_class = oracle_class(expect);
        expect.insert(expect.end(), static_cast<std::size_t>(m) * (n - 1), {-alpha, 0.0});
        o.measured = std::max(o.measured, sorted_gap(oracle_eigenvalues(rep.closed_form), expect));
        const std::string want = target_class == "Unstable" ? "Saddle" : target_class;
        ++transfers;
        if (to_string(rep.classification) != want) {
          ++bad_transfers;
          o.details.push_back(r.name + " N=" + std::to_string(n) + ": " + target_class + " -> " + to_string(rep.classification));
        }
      }
  o.details.insert(o.details.begin(), std::to_string(roots.size()) + " roots; classification transfer " +
                                          std::to_string(transfers - bad_transfers) + "/" + std::to_string(transfers));
  o.extra_ok = bad_transfers == 0;
  return o;
}

// 7. Ordering independence
Outcome ordering_independence() {
  Outcome o{0.0, 1e-8, {}, true};
  const ScenarioConfig cfg = default_config("potential2d");
  const Projector om = Projector::uniform_mean_field(cfg.n);
  std::mt19937_64 rng(cfg.seed);
  const Eigen::MatrixXd x0 = gaussian_state(rng, cfg.n, {cfg.mean, cfg.mean_y}, cfg.sigma);
  const IntegrationConfig ic{cfg.dt, cfg.steps, parse_method(cfg.method), 1};
  const std::vector<Decay> decays(2, Decay::standard(cfg.alpha));
  const Trajectory s1 = integrate(PedsSystem(potential2d_gradient(), om, MapKind::noncommutative(Ordering::standard()), decays), x0, ic);
  const Trajectory s2 = integrate(PedsSystem(potential2d_gradient(), om, MapKind::noncommutative(Ordering::balanced()), decays), x0, ic);
  for (std::size_t r = 0; r < s1.states.size(); ++r) o.measured = std::max(o.measured, max_abs(s1.states[r] - s2.states[r]));
  o.details.push_back("S1 vs S2 full-state gap " + num(o.measured) + " over " + std::to_string(s1.states.size()) + " records");

  double fact = 0.0;
  const auto ex = ScalarFunction::exp_of_polynomial({0.0, 0.0, 0.5});
  const auto ey = ScalarFunction::exp_of_polynomial({0.0, 0.0, -0.5, 0.0, 0.25});
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 20;
    const Eigen::MatrixXd omd = dense_mean_field(n);
    const Eigen::VectorXd x = uniform_vector(rng, n, -1.2, 1.2), y = uniform_vector(rng, n, -1.2, 1.2);
    const Eigen::MatrixXd ax = omd * x.asDiagonal(), ay = omd * y.asDiagonal();
    const Eigen::MatrixXd joint = 0.5 * ax * ax - 0.5 * ay * ay + 0.25 * ay * ay * ay * ay;
    const Eigen::VectorXd lhs = joint.exp() * Eigen::VectorXd::Ones(n);
    const Projector om_n = Projector::uniform_mean_field(n);
    const Eigen::VectorXd rhs = matrix_function_sandwich(om_n, x, ex) * (matrix_function_sandwich(om_n, y, ey) * Eigen::VectorXd::Ones(n));
    fact = std::max(fact, (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff()));
  }
  o.details.push_back("exp factorization on 100 states: " + num(fact) + " (tol 1e-10)");
  o.extra_ok = fact <= 1e-10;
  return o;
}

std::vector<double> last_row(const std::string& path) {
  std::ifstream in(path);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line[0] != 't') last = line;
  std::vector<double> out;
  std::stringstream s(last);
  std::string cell;
  while (std::getline(s, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

struct TerminalRows {
  ScenarioResult result;
  std::vector<std::pair<std::string, std::vector<double>>> rows;  // file tag, terminal CSV row

  std::vector<std::vector<double>> tagged(const std::string& tag) const {
    std::vector<std::vector<double>> out;
    for (const auto& [t, r] : rows)
      if (t == tag) out.push_back(r);
    return out;
  }
};

// Runs the scenario to temporary CSVs and collects the terminal row of every file.
TerminalRows run_to_files(ScenarioConfig cfg) {
  const auto dir = std::filesystem::temp_directory_path() / ("peds_acceptance_" + cfg.name);
  std::filesystem::create_directories(dir);
  cfg.output = (dir / "run.csv").string();
  TerminalRows out;
  out.result = run_scenario(cfg);
  for (const auto& f : out.result.files) {
    std::string tag;
    for (const char* t : {"uncoupled", "commutative", "joint"})
      if (std::filesystem::path(f).filename().string().find(std::string("_") + t) != std::string::npos) tag = t;
    out.rows.emplace_back(tag, last_row(f));
  }
  std::filesystem::remove_all(dir);
  return out;
}

// 8. Scenario outcomes
Outcome scenario_outcomes() {
  Outcome o{0.0, 0.0, {}, true};
  bool all_ok = true;
  auto report = [&](const std::string& name, double measured, double tol, const std::string& extra) {
    const bool ok = measured <= tol;
    all_ok = all_ok && ok;
    o.details.push_back(name + (ok ? " PASS" : " FAIL") + " measured=" + num(measured) + " tol=" + num(tol) + (extra.empty() ? "" : " " + extra));
  };

  {
    const ScenarioConfig cfg = default_config("quartic1d");
    const TerminalRows run = run_to_files(cfg);
    const auto peds_rows = run.tagged(""), ref_rows = run.tagged("uncoupled");
    const auto xmin = quartic_global_minimum(cfg.coeffs);
    double worst = xmin ? 0.0 : kInf;
    if (static_cast<int>(peds_rows.size()) != cfg.ensemble_size) worst = kInf;
    for (const auto& r : peds_rows) worst = std::max(worst, xmin ? std::abs(r[1] - *xmin) : kInf);
    const auto minima = quartic_local_minima(cfg.coeffs);
    std::vector<int> hits(minima.size(), 0);
    for (const auto& r : ref_rows)
      for (std::size_t k = 0; k < minima.size(); ++k)
        if (std::abs(r[1] - minima[k]) <= 1e-3) ++hits[k];
    const long basins = std::count_if(hits.begin(), hits.end(), [](int h) { return h > 0; });
    report("quartic1d global_minimum", worst, 1e-3,
           std::to_string(peds_rows.size()) + "/" + std::to_string(cfg.ensemble_size) + " members finished, " +
               std::to_string(run.result.divergences.size()) + " divergences (PEDS and uncoupled), " + std::to_string(minima.size()) + " local minima of V");
    report("quartic1d uncoupled_split", basins >= 2 ? 0.0 : 2.0 - basins, 0.0, std::to_string(basins) + " basins reached");
  }
  {
    const auto rows = run_to_files(default_config("potential2d")).tagged("");
    double gx = rows.empty() ? kInf : 0.0, gy = gx;
    for (const auto& r : rows) {
      gx = std::max(gx, std::abs(r[1]));
      gy = std::max(gy, std::abs(std::abs(r[2]) - 1.0));
    }
    report("potential2d terminal_x", gx, 1e-3, "");
    report("potential2d terminal_y", gy, 1e-3, "");
  }
  {
    const auto rows = run_to_files(default_config("hamiltonian")).tagged("");
    double gp = rows.empty() ? kInf : 0.0;
    for (const auto& r : rows) gp = std::max(gp, std::abs(r[2]));
    report("hamiltonian terminal_p", gp, 1e-3, "");
  }
  {
    const ScenarioConfig cfg = default_config("random_projector");
    const auto rows = run_to_files(cfg).tagged("");
    const auto minima = quartic_local_minima(cfg.coeffs);
    double g = rows.empty() || minima.size() != 1 ? kInf : 0.0;
    for (const auto& r : rows) g = std::max(g, std::abs(r[1] - minima.front()));
    report("random_projector terminal_x", g, 1e-2, minima.size() == 1 ? "local minimum " + num(minima.front()) : "no single minimum");
  }
  {
    const ScenarioConfig cfg = default_config("memristor");
    const auto rows = run_to_files(cfg).tagged("");
    const double s = cfg.voltage / (cfg.alpha * cfg.beta);
    const double xstar = (1.0 - std::sqrt(1.0 - 4.0 * cfg.chi * s)) / (2.0 * cfg.chi);
    double g = rows.empty() ? kInf : 0.0;
    for (const auto& r : rows) g = std::max(g, std::abs(r[1] - xstar));
    report("memristor terminal_mean", g, 1e-4, "stationary point " + num(xstar));
  }
  o.measured = all_ok ? 0.0 : 1.0;
  o.extra_ok = all_ok;
  return o;
}

// 9. Similarity-transform evaluator
Outcome similarity_evaluator() {
  Outcome o{0.0, 1e-10, {}, true};
  std::mt19937_64 rng(909);
  double exp_gap = 0.0, imag = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 25;
    const int k = std::uniform_int_distribution<int>(1, n - 1)(rng);
    Eigen::MatrixXd b(k, n);
    for (int i = 0; i < k; ++i) b.row(i) = uniform_vector(rng, n, 0.0, 1.0).transpose();
    for (const Projector& om : {Projector::uniform_mean_field(n), Projector::gram(b)}) {
      const Eigen::VectorXd x = uniform_vector(rng, n, 0.1, 2.0);
      const Eigen::MatrixXd a = om.matrix() * x.asDiagonal();
      o.measured = std::max(o.measured, max_abs(matrix_function_eval(om, x, ScalarFunction::power(2)) - a * a));
      o.measured = std::max(o.measured, max_abs(matrix_function_eval(om, x, ScalarFunction::power(3)) - a * a * a));
      Eigen::MatrixXd series = Eigen::MatrixXd::Identity(n, n), term = series;
      for (int j = 1; j < 30; ++j) {
        term = term * a / j;
        series += term;
      }
      exp_gap = std::max(exp_gap, max_abs(matrix_function_eval(om, x, ScalarFunction::exp_of_polynomial({0.0, 1.0})) - series));
      const Eigen::VectorXd r = x.cwiseSqrt();
      for (const auto& z : oracle_eigenvalues(r.asDiagonal() * om.matrix() * r.asDiagonal())) imag = std::max(imag, std::abs(z.imag()));
    }
  }
  o.details.push_back("exp vs 30-term Taylor " + num(exp_gap) + " (tol 1e-9); max |Im| of sqrt(X) Omega sqrt(X) spectrum " + num(imag) + " (tol 1e-10)");
  o.extra_ok = exp_gap <= 1e-9 && imag <= 1e-10;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "projector_laws", 1.0, projector_laws},
      {2, "mean_field_collapse", 1.0, mean_field_collapse},
      {3, "banality_containment", 10.0, banality_containment},
      {4, "convergence_to_mean", 5.0, convergence_to_mean},
      {5, "jacobian_oracle", 30.0, jacobian_oracle},
      {6, "spectrum_theorem", 10.0, spectrum_theorem},
      {7, "ordering_independence", 20.0, ordering_independence},
      {8, "scenario_outcomes", 180.0, scenario_outcomes},
      {9, "similarity_evaluator", 2.0, similarity_evaluator},
  };
  bool all = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    std::string error;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      error = e.what();
      out.measured = kInf;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = error.empty() && out.measured <= out.tolerance && out.extra_ok && secs < c.limit_seconds;
    all = all && pass;
    std::cout << "CRITERION " << c.id << ' ' << c.title << ' ' << (pass ? "PASS" : "FAIL") << " measured=" << num(out.measured)
              << " tol=" << num(out.tolerance) << " runtime=" << num(secs) << "s limit=" << num(c.limit_seconds) << "s\n";
    if (!error.empty()) std::cout << "  error: " << error << '\n';
    for (const auto& d : out.details) std::cout << "  " << d << '\n';
  }
  return all ? 0 : 1;
}
