#include "peds/integrator.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "peds/error.hpp"

namespace peds {

std::string to_string(Method m) {
  return m == Method::ExplicitEuler ? "euler" : "rk4";
}

Method parse_method(const std::string& text) {
  if (text == "euler" || text == "explicit_euler") return Method::ExplicitEuler;
  if (text == "rk4" || text == "runge_kutta4") return Method::RungeKutta4;
  throw ConfigError("unknown integration method '" + text + "'");
}

namespace {

void check_config(const IntegrationConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw DomainError("integration: dt must be positive");
  if (cfg.steps < 1) throw DomainError("integration: steps must be at least 1");
  if (cfg.record_stride < 1) throw DomainError("integration: record_stride must be at least 1");
}

bool in_bounds(const Eigen::MatrixXd& x) {
  return x.allFinite() && x.cwiseAbs().maxCoeff() <= kDivergenceBound;
}

template <typename F, typename S>
S rk_step(const F& f, const S& x, double dt, Method method) {
  if (method == Method::ExplicitEuler) return x + dt * f(x);
  const S k1 = f(x);
  const S k2 = f(x + 0.5 * dt * k1);
  const S k3 = f(x + 0.5 * dt * k2);
  const S k4 = f(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Eigen::MatrixXd step(const RhsFunction& rhs, const Eigen::MatrixXd& x, double dt, Method method) {
  return rk_step(rhs, x, dt, method);
}

Trajectory integrate(const RhsFunction& rhs, const Projector& omega, const ExtendedState& x0, const IntegrationConfig& cfg) {
  check_config(cfg);
  if (x0.rows() != omega.dim()) throw DimensionError("integrate: state has " + std::to_string(x0.rows()) + " rows, projector N=" + std::to_string(omega.dim()));
  if (!in_bounds(x0)) throw DivergenceError(0, 0.0);
  Trajectory traj;
  const std::size_t records = static_cast<std::size_t>(cfg.steps / cfg.record_stride) + 2;
  traj.times.reserve(records);
  traj.states.reserve(records);
  traj.projected.reserve(records);
  auto record = [&](double t, const ExtendedState& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.projected.push_back(projected_observable(omega, x));
  };
  ExtendedState x = x0;
  record(0.0, x);
  for (long s = 1; s <= cfg.steps; ++s) {
    x = rk_step(rhs, x, cfg.dt, cfg.method);
    const double t = s * cfg.dt;
    if (!in_bounds(x)) throw DivergenceError(s, t);
    if (s % cfg.record_stride == 0 || s == cfg.steps) record(t, x);
  }
  return traj;
}

Trajectory integrate(const PedsSystem& sys, const ExtendedState& x0, const IntegrationConfig& cfg) {
  if (x0.rows() != sys.n() || x0.cols() != sys.m()) throw DimensionError("integrate: initial state does not match the system");
  return integrate([&sys](const Eigen::MatrixXd& x) { return sys.rhs(x); }, sys.omega(), x0, cfg);
}

TargetTrajectory integrate_target(const TargetSystem& sys, const Eigen::VectorXd& x0, const IntegrationConfig& cfg) {
  check_config(cfg);
  if (x0.size() != sys.dim()) throw DimensionError("integrate_target: initial state length must equal m");
  if (!in_bounds(x0)) throw DivergenceError(0, 0.0);
  auto f = [&sys](const Eigen::VectorXd& x) -> Eigen::VectorXd { return sys.eval(x); };
  TargetTrajectory traj;
  Eigen::VectorXd x = x0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  for (long s = 1; s <= cfg.steps; ++s) {
    x = rk_step(f, x, cfg.dt, cfg.method);
    const double t = s * cfg.dt;
    if (!in_bounds(x)) throw DivergenceError(s, t);
    if (s % cfg.record_stride == 0 || s == cfg.steps) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

std::vector<Eigen::VectorXd> complement_norms(const Trajectory& traj, const Projector& omega) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(traj.states.size());
  for (const auto& x : traj.states) {
    Eigen::VectorXd norms(x.cols());
    for (Eigen::Index i = 0; i < x.cols(); ++i) norms(i) = complement_project(omega, x.col(i)).norm();
    out.push_back(std::move(norms));
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Projector& omega,
                          const std::string& provenance, bool full_state) {
  out << "# " << provenance << '\n';
  if (traj.states.empty()) return;
  const Eigen::Index m = traj.states.front().cols();
  const Eigen::Index n = traj.states.front().rows();
  out << "t";
  for (Eigen::Index i = 1; i <= m; ++i) out << ",xtilde_" << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",comp_norm_" << i;
  if (full_state)
    for (Eigen::Index i = 1; i <= m; ++i)
      for (Eigen::Index k = 1; k <= n; ++k) out << ",X_" << i << '_' << k;
  out << '\n';
  const auto norms = complement_norms(traj, omega);
  out << std::setprecision(12);
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    out << traj.times[r];
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << traj.projected[r](i);
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << norms[r](i);
    if (full_state)
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index k = 0; k < n; ++k) out << ',' << traj.states[r](k, i);
    out << '\n';
  }
}

}  // namespace peds
