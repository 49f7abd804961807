#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "peds/embedding.hpp"

namespace peds {

enum class Method { ExplicitEuler, RungeKutta4 };

std::string to_string(Method m);
Method parse_method(const std::string& text);

struct IntegrationConfig {
  double dt = 0.01;
  long steps = 1000;
  Method method = Method::RungeKutta4;
  long record_stride = 1;
};

inline constexpr double kDivergenceBound = 1e12;

struct Trajectory {
  std::vector<double> times;
  std::vector<ExtendedState> states;
  std::vector<Eigen::VectorXd> projected;
};

struct TargetTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
};

using RhsFunction = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

/// One fixed step of the chosen scheme.
Eigen::MatrixXd step(const RhsFunction& rhs, const Eigen::MatrixXd& x, double dt, Method method);

/// Fixed-step integration of an arbitrary right-hand side; x~ is recorded against omega.
Trajectory integrate(const RhsFunction& rhs, const Projector& omega, const ExtendedState& x0, const IntegrationConfig& cfg);
Trajectory integrate(const PedsSystem& sys, const ExtendedState& x0, const IntegrationConfig& cfg);

/// Same scheme applied to the m-dimensional target.
TargetTrajectory integrate_target(const TargetSystem& sys, const Eigen::VectorXd& x0, const IntegrationConfig& cfg);

/// ||(I - Omega) X_i(t)||_2 per recorded time.
std::vector<Eigen::VectorXd> complement_norms(const Trajectory& traj, const Projector& omega);

/// Header `t, xtilde_1..xtilde_m, comp_norm_1..comp_norm_m[, X_i_k...]` preceded by a `#` provenance line.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Projector& omega,
                          const std::string& provenance, bool full_state = false);

}  // namespace peds
