#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "peds/config.hpp"
#include "peds/embedding.hpp"
#include "peds/integrator.hpp"
#include "peds/report.hpp"

namespace peds {

struct DivergenceInfo {
  std::string run;
  long step = 0;
  double time = 0.0;
};

struct ScenarioResult {
  std::string name;
  std::vector<PropertyCheck> checks;
  std::vector<std::string> summary;
  std::vector<std::string> files;
  std::vector<DivergenceInfo> divergences;
  std::map<std::string, double> metrics;

  /// 3 on divergence, 2 on a failed check, 0 otherwise.
  int exit_code() const;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Build identifier baked in at configure time.
std::string build_version();

/// `seed=.. N=.. alpha=.. dt=.. map=.. ordering=.. method=.. version=..`
std::string provenance(const ScenarioConfig& cfg);

MapKind make_map(const ScenarioConfig& cfg);

/// N x means.size() state, column i drawn from N(means[i], sigma^2), column by column.
Eigen::MatrixXd gaussian_state(std::mt19937_64& rng, int n, const std::vector<double>& means, double sigma);

/// Gram projector of a K x N uniform [0,1] matrix; a singular draw is retried with seed+1, up to 5 draws.
Projector random_gram_projector(int k, int n, std::uint64_t seed, int* draws = nullptr);

/// Joint-exponent form of the 2D gradient embedding:
/// F_x = -A_x V, F_y = (A_y - A_y^3) V, V = exp(A_x^2/2 - A_y^2/2 + A_y^4/4), A = Omega X.
RhsFunction potential2d_joint_rhs(const Projector& omega, double alpha);

/// dx/dt = Omega(beta^-1 (I - chi Omega X)^-1 Omega S - alpha x) - alpha (I - Omega) x, S = voltage * 1.
RhsFunction memristor_network_rhs(const Projector& omega, double chi, double alpha, double beta, double voltage);

struct JacobianSetup {
  PedsSystem system;
  std::vector<Eigen::VectorXd> fixed_points;
};

/// System and target fixed points used by the `jacobian` verb; ScopeError when the scenario
/// has no mean-field embedding.
JacobianSetup jacobian_setup(const ScenarioConfig& cfg);

}  // namespace peds
