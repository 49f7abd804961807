#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "peds/embedding.hpp"
#include "peds/integrator.hpp"

namespace peds {

enum class Stability { Stable, Saddle, Unstable, Marginal };
std::string to_string(Stability s);

inline constexpr double kFixedPointTolerance = 1e-9;
inline constexpr double kClassificationTolerance = 1e-8;

struct FixedPointReport {
  enum class Source { NewtonOnTarget, TrajectoryLimit };
  Eigen::VectorXd x_star;
  double residual = 0.0;
  Source source = Source::NewtonOnTarget;
};

struct FixedPointSearch {
  std::vector<FixedPointReport> roots;
  std::vector<std::string> notes;  // seeds that were dropped and why
};

struct JacobianReport {
  Eigen::MatrixXd closed_form;
  std::vector<std::complex<double>> eigenvalues;
  Stability classification = Stability::Marginal;
  std::vector<std::complex<double>> target_eigenvalues;
  Stability target_classification = Stability::Marginal;
};

/// Damped Newton on f from each seed; roots deduplicated within 1e-6 in the max norm.
FixedPointSearch find_fixed_points(const TargetSystem& sys, const std::vector<Eigen::VectorXd>& seeds);

/// Block matrix with blocks f'_ij(x*) Omega_1 - delta_ij Q_i, Q_i the positive decay operator.
JacobianReport peds_jacobian_closed_form(const PedsSystem& sys, const Eigen::VectorXd& x_star);

/// Central differences of the rhs; columns follow the column-major flattening of the N x m state.
Eigen::MatrixXd peds_jacobian_fd(const PedsSystem& sys, const ExtendedState& state, double h);
Eigen::MatrixXd peds_jacobian_fd(const RhsFunction& rhs, const ExtendedState& state, double h);

Stability classify_equilibrium(const std::vector<std::complex<double>>& eigs, double tol = kClassificationTolerance);

/// Eigenvalues with the symmetric fast path when m is symmetric to 1e-12.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m);

/// Sorts by (real, imag) and pairs entries; returns the largest pair distance (inf on size mismatch).
double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b);

struct Disc {
  double center = 0.0;
  double radius = 0.0;
  bool contains(std::complex<double> z, double slack = 1e-10) const { return std::abs(z - center) <= radius + slack; }
};

/// Row discs of the GenA Jacobian for m = 1 and Omega_1.
std::vector<Disc> gerschgorin_bounds(const PedsSystem& sys, const Eigen::VectorXd& x_star);

/// Real roots of c_0 + c_1 x + ... + c_d x^d through the companion matrix.
std::vector<double> polynomial_real_roots(const std::vector<double>& c, double imag_tol = 1e-9);

void write_eigenvalues_csv(std::ostream& out, const JacobianReport& report);

}  // namespace peds
