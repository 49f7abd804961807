#pragma once

#include <Eigen/Dense>

#include "peds/projector.hpp"
#include "peds/scalar_function.hpp"

namespace peds {

/// F(Omega X) = sqrt(X)^-1 P f(Sigma) P^t sqrt(X), where sqrt(X) Omega sqrt(X) = P Sigma P^t.
/// Requires a symmetric Omega and strictly positive x.
Eigen::MatrixXd matrix_function_eval(const Projector& omega, const Eigen::VectorXd& x, const ScalarFunction& f);

/// F(Omega X) = f(0) I + h(Omega X Omega) Omega X with h(s) = (f(s) - f(0)) / s.
/// Exact for any sign pattern of x; requires a symmetric Omega and f analytic at 0.
Eigen::MatrixXd matrix_function_sandwich(const Projector& omega, const Eigen::VectorXd& x, const ScalarFunction& f);

/// Largest |Im(lambda)| over the spectrum of sqrt(X) Omega sqrt(X), computed with the general eigensolver.
double similarity_spectrum_imag(const Projector& omega, const Eigen::VectorXd& x);

/// (f(s) - f(0)) / s, continued by f'(0) at s = 0.
double divided_difference_at_zero(const ScalarFunction& f, double s);

/// Applies f(Omega X) to vectors using one eigendecomposition of Omega X Omega.
class ProjectedSpectrum {
 public:
  ProjectedSpectrum(const Projector& omega, const Eigen::VectorXd& x);

  /// (Omega X) u
  Eigen::VectorXd multiply(const Eigen::VectorXd& u) const;
  /// f(Omega X) u
  Eigen::VectorXd apply(const ScalarFunction& f, const Eigen::VectorXd& u) const;

 private:
  void decompose() const;

  const Projector* omega_;
  Eigen::VectorXd x_;
  mutable bool ready_ = false;
  mutable Eigen::VectorXd evals_;
  mutable Eigen::MatrixXd evecs_;
};

}  // namespace peds
