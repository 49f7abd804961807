#include "peds/matrix_function.hpp"

#include <cmath>

#include "peds/error.hpp"

namespace peds {

namespace {

void require_symmetric(const Projector& omega, const char* what) {
  if (!omega.symmetric()) throw PreconditionError(std::string(what) + ": projector must be symmetric");
}

void require_length(const Projector& omega, const Eigen::VectorXd& x, const char* what) {
  if (x.size() != omega.dim()) throw DimensionError(std::string(what) + ": diagonal length " + std::to_string(x.size()) + " vs N=" + std::to_string(omega.dim()));
}

Eigen::VectorXd apply_polynomial(const ScalarFunction& f, const ProjectedSpectrum& ps, const Eigen::VectorXd& u) {
  if (f.tag() == ScalarFunction::Tag::Power) {
    Eigen::VectorXd v = u;
    for (int k = 0; k < f.exponent(); ++k) v = ps.multiply(v);
    return v;
  }
  // Horner in the matrix argument
  const auto& c = f.params();
  const int top = std::min<int>(f.exponent(), static_cast<int>(c.size()) - 1);
  Eigen::VectorXd acc = c[top] * u;
  for (int k = top - 1; k >= 0; --k) acc = ps.multiply(acc) + c[k] * u;
  return acc;
}

}  // namespace

Eigen::MatrixXd matrix_function_eval(const Projector& omega, const Eigen::VectorXd& x, const ScalarFunction& f) {
  require_length(omega, x, "matrix_function_eval");
  require_symmetric(omega, "matrix_function_eval");
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (!(x(k) > 0.0)) throw DomainError("matrix_function_eval: diagonal entry " + std::to_string(k) + " = " + std::to_string(x(k)) + " is not positive");

  const Eigen::VectorXd r = x.cwiseSqrt();
  const Eigen::MatrixXd m = r.asDiagonal() * omega.matrix() * r.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericError("matrix_function_eval: eigensolver failed");
  Eigen::VectorXd fs(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) fs(k) = f.value(es.eigenvalues()(k));
  const Eigen::MatrixXd& p = es.eigenvectors();
  return r.cwiseInverse().asDiagonal() * (p * fs.asDiagonal() * p.transpose()) * r.asDiagonal();
}

Eigen::MatrixXd matrix_function_sandwich(const Projector& omega, const Eigen::VectorXd& x, const ScalarFunction& f) {
  require_length(omega, x, "matrix_function_sandwich");
  const ProjectedSpectrum ps(omega, x);
  const Eigen::Index n = x.size();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) out.col(j) = ps.apply(f, Eigen::VectorXd::Unit(n, j));
  return out;
}

double similarity_spectrum_imag(const Projector& omega, const Eigen::VectorXd& x) {
  require_length(omega, x, "similarity_spectrum_imag");
  const Eigen::VectorXd r = x.cwiseAbs().cwiseSqrt();
  const Eigen::MatrixXd m = r.asDiagonal() * omega.matrix() * r.asDiagonal();
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericError("similarity_spectrum_imag: eigensolver failed");
  return es.eigenvalues().imag().cwiseAbs().maxCoeff();
}

double divided_difference_at_zero(const ScalarFunction& f, double s) {
  const double radius = f.convergence_radius();
  const double small = std::min(1e-3, 1e-3 * radius);
  if (std::abs(s) < small) {
    // series of (f(s) - f(0))/s
    const TaylorExpansion t = f.taylor(30);
    double acc = 0.0;
    for (std::size_t k = t.coeffs.size(); k-- > 1;) acc = acc * s + t.coeffs[k];
    return acc;
  }
  return (f.value(s) - f.value(0.0)) / s;
}

ProjectedSpectrum::ProjectedSpectrum(const Projector& omega, const Eigen::VectorXd& x) : omega_(&omega), x_(x) {
  require_length(omega, x, "ProjectedSpectrum");
}

Eigen::VectorXd ProjectedSpectrum::multiply(const Eigen::VectorXd& u) const {
  return omega_->apply(x_.cwiseProduct(u));
}

void ProjectedSpectrum::decompose() const {
  if (ready_) return;
  require_symmetric(*omega_, "matrix function");
  const Eigen::MatrixXd& om = omega_->matrix();
  Eigen::MatrixXd s = om * x_.asDiagonal() * om;
  s = (0.5 * (s + s.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw NumericError("matrix function: eigensolver failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  ready_ = true;
}

Eigen::VectorXd ProjectedSpectrum::apply(const ScalarFunction& f, const Eigen::VectorXd& u) const {
  if (f.polynomial()) return apply_polynomial(f, *this, u);
  if (!f.analytic_at_zero()) return matrix_function_eval(*omega_, x_, f) * u;
  decompose();
  Eigen::VectorXd h(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k) h(k) = divided_difference_at_zero(f, evals_(k));
  const Eigen::VectorXd w = multiply(u);
  return f.value(0.0) * u + evecs_ * h.cwiseProduct(evecs_.transpose() * w);
}

}  // namespace peds
