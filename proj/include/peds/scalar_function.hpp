#pragma once

#include <string>
#include <vector>

namespace peds {

struct TaylorExpansion {
  std::vector<double> coeffs;     // c_0 .. c_order about 0
  double remainder_estimate = 0;  // sum of the next omitted terms at the requested radius
};

/// Scalar analytic function of one variable, identified by a closed-form tag.
class ScalarFunction {
 public:
  enum class Tag { Power, ExpOfPolynomial, ReciprocalAffine, LogAffine, Series };

  /// x^p, p a non-negative integer.
  static ScalarFunction power(int p);
  /// exp(q_0 + q_1 x + q_2 x^2 + ...)
  static ScalarFunction exp_of_polynomial(std::vector<double> q);
  /// exp(c2 x^2 + c1 x)
  static ScalarFunction exp_of_quadratic(double c2, double c1);
  /// 1 / (c0 + c1 x)
  static ScalarFunction reciprocal_affine(double c0, double c1);
  /// log(c0 + c1 x)
  static ScalarFunction log_affine(double c0, double c1);
  /// sum_k c_k x^k, truncated at `order` when expanded.
  static ScalarFunction series(std::vector<double> c, int order = 20);

  Tag tag() const { return tag_; }
  const std::vector<double>& params() const { return params_; }
  int exponent() const { return exponent_; }

  double value(double x) const;
  double derivative(double x) const;

  /// Taylor coefficients about 0; throws DomainError when 0 is outside the domain.
  TaylorExpansion taylor(int order, double radius = 1.0) const;
  /// Radius of convergence of the series about 0 (infinity for entire functions).
  double convergence_radius() const;
  /// True when the value at 0 is defined.
  bool analytic_at_zero() const;
  /// True for Power and Series, which the maps evaluate through exact matrix products.
  bool polynomial() const { return tag_ == Tag::Power || tag_ == Tag::Series; }

  std::string describe() const;

 private:
  ScalarFunction(Tag tag, std::vector<double> params, int exponent) : tag_(tag), params_(std::move(params)), exponent_(exponent) {}

  Tag tag_;
  std::vector<double> params_;
  int exponent_ = 0;  // Power exponent or Series truncation order
};

}  // namespace peds
