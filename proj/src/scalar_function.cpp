#include "peds/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "peds/error.hpp"

namespace peds {

namespace {

double horner(const std::vector<double>& c, double x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t k = std::min(len, c.size()); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

double horner_derivative(const std::vector<double>& c, double x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t k = std::min(len, c.size()); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

constexpr std::size_t kAll = static_cast<std::size_t>(-1);

void require_finite(const std::vector<double>& p, const char* what) {
  for (double v : p)
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite parameter");
}

}  // namespace

ScalarFunction ScalarFunction::power(int p) {
  if (p < 0) throw DomainError("power: exponent must be non-negative");
  return ScalarFunction(Tag::Power, {}, p);
}

ScalarFunction ScalarFunction::exp_of_polynomial(std::vector<double> q) {
  require_finite(q, "exp_of_polynomial");
  if (q.empty()) q.push_back(0.0);
  return ScalarFunction(Tag::ExpOfPolynomial, std::move(q), 0);
}

ScalarFunction ScalarFunction::exp_of_quadratic(double c2, double c1) {
  return exp_of_polynomial({0.0, c1, c2});
}

ScalarFunction ScalarFunction::reciprocal_affine(double c0, double c1) {
  require_finite({c0, c1}, "reciprocal_affine");
  if (c0 == 0.0 && c1 == 0.0) throw DomainError("reciprocal_affine: identically singular");
  return ScalarFunction(Tag::ReciprocalAffine, {c0, c1}, 0);
}

ScalarFunction ScalarFunction::log_affine(double c0, double c1) {
  require_finite({c0, c1}, "log_affine");
  if (c0 == 0.0 && c1 == 0.0) throw DomainError("log_affine: identically singular");
  return ScalarFunction(Tag::LogAffine, {c0, c1}, 0);
}

ScalarFunction ScalarFunction::series(std::vector<double> c, int order) {
  require_finite(c, "series");
  if (order < 0) throw DomainError("series: negative truncation order");
  if (c.empty()) c.push_back(0.0);
  return ScalarFunction(Tag::Series, std::move(c), order);
}

double ScalarFunction::value(double x) const {
  switch (tag_) {
    case Tag::Power: return exponent_ == 0 ? 1.0 : std::pow(x, exponent_);
    case Tag::ExpOfPolynomial: return std::exp(horner(params_, x, kAll));
    case Tag::ReciprocalAffine: {
      const double d = params_[0] + params_[1] * x;
      if (d == 0.0) {
        std::ostringstream msg;
        msg << "reciprocal_affine: pole at x=" << x;
        throw DomainError(msg.str());
      }
      return 1.0 / d;
    }
    case Tag::LogAffine: {
      const double d = params_[0] + params_[1] * x;
      if (!(d > 0.0)) {
        std::ostringstream msg;
        msg << "log_affine: non-positive argument at x=" << x;
        throw DomainError(msg.str());
      }
      return std::log(d);
    }
    case Tag::Series: return horner(params_, x, static_cast<std::size_t>(exponent_) + 1);
  }
  return 0.0;
}

double ScalarFunction::derivative(double x) const {
  switch (tag_) {
    case Tag::Power: return exponent_ == 0 ? 0.0 : exponent_ * std::pow(x, exponent_ - 1);
    case Tag::ExpOfPolynomial: return horner_derivative(params_, x, kAll) * std::exp(horner(params_, x, kAll));
    case Tag::ReciprocalAffine: {
      const double r = value(x);
      return -params_[1] * r * r;
    }
    case Tag::LogAffine: {
      value(x);
      return params_[1] / (params_[0] + params_[1] * x);
    }
    case Tag::Series: return horner_derivative(params_, x, static_cast<std::size_t>(exponent_) + 1);
  }
  return 0.0;
}

bool ScalarFunction::analytic_at_zero() const {
  switch (tag_) {
    case Tag::ReciprocalAffine: return params_[0] != 0.0;
    case Tag::LogAffine: return params_[0] > 0.0;
    default: return true;
  }
}

double ScalarFunction::convergence_radius() const {
  switch (tag_) {
    case Tag::ReciprocalAffine:
    case Tag::LogAffine:
      if (params_[1] == 0.0) return std::numeric_limits<double>::infinity();
      return std::abs(params_[0] / params_[1]);
    default: return std::numeric_limits<double>::infinity();
  }
}

TaylorExpansion ScalarFunction::taylor(int order, double radius) const {
  if (order < 0) throw DomainError("taylor: negative order");
  if (!analytic_at_zero()) throw DomainError("taylor: " + describe() + " is not analytic at 0");
  const int extra = 10;
  const int full = order + extra;
  std::vector<double> c(full + 1, 0.0);
  switch (tag_) {
    case Tag::Power:
      if (exponent_ <= full) c[exponent_] = 1.0;
      break;
    case Tag::ExpOfPolynomial: {
      // b_n = (1/n) sum_k k q_k b_{n-k}
      c[0] = std::exp(params_[0]);
      for (int n = 1; n <= full; ++n) {
        double acc = 0.0;
        for (int k = 1; k <= n && k < static_cast<int>(params_.size()); ++k) acc += k * params_[k] * c[n - k];
        c[n] = acc / n;
      }
      break;
    }
    case Tag::ReciprocalAffine: {
      const double r = -params_[1] / params_[0];
      double t = 1.0 / params_[0];
      for (int n = 0; n <= full; ++n, t *= r) c[n] = t;
      break;
    }
    case Tag::LogAffine: {
      const double r = params_[1] / params_[0];
      c[0] = std::log(params_[0]);
      double t = r;
      for (int n = 1; n <= full; ++n, t *= -r) c[n] = t / n;
      break;
    }
    case Tag::Series: {
      const int keep = std::min<int>(exponent_, static_cast<int>(params_.size()) - 1);
      for (int n = 0; n <= std::min(keep, full); ++n) c[n] = params_[n];
      // terms beyond the truncation order count toward the remainder
      for (int n = keep + 1; n < static_cast<int>(params_.size()) && n <= full; ++n) c[n] = params_[n];
      break;
    }
  }
  TaylorExpansion out;
  int cut = order;
  if (tag_ == Tag::Series) cut = std::min(order, exponent_);
  out.coeffs.assign(c.begin(), c.begin() + cut + 1);
  double rem = 0.0;
  double rp = std::pow(radius, cut + 1);
  for (int n = cut + 1; n <= full; ++n, rp *= radius) rem += std::abs(c[n]) * rp;
  if (tag_ == Tag::Series) {
    for (int n = full + 1; n < static_cast<int>(params_.size()); ++n) rem += std::abs(params_[n]) * std::pow(radius, n);
  }
  out.remainder_estimate = rem;
  return out;
}

std::string ScalarFunction::describe() const {
  std::ostringstream s;
  switch (tag_) {
    case Tag::Power: s << "power(" << exponent_ << ")"; break;
    case Tag::ExpOfPolynomial:
      s << "exp_of_polynomial(";
      for (std::size_t i = 0; i < params_.size(); ++i) s << (i ? "," : "") << params_[i];
      s << ")";
      break;
    case Tag::ReciprocalAffine: s << "reciprocal_affine(" << params_[0] << "," << params_[1] << ")"; break;
    case Tag::LogAffine: s << "log_affine(" << params_[0] << "," << params_[1] << ")"; break;
    case Tag::Series:
      s << "series[" << exponent_ << "](";
      for (std::size_t i = 0; i < params_.size(); ++i) s << (i ? "," : "") << params_[i];
      s << ")";
      break;
  }
  return s.str();
}

}  // namespace peds
