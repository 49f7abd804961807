#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "peds/scalar_function.hpp"

namespace peds {

/// coefficient * x_0^e_0 * ... * x_{m-1}^e_{m-1}
struct MonomialTerm {
  double coefficient = 0.0;
  std::vector<int> exponents;
};

struct Factor {
  int variable = 0;
  ScalarFunction function;
};

/// coefficient * prod_k f_k(x_{v_k}); a variable may carry several factors.
struct FactorTerm {
  double coefficient = 0.0;
  std::vector<Factor> factors;
};

using Term = std::variant<MonomialTerm, FactorTerm>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// dx_i/dt = f_i(x), each f_i a sum of monomial and factorized analytic terms.
class TargetSystem {
 public:
  explicit TargetSystem(int m);

  TargetSystem& add(int equation, Term term);
  TargetSystem& add_monomial(int equation, double coefficient, std::vector<int> exponents);
  TargetSystem& add_factor_term(int equation, double coefficient, std::vector<Factor> factors);
  TargetSystem& set_domain(int variable, Interval interval);

  int dim() const { return m_; }
  const std::vector<Term>& terms(int equation) const { return equations_.at(equation); }
  std::optional<Interval> domain(int variable) const;

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

 private:
  void check_domain(const Eigen::VectorXd& x) const;

  int m_;
  std::vector<std::vector<Term>> equations_;
  std::vector<std::optional<Interval>> domains_;
};

Eigen::VectorXd eval_scalar(const TargetSystem& sys, const Eigen::VectorXd& x);
Eigen::MatrixXd jacobian_scalar(const TargetSystem& sys, const Eigen::VectorXd& x);

/// Variables that appear in a term with positive degree or a factor, in increasing index order.
std::vector<int> active_variables(const Term& term, int m);

// ---- orderings ----

enum class OrderingKind { Standard, Balanced, Weighted };

using Permutation = std::vector<int>;

struct Ordering {
  OrderingKind kind = OrderingKind::Standard;
  std::map<Permutation, double> weights;  // Weighted only

  static Ordering standard() { return {}; }
  static Ordering balanced() { return {OrderingKind::Balanced, {}}; }
  /// Validates that the weights form a normalized distribution over permutations of one size.
  static Ordering weighted(std::map<Permutation, double> weights);
};

inline constexpr int kMaxOrderingSize = 8;

/// Normalized (permutation, weight) list for a term with m_term active variables.
std::vector<std::pair<Permutation, double>> ordering_coefficients(const Ordering& ord, int m_term);

// ---- catalogue of targets used by the scenarios ----

/// f(x) = -(a1 + a2 x + a3 x^2 + a4 x^3), the gradient flow of
/// V(x) = a0 + a1 x + a2 x^2/2 + a3 x^3/3 + a4 x^4/4.
TargetSystem quartic_gradient(double a1, double a2, double a3, double a4);
double quartic_potential(const std::vector<double>& a, double x);  // a = {a1, a2, a3, a4}

/// Gradient flow of V(x,y) = exp(x^2/2 - y^2/2 + y^4/4) in factorized form.
TargetSystem potential2d_gradient();
double potential2d_value(double x, double y);

/// dx/dt = p/mass, dp/dt = -(a1 + a2 x + a3 x^2 + a4 x^3) - chi p/mass.
TargetSystem damped_hamiltonian(const std::vector<double>& a, double mass, double chi);

/// dx/dt = (S/beta)/(1 - chi x) - alpha x
TargetSystem memristor_target(double chi, double alpha, double beta, double voltage);
double memristor_potential(double x, double s, double chi);

}  // namespace peds
