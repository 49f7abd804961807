#include "peds/target_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "peds/error.hpp"

namespace peds {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

double eval_factor(const Factor& f, const Eigen::VectorXd& x) {
  try {
    return f.function.value(x(f.variable));
  } catch (const DomainError& e) {
    throw DomainError("variable x" + std::to_string(f.variable) + ": " + e.what());
  }
}

double eval_factor_derivative(const Factor& f, const Eigen::VectorXd& x) {
  try {
    return f.function.derivative(x(f.variable));
  } catch (const DomainError& e) {
    throw DomainError("variable x" + std::to_string(f.variable) + ": " + e.what());
  }
}

bool is_permutation_of_range(const Permutation& p) {
  Permutation sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i)) return false;
  return true;
}

}  // namespace

TargetSystem::TargetSystem(int m) : m_(m) {
  if (m <= 0) throw DimensionError("target system: m must be positive");
  equations_.resize(m);
  domains_.resize(m);
}

TargetSystem& TargetSystem::add(int equation, Term term) {
  if (equation < 0 || equation >= m_) throw DimensionError("target system: equation index " + std::to_string(equation) + " out of range");
  if (auto* mono = std::get_if<MonomialTerm>(&term)) {
    if (static_cast<int>(mono->exponents.size()) != m_) throw DimensionError("monomial: exponent vector length must equal m");
    for (int e : mono->exponents)
      if (e < 0) throw DomainError("monomial: negative exponent");
    if (!std::isfinite(mono->coefficient)) throw DomainError("monomial: non-finite coefficient");
  } else {
    const auto& ft = std::get<FactorTerm>(term);
    if (!std::isfinite(ft.coefficient)) throw DomainError("factor term: non-finite coefficient");
    for (const auto& f : ft.factors)
      if (f.variable < 0 || f.variable >= m_) throw DimensionError("factor term: variable index " + std::to_string(f.variable) + " out of range");
  }
  equations_[equation].push_back(std::move(term));
  return *this;
}

TargetSystem& TargetSystem::add_monomial(int equation, double coefficient, std::vector<int> exponents) {
  return add(equation, MonomialTerm{coefficient, std::move(exponents)});
}

TargetSystem& TargetSystem::add_factor_term(int equation, double coefficient, std::vector<Factor> factors) {
  return add(equation, FactorTerm{coefficient, std::move(factors)});
}

TargetSystem& TargetSystem::set_domain(int variable, Interval interval) {
  if (variable < 0 || variable >= m_) throw DimensionError("domain: variable index out of range");
  if (!(interval.lo <= interval.hi)) throw DomainError("domain: empty interval");
  domains_[variable] = interval;
  return *this;
}

std::optional<Interval> TargetSystem::domain(int variable) const {
  return domains_.at(variable);
}

void TargetSystem::check_domain(const Eigen::VectorXd& x) const {
  if (x.size() != m_) throw DimensionError("target system: state length " + std::to_string(x.size()) + " vs m=" + std::to_string(m_));
  for (int i = 0; i < m_; ++i) {
    if (domains_[i] && !domains_[i]->contains(x(i)))
      throw DomainError("variable x" + std::to_string(i) + " = " + std::to_string(x(i)) + " outside its domain");
  }
}

Eigen::VectorXd TargetSystem::eval(const Eigen::VectorXd& x) const {
  check_domain(x);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : equations_[i]) {
      if (const auto* mono = std::get_if<MonomialTerm>(&t)) {
        double v = mono->coefficient;
        for (int j = 0; j < m_; ++j) v *= ipow(x(j), mono->exponents[j]);
        out(i) += v;
      } else {
        const auto& ft = std::get<FactorTerm>(t);
        double v = ft.coefficient;
        for (const auto& f : ft.factors) v *= eval_factor(f, x);
        out(i) += v;
      }
    }
  }
  return out;
}

Eigen::MatrixXd TargetSystem::jacobian(const Eigen::VectorXd& x) const {
  check_domain(x);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m_, m_);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : equations_[i]) {
      if (const auto* mono = std::get_if<MonomialTerm>(&t)) {
        for (int j = 0; j < m_; ++j) {
          const int ej = mono->exponents[j];
          if (ej == 0) continue;
          double v = mono->coefficient * ej * ipow(x(j), ej - 1);
          for (int l = 0; l < m_; ++l)
            if (l != j) v *= ipow(x(l), mono->exponents[l]);
          jac(i, j) += v;
        }
      } else {
        const auto& ft = std::get<FactorTerm>(t);
        const std::size_t q = ft.factors.size();
        std::vector<double> vals(q);
        for (std::size_t k = 0; k < q; ++k) vals[k] = eval_factor(ft.factors[k], x);
        for (std::size_t k = 0; k < q; ++k) {
          double v = ft.coefficient * eval_factor_derivative(ft.factors[k], x);
          for (std::size_t l = 0; l < q; ++l)
            if (l != k) v *= vals[l];
          jac(i, ft.factors[k].variable) += v;
        }
      }
    }
  }
  return jac;
}

Eigen::VectorXd eval_scalar(const TargetSystem& sys, const Eigen::VectorXd& x) { return sys.eval(x); }
Eigen::MatrixXd jacobian_scalar(const TargetSystem& sys, const Eigen::VectorXd& x) { return sys.jacobian(x); }

std::vector<int> active_variables(const Term& term, int m) {
  std::vector<bool> used(m, false);
  if (const auto* mono = std::get_if<MonomialTerm>(&term)) {
    for (int j = 0; j < m; ++j) used[j] = mono->exponents[j] > 0;
  } else {
    for (const auto& f : std::get<FactorTerm>(term).factors) used[f.variable] = true;
  }
  std::vector<int> out;
  for (int j = 0; j < m; ++j)
    if (used[j]) out.push_back(j);
  return out;
}

// ---- orderings ----

Ordering Ordering::weighted(std::map<Permutation, double> weights) {
  if (weights.empty()) throw NormalizationError("weighted ordering: no weights");
  const std::size_t size = weights.begin()->first.size();
  double sum = 0.0;
  for (const auto& [perm, w] : weights) {
    if (perm.size() != size) throw DimensionError("weighted ordering: permutations of different sizes");
    if (!is_permutation_of_range(perm)) throw NormalizationError("weighted ordering: key is not a permutation (repeated indices carry zero weight)");
    if (!std::isfinite(w)) throw NormalizationError("weighted ordering: non-finite weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw NormalizationError("weighted ordering: weights sum to " + std::to_string(sum));
  return {OrderingKind::Weighted, std::move(weights)};
}

std::vector<std::pair<Permutation, double>> ordering_coefficients(const Ordering& ord, int m_term) {
  if (m_term < 0) throw SizeError("ordering: negative term size");
  if (m_term > kMaxOrderingSize) throw SizeError("ordering: term with " + std::to_string(m_term) + " variables exceeds the limit of " + std::to_string(kMaxOrderingSize));
  Permutation identity(m_term);
  std::iota(identity.begin(), identity.end(), 0);
  if (m_term <= 1 || ord.kind == OrderingKind::Standard) return {{identity, 1.0}};

  std::vector<std::pair<Permutation, double>> out;
  if (ord.kind == OrderingKind::Balanced) {
    double fact = 1.0;
    for (int k = 2; k <= m_term; ++k) fact *= k;
    Permutation p = identity;
    do {
      out.emplace_back(p, 1.0 / fact);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }

  double sum = 0.0;
  for (const auto& [perm, w] : ord.weights) {
    if (static_cast<int>(perm.size()) != m_term)
      throw DimensionError("weighted ordering defined for " + std::to_string(perm.size()) + " variables, term has " + std::to_string(m_term));
    if (!is_permutation_of_range(perm)) throw NormalizationError("weighted ordering: key is not a permutation");
    sum += w;
    if (w != 0.0) out.emplace_back(perm, w);
  }
  if (std::abs(sum - 1.0) > 1e-12) throw NormalizationError("weighted ordering: weights sum to " + std::to_string(sum));
  return out;
}

// ---- catalogue ----

TargetSystem quartic_gradient(double a1, double a2, double a3, double a4) {
  TargetSystem sys(1);
  sys.add_monomial(0, -a1, {0});
  sys.add_monomial(0, -a2, {1});
  sys.add_monomial(0, -a3, {2});
  sys.add_monomial(0, -a4, {3});
  return sys;
}

double quartic_potential(const std::vector<double>& a, double x) {
  double v = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) v += a[k] * std::pow(x, static_cast<double>(k + 1)) / static_cast<double>(k + 1);
  return v;
}

TargetSystem potential2d_gradient() {
  const auto ex = ScalarFunction::exp_of_polynomial({0.0, 0.0, 0.5});
  const auto ey = ScalarFunction::exp_of_polynomial({0.0, 0.0, -0.5, 0.0, 0.25});
  TargetSystem sys(2);
  // f_x = -x V
  sys.add_factor_term(0, -1.0, {{0, ScalarFunction::power(1)}, {0, ex}, {1, ey}});
  // f_y = (y - y^3) V
  sys.add_factor_term(1, 1.0, {{1, ScalarFunction::power(1)}, {0, ex}, {1, ey}});
  sys.add_factor_term(1, -1.0, {{1, ScalarFunction::power(3)}, {0, ex}, {1, ey}});
  return sys;
}

double potential2d_value(double x, double y) {
  return std::exp(0.5 * x * x - 0.5 * y * y + 0.25 * y * y * y * y);
}

TargetSystem damped_hamiltonian(const std::vector<double>& a, double mass, double chi) {
  if (!(mass > 0.0)) throw DomainError("hamiltonian: mass must be positive");
  TargetSystem sys(2);
  sys.add_monomial(0, 1.0 / mass, {0, 1});
  for (std::size_t k = 0; k < a.size(); ++k) sys.add_monomial(1, -a[k], {static_cast<int>(k), 0});
  sys.add_monomial(1, -chi / mass, {0, 1});
  return sys;
}

TargetSystem memristor_target(double chi, double alpha, double beta, double voltage) {
  if (!(beta > 0.0)) throw DomainError("memristor: beta must be positive");
  TargetSystem sys(1);
  sys.add_factor_term(0, voltage / beta, {{0, ScalarFunction::reciprocal_affine(1.0, -chi)}});
  sys.add_monomial(0, -alpha, {1});
  return sys;
}

double memristor_potential(double x, double s, double chi) {
  if (chi == 0.0) return 0.5 * x * x - s * x;
  return 0.5 * x * x + (s / chi) * std::log(1.0 - chi * x);
}

}  // namespace peds
