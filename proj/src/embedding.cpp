#include "peds/embedding.hpp"

#include <cmath>
#include <map>

#include "peds/error.hpp"
#include "peds/matrix_function.hpp"

namespace peds {

std::string to_string(MapKind::Tag tag) {
  switch (tag) {
    case MapKind::Tag::StandardCommutative: return "commutative";
    case MapKind::Tag::MixedCommutative: return "mixed";
    case MapKind::Tag::StandardNonCommutative: return "noncommutative";
  }
  return "noncommutative";
}

MapKind::Tag parse_map_kind(const std::string& text) {
  if (text == "commutative" || text == "standard_commutative") return MapKind::Tag::StandardCommutative;
  if (text == "mixed" || text == "mixed_commutative") return MapKind::Tag::MixedCommutative;
  if (text == "noncommutative" || text == "standard_noncommutative" || text == "nc") return MapKind::Tag::StandardNonCommutative;
  throw ConfigError("unknown map kind '" + text + "'");
}

std::string to_string(OrderingKind kind) {
  switch (kind) {
    case OrderingKind::Standard: return "standard";
    case OrderingKind::Balanced: return "balanced";
    case OrderingKind::Weighted: return "weighted";
  }
  return "standard";
}

Ordering parse_ordering(const std::string& text) {
  if (text == "standard") return Ordering::standard();
  if (text == "balanced") return Ordering::balanced();
  throw ConfigError("unknown ordering '" + text + "' (weighted orderings are built through the API)");
}

Decay Decay::standard(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("standard decay: alpha must be positive");
  return {Tag::Standard, alpha, {}};
}

Decay Decay::gen_a(Eigen::VectorXd d) {
  if (d.size() == 0 || !(d.minCoeff() > 0.0) || !d.allFinite()) throw DomainError("GenA decay: D must be positive");
  return {Tag::GenA, 0.0, std::move(d)};
}

Decay Decay::gen_b(Eigen::VectorXd d) {
  if (d.size() == 0 || !(d.minCoeff() > 0.0) || !d.allFinite()) throw DomainError("GenB decay: D must be positive");
  return {Tag::GenB, 0.0, std::move(d)};
}

Eigen::VectorXd apply_decay(const Decay& decay, const Projector& omega, const Eigen::VectorXd& x) {
  if (x.size() != omega.dim()) throw DimensionError("apply_decay: length " + std::to_string(x.size()) + " vs N=" + std::to_string(omega.dim()));
  if (decay.tag != Decay::Tag::Standard && decay.d.size() != x.size()) throw DimensionError("apply_decay: D length mismatch");
  const Eigen::VectorXd xc = x - omega.apply(x);
  switch (decay.tag) {
    case Decay::Tag::Standard: return -decay.alpha * xc;
    case Decay::Tag::GenA: return -decay.d.cwiseProduct(xc);
    case Decay::Tag::GenB: {
      const Eigen::VectorXd y = decay.d.cwiseProduct(xc);
      return -(y - omega.apply(y));
    }
  }
  return Eigen::VectorXd::Zero(x.size());
}

Eigen::MatrixXd noncommutative_monomial(const Projector& omega,
                                        const std::vector<std::pair<Eigen::VectorXd, int>>& states,
                                        const Ordering& ord) {
  const int n = omega.dim();
  for (const auto& [x, e] : states) {
    if (x.size() != n) throw DimensionError("noncommutative_monomial: diagonal length mismatch");
    if (e < 0) throw DomainError("noncommutative_monomial: negative exponent");
  }
  const auto perms = ordering_coefficients(ord, static_cast<int>(states.size()));
  std::vector<Eigen::MatrixXd> powers;
  for (const auto& [x, e] : states) {
    const Eigen::MatrixXd ox = omega.matrix() * x.asDiagonal();
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < e; ++k) p = p * ox;
    powers.push_back(std::move(p));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [perm, w] : perms) {
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(n, n);
    for (int j : perm) prod = prod * powers[j];
    out += w * prod;
  }
  return out;
}

double principal_root(double p, int k) {
  if (k <= 0) throw DomainError("principal_root: degree must be positive");
  if (k == 1) return p;
  if (p >= 0.0) return std::pow(p, 1.0 / k);
  if (k % 2 == 0) throw DomainError("mixed map: negative product under an even root (degree " + std::to_string(k) + ")");
  return -std::pow(-p, 1.0 / k);
}

namespace {

std::vector<double> multiply_polynomials(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> factor_polynomial(const ScalarFunction& f, int order, double radius, double* remainder) {
  if (f.tag() == ScalarFunction::Tag::Power) {
    std::vector<double> c(f.exponent() + 1, 0.0);
    c[f.exponent()] = 1.0;
    return c;
  }
  const TaylorExpansion t = f.taylor(order, radius);
  *remainder += t.remainder_estimate;
  return t.coeffs;
}

}  // namespace

std::vector<MonomialTerm> expand_to_monomials(const FactorTerm& term, int m, int order, double radius, double* remainder) {
  double local = 0.0;
  std::map<int, std::vector<double>> per_var;
  for (const auto& f : term.factors) {
    const auto poly = factor_polynomial(f.function, order, radius, &local);
    auto it = per_var.find(f.variable);
    if (it == per_var.end()) per_var.emplace(f.variable, poly);
    else it->second = multiply_polynomials(it->second, poly);
  }
  if (remainder) *remainder += std::abs(term.coefficient) * local;

  std::vector<MonomialTerm> out{{term.coefficient, std::vector<int>(m, 0)}};
  for (const auto& [var, poly] : per_var) {
    std::vector<MonomialTerm> next;
    for (const auto& mono : out) {
      for (std::size_t k = 0; k < poly.size(); ++k) {
        if (poly[k] == 0.0) continue;
        MonomialTerm t = mono;
        t.coefficient *= poly[k];
        t.exponents[var] += static_cast<int>(k);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

PedsSystem::PedsSystem(TargetSystem target, Projector omega, MapKind map, std::vector<Decay> decays,
                       std::vector<Eigen::VectorXd> b, int taylor_order)
    : target_(std::move(target)), omega_(std::move(omega)), map_(std::move(map)), decays_(std::move(decays)), b_(std::move(b)) {
  const int m = target_.dim();
  const int n = omega_.dim();
  if (static_cast<int>(decays_.size()) != m) throw DimensionError("PEDS: expected " + std::to_string(m) + " decay functions, got " + std::to_string(decays_.size()));
  for (const auto& d : decays_)
    if (d.tag != Decay::Tag::Standard && d.d.size() != n) throw DimensionError("PEDS: decay diagonal length must equal N");
  if (b_.empty()) b_.assign(m, Eigen::VectorXd::Ones(n));
  if (static_cast<int>(b_.size()) != m) throw DimensionError("PEDS: expected " + std::to_string(m) + " b-vectors");
  for (const auto& bi : b_) {
    if (bi.size() != n) throw DimensionError("PEDS: b-vector length must equal N");
    if (!(omega_.apply(bi).norm() > 1e-12)) throw PreconditionError("PEDS: Omega b must be nonzero");
  }

  if (map_.tag == MapKind::Tag::MixedCommutative) {
    double radius = 1.0;
    for (int v = 0; v < m; ++v)
      if (auto dom = target_.domain(v)) radius = std::max({radius, std::abs(dom->lo), std::abs(dom->hi)});
    mixed_terms_.resize(m);
    for (int i = 0; i < m; ++i) {
      for (const Term& t : target_.terms(i)) {
        if (const auto* mono = std::get_if<MonomialTerm>(&t)) {
          mixed_terms_[i].push_back(*mono);
        } else {
          auto expanded = expand_to_monomials(std::get<FactorTerm>(t), m, taylor_order, radius, &taylor_remainder_);
          mixed_terms_[i].insert(mixed_terms_[i].end(), expanded.begin(), expanded.end());
        }
      }
    }
  } else if (map_.tag == MapKind::Tag::StandardNonCommutative) {
    for (int i = 0; i < m; ++i)
      for (const Term& t : target_.terms(i)) ordering_coefficients(map_.ordering, static_cast<int>(active_variables(t, m).size()));
  }
}

bool PedsSystem::unit_b() const {
  for (const auto& bi : b_)
    if ((bi.array() != 1.0).any()) return false;
  return true;
}

ExtendedState PedsSystem::uniform_state(const Eigen::VectorXd& x) const {
  if (x.size() != m()) throw DimensionError("uniform_state: length must equal m");
  ExtendedState s(n(), m());
  for (int i = 0; i < m(); ++i) s.col(i).setConstant(x(i));
  return s;
}

void PedsSystem::check_state(const ExtendedState& state) const {
  if (state.rows() != n() || state.cols() != m())
    throw DimensionError("PEDS state is " + std::to_string(state.rows()) + "x" + std::to_string(state.cols()) + ", expected " + std::to_string(n()) + "x" + std::to_string(m()));
}

Eigen::VectorXd PedsSystem::drive_commutative(int i, const Eigen::MatrixXd& fvals) const {
  return omega_.apply(fvals.col(i).cwiseProduct(b_[i]));
}

namespace {

std::vector<ProjectedSpectrum> spectra_of(const Projector& omega, const ExtendedState& state) {
  std::vector<ProjectedSpectrum> spectra;
  spectra.reserve(state.cols());
  for (Eigen::Index v = 0; v < state.cols(); ++v) spectra.emplace_back(omega, state.col(v));
  return spectra;
}

}  // namespace

Eigen::VectorXd PedsSystem::drive_noncommutative(int i, const std::vector<ProjectedSpectrum>& spectra) const {
  const int m = this->m();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n());
  for (const Term& t : target_.terms(i)) {
    const std::vector<int> vars = active_variables(t, m);
    const auto perms = ordering_coefficients(map_.ordering, static_cast<int>(vars.size()));
    if (const auto* mono = std::get_if<MonomialTerm>(&t)) {
      for (const auto& [perm, w] : perms) {
        Eigen::VectorXd v = b_[i];
        for (std::size_t j = perm.size(); j-- > 0;) {
          const int var = vars[perm[j]];
          for (int k = 0; k < mono->exponents[var]; ++k) v = spectra[var].multiply(v);
        }
        acc += (mono->coefficient * w) * v;
      }
    } else {
      const auto& ft = std::get<FactorTerm>(t);
      std::map<int, std::vector<const ScalarFunction*>> groups;
      for (const auto& f : ft.factors) groups[f.variable].push_back(&f.function);
      for (const auto& [perm, w] : perms) {
        Eigen::VectorXd v = b_[i];
        for (std::size_t j = perm.size(); j-- > 0;) {
          const int var = vars[perm[j]];
          for (const ScalarFunction* f : groups[var]) {
            try {
              v = spectra[var].apply(*f, v);
            } catch (const DomainError& e) {
              throw DomainError("variable x" + std::to_string(var) + ": " + e.what());
            }
          }
        }
        acc += (ft.coefficient * w) * v;
      }
    }
  }
  return omega_.apply(acc);
}

Eigen::VectorXd PedsSystem::drive_mixed(int i, const ExtendedState& state) const {
  const int m = this->m();
  const int n = this->n();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd d(n);
  for (const MonomialTerm& mono : mixed_terms_[i]) {
    int k = 0;
    for (int e : mono.exponents) k += e;
    if (k == 0) {
      acc += mono.coefficient * b_[i];
      continue;
    }
    for (int r = 0; r < n; ++r) {
      double p = 1.0;
      for (int v = 0; v < m; ++v)
        for (int e = 0; e < mono.exponents[v]; ++e) p *= state(r, v);
      try {
        d(r) = principal_root(p, k);
      } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " at component " + std::to_string(r));
      }
    }
    Eigen::VectorXd v = b_[i];
    for (int s = 0; s < k; ++s) v = omega_.apply(d.cwiseProduct(v));
    acc += mono.coefficient * v;
  }
  return omega_.apply(acc);
}

Eigen::VectorXd PedsSystem::drive(int i, const ExtendedState& state) const {
  check_state(state);
  switch (map_.tag) {
    case MapKind::Tag::StandardCommutative: {
      Eigen::MatrixXd fvals(n(), m());
      for (int r = 0; r < n(); ++r) fvals.row(r) = target_.eval(state.row(r).transpose()).transpose();
      return drive_commutative(i, fvals);
    }
    case MapKind::Tag::MixedCommutative: return drive_mixed(i, state);
    case MapKind::Tag::StandardNonCommutative: return drive_noncommutative(i, spectra_of(omega_, state));
  }
  return Eigen::VectorXd::Zero(n());
}

ExtendedState PedsSystem::rhs(const ExtendedState& state) const {
  check_state(state);
  ExtendedState out(n(), m());
  if (map_.tag == MapKind::Tag::StandardCommutative) {
    Eigen::MatrixXd fvals(n(), m());
    for (int r = 0; r < n(); ++r) fvals.row(r) = target_.eval(state.row(r).transpose()).transpose();
    for (int i = 0; i < m(); ++i) out.col(i) = drive_commutative(i, fvals);
  } else if (map_.tag == MapKind::Tag::MixedCommutative) {
    for (int i = 0; i < m(); ++i) out.col(i) = drive_mixed(i, state);
  } else {
    const auto spectra = spectra_of(omega_, state);
    for (int i = 0; i < m(); ++i) out.col(i) = drive_noncommutative(i, spectra);
  }
  for (int i = 0; i < m(); ++i) out.col(i) += apply_decay(decays_[i], omega_, state.col(i));
  return out;
}

Eigen::VectorXd projected_observable(const Projector& omega, const ExtendedState& state) {
  Eigen::VectorXd out(state.cols());
  for (Eigen::Index i = 0; i < state.cols(); ++i) out(i) = omega.apply(state.col(i)).mean();
  return out;
}

}  // namespace peds
