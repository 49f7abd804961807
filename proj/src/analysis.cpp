#include "peds/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "peds/error.hpp"

namespace peds {

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Saddle: return "Saddle";
    case Stability::Unstable: return "Unstable";
    case Stability::Marginal: return "Marginal";
  }
  return "Marginal";
}

namespace {

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream s;
  s << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v(i);
  s << ')';
  return s.str();
}

// Positive decay operator Q with G(x) = -Q x.
Eigen::MatrixXd decay_operator(const Decay& decay, const Eigen::MatrixXd& omega) {
  const Eigen::Index n = omega.rows();
  const Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n) - omega;
  switch (decay.tag) {
    case Decay::Tag::Standard: return decay.alpha * c;
    case Decay::Tag::GenA: return decay.d.asDiagonal() * c;
    case Decay::Tag::GenB: return c * decay.d.asDiagonal() * c;
  }
  return Eigen::MatrixXd::Zero(n, n);
}

}  // namespace

FixedPointSearch find_fixed_points(const TargetSystem& sys, const std::vector<Eigen::VectorXd>& seeds) {
  FixedPointSearch out;
  for (const auto& seed : seeds) {
    if (seed.size() != sys.dim() || !seed.allFinite()) throw DomainError("find_fixed_points: seeds must be finite vectors of length m");
    Eigen::VectorXd x = seed;
    bool dropped = false;
    try {
      Eigen::VectorXd f = sys.eval(x);
      for (int it = 0; it < 200 && f.cwiseAbs().maxCoeff() > 1e-14; ++it) {
        const Eigen::MatrixXd j = sys.jacobian(x);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
        if (!lu.isInvertible()) {
          out.notes.push_back("seed " + format_vector(seed) + ": singular Newton Jacobian at " + format_vector(x));
          dropped = true;
          break;
        }
        const Eigen::VectorXd dx = lu.solve(-f);
        double t = 1.0;
        const double norm0 = f.norm();
        Eigen::VectorXd trial = x + dx;
        Eigen::VectorXd ft;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
          trial = x + t * dx;
          try {
            ft = sys.eval(trial);
          } catch (const DomainError&) {
            continue;
          }
          if (ft.allFinite() && ft.norm() < norm0) {
            accepted = true;
            break;
          }
        }
        if (!accepted) break;
        const double step = (trial - x).cwiseAbs().maxCoeff();
        x = trial;
        f = ft;
        if (step <= 1e-15 * (1.0 + x.cwiseAbs().maxCoeff())) break;
      }
      if (dropped) continue;
      const double res = f.cwiseAbs().maxCoeff();
      if (!(res <= kFixedPointTolerance)) {
        out.notes.push_back("seed " + format_vector(seed) + ": no convergence (residual " + std::to_string(res) + ")");
        continue;
      }
      const bool duplicate = std::any_of(out.roots.begin(), out.roots.end(), [&](const FixedPointReport& r) {
        return (r.x_star - x).cwiseAbs().maxCoeff() <= 1e-6;
      });
      if (!duplicate) out.roots.push_back({x, res, FixedPointReport::Source::NewtonOnTarget});
    } catch (const DomainError& e) {
      out.notes.push_back("seed " + format_vector(seed) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m) {
  std::vector<std::complex<double>> out;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.emplace_back(es.eigenvalues()(i), 0.0);
    return out;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

Stability classify_equilibrium(const std::vector<std::complex<double>>& eigs, double tol) {
  if (eigs.empty()) throw DomainError("classify_equilibrium: empty spectrum");
  bool neg = false, pos = false;
  for (const auto& z : eigs) {
    if (std::abs(z.real()) <= tol) return Stability::Marginal;
    (z.real() < 0 ? neg : pos) = true;
  }
  if (neg && pos) return Stability::Saddle;
  return neg ? Stability::Stable : Stability::Unstable;
}

JacobianReport peds_jacobian_closed_form(const PedsSystem& sys, const Eigen::VectorXd& x_star) {
  if (!sys.omega().is_mean_field()) throw PreconditionError("closed-form Jacobian requires the uniform mean-field projector");
  if (!sys.unit_b()) throw PreconditionError("closed-form Jacobian requires b = 1");
  const TargetSystem& target = sys.target();
  const Eigen::VectorXd f = target.eval(x_star);
  if (!(f.cwiseAbs().maxCoeff() <= 1e-6)) throw PreconditionError("closed-form Jacobian: x* is not a fixed point (residual " + std::to_string(f.cwiseAbs().maxCoeff()) + ")");

  const int m = sys.m();
  const int n = sys.n();
  const Eigen::MatrixXd& om = sys.omega().matrix();
  const Eigen::MatrixXd jm = target.jacobian(x_star);
  JacobianReport rep;
  rep.closed_form.resize(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Eigen::MatrixXd block = jm(i, j) * om;
      if (i == j) block -= decay_operator(sys.decays()[i], om);
      rep.closed_form.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) = block;
    }
  rep.eigenvalues = eigenvalues(rep.closed_form);
  rep.classification = classify_equilibrium(rep.eigenvalues);
  rep.target_eigenvalues = eigenvalues(jm);
  rep.target_classification = classify_equilibrium(rep.target_eigenvalues);
  return rep;
}

Eigen::MatrixXd peds_jacobian_fd(const RhsFunction& rhs, const ExtendedState& state, double h) {
  if (!(h >= 1e-8 && h <= 1e-3)) throw PreconditionError("peds_jacobian_fd: step must lie in [1e-8, 1e-3]");
  const Eigen::Index dim = state.size();
  Eigen::MatrixXd jac(dim, dim);
  ExtendedState plus = state, minus = state;
  for (Eigen::Index k = 0; k < dim; ++k) {
    plus(k) += h;
    minus(k) -= h;
    const Eigen::MatrixXd d = (rhs(plus) - rhs(minus)) / (2.0 * h);
    jac.col(k) = d.reshaped();
    plus(k) = state(k);
    minus(k) = state(k);
  }
  return jac;
}

Eigen::MatrixXd peds_jacobian_fd(const PedsSystem& sys, const ExtendedState& state, double h) {
  return peds_jacobian_fd([&sys](const Eigen::MatrixXd& x) { return sys.rhs(x); }, state, h);
}

double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  auto less = [](const std::complex<double>& x, const std::complex<double>& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<Disc> gerschgorin_bounds(const PedsSystem& sys, const Eigen::VectorXd& x_star) {
  if (sys.m() != 1) throw ScopeError("gerschgorin_bounds: only scalar targets are supported");
  if (!sys.omega().is_mean_field() && sys.n() != 1) throw ScopeError("gerschgorin_bounds: requires the uniform mean-field projector");
  const Decay& decay = sys.decays()[0];
  if (decay.tag != Decay::Tag::GenA) throw ScopeError("gerschgorin_bounds: requires GenA decay");
  const double fp = sys.target().jacobian(x_star)(0, 0);
  const int n = sys.n();
  std::vector<Disc> discs;
  for (int i = 0; i < n; ++i) {
    const double d = decay.d(i);
    discs.push_back({fp / n - (n - 1) * d / n, (n - 1) * std::abs(fp + d) / n});
  }
  return discs;
}

std::vector<double> polynomial_real_roots(const std::vector<double>& c, double imag_tol) {
  std::size_t deg = c.size();
  while (deg > 0 && c[deg - 1] == 0.0) --deg;
  if (deg <= 1) return {};
  --deg;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericError("polynomial_real_roots: eigensolver failed");
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > imag_tol * std::max(1.0, std::abs(z))) continue;
    double x = z.real();
    for (int it = 0; it < 5; ++it) {
      double p = 0.0, dp = 0.0;
      for (std::size_t k = deg + 1; k-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[k];
      }
      if (dp == 0.0) break;
      x -= p / dp;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

void write_eigenvalues_csv(std::ostream& out, const JacobianReport& report) {
  out << "# classification=" << to_string(report.classification)
      << " target=" << to_string(report.target_classification) << '\n';
  out << "re,im\n" << std::setprecision(12);
  for (const auto& z : report.eigenvalues) out << z.real() << ',' << z.imag() << '\n';
}

}  // namespace peds
