#include "peds/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "peds/analysis.hpp"
#include "peds/embedding.hpp"
#include "peds/error.hpp"
#include "peds/integrator.hpp"
#include "peds/matrix_function.hpp"

namespace peds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// mixed-map expansions truncated here keep the remainder below 1e-12 on the sampled boxes
constexpr int kBanalityTaylorOrder = 60;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  Eigen::VectorXd vector(int n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  Eigen::MatrixXd matrix(int r, int c, double lo, double hi) {
    Eigen::MatrixXd m(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) m(i, j) = uniform(lo, hi);
    return m;
  }
};

std::vector<Projector> sample_projectors(Rng& rng) {
  std::vector<Projector> out;
  for (int n : {2, 10, 50}) out.push_back(Projector::uniform_mean_field(n));
  out.push_back(Projector::trivial(7));
  for (int i = 0; i < 20; ++i) {
    const int n = rng.integer(3, 30);
    out.push_back(Projector::gram(rng.matrix(rng.integer(1, n - 1), n, -1.0, 1.0)));
  }
  return out;
}

TargetSystem linear_target(double a) {
  TargetSystem t(1);
  t.add_monomial(0, a, {1});
  return t;
}

TargetSystem logistic_target() {
  TargetSystem t(1);
  t.add_monomial(0, 1.0, {1}).add_monomial(0, -1.0, {2});
  return t;
}

std::vector<MapKind> all_maps() { return {MapKind::commutative(), MapKind::mixed(), MapKind::noncommutative()}; }

std::vector<Decay> standard_decays(int m, double alpha) { return std::vector<Decay>(m, Decay::standard(alpha)); }

double rel_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// --- projector ---------------------------------------------------------------

void projector_properties(std::vector<PropertyCheck>& out, Rng& rng) {
  const auto projectors = sample_projectors(rng);
  double idem = 0.0, split = 0.0;
  int rank_mismatch = 0;
  for (const auto& p : projectors) {
    idem = std::max(idem, idempotence_error(p.matrix()));
    split = std::max(split, spectral_split_error(p.matrix()));
    rank_mismatch += projector_rank(p.matrix()) != p.rank();
  }
  out.push_back(check_at_most("projector.idempotence", idem, kIdempotenceTolerance));
  out.push_back(check_at_most("projector.spectral_split", rank_mismatch ? kInf : split, kSpectralTolerance,
                              rank_mismatch ? "rank metadata disagrees with the spectrum" : ""));

  double collapse = 0.0, sandwich = 0.0;
  const int n = 10;
  const Projector om = Projector::uniform_mean_field(n);
  for (int s = 0; s < 20; ++s) {
    const Eigen::VectorXd x = rng.vector(n, -1.5, 1.5);
    const Eigen::MatrixXd a = om.matrix() * x.asDiagonal();
    const double mean = x.mean();
    Eigen::MatrixXd power = a;
    for (int k = 1; k <= 6; ++k) {
      if (k > 1) power = power * a;
      collapse = std::max(collapse, (power - std::pow(mean, k - 1) * a).cwiseAbs().maxCoeff());
    }
    sandwich = std::max(sandwich, (a * om.matrix() - mean * om.matrix()).cwiseAbs().maxCoeff());
  }
  out.push_back(check_at_most("projector.mean_field_collapse", collapse, 1e-12));
  out.push_back(check_at_most("projector.sandwich_identity", sandwich, 1e-12));

  double closure = 0.0;
  for (const auto& p : projectors) {
    const Eigen::VectorXd v = rng.vector(p.dim(), -1.0, 1.0);
    closure = std::max(closure, p.apply(complement_project(p, v)).cwiseAbs().maxCoeff());
  }
  out.push_back(check_at_most("projector.complement_closure", closure, 1e-10));
}

// --- target ------------------------------------------------------------------

void target_properties(std::vector<PropertyCheck>& out, Rng& rng) {
  struct Case {
    TargetSystem sys;
    double lo, hi;
  };
  const std::vector<Case> cases = {
      {quartic_gradient(9.85, -10.0, -2.0, 0.0), -6.0, 2.0},
      {quartic_gradient(9.85, 10.0, 2.0, -0.395), -3.0, 9.0},
      {potential2d_gradient(), -1.5, 1.5},
      {damped_hamiltonian({9.85, -10.0, -2.0, 0.0}, 1.0, 1.0), -6.0, 2.0},
      {memristor_target(0.9, 1.0, 1.0, 0.2), 0.0, 1.0},
      {cyclic_competition(0.5), -1.0, 2.0},
  };
  double worst = 0.0;
  const double h = 1e-6;
  for (const auto& c : cases) {
    for (int s = 0; s < 10; ++s) {
      const Eigen::VectorXd x = rng.vector(c.sys.dim(), c.lo, c.hi);
      const Eigen::MatrixXd j = jacobian_scalar(c.sys, x);
      for (int k = 0; k < c.sys.dim(); ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        const Eigen::VectorXd col = (eval_scalar(c.sys, xp) - eval_scalar(c.sys, xm)) / (2 * h);
        for (int i = 0; i < c.sys.dim(); ++i)
          worst = std::max(worst, std::abs(col(i) - j(i, k)) / std::max(1.0, std::abs(j(i, k))));
      }
    }
  }
  out.push_back(check_at_most("target.jacobian_fd", worst, 1e-5));

  double norm = 0.0;
  for (int m = 1; m <= 5; ++m)
    for (const auto& ord : {Ordering::standard(), Ordering::balanced()}) {
      double sum = 0.0;
      for (const auto& [perm, w] : ordering_coefficients(ord, m)) sum += w;
      norm = std::max(norm, std::abs(sum - 1.0));
    }
  out.push_back(check_at_most("target.ordering_normalization", norm, 1e-12));

  double horner = 0.0;
  for (int s = 0; s < 20; ++s) {
    const Eigen::VectorXd c = rng.vector(7, -2.0, 2.0);
    TargetSystem t(1);
    for (int p = 0; p < 7; ++p) t.add_monomial(0, c(p), {p});
    const double x = rng.uniform(-2.0, 2.0);
    double ref = 0.0;
    for (int p = 6; p >= 0; --p) ref = ref * x + c(p);
    horner = std::max(horner, std::abs(eval_scalar(t, Eigen::VectorXd::Constant(1, x))(0) - ref) / std::max(1.0, std::abs(ref)));
  }
  out.push_back(check_at_most("target.horner", horner, 1e-13));
}

// --- embedding ---------------------------------------------------------------

void embedding_properties(std::vector<PropertyCheck>& out, Rng& rng) {
  const int n = 10;
  const Projector om = Projector::uniform_mean_field(n);

  double scalar_gap = 0.0;
  const TargetSystem quartic = quartic_gradient(9.85, -10.0, -2.0, 0.0);
  const PedsSystem comm(quartic, om, MapKind::commutative(), standard_decays(1, 0.1));
  const PedsSystem nc(quartic, om, MapKind::noncommutative(), standard_decays(1, 0.1));
  for (int s = 0; s < 20; ++s) {
    const Eigen::MatrixXd x = rng.matrix(n, 1, -3.0, 1.0);
    scalar_gap = std::max(scalar_gap, rel_gap(comm.rhs(x), nc.rhs(x)));
  }
  out.push_back(check_at_most("embedding.scalar_map_equivalence", scalar_gap, 1e-12));

  double banal = 0.0;
  struct Case {
    TargetSystem sys;
    double lo, hi;
  };
  const std::vector<Case> cases = {{logistic_target(), -1.0, 2.0}, {linear_target(-0.5), -2.0, 2.0},
                                   {potential2d_gradient(), -1.2, 1.2}, {cyclic_competition(0.5), 0.1, 1.5}};
  for (const auto& c : cases)
    for (const auto& map : all_maps()) {
      const PedsSystem sys(c.sys, om, map, standard_decays(c.sys.dim(), 0.1), {}, kBanalityTaylorOrder);
      for (int s = 0; s < 5; ++s) {
        const Eigen::VectorXd x = rng.vector(c.sys.dim(), c.lo, c.hi);
        const Eigen::VectorXd f = c.sys.eval(x);
        Eigen::MatrixXd expect(n, c.sys.dim());
        for (int i = 0; i < c.sys.dim(); ++i) expect.col(i).setConstant(f(i));
        banal = std::max(banal, rel_gap(sys.rhs(sys.uniform_state(x)), expect));
      }
    }
  out.push_back(check_at_most("embedding.banality", banal, 1e-12));

  double order_gap = 0.0;
  for (const auto& c : std::vector<Case>{{potential2d_gradient(), -1.2, 1.2}, {cyclic_competition(0.5), -1.0, 1.5}}) {
    const PedsSystem std_sys(c.sys, om, MapKind::noncommutative(Ordering::standard()), standard_decays(c.sys.dim(), 0.1));
    const PedsSystem bal_sys(c.sys, om, MapKind::noncommutative(Ordering::balanced()), standard_decays(c.sys.dim(), 0.1));
    for (int s = 0; s < 10; ++s) {
      const Eigen::MatrixXd x = rng.matrix(n, c.sys.dim(), c.lo, c.hi);
      order_gap = std::max(order_gap, rel_gap(std_sys.rhs(x), bal_sys.rhs(x)));
    }
  }
  out.push_back(check_at_most("embedding.ordering_independence", order_gap, 1e-10));

  double fact = 0.0;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  for (int s = 0; s < 20; ++s) {
    const Eigen::MatrixXd ax = om.matrix() * rng.vector(n, 0.1, 1.5).asDiagonal();
    const Eigen::MatrixXd ay = om.matrix() * rng.vector(n, 0.1, 1.5).asDiagonal();
    const double f2 = rng.uniform(-1, 1), f1 = rng.uniform(-1, 1), g2 = rng.uniform(-1, 1), g1 = rng.uniform(-1, 1);
    const Eigen::MatrixXd fx = f2 * ax * ax + f1 * ax;
    const Eigen::MatrixXd gy = g2 * ay * ay + g1 * ay;
    const Eigen::MatrixXd joint = fx + gy;
    const Eigen::VectorXd lhs = joint.exp() * ones;
    const Eigen::VectorXd rhs = fx.exp() * (gy.exp() * ones);
    fact = std::max(fact, rel_gap(lhs, rhs));
  }
  out.push_back(check_at_most("embedding.exp_factorization", fact, 1e-10));

  double imag = 0.0;
  for (int s = 0; s < 10; ++s) {
    const int dim = rng.integer(4, 20);
    const Projector g = Projector::gram(rng.matrix(rng.integer(1, dim - 1), dim, -1.0, 1.0));
    imag = std::max(imag, similarity_spectrum_imag(g, rng.vector(dim, 0.1, 2.0)));
  }
  out.push_back(check_at_most("embedding.spectrum_reality", imag, 1e-10));
}

// --- integrator --------------------------------------------------------------

void integrator_properties(std::vector<PropertyCheck>& out, Rng& rng, const VerifyOptions& opt) {
  const int n = 10;
  const Projector om = Projector::uniform_mean_field(n);
  IntegrationConfig ic;
  ic.dt = 0.01;
  ic.steps = 1000;
  ic.record_stride = 10;

  double contain = 0.0;
  for (const auto& [sys, x0] : std::vector<std::pair<TargetSystem, Eigen::VectorXd>>{
           {linear_target(-0.5), Eigen::VectorXd::Constant(1, 1.3)},
           {logistic_target(), Eigen::VectorXd::Constant(1, 0.2)},
           {potential2d_gradient(), Eigen::Vector2d(0.4, 0.3)}}) {
    const PedsSystem peds(sys, om, MapKind::noncommutative(), standard_decays(sys.dim(), 0.1));
    const Trajectory tr = integrate(peds, peds.uniform_state(x0), ic);
    const TargetTrajectory ref = integrate_target(sys, x0, ic);
    for (std::size_t r = 0; r < tr.times.size(); ++r)
      contain = std::max(contain, (tr.projected[r] - ref.states[r]).cwiseAbs().maxCoeff());
  }
  out.push_back(check_at_most("integrator.containment", contain, 10 * ic.dt));

  const double rate_tol = 0.05;
  if (opt.alpha == 0.0) {
    out.push_back(skipped("integrator.convergence_to_mean", rate_tol, "decay disabled (alpha=0)"));
  } else {
    const double alpha = std::abs(opt.alpha);
    const PedsSystem peds(logistic_target(), om, MapKind::noncommutative(), standard_decays(1, alpha));
    const double sign = opt.flip_decay_sign ? 2.0 : 0.0;
    const RhsFunction rhs = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
      Eigen::MatrixXd dx = peds.rhs(x);
      dx.col(0) += sign * alpha * complement_project(om, x.col(0));
      return dx;
    };
    IntegrationConfig c = ic;
    c.dt = 0.001 / alpha;
    c.steps = 5000;
    c.record_stride = c.steps;
    const Eigen::MatrixXd x0 = (Eigen::VectorXd::Constant(n, 0.3) + 0.05 * rng.vector(n, -1.0, 1.0)).eval();
    double measured = kInf;
    try {
      const Trajectory tr = integrate(rhs, om, x0, c);
      const auto norms = complement_norms(tr, om);
      const double rate = -std::log(norms.back()(0) / norms.front()(0)) / tr.times.back();
      measured = std::abs(rate - alpha) / alpha;
    } catch (const DivergenceError&) {
    }
    out.push_back(check_at_most("integrator.convergence_to_mean", measured, rate_tol));
  }

  {
    const PedsSystem peds(logistic_target(), om, MapKind::noncommutative(), standard_decays(1, 0.3));
    Eigen::MatrixXd x0 = rng.matrix(n, 1, -1.0, 1.0);
    x0.col(0) = complement_project(om, x0.col(0));
    const Trajectory tr = integrate(peds, x0, ic);
    double span = 0.0;
    for (const auto& x : tr.states) span = std::max(span, (complement_project(om, x.col(0)) - x.col(0)).cwiseAbs().maxCoeff());
    out.push_back(check_at_most("integrator.span_closure", span, 1e-8));
  }

  {
    const PedsSystem peds(logistic_target(), Projector::uniform_mean_field(5), MapKind::noncommutative(), standard_decays(1, 0.3));
    const Eigen::MatrixXd x0 = rng.matrix(5, 1, 0.1, 0.6);
    auto gap = [&](double dt) {
      IntegrationConfig c;
      c.dt = dt;
      c.steps = static_cast<long>(std::lround(1.0 / dt));
      c.record_stride = c.steps;
      c.method = Method::ExplicitEuler;
      const Trajectory e = integrate(peds, x0, c);
      c.method = Method::RungeKutta4;
      const Trajectory r = integrate(peds, x0, c);
      return (e.states.back() - r.states.back()).cwiseAbs().maxCoeff();
    };
    const double ratio = gap(0.01) / gap(0.005);
    out.push_back(check_at_most("integrator.scheme_consistency", std::max(ratio / 2.0, 2.0 / ratio), 2.5));
  }
}

// --- analysis ----------------------------------------------------------------

struct Equilibrium {
  TargetSystem sys;
  Eigen::VectorXd x;
};

std::vector<Equilibrium> equilibria() {
  std::vector<Equilibrium> out;
  for (double r : polynomial_real_roots({9.85, -10.0, -2.0, 0.0}))
    out.push_back({quartic_gradient(9.85, -10.0, -2.0, 0.0), Eigen::VectorXd::Constant(1, r)});
  for (double r : polynomial_real_roots({9.85, 10.0, 2.0, -0.395}))
    out.push_back({quartic_gradient(9.85, 10.0, 2.0, -0.395), Eigen::VectorXd::Constant(1, r)});
  for (const auto& p : {Eigen::Vector2d(0, 1), Eigen::Vector2d(0, -1), Eigen::Vector2d(0, 0)}) out.push_back({potential2d_gradient(), p});
  return out;
}

std::vector<Decay> decay_family(int which, int m, int n, Rng& rng) {
  std::vector<Decay> out;
  for (int i = 0; i < m; ++i) {
    if (which == 0) out.push_back(Decay::standard(rng.uniform(0.05, 1.0)));
    else if (which == 1) out.push_back(Decay::gen_a(rng.vector(n, 0.1, 1.0)));
    else out.push_back(Decay::gen_b(rng.vector(n, 0.1, 1.0)));
  }
  return out;
}

void analysis_properties(std::vector<PropertyCheck>& out, Rng& rng) {
  const double h = 1e-5;
  double fd_gap = 0.0;
  auto compare = [&](const TargetSystem& sys, const Eigen::VectorXd& x, const MapKind& map, int n, int family) {
    const PedsSystem peds(sys, Projector::uniform_mean_field(n), map, decay_family(family, sys.dim(), n, rng));
    const JacobianReport rep = peds_jacobian_closed_form(peds, x);
    const Eigen::MatrixXd fd = peds_jacobian_fd(peds, peds.uniform_state(x), h);
    fd_gap = std::max(fd_gap, (rep.closed_form - fd).cwiseAbs().maxCoeff());
  };
  const Eigen::VectorXd competition_star = Eigen::VectorXd::Constant(3, 1.0 / 1.5);
  for (int n : {2, 5, 20})
    for (int family = 0; family < 3; ++family) {
      for (double r : polynomial_real_roots({9.85, -10.0, -2.0, 0.0}))
        for (const auto& map : all_maps()) compare(quartic_gradient(9.85, -10.0, -2.0, 0.0), Eigen::VectorXd::Constant(1, r), map, n, family);
      for (const auto& p : {Eigen::Vector2d(0, 1), Eigen::Vector2d(0, -1)})
        for (const auto& map : {MapKind::commutative(), MapKind::noncommutative(), MapKind::noncommutative(Ordering::balanced())})
          compare(potential2d_gradient(), p, map, n, family);
      for (const auto& map : all_maps()) compare(cyclic_competition(0.5), competition_star, map, n, family);
    }
  out.push_back(check_at_most("analysis.closed_form_vs_fd", fd_gap, 1e-5));

  double spectrum = 0.0;
  for (const auto& eq : equilibria())
    for (int n : {5, 20}) {
      const double alpha = 0.3;
      const PedsSystem peds(eq.sys, Projector::uniform_mean_field(n), MapKind::noncommutative(), standard_decays(eq.sys.dim(), alpha));
      const JacobianReport rep = peds_jacobian_closed_form(peds, eq.x);
      auto expect = rep.target_eigenvalues;
      for (int k = 0; k < eq.sys.dim() * (n - 1); ++k) expect.emplace_back(-alpha, 0.0);
      spectrum = std::max(spectrum, multiset_distance(rep.eigenvalues, expect));
    }
  out.push_back(check_at_most("analysis.spectrum_theorem", spectrum, 1e-8));

  double order_gap = 0.0;
  for (const auto& [sys, x] : std::vector<std::pair<TargetSystem, Eigen::VectorXd>>{
           {potential2d_gradient(), Eigen::Vector2d(0, 1)}, {potential2d_gradient(), Eigen::Vector2d(0, -1)},
           {cyclic_competition(0.5), competition_star}}) {
    const Projector om = Projector::uniform_mean_field(5);
    const PedsSystem s1(sys, om, MapKind::noncommutative(Ordering::standard()), standard_decays(sys.dim(), 0.2));
    const PedsSystem s2(sys, om, MapKind::noncommutative(Ordering::balanced()), standard_decays(sys.dim(), 0.2));
    order_gap = std::max(order_gap, (peds_jacobian_fd(s1, s1.uniform_state(x), h) - peds_jacobian_fd(s2, s2.uniform_state(x), h)).cwiseAbs().maxCoeff());
  }
  out.push_back(check_at_most("analysis.ordering_invariance_at_equilibria", order_gap, 1e-6));

  double commutator = 0.0;
  for (const auto& eq : equilibria()) {
    const int n = 6, m = eq.sys.dim();
    const Eigen::MatrixXd om = Projector::uniform_mean_field(n).matrix();
    const Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n) - om;
    const Eigen::MatrixXd jm = eq.sys.jacobian(eq.x);
    Eigen::MatrixXd j1 = Eigen::MatrixXd::Zero(m * n, m * n), j2 = j1;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) j1.block(i * n, j * n, n, n) = jm(i, j) * om;
      j2.block(i * n, i * n, n, n) = -c * rng.vector(n, 0.1, 1.0).asDiagonal() * c;
    }
    commutator = std::max(commutator, (j1 * j2 - j2 * j1).cwiseAbs().maxCoeff());
  }
  out.push_back(check_at_most("analysis.genb_commutation", commutator, 1e-10));

  int mismatches = 0;
  for (const auto& eq : equilibria()) {
    const PedsSystem peds(eq.sys, Projector::uniform_mean_field(5), MapKind::noncommutative(), standard_decays(eq.sys.dim(), 0.2));
    const JacobianReport rep = peds_jacobian_closed_form(peds, eq.x);
    const Stability expect = rep.target_classification == Stability::Unstable ? Stability::Saddle : rep.target_classification;
    mismatches += rep.classification != expect;
  }
  out.push_back(check_at_most("analysis.classification_transfer", mismatches, 0.0));

  int outside = 0;
  for (double r : polynomial_real_roots({9.85, -10.0, -2.0, 0.0}))
    for (int n : {1, 5, 20}) {
      const PedsSystem peds(quartic_gradient(9.85, -10.0, -2.0, 0.0), Projector::uniform_mean_field(n), MapKind::noncommutative(),
                            {Decay::gen_a(rng.vector(n, 0.1, 1.0))});
      const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, r);
      const auto discs = gerschgorin_bounds(peds, x);
      for (const auto& z : peds_jacobian_closed_form(peds, x).eigenvalues)
        outside += std::none_of(discs.begin(), discs.end(), [&](const Disc& d) { return d.contains(z, 1e-9); });
    }
  out.push_back(check_at_most("analysis.gerschgorin_containment", outside, 0.0));
}

}  // namespace

TargetSystem cyclic_competition(double c) {
  TargetSystem t(3);
  for (int i = 0; i < 3; ++i) {
    std::vector<int> lin(3, 0), sq(3, 0), cross(3, 0);
    lin[i] = 1;
    sq[i] = 2;
    cross[i] = 1;
    cross[(i + 1) % 3] = 1;
    t.add_monomial(i, 1.0, lin).add_monomial(i, -1.0, sq).add_monomial(i, -c, cross);
  }
  return t;
}

std::vector<PropertyCheck> run_verify(const VerifyOptions& opt) {
  Rng rng(opt.seed);
  std::vector<PropertyCheck> out;
  projector_properties(out, rng);
  target_properties(out, rng);
  embedding_properties(out, rng);
  integrator_properties(out, rng, opt);
  analysis_properties(out, rng);
  return out;
}

}  // namespace peds
