#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "peds/embedding.hpp"
#include "peds/error.hpp"
#include "peds/matrix_function.hpp"

using namespace peds;

namespace {

std::mt19937 gen(7);

Eigen::VectorXd random_vector(int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(gen);
  return v;
}

TargetSystem logistic() {
  TargetSystem t(1);
  t.add_monomial(0, 1.0, {1}).add_monomial(0, -1.0, {2});
  return t;
}

Eigen::MatrixXd exp_series(const Eigen::MatrixXd& a, int terms) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(a.rows(), a.cols()), term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * a / k;
    sum += term;
  }
  return sum;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Decay, StandardHandExample) {
  const Eigen::VectorXd d = apply_decay(Decay::standard(0.1), Projector::uniform_mean_field(2), Eigen::Vector2d(3, 1));
  EXPECT_NEAR(d(0), -0.1, 1e-15);
  EXPECT_NEAR(d(1), 0.1, 1e-15);
}

TEST(Decay, ConstantVectorIsFixedForAllFamilies) {
  const Projector om = Projector::uniform_mean_field(6);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(6, -2.5);
  const Eigen::VectorXd d = random_vector(6, 0.1, 1.0);
  for (const Decay& dec : {Decay::standard(0.7), Decay::gen_a(d), Decay::gen_b(d)}) EXPECT_LE(max_abs(apply_decay(dec, om, c)), 1e-15);
}

TEST(Decay, GenBWithScalarDiagonalReducesToStandard) {
  const Projector om = Projector::gram(Eigen::MatrixXd::Random(3, 8));
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd x = random_vector(8, -1.0, 1.0);
    EXPECT_LE(max_abs(apply_decay(Decay::gen_b(Eigen::VectorXd::Constant(8, 0.4)), om, x) - apply_decay(Decay::standard(0.4), om, x)), 1e-14);
  }
}

TEST(Decay, RejectsNonPositiveParameters) {
  EXPECT_THROW(Decay::standard(0.0), DomainError);
  EXPECT_THROW(Decay::gen_a(Eigen::Vector2d(1.0, -0.1)), DomainError);
  EXPECT_THROW(Decay::gen_b(Eigen::Vector2d(0.0, 1.0)), DomainError);
}

TEST(NoncommutativeMonomial, MeanFieldPowerCollapses) {
  const Projector om = Projector::uniform_mean_field(5);
  const Eigen::VectorXd x = random_vector(5, -1.0, 2.0);
  for (int k = 1; k <= 5; ++k) {
    const Eigen::MatrixXd got = noncommutative_monomial(om, {{x, k}}, Ordering::standard());
    EXPECT_LE(max_abs(got - std::pow(x.mean(), k - 1) * om.matrix() * x.asDiagonal()), 1e-13);
  }
}

TEST(NoncommutativeMonomial, ZeroExponentsGiveIdentity) {
  const Projector om = Projector::uniform_mean_field(4);
  const Eigen::MatrixXd got = noncommutative_monomial(om, {{random_vector(4, 0, 1), 0}, {random_vector(4, 0, 1), 0}}, Ordering::balanced());
  EXPECT_EQ(got, Eigen::MatrixXd::Identity(4, 4));
}

TEST(NoncommutativeMonomial, TwoVariablesMeanField) {
  const Projector om = Projector::uniform_mean_field(6);
  const Eigen::VectorXd x = random_vector(6, -1, 1), y = random_vector(6, -1, 1);
  const Eigen::MatrixXd ax = om.matrix() * x.asDiagonal(), ay = om.matrix() * y.asDiagonal();
  const Eigen::MatrixXd dense = ax * ay * ay;
  const Eigen::MatrixXd got = noncommutative_monomial(om, {{x, 1}, {y, 2}}, Ordering::standard());
  EXPECT_LE(max_abs(got - dense), 1e-14);
  EXPECT_LE(max_abs(got - x.mean() * y.mean() * ay), 1e-14);
}

TEST(NoncommutativeMonomial, BalancedAveragesBothOrders) {
  const Projector om = Projector::gram(Eigen::MatrixXd::Random(2, 5));
  const Eigen::VectorXd x = random_vector(5, -1, 1), y = random_vector(5, -1, 1);
  const Eigen::MatrixXd ax = om.matrix() * x.asDiagonal(), ay = om.matrix() * y.asDiagonal();
  const Eigen::MatrixXd expect = 0.5 * (ax * ay * ay + ay * ay * ax);
  EXPECT_LE(max_abs(noncommutative_monomial(om, {{x, 1}, {y, 2}}, Ordering::balanced()) - expect), 1e-14);
}

TEST(MatrixFunctionEval, IdentityFunctionReturnsOmegaX) {
  const Projector om = Projector::gram(Eigen::MatrixXd::Random(3, 7));
  const Eigen::VectorXd x = random_vector(7, 0.2, 2.0);
  EXPECT_LE(max_abs(matrix_function_eval(om, x, ScalarFunction::power(1)) - om.matrix() * x.asDiagonal()), 1e-10);
}

TEST(MatrixFunctionEval, SquareUnderMeanField) {
  const Projector om = Projector::uniform_mean_field(8);
  const Eigen::VectorXd x = random_vector(8, 0.2, 2.0);
  const Eigen::MatrixXd a = om.matrix() * x.asDiagonal();
  EXPECT_LE(max_abs(matrix_function_eval(om, x, ScalarFunction::power(2)) - a * a), 1e-10);
  EXPECT_LE(max_abs(matrix_function_eval(om, x, ScalarFunction::power(2)) - x.mean() * a), 1e-10);
}

TEST(MatrixFunctionEval, ExpMatchesTaylorSeries) {
  const Projector om = Projector::uniform_mean_field(6);
  const Eigen::VectorXd x = random_vector(6, 0.2, 1.5);
  const Eigen::MatrixXd a = om.matrix() * x.asDiagonal();
  EXPECT_LE(max_abs(matrix_function_eval(om, x, ScalarFunction::exp_of_polynomial({0.0, 1.0})) - exp_series(a, 30)), 1e-9);
}

TEST(MatrixFunctionEval, RejectsNonPositiveDiagonal) {
  const Projector om = Projector::uniform_mean_field(3);
  EXPECT_THROW(matrix_function_eval(om, Eigen::Vector3d(1.0, 0.0, 2.0), ScalarFunction::power(2)), DomainError);
  EXPECT_THROW(matrix_function_eval(om, Eigen::Vector3d(1.0, -0.5, 2.0), ScalarFunction::power(2)), DomainError);
}

TEST(MatrixFunctionSandwich, AgreesWithSeriesForSignedDiagonals) {
  const Projector om = Projector::gram(Eigen::MatrixXd::Random(3, 6));
  const Eigen::VectorXd x = random_vector(6, -1.0, 1.0);
  const Eigen::MatrixXd a = om.matrix() * x.asDiagonal();
  EXPECT_LE(max_abs(matrix_function_sandwich(om, x, ScalarFunction::exp_of_polynomial({0.0, 1.0})) - exp_series(a, 40)), 1e-12);
  // 1/(1 - 0.3 s) = sum (0.3 a)^k
  Eigen::MatrixXd geo = Eigen::MatrixXd::Identity(6, 6), term = geo;
  for (int k = 1; k < 200; ++k) {
    term = term * (0.3 * a);
    geo += term;
  }
  EXPECT_LE(max_abs(matrix_function_sandwich(om, x, ScalarFunction::reciprocal_affine(1.0, -0.3)) - geo), 1e-12);
}

TEST(SimilaritySpectrum, RealForSymmetricProjector) {
  const Projector om = Projector::gram(Eigen::MatrixXd::Random(4, 12));
  EXPECT_LE(similarity_spectrum_imag(om, random_vector(12, 0.1, 3.0)), 1e-10);
}

TEST(PedsRhs, LogisticComponentForm) {
  const double alpha = 0.3;
  const PedsSystem sys(logistic(), Projector::uniform_mean_field(2), MapKind::noncommutative(), {Decay::standard(alpha)});
  const Eigen::MatrixXd x = Eigen::Vector2d(0.3, 0.1);
  const double mean = 0.2;
  const Eigen::MatrixXd d = sys.rhs(x);
  EXPECT_NEAR(d(0, 0), mean - mean * mean - alpha * (0.3 - mean), 1e-15);
  EXPECT_NEAR(d(1, 0), mean - mean * mean - alpha * (0.1 - mean), 1e-15);
}

TEST(PedsRhs, CommutativeMapUsesComponentwiseTarget) {
  // Omega_1 diag(f(X_k)) 1 = <f(X)> 1
  const double alpha = 0.3;
  const PedsSystem sys(logistic(), Projector::uniform_mean_field(2), MapKind::commutative(), {Decay::standard(alpha)});
  const Eigen::MatrixXd d = sys.rhs(Eigen::Vector2d(0.3, 0.1));
  const double mean_f = 0.5 * ((0.3 - 0.09) + (0.1 - 0.01));
  EXPECT_NEAR(d(0, 0), mean_f - alpha * 0.1, 1e-15);
  EXPECT_NEAR(d(1, 0), mean_f + alpha * 0.1, 1e-15);
}

TEST(PedsRhs, BanalityForEveryMapKind) {
  const Projector om = Projector::uniform_mean_field(7);
  for (const MapKind& map : {MapKind::commutative(), MapKind::mixed(), MapKind::noncommutative(), MapKind::noncommutative(Ordering::balanced())}) {
    for (const auto& [sys, x] : std::vector<std::pair<TargetSystem, Eigen::VectorXd>>{
             {logistic(), Eigen::VectorXd::Constant(1, 0.37)},
             {potential2d_gradient(), Eigen::Vector2d(0.4, -0.8)},
             {damped_hamiltonian({9.85, -10.0, -2.0, 0.0}, 1.0, 1.0), Eigen::Vector2d(-3.0, 0.5)}}) {
      const PedsSystem peds(sys, om, map, std::vector<Decay>(sys.dim(), Decay::standard(0.2)), {}, 60);
      const Eigen::MatrixXd d = peds.rhs(peds.uniform_state(x));
      const Eigen::VectorXd f = sys.eval(x);
      for (int i = 0; i < sys.dim(); ++i)
        EXPECT_LE((d.col(i).array() - f(i)).abs().maxCoeff(), 1e-12 * std::max(1.0, std::abs(f(i))));
    }
  }
}

TEST(PedsRhs, OrderingIndependenceUnderMeanField) {
  const Projector om = Projector::uniform_mean_field(9);
  const PedsSystem s1(potential2d_gradient(), om, MapKind::noncommutative(Ordering::standard()), {Decay::standard(0.1), Decay::standard(0.1)});
  const PedsSystem s2(potential2d_gradient(), om, MapKind::noncommutative(Ordering::balanced()), {Decay::standard(0.1), Decay::standard(0.1)});
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd x(9, 2);
    x.col(0) = random_vector(9, -1, 1);
    x.col(1) = random_vector(9, -1.3, 1.3);
    EXPECT_LE(max_abs(s1.rhs(x) - s2.rhs(x)), 1e-10);
  }
}

TEST(PedsRhs, NoncommutativeFactorMatchesDenseSeries) {
  // factors grouped by variable index, against dense matrix exponentials
  const Projector om = Projector::gram(Eigen::MatrixXd::Random(3, 6));
  const PedsSystem sys(potential2d_gradient(), om, MapKind::noncommutative(), {Decay::standard(0.1), Decay::standard(0.1)});
  Eigen::MatrixXd x(6, 2);
  x.col(0) = random_vector(6, -0.8, 0.8);
  x.col(1) = random_vector(6, -0.8, 0.8);
  const Eigen::MatrixXd ax = om.matrix() * x.col(0).asDiagonal(), ay = om.matrix() * x.col(1).asDiagonal();
  const Eigen::MatrixXd ay2 = ay * ay;
  const Eigen::MatrixXd ex = exp_series(0.5 * ax * ax, 60), ey = exp_series(-0.5 * ay2 + 0.25 * ay2 * ay2, 60);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(6);
  const Eigen::VectorXd fx = -(ax * ex * ey * ones);
  const Eigen::VectorXd fy = (ex * ay * ey * ones) - (ex * ay * ay2 * ey * ones);
  const Eigen::MatrixXd d = sys.rhs(x);
  EXPECT_LE(max_abs(d.col(0) - (om.matrix() * fx - 0.1 * (x.col(0) - om.matrix() * x.col(0)))), 1e-12);
  EXPECT_LE(max_abs(d.col(1) - (om.matrix() * fy - 0.1 * (x.col(1) - om.matrix() * x.col(1)))), 1e-12);
}

TEST(PedsRhs, MixedMapNegativeEvenRootRaises) {
  // x*y has degree 2, so a negative product has no real root
  TargetSystem t(2);
  t.add_monomial(0, 1.0, {1, 1}).add_monomial(1, -1.0, {0, 1});
  const PedsSystem sys(t, Projector::uniform_mean_field(3), MapKind::mixed(), {Decay::standard(0.1), Decay::standard(0.1)});
  Eigen::MatrixXd x(3, 2);
  x << 1, 1, 1, -1, 1, 1;
  EXPECT_THROW(sys.rhs(x), DomainError);
  EXPECT_DOUBLE_EQ(principal_root(-8.0, 3), -2.0);
  EXPECT_THROW(principal_root(-4.0, 2), DomainError);
}

TEST(PedsRhs, MixedMapMatchesDefinition) {
  TargetSystem t(2);
  t.add_monomial(0, 0.5, {1, 2}).add_monomial(0, 1.5, {0, 0}).add_monomial(1, -1.0, {0, 1});
  const Projector om = Projector::gram(Eigen::MatrixXd::Random(2, 4));
  const PedsSystem sys(t, om, MapKind::mixed(), {Decay::standard(0.1), Decay::standard(0.1)});
  Eigen::MatrixXd x(4, 2);
  x.col(0) = random_vector(4, 0.2, 1.0);
  x.col(1) = random_vector(4, -1.0, 1.0);
  const Eigen::VectorXd root = (x.col(0).array() * x.col(1).array().square()).pow(1.0 / 3.0).matrix();
  const Eigen::MatrixXd a = om.matrix() * root.asDiagonal();
  const Eigen::VectorXd f0 = 0.5 * (a * a * a * Eigen::VectorXd::Ones(4)) + 1.5 * Eigen::VectorXd::Ones(4);
  EXPECT_LE(max_abs(sys.drive(0, x) - om.matrix() * f0), 1e-13);
}

TEST(PedsSystem, RejectsBadConfiguration) {
  const Projector om = Projector::uniform_mean_field(3);
  EXPECT_THROW(PedsSystem(logistic(), om, MapKind::commutative(), {}), DimensionError);
  EXPECT_THROW(PedsSystem(logistic(), om, MapKind::commutative(), {Decay::standard(0.1)}, {Eigen::Vector3d(1, -1, 0)}), PreconditionError);
  const PedsSystem sys(logistic(), om, MapKind::commutative(), {Decay::standard(0.1)});
  EXPECT_THROW(sys.rhs(Eigen::MatrixXd::Zero(2, 1)), DimensionError);
}

TEST(ProjectedObservable, MeanFieldIsColumnMean) {
  const Projector om = Projector::uniform_mean_field(5);
  Eigen::MatrixXd x(5, 2);
  x.col(0) = random_vector(5, -1, 1);
  x.col(1) = random_vector(5, -1, 1);
  const Eigen::VectorXd obs = projected_observable(om, x);
  EXPECT_NEAR(obs(0), x.col(0).mean(), 1e-15);
  EXPECT_NEAR(obs(1), x.col(1).mean(), 1e-15);
}
