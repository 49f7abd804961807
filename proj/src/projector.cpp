#include "peds/projector.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "peds/error.hpp"

namespace peds {

namespace {

constexpr double kGramConditionLimit = 1e12;

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXcd eigenvalues_of(const Eigen::MatrixXd& m) {
  if (is_symmetric(m, 0.0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");
    return es.eigenvalues().cast<std::complex<double>>();
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
  return es.eigenvalues();
}

}  // namespace

std::string to_string(ProjectorKind kind) {
  switch (kind) {
    case ProjectorKind::UniformMeanField: return "uniform_mean_field";
    case ProjectorKind::Trivial: return "trivial";
    case ProjectorKind::Gram: return "gram";
    case ProjectorKind::Custom: return "custom";
  }
  return "custom";
}

ProjectorKind parse_projector_kind(const std::string& text) {
  if (text == "uniform_mean_field" || text == "mean_field") return ProjectorKind::UniformMeanField;
  if (text == "trivial" || text == "identity") return ProjectorKind::Trivial;
  if (text == "gram") return ProjectorKind::Gram;
  if (text == "custom") return ProjectorKind::Custom;
  throw ConfigError("unknown projector kind '" + text + "'");
}

Projector::Projector(Eigen::MatrixXd m, int rank, ProjectorKind kind)
    : matrix_(std::move(m)), rank_(rank), kind_(kind), symmetric_(is_symmetric(matrix_, 0.0)) {}

Projector Projector::uniform_mean_field(int n) {
  if (n <= 0) throw DimensionError("uniform_mean_field: n must be positive, got " + std::to_string(n));
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  return Projector(std::move(m), 1, ProjectorKind::UniformMeanField);
}

Projector Projector::trivial(int n) {
  if (n <= 0) throw DimensionError("trivial projector: n must be positive, got " + std::to_string(n));
  return Projector(Eigen::MatrixXd::Identity(n, n), n, ProjectorKind::Trivial);
}

Projector Projector::gram(const Eigen::MatrixXd& b) {
  const Eigen::Index k = b.rows();
  const Eigen::Index n = b.cols();
  if (k == 0 || n == 0) throw DimensionError("gram_projector: empty matrix");
  if (k > n) throw SingularGramError("gram_projector: " + std::to_string(k) + " rows exceed " + std::to_string(n) + " columns");
  if (!b.allFinite()) throw DomainError("gram_projector: non-finite entry");

  // Range of B^t through its thin SVD; cond(BB^t) = (smax/smin)^2.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.transpose(), Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(k - 1);
  if (!(smin > 0.0) || (smax / smin) * (smax / smin) > kGramConditionLimit) {
    std::ostringstream msg;
    msg << "gram_projector: B B^t is singular or ill conditioned (cond ~ "
        << (smin > 0.0 ? (smax / smin) * (smax / smin) : INFINITY) << ")";
    throw SingularGramError(msg.str());
  }
  const Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd m = u * u.transpose();
  m = (0.5 * (m + m.transpose())).eval();

  const double err = idempotence_error(m);
  if (err > kIdempotenceTolerance) throw NumericError("gram_projector: idempotence error " + std::to_string(err));
  return Projector(std::move(m), static_cast<int>(k), ProjectorKind::Gram);
}

Projector Projector::custom(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("custom projector must be square and non-empty");
  if (!m.allFinite()) throw DomainError("custom projector: non-finite entry");
  const double err = idempotence_error(m);
  if (err > kIdempotenceTolerance) throw NumericError("custom projector: idempotence error " + std::to_string(err));
  const double split = spectral_split_error(m);
  if (split > kSpectralTolerance) throw NumericError("custom projector: eigenvalue off {0,1} by " + std::to_string(split));
  return Projector(m, projector_rank(m), ProjectorKind::Custom);
}

Eigen::VectorXd Projector::apply(const Eigen::VectorXd& v) const {
  if (v.size() != matrix_.rows()) throw DimensionError("projector apply: length " + std::to_string(v.size()) + " vs N=" + std::to_string(matrix_.rows()));
  switch (kind_) {
    case ProjectorKind::UniformMeanField: return Eigen::VectorXd::Constant(v.size(), v.mean());
    case ProjectorKind::Trivial: return v;
    default: return matrix_ * v;
  }
}

double idempotence_error(const Eigen::MatrixXd& m) {
  return (m * m - m).cwiseAbs().maxCoeff();
}

int projector_rank(const Eigen::MatrixXd& m) {
  const Eigen::VectorXcd ev = eigenvalues_of(m);
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i).real() > 0.5) ++r;
  return r;
}

double spectral_split_error(const Eigen::MatrixXd& m) {
  const Eigen::VectorXcd ev = eigenvalues_of(m);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    worst = std::max(worst, std::min(std::abs(ev(i)), std::abs(ev(i) - 1.0)));
  return worst;
}

Eigen::MatrixXd projector_exponential(const Projector& omega, double a) {
  const int n = omega.dim();
  return Eigen::MatrixXd::Identity(n, n) + std::expm1(a) * omega.matrix();
}

Eigen::VectorXd complement_project(const Projector& omega, const Eigen::VectorXd& v) {
  return v - omega.apply(v);
}

void write_projector(std::ostream& out, const Projector& omega) {
  const Eigen::MatrixXd& m = omega.matrix();
  out << m.rows() << ' ' << omega.rank() << ' ' << to_string(omega.kind()) << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

Projector read_projector(std::istream& in) {
  long n = 0, k = 0;
  std::string kind_text;
  if (!(in >> n >> k >> kind_text)) throw ConfigError("projector file: bad header, expected 'N K kind'");
  if (n <= 0) throw DimensionError("projector file: N must be positive");
  const ProjectorKind kind = parse_projector_kind(kind_text);
  auto check_rank = [&](long expect) {
    if (k != expect) throw ConfigError("projector file: declared rank " + std::to_string(k) + " but kind implies " + std::to_string(expect));
  };
  Eigen::MatrixXd m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (!(in >> m(i, j))) throw ConfigError("projector file: expected " + std::to_string(n * n) + " entries");

  switch (kind) {
    case ProjectorKind::UniformMeanField: {
      check_rank(1);
      Projector p = Projector::uniform_mean_field(static_cast<int>(n));
      if ((m - p.matrix()).cwiseAbs().maxCoeff() > kIdempotenceTolerance) throw ConfigError("projector file: entries are not 1/N");
      return p;
    }
    case ProjectorKind::Trivial: {
      check_rank(n);
      if ((m - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > kIdempotenceTolerance) throw ConfigError("projector file: trivial kind but not identity");
      return Projector::trivial(static_cast<int>(n));
    }
    default: break;
  }
  Projector p = Projector::custom(m);
  if (p.rank() != k) throw ConfigError("projector file: declared rank " + std::to_string(k) + " but found " + std::to_string(p.rank()));
  if (kind == ProjectorKind::Gram && p.symmetric()) return Projector(p.matrix(), p.rank(), ProjectorKind::Gram);
  return p;
}

Projector load_projector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open projector file '" + path + "'");
  return read_projector(in);
}

}  // namespace peds
