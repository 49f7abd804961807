#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace peds {

enum class ProjectorKind { UniformMeanField, Trivial, Gram, Custom };

std::string to_string(ProjectorKind kind);
ProjectorKind parse_projector_kind(const std::string& text);

inline constexpr double kIdempotenceTolerance = 1e-10;
inline constexpr double kSpectralTolerance = 1e-8;

class Projector;
Projector read_projector(std::istream& in);

/// Dense idempotent N x N matrix with certified idempotence and rank metadata.
/// Immutable after construction.
class Projector {
 public:
  static Projector uniform_mean_field(int n);
  static Projector trivial(int n);
  /// Omega = B^t (B B^t)^-1 B for a full-row-rank K x N matrix B.
  static Projector gram(const Eigen::MatrixXd& b);
  /// Validates idempotence and the {0,1} spectrum; throws NumericError otherwise.
  static Projector custom(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  int rank() const { return rank_; }
  ProjectorKind kind() const { return kind_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  bool symmetric() const { return symmetric_; }
  bool is_mean_field() const { return kind_ == ProjectorKind::UniformMeanField; }

  /// Omega * v with closed forms for the mean-field and trivial kinds.
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

 private:
  Projector(Eigen::MatrixXd m, int rank, ProjectorKind kind);
  friend Projector read_projector(std::istream& in);

  Eigen::MatrixXd matrix_;
  int rank_ = 0;
  ProjectorKind kind_ = ProjectorKind::Custom;
  bool symmetric_ = false;
};

/// max |(M^2 - M)_ij|
double idempotence_error(const Eigen::MatrixXd& m);

/// Number of eigenvalues with real part above 0.5.
int projector_rank(const Eigen::MatrixXd& m);

/// Largest distance of an eigenvalue of m from the set {0, 1}.
double spectral_split_error(const Eigen::MatrixXd& m);

/// I + (e^a - 1) Omega, the exponential of a * Omega.
Eigen::MatrixXd projector_exponential(const Projector& omega, double a);

/// (I - Omega) v
Eigen::VectorXd complement_project(const Projector& omega, const Eigen::VectorXd& v);

// Plain-text format: first line "N K kind", then N rows of N entries.
void write_projector(std::ostream& out, const Projector& omega);
Projector read_projector(std::istream& in);
Projector load_projector(const std::string& path);

}  // namespace peds
