#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "peds/matrix_function.hpp"
#include "peds/projector.hpp"
#include "peds/target_system.hpp"

namespace peds {

/// Extended state: N x m matrix whose column i is the replica vector X_i.
using ExtendedState = Eigen::MatrixXd;

struct MapKind {
  enum class Tag { StandardCommutative, MixedCommutative, StandardNonCommutative };
  Tag tag = Tag::StandardNonCommutative;
  Ordering ordering;

  static MapKind commutative() { return {Tag::StandardCommutative, {}}; }
  static MapKind mixed() { return {Tag::MixedCommutative, {}}; }
  static MapKind noncommutative(Ordering ord = Ordering::standard()) { return {Tag::StandardNonCommutative, std::move(ord)}; }
};

std::string to_string(MapKind::Tag tag);
MapKind::Tag parse_map_kind(const std::string& text);
std::string to_string(OrderingKind kind);
Ordering parse_ordering(const std::string& text);

struct Decay {
  enum class Tag { Standard, GenA, GenB };
  Tag tag = Tag::Standard;
  double alpha = 1.0;
  Eigen::VectorXd d;  // GenA / GenB diagonal

  static Decay standard(double alpha);
  static Decay gen_a(Eigen::VectorXd d);
  static Decay gen_b(Eigen::VectorXd d);
};

/// Standard: -alpha (I - Omega) x; GenA: -D (I - Omega) x; GenB: -(I - Omega) D (I - Omega) x.
Eigen::VectorXd apply_decay(const Decay& decay, const Projector& omega, const Eigen::VectorXd& x);

/// Sum over permutations of o_sigma * prod_j (Omega X_sigma(j))^e_sigma(j) as a dense matrix.
Eigen::MatrixXd noncommutative_monomial(const Projector& omega,
                                        const std::vector<std::pair<Eigen::VectorXd, int>>& states,
                                        const Ordering& ord);

/// Real principal k-th root; odd k keeps the sign, even k rejects negative input.
double principal_root(double p, int k);

/// Monomial expansion of a factorized term, truncating analytic factors at `order`.
std::vector<MonomialTerm> expand_to_monomials(const FactorTerm& term, int m, int order, double radius, double* remainder);

/// dX_i/dt = Omega F_i(X_1..X_m) b_i + G_i(Omega; X_i)
class PedsSystem {
 public:
  PedsSystem(TargetSystem target, Projector omega, MapKind map, std::vector<Decay> decays,
             std::vector<Eigen::VectorXd> b = {}, int taylor_order = 20);

  ExtendedState rhs(const ExtendedState& state) const;
  /// Omega F_i b_i without the decay term.
  Eigen::VectorXd drive(int i, const ExtendedState& state) const;

  int m() const { return target_.dim(); }
  int n() const { return omega_.dim(); }
  const TargetSystem& target() const { return target_; }
  const Projector& omega() const { return omega_; }
  const MapKind& map() const { return map_; }
  const std::vector<Decay>& decays() const { return decays_; }
  const std::vector<Eigen::VectorXd>& b() const { return b_; }
  bool unit_b() const;
  /// Truncation estimate of the mixed map's Taylor expansion (0 when no analytic factor was expanded).
  double taylor_remainder() const { return taylor_remainder_; }

  ExtendedState uniform_state(const Eigen::VectorXd& x) const;

 private:
  void check_state(const ExtendedState& state) const;
  Eigen::VectorXd drive_commutative(int i, const Eigen::MatrixXd& fvals) const;
  Eigen::VectorXd drive_noncommutative(int i, const std::vector<ProjectedSpectrum>& spectra) const;
  Eigen::VectorXd drive_mixed(int i, const ExtendedState& state) const;

  TargetSystem target_;
  Projector omega_;
  MapKind map_;
  std::vector<Decay> decays_;
  std::vector<Eigen::VectorXd> b_;
  std::vector<std::vector<MonomialTerm>> mixed_terms_;
  double taylor_remainder_ = 0.0;
};

/// x~_i = (1/N) 1^t Omega X_i per column.
Eigen::VectorXd projected_observable(const Projector& omega, const ExtendedState& state);

}  // namespace peds
