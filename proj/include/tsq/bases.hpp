#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "tsq/qcore.hpp"

namespace tsq {

/// An orthonormal basis {|j>}: column j of a unitary.
class BasisSet {
 public:
  static BasisSet computational(int d);
  /// Rejects U with max |U^dag U - 1| > 1e-10.
  static BasisSet from_unitary(CMatrix u);
  /// For unitaries produced internally (exp of a Hermitian generator, Haar
  /// sampling) where the check would be redundant.
  static BasisSet trusted(CMatrix u) { return BasisSet(std::move(u)); }

  const CMatrix& unitary() const noexcept { return u_; }
  int dim() const noexcept { return static_cast<int>(u_.cols()); }
  CVector vector(int j) const { return u_.col(j); }

 private:
  explicit BasisSet(CMatrix u) : u_(std::move(u)) {}
  CMatrix u_;
};

/// exp(-i H(theta)) with H laid out as in hermitian_generator; theta has d^2
/// entries and theta = 0 gives the identity.
BasisSet parametrize_unitary(std::span<const double> theta);

/// Qubit basis whose first vector has Bloch angles (theta, phi).
BasisSet bloch_basis(double theta, double phi);

struct LocalBases {
  BasisSet a;
  std::optional<BasisSet> b;  // absent when only A is optimized

  /// Product basis |i>|j> as columns of U_A (x) U_B (U_B = 1 when absent).
  CMatrix product(int dim_b) const;
};

struct BasisOptConfig {
  int restarts = 32;
  int max_iters = 2000;
  double f_tol = 1e-10;
  std::uint64_t seed = 0;
};

struct BasisOptResult {
  double value = 0.0;
  LocalBases bases{BasisSet::computational(1), std::nullopt};
  int restarts = 0;
  int restarts_converged = 0;

  bool converged() const noexcept { return restarts_converged == restarts; }
};

/// Objectives handed to the optimizers must depend on the bases only through
/// the projectors |i><i| (and |j><j|); the phase of each column is not
/// searched over.
using BasisObjective = std::function<double(const LocalBases&)>;

/// Restart 0 starts from the computational bases; the rest from seeded Haar
/// bases. Deterministic given config.seed.
BasisOptResult minimize_over_bases(const BasisObjective& objective, const Dims& dims, bool optimize_b,
                                   const BasisOptConfig& config);

/// Exhaustive scan over qubit bases given by Bloch angles, resolution points
/// per angle (theta including both poles, phi over [0, 2 pi)). Two-sided
/// scans cover resolution^4 points, one-sided scans resolution^2.
double grid_oracle_two_qubit(const BasisObjective& objective, const Dims& dims, int resolution, bool optimize_b = true);

}  // namespace tsq
