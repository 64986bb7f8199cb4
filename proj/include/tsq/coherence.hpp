#pragma once

#include <span>

#include "tsq/bases.hpp"
#include "tsq/qcore.hpp"
#include "tsq/roof.hpp"
#include "tsq/tsallis.hpp"

namespace tsq {

// Coherence measures relative to a fixed reference basis {|j>}.
//
//   C_I  = (1 - (sum_j <j|rho^q|j>^(1/q))^q) / (1 - q)   distance to the incoherent set
//   C_II = (1 -  sum_j <j|rho^q|j>^(1/q))    / (1 - q)
//   C_III, C_IV, C_V: pure-state functionals of p_j = |<j|psi>|^2 extended to
//   mixed states by the convex roof.

enum class PureVariant { III, IV, V };

const char* to_string(PureVariant v);

/// f(p) for a probability vector p in the reference basis:
///   III: (sum_j p_j^q - 1) / (1 - q)
///   IV : C_I of the pure state with those populations
///   V  : C_II of the pure state with those populations
class PureCoherenceFunctional {
 public:
  PureCoherenceFunctional(PureVariant variant, TsallisQ q) : variant_(variant), q_(q) {}

  double operator()(std::span<const double> probabilities) const;
  /// Populations taken in the computational basis.
  double of_amplitudes(const CVector& psi) const;

  PureVariant variant() const noexcept { return variant_; }
  TsallisQ q() const noexcept { return q_; }

 private:
  PureVariant variant_;
  TsallisQ q_;
};

double coherence_I(const DensityMatrix& rho, const BasisSet& basis, TsallisQ q);
double coherence_II(const DensityMatrix& rho, const BasisSet& basis, TsallisQ q);

/// The incoherent state attaining C_I:
/// (1/N) sum_j <j|rho^q|j>^(1/q) |j><j|.
DensityMatrix closest_incoherent(const DensityMatrix& rho, const BasisSet& basis, TsallisQ q);

double coherence_pure(PureVariant variant, const PureState& psi, const BasisSet& basis, TsallisQ q);

/// Convex-roof estimate; an upper bound on the exact roof value. The
/// ensemble is returned in the original (not the reference) frame.
RoofResult coherence_roof(PureVariant variant, const DensityMatrix& rho, const BasisSet& basis, TsallisQ q,
                          const RoofConfig& config = {});

namespace detail {
/// Diagonal of U^dag rho^q U.
RVector rotated_power_diagonal(const CMatrix& rho, const CMatrix& u, double q);
/// sum_j c_j^(1/q) with c_j < 1e-15 counted as zero.
double inverse_power_sum(std::span<const double> c, double q);
}  // namespace detail

}  // namespace tsq
