#pragma once

#include <limits>

#include "tsq/qcore.hpp"

namespace tsq {

/// Entropic index restricted to (0, 1) U (1, 2].
class TsallisQ {
 public:
  explicit TsallisQ(double q);

  double value() const noexcept { return q_; }
  bool below_one() const noexcept { return q_ < 1.0; }
  /// 1 / (1 - q), the prefactor shared by every measure.
  double prefactor() const noexcept { return 1.0 / (1.0 - q_); }

 private:
  double q_;
};

/// A real number or +infinity; the infinite value only arises from a support
/// violation in the relative entropy.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v) {}
  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  /// +inf when infinite.
  constexpr double value() const noexcept { return value_; }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

double tsallis_entropy(const DensityMatrix& rho, TsallisQ q);

/// D_q(rho || sigma) = (Tr rho^q sigma^(1-q) - 1) / (q - 1).
/// For q > 1, sigma^(1-q) is the pseudo-power on supp(sigma) and the result
/// is +inf when rho puts more than 1e-10 weight on ker(sigma).
ExtendedReal tsallis_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, TsallisQ q);

/// The same expression evaluated literally on positive semidefinite operators
/// that need not have unit trace: (Tr A^q B^(1-q) - 1) / (q - 1).
ExtendedReal tsallis_relative_entropy_unnormalized(const CMatrix& a, const CMatrix& b, TsallisQ q);

}  // namespace tsq
