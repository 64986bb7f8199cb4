#include "tsq/coherence.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace tsq {

const char* to_string(PureVariant v) {
  switch (v) {
    case PureVariant::III: return "III";
    case PureVariant::IV: return "IV";
    case PureVariant::V: return "V";
  }
  return "?";
}

namespace detail {

RVector rotated_power_diagonal(const CMatrix& rho, const CMatrix& u, double q) {
  const CMatrix p = matrix_power(rho, q);
  const CMatrix pu = p * u;
  RVector diag(u.cols());
  for (Eigen::Index j = 0; j < u.cols(); ++j) diag(j) = u.col(j).dot(pu.col(j)).real();
  return diag;
}

double inverse_power_sum(std::span<const double> c, double q) {
  double s = 0.0;
  for (double x : c) {
    if (x >= 1e-15) s += std::pow(x, 1.0 / q);
  }
  return s;
}

}  // namespace detail

namespace {

void check_basis(const DensityMatrix& rho, const BasisSet& basis) {
  if (basis.dim() != rho.dim()) {
    throw Error(ErrorCode::DimMismatch, fmt::format("basis of dimension {} for a state of dimension {}",
                                                    basis.dim(), rho.dim()));
  }
}

double c1_from_sum(double s, double q) { return (1.0 - std::pow(s, q)) / (1.0 - q); }
double c2_from_sum(double s, double q) { return (1.0 - s) / (1.0 - q); }

}  // namespace

double PureCoherenceFunctional::operator()(std::span<const double> p) const {
  const double q = q_.value();
  switch (variant_) {
    case PureVariant::III: {
      double s = 0.0;
      for (double x : p) {
        if (x > 0.0) s += std::pow(x, q);
      }
      return (s - 1.0) / (1.0 - q);
    }
    case PureVariant::IV: return c1_from_sum(detail::inverse_power_sum(p, q), q);
    case PureVariant::V: return c2_from_sum(detail::inverse_power_sum(p, q), q);
  }
  return 0.0;
}

double PureCoherenceFunctional::of_amplitudes(const CVector& psi) const {
  std::vector<double> p(static_cast<std::size_t>(psi.size()));
  for (Eigen::Index j = 0; j < psi.size(); ++j) p[static_cast<std::size_t>(j)] = std::norm(psi(j));
  return (*this)(p);
}

double coherence_I(const DensityMatrix& rho, const BasisSet& basis, TsallisQ q) {
  check_basis(rho, basis);
  const RVector c = detail::rotated_power_diagonal(rho.matrix(), basis.unitary(), q.value());
  return c1_from_sum(detail::inverse_power_sum(std::span(c.data(), c.size()), q.value()), q.value());
}

double coherence_II(const DensityMatrix& rho, const BasisSet& basis, TsallisQ q) {
  check_basis(rho, basis);
  const RVector c = detail::rotated_power_diagonal(rho.matrix(), basis.unitary(), q.value());
  return c2_from_sum(detail::inverse_power_sum(std::span(c.data(), c.size()), q.value()), q.value());
}

DensityMatrix closest_incoherent(const DensityMatrix& rho, const BasisSet& basis, TsallisQ q) {
  check_basis(rho, basis);
  const RVector c = detail::rotated_power_diagonal(rho.matrix(), basis.unitary(), q.value());
  RVector w(c.size());
  for (Eigen::Index j = 0; j < c.size(); ++j) w(j) = c(j) >= 1e-15 ? std::pow(c(j), 1.0 / q.value()) : 0.0;
  w /= w.sum();
  const CMatrix& u = basis.unitary();
  return validate_density(u * w.cast<cplx>().asDiagonal() * u.adjoint(), rho.dims());
}

double coherence_pure(PureVariant variant, const PureState& psi, const BasisSet& basis, TsallisQ q) {
  if (basis.dim() != psi.dim()) {
    throw Error(ErrorCode::DimMismatch, fmt::format("basis of dimension {} for a state of dimension {}",
                                                    basis.dim(), psi.dim()));
  }
  switch (variant) {
    case PureVariant::IV: return coherence_I(psi.projector(), basis, q);
    case PureVariant::V: return coherence_II(psi.projector(), basis, q);
    case PureVariant::III: break;
  }
  return PureCoherenceFunctional(variant, q).of_amplitudes(basis.unitary().adjoint() * psi.amplitudes());
}

RoofResult coherence_roof(PureVariant variant, const DensityMatrix& rho, const BasisSet& basis, TsallisQ q,
                          const RoofConfig& config) {
  check_basis(rho, basis);
  const CMatrix& u = basis.unitary();
  const DensityMatrix rotated = validate_density(u.adjoint() * rho.matrix() * u, rho.dims());
  const PureCoherenceFunctional functional(variant, q);
  RoofResult result = minimize_roof([&](const CVector& psi) { return functional.of_amplitudes(psi); }, rotated, config);
  for (auto& s : result.ensemble.states) s = u * s;
  return result;
}

}  // namespace tsq
