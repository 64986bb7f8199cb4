#include "tsq/tsallis.hpp"

#include <cmath>

#include <fmt/format.h>

namespace tsq {

TsallisQ::TsallisQ(double q) : q_(q) {
  if (!(q > 0.0) || q > 2.0 || std::abs(q - 1.0) <= 1e-9) {
    throw Error(ErrorCode::QOutOfRange, fmt::format("q = {} is outside (0,1) U (1,2]", q));
  }
}

double tsallis_entropy(const DensityMatrix& rho, TsallisQ q) {
  const SpectralDecomposition sd = eigh(rho);
  const double cutoff = tol::kSupportRelative * std::max(sd.values(0), 0.0);
  double tr = 0.0;
  for (Eigen::Index k = 0; k < sd.values.size(); ++k) {
    const double l = sd.values(k);
    if (l > cutoff && l > 0.0) tr += std::pow(l, q.value());
  }
  return (1.0 - tr) / (q.value() - 1.0);
}

ExtendedReal tsallis_relative_entropy_unnormalized(const CMatrix& a, const CMatrix& b, TsallisQ q) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw Error(ErrorCode::DimMismatch, "operators differ in shape");
  }
  const double qv = q.value();
  if (qv > 1.0) {
    // Weight of A on the kernel of B.
    const SpectralDecomposition sb = eigh_hermitian(b);
    const double cutoff = tol::kSupportRelative * std::max(sb.values(0), 0.0);
    double leak = 0.0;
    for (Eigen::Index k = 0; k < sb.values.size(); ++k) {
      if (sb.values(k) > cutoff && sb.values(k) > 0.0) continue;
      const CVector v = sb.vectors.col(k);
      leak += (v.adjoint() * a * v)(0, 0).real();
    }
    if (leak > tol::kEigenFloor) return ExtendedReal::infinity();
  }
  const CMatrix ap = matrix_power(a, qv);
  const CMatrix bp = matrix_power(b, 1.0 - qv);
  const double tr = (ap * bp).trace().real();
  return ExtendedReal((tr - 1.0) / (qv - 1.0));
}

ExtendedReal tsallis_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, TsallisQ q) {
  if (!(rho.dims() == sigma.dims())) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("dims {} vs {}", rho.dims().to_string(), sigma.dims().to_string()));
  }
  return tsallis_relative_entropy_unnormalized(rho.matrix(), sigma.matrix(), q);
}

}  // namespace tsq
