#include "tsq/roof.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tsq/unitary_search.hpp"

namespace tsq {

CMatrix Ensemble::reconstruct() const {
  if (states.empty()) return CMatrix();
  const Eigen::Index d = states.front().size();
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t n = 0; n < states.size(); ++n) out += weights[n] * states[n] * states[n].adjoint();
  return out;
}

int support_rank(const SpectralDecomposition& spectral) {
  if (spectral.values.size() == 0) return 0;
  const double cutoff = tol::kSupportRelative * std::max(spectral.values(0), 0.0);
  int r = 0;
  while (r < spectral.values.size() && spectral.values(r) > cutoff && spectral.values(r) > 0.0) ++r;
  return r;
}

namespace {

// Columns are the unnormalized members psi~_n.
CMatrix scaled_eigenvectors(const SpectralDecomposition& spectral, int r) {
  CMatrix e = spectral.vectors.leftCols(r);
  for (int k = 0; k < r; ++k) e.col(k) *= std::sqrt(std::max(spectral.values(k), 0.0));
  return e;
}

Ensemble ensemble_from_members(const CMatrix& members) {
  Ensemble ens;
  for (Eigen::Index n = 0; n < members.cols(); ++n) {
    const double w = members.col(n).squaredNorm();
    if (w < 1e-12) continue;
    ens.weights.push_back(w);
    ens.states.push_back(members.col(n) / std::sqrt(w));
  }
  return ens;
}

}  // namespace

Ensemble ensemble_from_isometry(const SpectralDecomposition& spectral, const CMatrix& v) {
  const auto r = static_cast<int>(v.cols());
  if (r > spectral.values.size() || v.rows() < r) {
    throw Error(ErrorCode::NotIsometry, fmt::format("isometry shape {}x{} does not fit rank", v.rows(), v.cols()));
  }
  const double err = max_abs(v.adjoint() * v - CMatrix::Identity(r, r));
  if (err > tol::kUnitary) throw Error(ErrorCode::NotIsometry, fmt::format("max |V^dag V - 1| = {:.3e}", err));
  return ensemble_from_members(scaled_eigenvectors(spectral, r) * v.transpose());
}

RoofResult minimize_roof(const PureFunctional& f, const DensityMatrix& rho, const RoofConfig& config) {
  const SpectralDecomposition spectral = eigh(rho);
  const int r = std::max(support_rank(spectral), 1);
  const int m = std::max(config.ensemble_size > 0 ? config.ensemble_size : r * r, r);
  const CMatrix scaled = scaled_eigenvectors(spectral, r);

  auto ensemble_value = [&](const CMatrix& members) {
    double total = 0.0;
    for (Eigen::Index n = 0; n < members.cols(); ++n) {
      const double w = members.col(n).squaredNorm();
      if (w < 1e-12) continue;
      total += w * f(members.col(n) / std::sqrt(w));
    }
    return total;
  };

  RoofResult out;
  out.restarts = std::max(config.restarts, 1);
  if (r == 1) {
    out.ensemble = ensemble_from_members(scaled);
    out.restarts_converged = out.restarts;
  } else {
    const UnitaryBlock block{m, false};
    const UnitaryObjective objective = [&](std::span<const CMatrix> us) {
      return ensemble_value(scaled * us[0].leftCols(r).transpose());
    };
    SearchConfig sc;
    sc.restarts = config.restarts;
    sc.max_iters = config.max_iters;
    sc.f_tol = config.f_tol;
    sc.seed = config.seed;
    const SearchResult sr = minimize_over_unitaries(std::span(&block, 1), objective, sc);
    out.ensemble = ensemble_from_members(scaled * sr.unitaries[0].leftCols(r).transpose());
    out.restarts_converged = sr.restarts_converged;
  }
  double value = 0.0;
  for (int n = 0; n < out.ensemble.size(); ++n) value += out.ensemble.weights[n] * f(out.ensemble.states[n]);
  out.value = value;
  return out;
}

}  // namespace tsq
