#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tsq/qcore.hpp"

namespace tsq {

/// Pure-state decomposition rho = sum_n w_n |psi_n><psi_n|.
struct Ensemble {
  std::vector<double> weights;
  std::vector<CVector> states;  // unit vectors

  int size() const noexcept { return static_cast<int>(weights.size()); }
  CMatrix reconstruct() const;
};

struct RoofConfig {
  int ensemble_size = 0;  // 0: rank^2
  int restarts = 16;
  int max_iters = 2000;
  double f_tol = 1e-10;
  std::uint64_t seed = 0;
};

struct RoofResult {
  double value = 0.0;  // sum_n w_n F(psi_n) of `ensemble`
  Ensemble ensemble;
  int restarts = 0;
  int restarts_converged = 0;

  bool converged() const noexcept { return restarts_converged == restarts; }
};

using PureFunctional = std::function<double(const CVector&)>;

/// psi~_n = sum_k V(n, k) sqrt(mu_k) e_k over the leading r = V.cols()
/// eigenpairs; weights are ||psi~_n||^2 and members below 1e-12 are pruned.
Ensemble ensemble_from_isometry(const SpectralDecomposition& spectral, const CMatrix& v);

/// Number of eigenvalues above 1e-12 * lambda_max.
int support_rank(const SpectralDecomposition& spectral);

/// Upper estimate of min { sum_n w_n F(psi_n) : rho = sum_n w_n psi_n psi_n^dag }.
///
/// The search variable is an m x m unitary whose first r columns form the
/// isometry V. Restart 0 is V = identity, i.e. the spectral ensemble, so the
/// result never exceeds sum_k mu_k F(e_k).
RoofResult minimize_roof(const PureFunctional& f, const DensityMatrix& rho, const RoofConfig& config);

}  // namespace tsq
