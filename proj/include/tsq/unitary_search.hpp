#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tsq/qcore.hpp"

namespace tsq {

struct NelderMeadOptions {
  int max_iters = 2000;
  double f_tol = 1e-10;
  double initial_step = 0.4;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;  // simplex value spread fell below f_tol
};

using RealObjective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex descent with dimension-adaptive coefficients.
NelderMeadResult nelder_mead(const RealObjective& f, std::vector<double> x0, const NelderMeadOptions& options);

/// Hermitian d x d matrix from real parameters. Full layout (d^2 values):
/// the d diagonal entries, then (re, im) of H(i, j) for i < j in row-major
/// order. Without the diagonal the layout has d^2 - d values.
CMatrix hermitian_generator(std::span<const double> theta, int d, bool with_diagonal = true);

/// exp(-i H) for Hermitian H.
CMatrix unitary_exp(const CMatrix& h);

/// One unitary factor of the search variable.
struct UnitaryBlock {
  int dim = 1;
  // The objective only sees U up to U -> U diag(phases); the diagonal
  // generators are then dropped from the local chart.
  bool phase_invariant = false;
};

struct SearchConfig {
  int restarts = 16;
  int max_iters = 2000;
  double f_tol = 1e-10;
  std::uint64_t seed = 0;
  // Extra starting centers, one unitary per block, tried after the seeded
  // restarts.
  std::vector<std::vector<CMatrix>> warm_starts;
};

struct SearchResult {
  double value = 0.0;
  std::vector<CMatrix> unitaries;
  int best_restart = 0;
  int restarts_converged = 0;
  long evaluations = 0;
};

using UnitaryObjective = std::function<double(std::span<const CMatrix>)>;

/// Multi-start minimization over a product of unitary groups.
///
/// Restart 0 starts from identities, restart r >= 1 from Haar unitaries drawn
/// from derive_seed(seed, r), so a larger restart count only adds candidates.
/// Each restart runs Nelder-Mead in the chart U = C exp(-i H(theta)) around a
/// center C, re-centering at the best point until a round stops improving.
/// Warm starts follow as restarts `restarts`, `restarts + 1`, ... The lowest
/// value wins; ties go to the lowest restart index.
SearchResult minimize_over_unitaries(std::span<const UnitaryBlock> blocks, const UnitaryObjective& objective,
                                     const SearchConfig& config);

}  // namespace tsq
