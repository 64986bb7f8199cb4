#include "tsq/bases.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "tsq/unitary_search.hpp"

namespace tsq {

BasisSet BasisSet::computational(int d) { return BasisSet(CMatrix::Identity(d, d)); }

BasisSet BasisSet::from_unitary(CMatrix u) {
  if (u.rows() != u.cols()) throw Error(ErrorCode::NotUnitary, "basis matrix is not square");
  const double err = max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
  if (err > tol::kUnitary) throw Error(ErrorCode::NotUnitary, fmt::format("max |U^dag U - 1| = {:.3e}", err));
  return BasisSet(std::move(u));
}

BasisSet parametrize_unitary(std::span<const double> theta) {
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(theta.size()))));
  if (d < 1 || static_cast<std::size_t>(d * d) != theta.size()) {
    throw Error(ErrorCode::BadLength, fmt::format("{} parameters is not a square count", theta.size()));
  }
  return BasisSet::trusted(unitary_exp(hermitian_generator(theta, d, true)));
}

BasisSet bloch_basis(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  CMatrix u(2, 2);
  u(0, 0) = c;
  u(1, 0) = std::polar(s, phi);
  u(0, 1) = -std::polar(s, -phi);
  u(1, 1) = c;
  return BasisSet::trusted(std::move(u));
}

CMatrix LocalBases::product(int dim_b) const {
  return b ? kron(a.unitary(), b->unitary()) : kron(a.unitary(), CMatrix::Identity(dim_b, dim_b));
}

BasisOptResult minimize_over_bases(const BasisObjective& objective, const Dims& dims, bool optimize_b,
                                   const BasisOptConfig& config) {
  if (!dims.is_bipartite()) throw Error(ErrorCode::NotBipartite, "local bases need A x B");
  std::vector<UnitaryBlock> blocks{{dims.a(), true}};
  if (optimize_b) blocks.push_back({dims.b(), true});

  LocalBases scratch{BasisSet::computational(dims.a()),
                     optimize_b ? std::optional<BasisSet>(BasisSet::computational(dims.b())) : std::nullopt};
  const UnitaryObjective wrapped = [&](std::span<const CMatrix> us) {
    scratch.a = BasisSet::trusted(us[0]);
    if (optimize_b) scratch.b = BasisSet::trusted(us[1]);
    return objective(scratch);
  };
  SearchConfig sc;
  sc.restarts = config.restarts;
  sc.max_iters = config.max_iters;
  sc.f_tol = config.f_tol;
  sc.seed = config.seed;
  const SearchResult sr = minimize_over_unitaries(blocks, wrapped, sc);

  BasisOptResult out;
  out.value = sr.value;
  out.bases.a = BasisSet::trusted(sr.unitaries[0]);
  if (optimize_b) out.bases.b = BasisSet::trusted(sr.unitaries[1]);
  out.restarts = std::max(config.restarts, 1);
  out.restarts_converged = sr.restarts_converged;
  return out;
}

double grid_oracle_two_qubit(const BasisObjective& objective, const Dims& dims, int resolution, bool optimize_b) {
  if (!dims.is_bipartite() || dims.a() != 2 || dims.b() != 2) {
    throw Error(ErrorCode::NotTwoQubit, fmt::format("grid oracle needs 2x2, got {}", dims.to_string()));
  }
  if (resolution < 2) throw Error(ErrorCode::BadLength, "grid resolution must be at least 2");
  std::vector<BasisSet> side;
  side.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int t = 0; t < resolution; ++t) {
    const double theta = std::numbers::pi * t / (resolution - 1);
    for (int p = 0; p < resolution; ++p) {
      side.push_back(bloch_basis(theta, 2.0 * std::numbers::pi * p / resolution));
    }
  }
  double best = std::numeric_limits<double>::infinity();
  LocalBases lb{side.front(), optimize_b ? std::optional<BasisSet>(side.front()) : std::nullopt};
  for (const auto& ua : side) {
    lb.a = ua;
    if (!optimize_b) {
      best = std::min(best, objective(lb));
      continue;
    }
    for (const auto& ub : side) {
      lb.b = ub;
      best = std::min(best, objective(lb));
    }
  }
  return best;
}

}  // namespace tsq
