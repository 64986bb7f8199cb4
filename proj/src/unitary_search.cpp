#include "tsq/unitary_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tsq {

NelderMeadResult nelder_mead(const RealObjective& f, std::vector<double> x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  NelderMeadResult out;
  if (n == 0) {
    out.value = f(x0);
    out.x = std::move(x0);
    out.evaluations = 1;
    out.converged = true;
    return out;
  }
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = n >= 2 ? 1.0 + 2.0 / dn : 2.0;
  const double gamma = n >= 2 ? 0.75 - 0.5 / dn : 0.5;
  const double delta = n >= 2 ? 1.0 - 1.0 / dn : 0.5;

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += options.initial_step;
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
  out.evaluations = static_cast<int>(n + 1);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    return f(x);
  };
  auto affine = [&](std::vector<double>& dst, double t, const std::vector<double>& towards) {
    // dst = centroid + t * (towards - centroid)
    for (std::size_t k = 0; k < n; ++k) dst[k] = centroid[k] + t * (towards[k] - centroid[k]);
  };

  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];
    if (!(vals[worst] - vals[best] > options.f_tol)) {
      out.converged = true;
      break;
    }
    if (out.iterations >= options.max_iters) break;
    ++out.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = pts[order[i]];
      for (std::size_t k = 0; k < n; ++k) centroid[k] += p[k];
    }
    for (auto& c : centroid) c /= dn;

    affine(xr, -alpha, pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      affine(xe, -alpha * beta, pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < vals[worst]) {
      affine(xc, -alpha * gamma, pts[worst]);
      const double fc = eval(xc);
      if (fc <= fr) {
        pts[worst] = xc;
        vals[worst] = fc;
        accepted = true;
      }
    } else {
      affine(xc, gamma, pts[worst]);
      const double fc = eval(xc);
      if (fc < vals[worst]) {
        pts[worst] = xc;
        vals[worst] = fc;
        accepted = true;
      }
    }
    if (!accepted) {
      const auto& xb = pts[best];
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (std::size_t k = 0; k < n; ++k) pts[i][k] = xb[k] + delta * (pts[i][k] - xb[k]);
        vals[i] = eval(pts[i]);
      }
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  out.value = *it;
  out.x = pts[static_cast<std::size_t>(it - vals.begin())];
  return out;
}

CMatrix hermitian_generator(std::span<const double> theta, int d, bool with_diagonal) {
  CMatrix h = CMatrix::Zero(d, d);
  std::size_t p = 0;
  if (with_diagonal) {
    for (int i = 0; i < d; ++i) h(i, i) = theta[p++];
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const cplx z(theta[p], theta[p + 1]);
      p += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

CMatrix unitary_exp(const CMatrix& h) {
  const Eigen::Index d = h.rows();
  if (d == 1) return CMatrix::Constant(1, 1, std::polar(1.0, -h(0, 0).real()));
  if (d == 2) {
    // H = h0 1 + n.sigma, exp(-iH) = e^{-i h0} (cos|n| 1 - i sin|n| n^.sigma)
    const double h0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double nz = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double nx = h(0, 1).real();
    const double ny = -h(0, 1).imag();
    const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
    const double c = std::cos(r);
    const double s = r > 0.0 ? std::sin(r) / r : 1.0;
    const cplx g = std::polar(1.0, -h0);
    const cplx mi(0.0, -1.0);
    CMatrix u(2, 2);
    u(0, 0) = g * (c + mi * s * nz);
    u(1, 1) = g * (c - mi * s * nz);
    u(0, 1) = g * (mi * s * cplx(nx, -ny));
    u(1, 0) = g * (mi * s * cplx(nx, ny));
    return u;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector phases(d);
  for (Eigen::Index k = 0; k < d; ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

int chart_size(const UnitaryBlock& b) { return b.phase_invariant ? b.dim * b.dim - b.dim : b.dim * b.dim; }

// Step sizes of successive re-centered rounds.
constexpr double kRoundSteps[] = {0.4, 0.05, 5e-3, 5e-4, 5e-5};
constexpr int kMaxRounds = 12;

}  // namespace

SearchResult minimize_over_unitaries(std::span<const UnitaryBlock> blocks, const UnitaryObjective& objective,
                                     const SearchConfig& config) {
  const std::size_t nb = blocks.size();
  std::vector<int> offsets(nb + 1, 0);
  for (std::size_t b = 0; b < nb; ++b) offsets[b + 1] = offsets[b] + chart_size(blocks[b]);
  const std::size_t n_params = static_cast<std::size_t>(offsets[nb]);

  SearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  const int restarts = std::max(config.restarts, 1);
  const int total = restarts + static_cast<int>(config.warm_starts.size());

  for (int r = 0; r < total; ++r) {
    std::vector<CMatrix> centers(nb);
    if (r >= restarts) {
      centers = config.warm_starts[static_cast<std::size_t>(r - restarts)];
      if (centers.size() != nb) throw Error(ErrorCode::DimMismatch, "warm start has the wrong number of blocks");
      for (std::size_t b = 0; b < nb; ++b) {
        if (centers[b].rows() != blocks[b].dim || !is_unitary(centers[b])) {
          throw Error(ErrorCode::NotUnitary, "warm start is not a unitary of the block dimension");
        }
      }
    }
    for (std::size_t b = 0; b < nb && r < restarts; ++b) {
      const int d = blocks[b].dim;
      centers[b] = r == 0 ? CMatrix::Identity(d, d)
                          : haar_unitary(d, derive_seed(derive_seed(config.seed, static_cast<std::uint64_t>(r)), b));
    }
    std::vector<CMatrix> trial(nb);
    long evals = 0;
    auto chart = [&](std::span<const double> theta) {
      for (std::size_t b = 0; b < nb; ++b) {
        if (offsets[b + 1] == offsets[b]) {
          trial[b] = centers[b];
          continue;
        }
        const auto slice = theta.subspan(offsets[b], offsets[b + 1] - offsets[b]);
        trial[b] = centers[b] * unitary_exp(hermitian_generator(slice, blocks[b].dim, !blocks[b].phase_invariant));
      }
    };
    const RealObjective f = [&](std::span<const double> theta) {
      chart(theta);
      ++evals;
      return objective(trial);
    };

    double current = objective(centers);
    ++evals;
    bool converged = n_params == 0;
    for (int round = 0; round < kMaxRounds && n_params > 0; ++round) {
      NelderMeadOptions opts;
      opts.max_iters = config.max_iters;
      opts.f_tol = config.f_tol;
      opts.initial_step = kRoundSteps[std::min<std::size_t>(round, std::size(kRoundSteps) - 1)];
      const NelderMeadResult nm = nelder_mead(f, std::vector<double>(n_params, 0.0), opts);
      converged = nm.converged;
      const double improvement = current - nm.value;
      if (nm.value < current) {
        chart(nm.x);
        centers = trial;
        current = nm.value;
      }
      if (round > 0 && !(improvement > config.f_tol)) break;
    }
    // Report the value at the stored centers so callers can reproduce it exactly.
    current = objective(centers);
    ++evals;

    best.evaluations += evals;
    if (converged) ++best.restarts_converged;
    if (current < best.value) {
      best.value = current;
      best.unitaries = centers;
      best.best_restart = r;
    }
  }
  return best;
}

}  // namespace tsq
