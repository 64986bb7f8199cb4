#include "tsq/discord.hpp"

#include <cmath>
#include <memory>

#include <fmt/format.h>

#include "tsq/unitary_search.hpp"

namespace tsq {

const char* to_string(Measure m) {
  switch (m) {
    case Measure::D: return "D";
    case Measure::D_II: return "D_II";
    case Measure::D_III: return "D_III";
    case Measure::Q: return "Q";
    case Measure::Q_II: return "Q_II";
  }
  return "?";
}

namespace {

void require_bipartite(const Dims& dims) {
  if (!dims.is_bipartite()) {
    throw Error(ErrorCode::DimMismatch, fmt::format("need a bipartite state, got dims {}", dims.to_string()));
  }
}

CMatrix reshape_ab(const CVector& psi, int da, int db) {
  CMatrix m(da, db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < db; ++j) m(i, j) = psi(i * db + j);
  }
  return m;
}

// Sum of x^t over eigenvalues of a PSD matrix, with the matrix_power
// support rule (eigenvalues below 1e-12 * lambda_max count as zero).
double trace_power(const CMatrix& h, double t) {
  if (h.rows() == 1) {
    const double x = h(0, 0).real();
    return x > 0.0 ? std::pow(x, t) : 0.0;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  const double cutoff = tol::kSupportRelative * std::max(ev.maxCoeff(), 0.0);
  double s = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > cutoff && ev(k) > 0.0) s += std::pow(ev(k), t);
  }
  return s;
}

// rho^q = sum_k w_k |psi_k><psi_k| with each psi_k stored as a d_A x d_B
// coefficient matrix, so that <u_i v_j|psi_k> = (U_A^dag M_k conj(U_B))_ij.
struct PowerFactor {
  PowerFactor(const DensityMatrix& rho, double q) : da(rho.dims().a()), db(rho.dims().b()) {
    const SpectralDecomposition sd = eigh(rho);
    const int r = support_rank(sd);
    for (int k = 0; k < r; ++k) {
      weights.push_back(std::pow(sd.values(k), q));
      coeffs.push_back(reshape_ab(sd.vectors.col(k), da, db));
    }
  }

  double n_d(const CMatrix& ua, const CMatrix& ub, double q) const {
    const CMatrix ua_h = ua.adjoint();
    const CMatrix ub_c = ub.conjugate();
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(da, db);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      diag += weights[k] * (ua_h * coeffs[k] * ub_c).cwiseAbs2();
    }
    return detail::inverse_power_sum(std::span(diag.data(), static_cast<std::size_t>(diag.size())), q);
  }

  double n_q(const CMatrix& ua, double q) const {
    const CMatrix ua_h = ua.adjoint();
    const auto r = static_cast<Eigen::Index>(coeffs.size());
    std::vector<CMatrix> rows;
    rows.reserve(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) rows.push_back(std::sqrt(weights[k]) * (ua_h * coeffs[k]));
    double total = 0.0;
    CMatrix y(db, r);
    for (int i = 0; i < da; ++i) {
      for (Eigen::Index k = 0; k < r; ++k) y.col(k) = rows[static_cast<std::size_t>(k)].row(i).transpose();
      // Conditional block Y Y^dag; its nonzero spectrum equals that of Y^dag Y.
      const CMatrix g = r < db ? CMatrix(y.adjoint() * y) : CMatrix(y * y.adjoint());
      total += trace_power(g, 1.0 / q);
    }
    return total;
  }

  int da;
  int db;
  std::vector<double> weights;
  std::vector<CMatrix> coeffs;
};

double from_n_power(double n, double q) { return (1.0 - std::pow(n, q)) / (1.0 - q); }
double from_n_linear(double n, double q) { return (1.0 - n) / (1.0 - q); }

const CMatrix& b_or_identity(const LocalBases& bases, CMatrix& storage, int db) {
  if (bases.b) return bases.b->unitary();
  storage = CMatrix::Identity(db, db);
  return storage;
}

double c3_of_weights(const Eigen::MatrixXd& p, double w, double q) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double x = p.data()[k] / w;
    if (x > 0.0) s += std::pow(x, q);
  }
  return (s - 1.0) / (1.0 - q);
}

}  // namespace

double n_d(const DensityMatrix& rho, const LocalBases& bases, TsallisQ q) {
  require_bipartite(rho.dims());
  const int db = rho.dims().b();
  if (bases.a.dim() != rho.dims().a() || (bases.b && bases.b->dim() != db)) {
    throw Error(ErrorCode::DimMismatch, "local bases do not match the subsystem dimensions");
  }
  const CMatrix w = bases.product(db);
  const CMatrix p = matrix_power(rho.matrix(), q.value());
  const CMatrix pw = p * w;
  std::vector<double> c(static_cast<std::size_t>(w.cols()));
  for (Eigen::Index j = 0; j < w.cols(); ++j) c[static_cast<std::size_t>(j)] = w.col(j).dot(pw.col(j)).real();
  return detail::inverse_power_sum(c, q.value());
}

double n_q_direct(const DensityMatrix& rho, const BasisSet& basis_a, TsallisQ q) {
  require_bipartite(rho.dims());
  if (basis_a.dim() != rho.dims().a()) throw Error(ErrorCode::DimMismatch, "basis on A has the wrong dimension");
  const CMatrix p = matrix_power(rho.matrix(), q.value());
  double total = 0.0;
  for (int i = 0; i < rho.dims().a(); ++i) {
    const CMatrix block = conditional_operator(p, rho.dims(), i, basis_a.unitary());
    total += matrix_power((block + block.adjoint()) * 0.5, 1.0 / q.value()).trace().real();
  }
  return total;
}

ConditionalProjection conditional_projection(const SpectralDecomposition& spectral, const Dims& dims,
                                             const BasisSet& basis_a) {
  require_bipartite(dims);
  if (basis_a.dim() != dims.a()) throw Error(ErrorCode::DimMismatch, "basis on A has the wrong dimension");
  const int da = dims.a();
  ConditionalProjection out;
  out.m.assign(static_cast<std::size_t>(da), {});
  out.phi.assign(static_cast<std::size_t>(da), {});
  for (Eigen::Index k = 0; k < spectral.values.size(); ++k) {
    if (spectral.values(k) < 1e-12) continue;
    out.lambda.push_back(spectral.values(k));
    const SchmidtDecomposition sd = schmidt_decompose(spectral.vectors.col(k), dims);
    for (int i = 0; i < da; ++i) {
      const CVector ui = basis_a.vector(i);
      double m = 0.0;
      CVector psi_i = CVector::Zero(dims.b());
      for (int n = 0; n < sd.rank(); ++n) {
        const cplx overlap = ui.dot(sd.left.col(n));
        m += sd.coefficients(n) * sd.coefficients(n) * std::norm(overlap);
        psi_i += sd.coefficients(n) * overlap * sd.right.col(n);
      }
      out.m[static_cast<std::size_t>(i)].push_back(m);
      out.phi[static_cast<std::size_t>(i)].push_back(m > 1e-12 ? CVector(psi_i / std::sqrt(m)) : psi_i);
    }
  }
  return out;
}

double n_q_lemma2(const SpectralDecomposition& spectral, const Dims& dims, const BasisSet& basis_a, TsallisQ q) {
  const ConditionalProjection cp = conditional_projection(spectral, dims, basis_a);
  double total = 0.0;
  for (const auto& row : cp.m) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] > 0.0) total += cp.lambda[k] * std::pow(row[k], 1.0 / q.value());
    }
  }
  return total;
}

double n_q_lemma2(const DensityMatrix& rho, const BasisSet& basis_a, TsallisQ q) {
  require_bipartite(rho.dims());
  return n_q_lemma2(eigh(rho), rho.dims(), basis_a, q);
}

BasisObjective discord_objective(const DensityMatrix& rho, TsallisQ q) {
  require_bipartite(rho.dims());
  auto factor = std::make_shared<const PowerFactor>(rho, q.value());
  const double qv = q.value();
  return [factor, qv](const LocalBases& lb) {
    CMatrix storage;
    const CMatrix& ub = b_or_identity(lb, storage, factor->db);
    return from_n_power(factor->n_d(lb.a.unitary(), ub, qv), qv);
  };
}

BasisObjective correlation_objective(const DensityMatrix& rho, TsallisQ q) {
  require_bipartite(rho.dims());
  auto factor = std::make_shared<const PowerFactor>(rho, q.value());
  const double qv = q.value();
  return [factor, qv](const LocalBases& lb) { return from_n_power(factor->n_q(lb.a.unitary(), qv), qv); };
}

std::pair<MeasureEvaluation, MeasureEvaluation> discord_pair(const DensityMatrix& rho, TsallisQ q,
                                                             const DiscordConfig& config) {
  require_bipartite(rho.dims());
  const BasisOptResult best = minimize_over_bases(discord_objective(rho, q), rho.dims(), true, config.bases);
  const PowerFactor factor(rho, q.value());
  const double n = factor.n_d(best.bases.a.unitary(), best.bases.b->unitary(), q.value());

  MeasureEvaluation d1{Measure::D, q.value(), from_n_power(n, q.value()), n, best.bases, best.restarts,
                       best.restarts_converged};
  MeasureEvaluation d2 = d1;
  d2.measure = Measure::D_II;
  d2.value = from_n_linear(n, q.value());
  return {d1, d2};
}

std::pair<MeasureEvaluation, MeasureEvaluation> correlation_pair(const DensityMatrix& rho, TsallisQ q,
                                                                 const DiscordConfig& config) {
  require_bipartite(rho.dims());
  const BasisOptResult best = minimize_over_bases(correlation_objective(rho, q), rho.dims(), false, config.bases);
  const PowerFactor factor(rho, q.value());
  const double n = factor.n_q(best.bases.a.unitary(), q.value());

  MeasureEvaluation c1{Measure::Q, q.value(), from_n_power(n, q.value()), n, best.bases, best.restarts,
                       best.restarts_converged};
  MeasureEvaluation c2 = c1;
  c2.measure = Measure::Q_II;
  c2.value = from_n_linear(n, q.value());
  return {c1, c2};
}

namespace {

MeasureEvaluation discord_iii(const DensityMatrix& rho, TsallisQ q, const DiscordConfig& config) {
  const Dims& dims = rho.dims();
  if (dims.total() > config.d3_max_dim) {
    throw Error(ErrorCode::BudgetExceeded,
                fmt::format("D_III is limited to d_A*d_B <= {}, got {}", config.d3_max_dim, dims.to_string()));
  }
  const int da = dims.a();
  const int db = dims.b();
  const double qv = q.value();
  const SpectralDecomposition sd = eigh(rho);
  const int r = std::max(support_rank(sd), 1);
  const int m = std::max(config.d3_ensemble_size > 0 ? config.d3_ensemble_size : r * r, r);

  CMatrix scaled = sd.vectors.leftCols(r);
  for (int k = 0; k < r; ++k) scaled.col(k) *= std::sqrt(std::max(sd.values(k), 0.0));

  // Basis and ensemble are searched jointly: the minimum over bases of a
  // minimum over ensembles is the minimum over both.
  std::vector<UnitaryBlock> blocks{{da, true}, {db, true}};
  if (r > 1) blocks.push_back({m, false});
  std::vector<CMatrix> coeffs;
  const UnitaryObjective objective = [&](std::span<const CMatrix> us) {
    const CMatrix ua_h = us[0].adjoint();
    const CMatrix ub_c = us[1].conjugate();
    const CMatrix members = r > 1 ? CMatrix(scaled * us[2].leftCols(r).transpose()) : scaled;
    double total = 0.0;
    for (Eigen::Index n = 0; n < members.cols(); ++n) {
      const double w = members.col(n).squaredNorm();
      if (w < 1e-12) continue;
      const Eigen::MatrixXd p = (ua_h * reshape_ab(members.col(n), da, db) * ub_c).cwiseAbs2();
      total += w * c3_of_weights(p, w, qv);
    }
    return total;
  };
  SearchConfig sc;
  sc.restarts = config.d3_restarts;
  sc.max_iters = config.d3_max_iters;
  sc.f_tol = config.bases.f_tol;
  sc.seed = config.bases.seed;
  // Extra start at the Schmidt bases of the leading eigenvector, where the
  // pure-state minimum sits.
  Eigen::JacobiSVD<CMatrix> svd(reshape_ab(sd.vectors.col(0), da, db), Eigen::ComputeFullU | Eigen::ComputeFullV);
  std::vector<CMatrix> warm{svd.matrixU(), svd.matrixV().conjugate()};
  if (r > 1) warm.push_back(CMatrix::Identity(m, m));
  sc.warm_starts.push_back(std::move(warm));
  const SearchResult sr = minimize_over_unitaries(blocks, objective, sc);

  MeasureEvaluation out;
  out.measure = Measure::D_III;
  out.q = qv;
  out.value = sr.value;
  out.bases = LocalBases{BasisSet::trusted(sr.unitaries[0]), BasisSet::trusted(sr.unitaries[1])};
  out.restarts = std::max(config.d3_restarts, 1);
  out.restarts_converged = sr.restarts_converged;
  return out;
}

}  // namespace

MeasureEvaluation discord(DiscordVariant variant, const DensityMatrix& rho, TsallisQ q, const DiscordConfig& config) {
  require_bipartite(rho.dims());
  switch (variant) {
    case DiscordVariant::I: return discord_pair(rho, q, config).first;
    case DiscordVariant::II: return discord_pair(rho, q, config).second;
    case DiscordVariant::III: break;
  }
  return discord_iii(rho, q, config);
}

MeasureEvaluation correlation(CorrelationVariant variant, const DensityMatrix& rho, TsallisQ q,
                              const DiscordConfig& config) {
  auto [c1, c2] = correlation_pair(rho, q, config);
  return variant == CorrelationVariant::Q ? c1 : c2;
}

double pure_closed_form(ClosedForm variant, const PureState& psi, TsallisQ q) {
  if (!psi.dims().is_bipartite()) throw Error(ErrorCode::NotBipartite, "closed forms need a bipartite state");
  const SchmidtDecomposition sd = schmidt_decompose(psi);
  const double qv = q.value();
  double s = 0.0;
  for (int n = 0; n < sd.rank(); ++n) {
    const double a2 = sd.coefficients(n) * sd.coefficients(n);
    s += std::pow(a2, variant == ClosedForm::D_III ? qv : 1.0 / qv);
  }
  switch (variant) {
    case ClosedForm::D: return from_n_power(s, qv);
    case ClosedForm::D_II: return from_n_linear(s, qv);
    case ClosedForm::D_III: return (s - 1.0) / (1.0 - qv);
  }
  return 0.0;
}

double lower_bound(BoundVariant variant, const SpectralDecomposition& spectral, const Dims& dims, TsallisQ q) {
  require_bipartite(dims);
  const double qv = q.value();
  double s = 0.0;
  for (Eigen::Index k = 0; k < spectral.values.size(); ++k) {
    const double lambda = spectral.values(k);
    if (lambda < 1e-12) continue;
    const SchmidtDecomposition sd = schmidt_decompose(spectral.vectors.col(k), dims);
    double inner = 0.0;
    for (int n = 0; n < sd.rank(); ++n) inner += std::pow(sd.coefficients(n), 2.0 / qv);
    s += lambda * inner;
  }
  return variant == BoundVariant::I ? from_n_power(s, qv) : from_n_linear(s, qv);
}

double lower_bound(BoundVariant variant, const DensityMatrix& rho, TsallisQ q) {
  require_bipartite(rho.dims());
  return lower_bound(variant, eigh(rho), rho.dims(), q);
}

UpperBound upper_bound(BoundVariant variant, const DensityMatrix& rho, TsallisQ q) {
  const Dims& dims = rho.dims();
  if (!dims.is_bipartite() || dims.a() != dims.b()) {
    throw Error(ErrorCode::NotSquareBipartite, fmt::format("bounds need d_A = d_B, got {}", dims.to_string()));
  }
  const double qv = q.value();
  const double d = dims.a();
  const SpectralDecomposition sd = eigh(rho);
  const int r = support_rank(sd);
  double tr = 0.0;
  for (int k = 0; k < r; ++k) tr += std::pow(sd.values(k), qv);

  UpperBound out;
  if (variant == BoundVariant::I) {
    const double scale = std::pow(d, 2.0 * (qv - 1.0));
    out.state_dependent = (1.0 - scale * tr) / (1.0 - qv);
    out.state_independent = (1.0 - scale) / (1.0 - qv);
  } else {
    const double scale = std::pow(d, 2.0 * (qv - 1.0) / qv);
    out.state_dependent = (1.0 - scale * std::pow(tr, 1.0 / qv)) / (1.0 - qv);
    out.state_independent = (1.0 - scale) / (1.0 - qv);
  }
  return out;
}

}  // namespace tsq
