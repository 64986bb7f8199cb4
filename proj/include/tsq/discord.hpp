#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tsq/bases.hpp"
#include "tsq/coherence.hpp"
#include "tsq/qcore.hpp"
#include "tsq/roof.hpp"
#include "tsq/tsallis.hpp"

namespace tsq {

// Discord: distance to classically correlated states sum p_ij |ij><ij|,
// minimized over product bases. Correlation: distance to classical-quantum
// states sum p_i |i><i| (x) sigma_i, minimized over bases of A.
//
//   N_D = sum_ij <ij|rho^q|ij>^(1/q)          N_Q = sum_i Tr (<i|rho^q|i>)^(1/q)
//   D   = min (1 - N_D^q) / (1 - q)           Q    = min (1 - N_Q^q) / (1 - q)
//   D_II = min (1 - N_D) / (1 - q)            Q_II = min (1 - N_Q) / (1 - q)
//   D_III = min over product bases of the C_III convex roof

enum class Measure { D, D_II, D_III, Q, Q_II };
enum class DiscordVariant { I, II, III };
enum class CorrelationVariant { Q, Q_II };
enum class ClosedForm { D, D_II, D_III };  // D also equals Q, D_II equals Q_II
enum class BoundVariant { I, II };

const char* to_string(Measure m);

struct MeasureEvaluation {
  Measure measure = Measure::D;
  double q = 0.0;
  double value = 0.0;
  std::optional<double> n_value;  // N_D or N_Q at the optimum
  LocalBases bases{BasisSet::computational(1), std::nullopt};
  int restarts = 0;
  int restarts_converged = 0;
};

struct DiscordConfig {
  BasisOptConfig bases;
  // D_III searches bases and ensembles jointly; it is only offered up to
  // d_A * d_B <= d3_max_dim.
  int d3_restarts = 8;
  int d3_max_iters = 4000;
  int d3_ensemble_size = 0;  // 0: rank^2
  int d3_max_dim = 6;
};

double n_d(const DensityMatrix& rho, const LocalBases& bases, TsallisQ q);
/// sum_i Tr[(<i|rho^q|i>)^(1/q)] built from conditional_operator and matrix_power.
double n_q_direct(const DensityMatrix& rho, const BasisSet& basis_a, TsallisQ q);

/// Per eigenvector psi_k and basis vector |i>_A: <i|_A psi_k = sqrt(m_ik) phi_ik.
struct ConditionalProjection {
  std::vector<double> lambda;               // eigenvalues kept (above 1e-12)
  std::vector<std::vector<double>> m;       // m[i][k] = sum_n alpha_kn^2 |<i|xi_kn>|^2
  std::vector<std::vector<CVector>> phi;    // phi[i][k], unit where m[i][k] > 1e-12
};

ConditionalProjection conditional_projection(const SpectralDecomposition& spectral, const Dims& dims,
                                             const BasisSet& basis_a);

/// sum_ik lambda_k m_ik^(1/q) from the eigendecomposition and the Schmidt
/// decomposition of every eigenvector. Coincides with N_Q only when the
/// conditional vectors phi_ik are orthogonal across k, e.g. for pure states.
double n_q_lemma2(const DensityMatrix& rho, const BasisSet& basis_a, TsallisQ q);
double n_q_lemma2(const SpectralDecomposition& spectral, const Dims& dims, const BasisSet& basis_a, TsallisQ q);

/// Objective values (D or Q, not N) at given bases; used by the optimizer and
/// by the grid oracle.
BasisObjective discord_objective(const DensityMatrix& rho, TsallisQ q);
BasisObjective correlation_objective(const DensityMatrix& rho, TsallisQ q);

MeasureEvaluation discord(DiscordVariant variant, const DensityMatrix& rho, TsallisQ q,
                          const DiscordConfig& config = {});
/// D and D_II from one shared basis search.
std::pair<MeasureEvaluation, MeasureEvaluation> discord_pair(const DensityMatrix& rho, TsallisQ q,
                                                             const DiscordConfig& config = {});

MeasureEvaluation correlation(CorrelationVariant variant, const DensityMatrix& rho, TsallisQ q,
                              const DiscordConfig& config = {});
/// Q and Q_II from one shared search over bases of A.
std::pair<MeasureEvaluation, MeasureEvaluation> correlation_pair(const DensityMatrix& rho, TsallisQ q,
                                                                 const DiscordConfig& config = {});

/// Values on pure states from the Schmidt coefficients alpha_n:
///   D    = (1 - (sum alpha^(2/q))^q) / (1 - q)
///   D_II = (1 -  sum alpha^(2/q))    / (1 - q)
///   D_III = (sum alpha^(2q) - 1)     / (1 - q)
double pure_closed_form(ClosedForm variant, const PureState& psi, TsallisQ q);

/// (1 - (sum_kn lambda_k alpha_kn^(2/q))^q) / (1 - q) for variant I, without
/// the outer power for variant II.
double lower_bound(BoundVariant variant, const DensityMatrix& rho, TsallisQ q);
double lower_bound(BoundVariant variant, const SpectralDecomposition& spectral, const Dims& dims, TsallisQ q);

struct UpperBound {
  double state_dependent = 0.0;    // D_q(rho || 1/d^2), or its variant-II analogue
  double state_independent = 0.0;  // the same at a pure state
};

/// Requires d_A = d_B.
UpperBound upper_bound(BoundVariant variant, const DensityMatrix& rho, TsallisQ q);

}  // namespace tsq
