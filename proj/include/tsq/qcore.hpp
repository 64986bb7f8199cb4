#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tsq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

enum class ErrorCode {
  NotHermitian,
  NotPositive,
  TraceMismatch,
  DimMismatch,
  NegativeEigenvalue,
  NotNormalized,
  NotBipartite,
  IndexOutOfRange,
  BadRank,
  BadLength,
  NotIsometry,
  NotUnitary,
  NotTwoQubit,
  NotSquareBipartite,
  QOutOfRange,
  BudgetExceeded,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Numerical thresholds shared by every module.
namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kEigenFloor = 1e-10;
inline constexpr double kTraceReject = 1e-6;
inline constexpr double kSupportRelative = 1e-12;
inline constexpr double kPureNorm = 1e-12;
inline constexpr double kCompleteness = 1e-10;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kOutcome = 1e-12;
inline constexpr double kSchmidt = 1e-12;
}  // namespace tol

/// Subsystem layout of a Hilbert space: one factor, or two factors A (x) B.
///
/// Bipartite composite indices are row-major: index i * dim_b + j is the
/// product vector |i>_A |j>_B. Every routine in the library uses this order.
class Dims {
 public:
  Dims() = default;
  explicit Dims(std::vector<int> parts);

  static Dims single(int d) { return Dims({d}); }
  static Dims bipartite(int a, int b) { return Dims({a, b}); }

  int total() const noexcept { return total_; }
  bool is_bipartite() const noexcept { return parts_.size() == 2; }
  int a() const noexcept { return parts_.front(); }
  int b() const noexcept { return parts_.size() == 2 ? parts_[1] : 1; }
  const std::vector<int>& parts() const noexcept { return parts_; }
  std::string to_string() const;

  bool operator==(const Dims& other) const { return parts_ == other.parts_; }

 private:
  std::vector<int> parts_{1};
  int total_ = 1;
};

/// Hermitian, positive semidefinite, unit-trace matrix. Only obtainable
/// through validate_density, so every instance satisfies the invariants.
class DensityMatrix {
 public:
  const CMatrix& matrix() const noexcept { return m_; }
  const Dims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return dims_.total(); }

 private:
  friend DensityMatrix validate_density(const CMatrix& entries, Dims dims);
  DensityMatrix(CMatrix m, Dims dims) : m_(std::move(m)), dims_(std::move(dims)) {}

  CMatrix m_;
  Dims dims_;
};

/// Checks hermiticity, positivity and trace. Eigenvalues in [-1e-10, 0) are
/// clipped to zero and the result is renormalized to unit trace.
DensityMatrix validate_density(const CMatrix& entries, Dims dims);

class PureState {
 public:
  /// Requires | ||psi|| - 1 | <= 1e-12.
  static PureState from_amplitudes(CVector amplitudes, Dims dims);
  /// Rescales to unit norm; rejects the zero vector.
  static PureState normalized(CVector amplitudes, Dims dims);

  const CVector& amplitudes() const noexcept { return psi_; }
  const Dims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return dims_.total(); }

  DensityMatrix projector() const;

 private:
  PureState(CVector psi, Dims dims) : psi_(std::move(psi)), dims_(std::move(dims)) {}

  CVector psi_;
  Dims dims_;
};

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
struct SpectralDecomposition {
  RVector values;
  CMatrix vectors;

  CMatrix reconstruct() const;
  int rank(double cutoff = tol::kEigenFloor) const;
};

SpectralDecomposition eigh(const DensityMatrix& rho);
/// Same as above for an arbitrary Hermitian matrix (only the lower triangle
/// is read).
SpectralDecomposition eigh_hermitian(const CMatrix& m);

/// A^t on the support of A. Eigenvalues below 1e-12 * lambda_max count as
/// exact zeros and stay zero; negative t therefore gives the pseudo-power.
CMatrix matrix_power(const CMatrix& a, double t);

struct SchmidtDecomposition {
  RVector coefficients;  // descending, all above 1e-12
  CMatrix left;          // d_A x rank, orthonormal columns
  CMatrix right;         // d_B x rank, orthonormal columns

  CVector reconstruct() const;
  int rank() const noexcept { return static_cast<int>(coefficients.size()); }
};

SchmidtDecomposition schmidt_decompose(const PureState& psi);
SchmidtDecomposition schmidt_decompose(const CVector& psi, const Dims& dims);

/// <u_i|_A M |u_i>_A where u_i is column i of basis_a.
CMatrix conditional_operator(const CMatrix& m, const Dims& dims, int i, const CMatrix& basis_a);

/// Partial trace over B.
CMatrix partial_trace_b(const CMatrix& m, const Dims& dims);

CMatrix kron(const CMatrix& a, const CMatrix& b);

double max_abs(const CMatrix& m);
bool is_unitary(const CMatrix& u, double tolerance = tol::kUnitary);

// ---------------------------------------------------------------------------
// Channels

class Channel {
 public:
  /// Rejects an empty family, mismatched shapes, or sum K^dag K != 1.
  static Channel from_kraus(std::vector<CMatrix> kraus);

  const std::vector<CMatrix>& kraus() const noexcept { return kraus_; }
  int input_dim() const { return static_cast<int>(kraus_.front().cols()); }
  int output_dim() const { return static_cast<int>(kraus_.front().rows()); }

 private:
  explicit Channel(std::vector<CMatrix> kraus) : kraus_(std::move(kraus)) {}

  std::vector<CMatrix> kraus_;
};

struct ChannelOutcome {
  double probability = 0.0;
  std::optional<DensityMatrix> post_state;  // present when probability > 1e-12
};

Channel identity_channel(int d);
/// Projective measurement in the columns of `basis`, outcomes kept.
Channel dephasing_channel(const CMatrix& basis);
/// 1_A (x) K_n for every Kraus operator of `local`.
Channel extend_to_b(const Channel& local, int dim_a);

DensityMatrix apply_channel(const Channel& channel, const DensityMatrix& rho);
std::vector<ChannelOutcome> channel_outcomes(const Channel& channel, const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Seeded generators. Identical seeds give bit-identical output.

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

CMatrix haar_unitary(int d, std::uint64_t seed);
PureState random_pure(const Dims& dims, std::uint64_t seed);
/// Ginibre ensemble G G^dag / Tr with G of shape d x rank.
DensityMatrix random_density(const Dims& dims, int rank, std::uint64_t seed);
/// Kraus blocks of a Haar isometry C^d -> C^(n d).
Channel random_cptp(int d, int n_kraus, std::uint64_t seed);
/// Every Kraus operator has at most one nonzero entry per column, so each
/// one maps diagonal states to diagonal states.
Channel random_incoherent_channel(int d, int n_kraus, std::uint64_t seed);

}  // namespace tsq
