#include "tsq/qcore.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tsq {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotTwoQubit: return "NotTwoQubit";
    case ErrorCode::NotSquareBipartite: return "NotSquareBipartite";
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), message)), code_(code) {}

Dims::Dims(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty() || parts_.size() > 2) {
    throw Error(ErrorCode::DimMismatch, "subsystem list must have one or two entries");
  }
  total_ = 1;
  for (int p : parts_) {
    if (p < 1) throw Error(ErrorCode::DimMismatch, "subsystem dimensions must be positive");
    total_ *= p;
  }
}

std::string Dims::to_string() const {
  return is_bipartite() ? fmt::format("{}x{}", parts_[0], parts_[1]) : fmt::format("{}", parts_[0]);
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_unitary(const CMatrix& u, double tolerance) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())) <= tolerance;
}

DensityMatrix validate_density(const CMatrix& entries, Dims dims) {
  if (entries.rows() != entries.cols()) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("matrix is {}x{}, not square", entries.rows(), entries.cols()));
  }
  if (entries.rows() != dims.total()) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("matrix size {} does not match dims {}", entries.rows(), dims.to_string()));
  }
  const double asym = max_abs(entries - entries.adjoint());
  if (asym > tol::kHermitian) {
    throw Error(ErrorCode::NotHermitian, fmt::format("max |M - M^dag| = {:.3e}", asym));
  }
  CMatrix h = (entries + entries.adjoint()) * 0.5;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector& ev = es.eigenvalues();
  const double min_ev = ev.minCoeff();
  if (min_ev < -tol::kEigenFloor) {
    throw Error(ErrorCode::NotPositive, fmt::format("eigenvalue {:.6g} below -1e-10", min_ev));
  }
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > tol::kTraceReject) {
    throw Error(ErrorCode::TraceMismatch, fmt::format("trace {:.12g}", trace));
  }
  // Negative eigenvalues at the level of the eigensolver's own roundoff are
  // left alone; rebuilding from the decomposition would only add noise of the
  // same size and break exact round trips of already-valid states.
  if (min_ev < -1e-14) {
    RVector clipped = ev.cwiseMax(0.0);
    h = es.eigenvectors() * clipped.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    h = (h + h.adjoint()).eval() * 0.5;
  }
  const double t2 = h.trace().real();
  if (std::abs(t2 - 1.0) > 1e-14) h /= t2;
  return DensityMatrix(std::move(h), std::move(dims));
}

PureState PureState::from_amplitudes(CVector amplitudes, Dims dims) {
  if (amplitudes.size() != dims.total()) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("{} amplitudes for dims {}", amplitudes.size(), dims.to_string()));
  }
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > tol::kPureNorm) {
    throw Error(ErrorCode::NotNormalized, fmt::format("norm {:.17g}", n));
  }
  return PureState(std::move(amplitudes), std::move(dims));
}

PureState PureState::normalized(CVector amplitudes, Dims dims) {
  if (amplitudes.size() != dims.total()) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("{} amplitudes for dims {}", amplitudes.size(), dims.to_string()));
  }
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::NotNormalized, "zero vector");
  amplitudes /= n;
  return PureState(std::move(amplitudes), std::move(dims));
}

DensityMatrix PureState::projector() const {
  return validate_density(psi_ * psi_.adjoint(), dims_);
}

CMatrix SpectralDecomposition::reconstruct() const {
  return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

int SpectralDecomposition::rank(double cutoff) const {
  return static_cast<int>((values.array() > cutoff).count());
}

SpectralDecomposition eigh_hermitian(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const Eigen::Index n = m.rows();
  SpectralDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

SpectralDecomposition eigh(const DensityMatrix& rho) { return eigh_hermitian(rho.matrix()); }

CMatrix matrix_power(const CMatrix& a, double t) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimMismatch, "matrix_power needs a square matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  const RVector& ev = es.eigenvalues();
  if (ev.size() == 0) return a;
  if (ev.minCoeff() < -tol::kEigenFloor) {
    throw Error(ErrorCode::NegativeEigenvalue, fmt::format("eigenvalue {:.6g}", ev.minCoeff()));
  }
  const double cutoff = tol::kSupportRelative * std::max(ev.maxCoeff(), 0.0);
  RVector powered(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    powered(k) = (ev(k) > cutoff && ev(k) > 0.0) ? std::pow(ev(k), t) : 0.0;
  }
  return es.eigenvectors() * powered.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

SchmidtDecomposition schmidt_decompose(const CVector& psi, const Dims& dims) {
  if (!dims.is_bipartite()) throw Error(ErrorCode::NotBipartite, "Schmidt decomposition needs A x B");
  if (psi.size() != dims.total()) throw Error(ErrorCode::DimMismatch, "amplitude count");
  const int da = dims.a();
  const int db = dims.b();
  CMatrix coeff(da, db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < db; ++j) coeff(i, j) = psi(i * db + j);
  }
  Eigen::JacobiSVD<CMatrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > tol::kSchmidt) ++rank;

  SchmidtDecomposition out;
  out.coefficients = s.head(rank);
  out.left = svd.matrixU().leftCols(rank);
  out.right = svd.matrixV().leftCols(rank).conjugate();
  for (int n = 0; n < rank; ++n) {
    Eigen::Index idx = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < out.left.rows(); ++r) {
      const double mag = std::abs(out.left(r, n));
      if (mag > best + 1e-12) {
        best = mag;
        idx = r;
      }
    }
    const cplx phase = out.left(idx, n) / std::abs(out.left(idx, n));
    out.left.col(n) *= std::conj(phase);
    out.right.col(n) *= phase;
  }
  return out;
}

SchmidtDecomposition schmidt_decompose(const PureState& psi) {
  return schmidt_decompose(psi.amplitudes(), psi.dims());
}

CVector SchmidtDecomposition::reconstruct() const {
  const Eigen::Index da = left.rows();
  const Eigen::Index db = right.rows();
  CVector psi = CVector::Zero(da * db);
  for (int n = 0; n < rank(); ++n) {
    for (Eigen::Index i = 0; i < da; ++i) {
      psi.segment(i * db, db) += coefficients(n) * left(i, n) * right.col(n);
    }
  }
  return psi;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix conditional_operator(const CMatrix& m, const Dims& dims, int i, const CMatrix& basis_a) {
  if (!dims.is_bipartite()) throw Error(ErrorCode::NotBipartite, "conditional operator needs A x B");
  if (m.rows() != dims.total() || m.cols() != dims.total()) {
    throw Error(ErrorCode::DimMismatch, "operator size does not match dims");
  }
  if (basis_a.rows() != dims.a() || basis_a.cols() != dims.a()) {
    throw Error(ErrorCode::DimMismatch, "basis on A has wrong shape");
  }
  if (i < 0 || i >= dims.a()) {
    throw Error(ErrorCode::IndexOutOfRange, fmt::format("index {} not below d_A = {}", i, dims.a()));
  }
  const int da = dims.a();
  const int db = dims.b();
  const CVector u = basis_a.col(i);
  CMatrix out = CMatrix::Zero(db, db);
  for (int a = 0; a < da; ++a) {
    for (int ap = 0; ap < da; ++ap) {
      const cplx w = std::conj(u(a)) * u(ap);
      if (w == cplx(0.0)) continue;
      out += w * m.block(a * db, ap * db, db, db);
    }
  }
  return out;
}

CMatrix partial_trace_b(const CMatrix& m, const Dims& dims) {
  if (!dims.is_bipartite()) throw Error(ErrorCode::NotBipartite, "partial trace needs A x B");
  const int da = dims.a();
  const int db = dims.b();
  CMatrix out(da, da);
  for (int a = 0; a < da; ++a) {
    for (int ap = 0; ap < da; ++ap) out(a, ap) = m.block(a * db, ap * db, db, db).trace();
  }
  return out;
}

}  // namespace tsq
