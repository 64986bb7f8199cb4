#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "tsq/qcore.hpp"

namespace tsq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class ComplexGaussian {
 public:
  explicit ComplexGaussian(std::uint64_t seed) : engine_(seed) {}

  cplx operator()() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, ComplexGaussian& gen) {
  CMatrix g(rows, cols);
  // Fill column-major so the draw order is fixed independent of Eigen internals.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = gen();
  }
  return g;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

CMatrix haar_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::DimMismatch, "dimension must be positive");
  ComplexGaussian gen(derive_seed(seed, 0x4841));
  const CMatrix z = ginibre(d, d, gen);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix& r = qr.matrixQR();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (int k = 0; k < d; ++k) {
    const cplx rkk = r(k, k);
    const double mag = std::abs(rkk);
    if (mag > 0.0) q.col(k) *= rkk / mag;
  }
  return q;
}

PureState random_pure(const Dims& dims, std::uint64_t seed) {
  ComplexGaussian gen(derive_seed(seed, 0x5055));
  CVector v(dims.total());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gen();
  return PureState::normalized(std::move(v), dims);
}

DensityMatrix random_density(const Dims& dims, int rank, std::uint64_t seed) {
  const int d = dims.total();
  if (rank < 1 || rank > d) {
    throw Error(ErrorCode::BadRank, fmt::format("rank {} outside [1, {}]", rank, d));
  }
  ComplexGaussian gen(derive_seed(seed, 0x4749));
  const CMatrix g = ginibre(d, rank, gen);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()).eval() * 0.5;
  return validate_density(rho, dims);
}

Channel random_cptp(int d, int n_kraus, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::DimMismatch, "dimension must be positive");
  if (n_kraus < 1) throw Error(ErrorCode::BadRank, "need at least one Kraus operator");
  const CMatrix u = haar_unitary(d * n_kraus, derive_seed(seed, 0x4350));
  std::vector<CMatrix> kraus;
  kraus.reserve(n_kraus);
  for (int n = 0; n < n_kraus; ++n) kraus.emplace_back(u.block(n * d, 0, d, d));
  return Channel::from_kraus(std::move(kraus));
}

Channel random_incoherent_channel(int d, int n_kraus, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::DimMismatch, "dimension must be positive");
  if (n_kraus < 1) throw Error(ErrorCode::BadRank, "need at least one Kraus operator");
  ComplexGaussian gen(derive_seed(seed, 0x4943));
  auto& eng = gen.engine();

  // A family is a column->row map with fibers of size <= k plus amplitudes.
  // Its k Fourier-twisted copies cancel every cross term that a shared row
  // would create, so sum_l K_l^dag K_l = diag(|a_c|^2).
  struct Family {
    int copies;
    std::vector<int> row;
    std::vector<int> slot;
    std::vector<cplx> amp;
  };
  std::vector<Family> families;
  int remaining = n_kraus;
  while (remaining > 0) {
    const int max_k = std::min(remaining, d);
    const int k = max_k == 1 ? 1 : std::uniform_int_distribution<int>(1, max_k)(eng);
    Family f{k, std::vector<int>(d), std::vector<int>(d), std::vector<cplx>(d)};
    std::vector<int> load(d, 0);
    for (int c = 0; c < d; ++c) {
      std::vector<int> open;
      for (int r = 0; r < d; ++r) {
        if (load[r] < k) open.push_back(r);
      }
      const int pick = std::uniform_int_distribution<int>(0, static_cast<int>(open.size()) - 1)(eng);
      f.row[c] = open[pick];
      f.slot[c] = load[open[pick]]++;
      f.amp[c] = gen();
    }
    families.push_back(std::move(f));
    remaining -= k;
  }
  for (int c = 0; c < d; ++c) {
    double norm2 = 0.0;
    for (const auto& f : families) norm2 += std::norm(f.amp[c]);
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& f : families) f.amp[c] *= scale;
  }

  std::vector<CMatrix> kraus;
  kraus.reserve(n_kraus);
  for (const auto& f : families) {
    const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(f.copies));
    for (int l = 0; l < f.copies; ++l) {
      CMatrix k = CMatrix::Zero(d, d);
      for (int c = 0; c < d; ++c) {
        const double angle = 2.0 * std::numbers::pi * l * f.slot[c] / f.copies;
        k(f.row[c], c) = f.amp[c] * std::polar(inv_sqrt_k, angle);
      }
      kraus.push_back(std::move(k));
    }
  }
  return Channel::from_kraus(std::move(kraus));
}

}  // namespace tsq
