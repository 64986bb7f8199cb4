#include <fmt/format.h>

#include "tsq/qcore.hpp"

namespace tsq {

Channel Channel::from_kraus(std::vector<CMatrix> kraus) {
  if (kraus.empty()) throw Error(ErrorCode::DimMismatch, "empty Kraus family");
  const Eigen::Index rows = kraus.front().rows();
  const Eigen::Index cols = kraus.front().cols();
  CMatrix sum = CMatrix::Zero(cols, cols);
  for (const auto& k : kraus) {
    if (k.rows() != rows || k.cols() != cols) {
      throw Error(ErrorCode::DimMismatch, "Kraus operators differ in shape");
    }
    sum += k.adjoint() * k;
  }
  const double err = max_abs(sum - CMatrix::Identity(cols, cols));
  if (err > tol::kCompleteness) {
    throw Error(ErrorCode::NotNormalized, fmt::format("completeness violated by {:.3e}", err));
  }
  return Channel(std::move(kraus));
}

Channel identity_channel(int d) { return Channel::from_kraus({CMatrix::Identity(d, d)}); }

Channel dephasing_channel(const CMatrix& basis) {
  std::vector<CMatrix> kraus;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    kraus.emplace_back(basis.col(j) * basis.col(j).adjoint());
  }
  return Channel::from_kraus(std::move(kraus));
}

Channel extend_to_b(const Channel& local, int dim_a) {
  const CMatrix id = CMatrix::Identity(dim_a, dim_a);
  std::vector<CMatrix> kraus;
  kraus.reserve(local.kraus().size());
  for (const auto& k : local.kraus()) kraus.push_back(kron(id, k));
  return Channel::from_kraus(std::move(kraus));
}

namespace {

Dims output_dims(const Channel& channel, const DensityMatrix& rho) {
  if (channel.input_dim() != rho.dim()) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("channel acts on dimension {}, state has {}", channel.input_dim(), rho.dim()));
  }
  return channel.output_dim() == rho.dim() ? rho.dims() : Dims::single(channel.output_dim());
}

// rho = S S^dag, so every K rho K^dag is formed as a Gram matrix and stays
// positive up to roundoff relative to its own scale.
CMatrix square_root_factor(const DensityMatrix& rho) { return matrix_power(rho.matrix(), 0.5); }

}  // namespace

DensityMatrix apply_channel(const Channel& channel, const DensityMatrix& rho) {
  Dims dims = output_dims(channel, rho);
  const CMatrix s = square_root_factor(rho);
  CMatrix out = CMatrix::Zero(channel.output_dim(), channel.output_dim());
  for (const auto& k : channel.kraus()) {
    const CMatrix x = k * s;
    out += x * x.adjoint();
  }
  return validate_density(out, std::move(dims));
}

std::vector<ChannelOutcome> channel_outcomes(const Channel& channel, const DensityMatrix& rho) {
  const Dims dims = output_dims(channel, rho);
  const CMatrix s = square_root_factor(rho);
  std::vector<ChannelOutcome> outcomes;
  outcomes.reserve(channel.kraus().size());
  for (const auto& k : channel.kraus()) {
    const CMatrix x = k * s;
    const CMatrix block = x * x.adjoint();
    ChannelOutcome o;
    o.probability = std::max(block.trace().real(), 0.0);
    if (o.probability > tol::kOutcome) o.post_state = validate_density(block / o.probability, dims);
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

}  // namespace tsq
