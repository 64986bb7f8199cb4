#pragma once

#include <optional>
#include <string>

#include "tsq/bases.hpp"
#include "tsq/qcore.hpp"

namespace tsq {

// JSON file formats. Complex entries are [re, im] pairs written with 17
// significant digits, so parse(serialize(x)) reproduces x bit for bit.
//
//   state   {"dims": [dA, dB], "kind": "density" | "pure", "data": [...]}
//   basis   {"dims": [d], "kind": "unitary", "data": [...]}
//   channel {"dims": [d_in, d_out], "kind": "channel", "kraus": [[...], ...]}
//
// Matrices are stored row-major; "dims" lists the subsystem dimensions.

struct LoadedState {
  DensityMatrix density;
  std::optional<PureState> pure;  // set for "kind": "pure"
};

std::string serialize_state(const DensityMatrix& rho);
std::string serialize_state(const PureState& psi);
LoadedState parse_state(const std::string& text);

std::string serialize_basis(const BasisSet& basis);
BasisSet parse_basis(const std::string& text);

std::string serialize_channel(const Channel& channel);
Channel parse_channel(const std::string& text);

/// Parses "AxB" or "D".
Dims parse_dims(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tsq
