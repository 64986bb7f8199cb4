#include "tsq/state_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace tsq {

namespace {

using nlohmann::json;

std::string dims_json(const Dims& dims) {
  std::string out = "[";
  for (std::size_t k = 0; k < dims.parts().size(); ++k) {
    if (k > 0) out += ", ";
    out += std::to_string(dims.parts()[k]);
  }
  return out + "]";
}

void append_entries(std::string& out, const CMatrix& m, const char* indent) {
  out += "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i > 0 || j > 0) out += ",";
      out += fmt::format("\n{}[{:.17g}, {:.17g}]", indent, m(i, j).real(), m(i, j).imag());
    }
  }
  out += "]";
}

std::string document(const Dims& dims, const char* kind, const CMatrix& m) {
  std::string out = fmt::format("{{\n  \"dims\": {},\n  \"kind\": \"{}\",\n  \"data\": ", dims_json(dims), kind);
  append_entries(out, m, "    ");
  return out + "\n}\n";
}

[[noreturn]] void parse_fail(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ParseError, fmt::format("field \"{}\": {}", field, why));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("malformed JSON: {}", e.what()));
  }
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) parse_fail(name, "missing");
  return doc.at(name);
}

std::string kind_of(const json& doc) {
  const json& k = field(doc, "kind");
  if (!k.is_string()) parse_fail("kind", "expected a string");
  return k.get<std::string>();
}

Dims dims_of(const json& doc) {
  const json& d = field(doc, "dims");
  if (!d.is_array() || d.empty() || d.size() > 2) parse_fail("dims", "expected [d] or [dA, dB]");
  std::vector<int> parts;
  for (const json& x : d) {
    if (!x.is_number_integer() || x.get<long long>() < 1 || x.get<long long>() > 4096) {
      parse_fail("dims", "entries must be positive integers");
    }
    parts.push_back(x.get<int>());
  }
  return Dims(parts);
}

cplx entry(const json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    parse_fail(where, "entries must be [re, im] number pairs");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

CMatrix matrix_of(const json& data, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (!data.is_array()) parse_fail(where, "expected an array");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw Error(ErrorCode::DimMismatch, fmt::format("field \"{}\": {} entries, dims require {}", where,
                                                    data.size(), rows * cols));
  }
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = entry(data[static_cast<std::size_t>(i * cols + j)], where);
  }
  return m;
}

}  // namespace

std::string serialize_state(const DensityMatrix& rho) { return document(rho.dims(), "density", rho.matrix()); }

std::string serialize_state(const PureState& psi) {
  return document(psi.dims(), "pure", psi.amplitudes().transpose());
}

LoadedState parse_state(const std::string& text) {
  const json doc = parse_json(text);
  const Dims dims = dims_of(doc);
  const std::string kind = kind_of(doc);
  const int d = dims.total();
  if (kind == "density") {
    return LoadedState{validate_density(matrix_of(field(doc, "data"), d, d, "data"), dims), std::nullopt};
  }
  if (kind == "pure") {
    const CVector psi = matrix_of(field(doc, "data"), 1, d, "data").row(0).transpose();
    PureState pure = PureState::from_amplitudes(psi, dims);
    return LoadedState{pure.projector(), pure};
  }
  parse_fail("kind", fmt::format("expected \"density\" or \"pure\", got \"{}\"", kind));
}

std::string serialize_basis(const BasisSet& basis) {
  return document(Dims::single(basis.dim()), "unitary", basis.unitary());
}

BasisSet parse_basis(const std::string& text) {
  const json doc = parse_json(text);
  const Dims dims = dims_of(doc);
  if (kind_of(doc) != "unitary") parse_fail("kind", "expected \"unitary\"");
  const int d = dims.total();
  return BasisSet::from_unitary(matrix_of(field(doc, "data"), d, d, "data"));
}

std::string serialize_channel(const Channel& channel) {
  std::string out = fmt::format("{{\n  \"dims\": [{}, {}],\n  \"kind\": \"channel\",\n  \"kraus\": [",
                                channel.input_dim(), channel.output_dim());
  for (std::size_t n = 0; n < channel.kraus().size(); ++n) {
    out += n > 0 ? ",\n    " : "\n    ";
    append_entries(out, channel.kraus()[n], "      ");
  }
  return out + "]\n}\n";
}

Channel parse_channel(const std::string& text) {
  const json doc = parse_json(text);
  const Dims dims = dims_of(doc);
  if (kind_of(doc) != "channel") parse_fail("kind", "expected \"channel\"");
  const int d_in = dims.parts().front();
  const int d_out = dims.parts().back();
  const json& kraus = field(doc, "kraus");
  if (!kraus.is_array() || kraus.empty()) parse_fail("kraus", "expected a non-empty array");
  std::vector<CMatrix> ops;
  for (std::size_t n = 0; n < kraus.size(); ++n) {
    ops.push_back(matrix_of(kraus[n], d_out, d_in, fmt::format("kraus[{}]", n)));
  }
  return Channel::from_kraus(std::move(ops));
}

Dims parse_dims(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, 'x')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != piece.size() || v < 1) {
      throw Error(ErrorCode::ParseError, fmt::format("dims \"{}\": expected AxB with positive integers", text));
    }
    parts.push_back(v);
  }
  if (parts.empty() || parts.size() > 2 || text.back() == 'x') {
    throw Error(ErrorCode::ParseError, fmt::format("dims \"{}\": expected AxB or D", text));
  }
  return Dims(parts);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, fmt::format("cannot open \"{}\"", path));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ParseError, fmt::format("cannot write \"{}\"", path));
  out << text;
  if (!out) throw Error(ErrorCode::ParseError, fmt::format("write to \"{}\" failed", path));
}

}  // namespace tsq
