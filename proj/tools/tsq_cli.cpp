// Command-line front end: measure, verify, sweep, random.
// Exit status: 0 success, 1 an asserted check failed, 2 bad input.

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tsq/coherence.hpp"
#include "tsq/discord.hpp"
#include "tsq/state_io.hpp"
#include "tsq/suites.hpp"
#include "tsq/tsallis.hpp"

namespace {

using namespace tsq;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Up to 10 significant digits, always with a decimal point or exponent.
std::string short_number(double x) {
  std::string s = fmt::format("{:.10g}", x);
  if (s.find_first_of(".eniN") == std::string::npos) s += ".0";
  return s;
}

struct MeasureResult {
  double value = 0.0;
  std::optional<double> n_value;
  std::optional<double> second;  // state-independent upper bound
  std::optional<int> restarts;
  std::optional<int> restarts_converged;
};

struct MeasureOptions {
  std::string input;
  std::string sigma;
  std::string measure;
  double q = 2.0;
  std::string basis = "computational";
  std::string variant = "I";
  int restarts = 32;
  std::uint64_t seed = 0;
  bool json = false;
};

const std::vector<std::string> kMeasures{"entropy", "rel-entropy", "c1", "c2", "c3", "c4", "c5", "d1",
                                         "d2",      "d3",          "q1", "q2", "lower", "upper"};

bool is_coherence(const std::string& m) { return m.size() == 2 && m[0] == 'c'; }

BasisSet load_basis(const std::string& source, int d) {
  if (source == "computational") return BasisSet::computational(d);
  BasisSet b = parse_basis(read_text_file(source));
  if (b.dim() != d) {
    throw Error(ErrorCode::DimMismatch, fmt::format("basis: dimension {} for a state of dimension {}", b.dim(), d));
  }
  return b;
}

BoundVariant bound_variant(const std::string& v) {
  if (v == "I") return BoundVariant::I;
  if (v == "II") return BoundVariant::II;
  throw InputError(fmt::format("--variant: expected I or II, got \"{}\"", v));
}

MeasureResult evaluate(const MeasureOptions& o, const LoadedState& state, double qv) {
  const TsallisQ q(qv);
  const DensityMatrix& rho = state.density;
  const std::string& m = o.measure;
  if (!is_coherence(m) && o.basis != "computational") {
    throw InputError(fmt::format("--basis applies to c1..c5 only, not \"{}\"", m));
  }
  MeasureResult r;
  if (m == "entropy") {
    r.value = tsallis_entropy(rho, q);
  } else if (m == "rel-entropy") {
    if (o.sigma.empty()) throw InputError("rel-entropy needs --sigma FILE");
    const LoadedState sigma = parse_state(read_text_file(o.sigma));
    r.value = tsallis_relative_entropy(rho, sigma.density, q).value();
  } else if (is_coherence(m)) {
    const BasisSet basis = load_basis(o.basis, rho.dim());
    if (m == "c1") {
      r.value = coherence_I(rho, basis, q);
    } else if (m == "c2") {
      r.value = coherence_II(rho, basis, q);
    } else {
      const PureVariant v = m == "c3" ? PureVariant::III : m == "c4" ? PureVariant::IV : PureVariant::V;
      if (state.pure) {
        r.value = coherence_pure(v, *state.pure, basis, q);
      } else {
        RoofConfig rc;
        rc.restarts = o.restarts;
        rc.seed = o.seed;
        const RoofResult roof = coherence_roof(v, rho, basis, q, rc);
        r.value = roof.value;
        r.restarts = roof.restarts;
        r.restarts_converged = roof.restarts_converged;
      }
    }
  } else if (m == "lower" || m == "upper") {
    const BoundVariant v = bound_variant(o.variant);
    if (m == "lower") {
      r.value = lower_bound(v, rho, q);
    } else {
      const UpperBound ub = upper_bound(v, rho, q);
      r.value = ub.state_dependent;
      r.second = ub.state_independent;
    }
  } else {
    DiscordConfig dc;
    dc.bases.restarts = o.restarts;
    dc.bases.seed = o.seed;
    MeasureEvaluation e;
    if (m == "d1") e = discord(DiscordVariant::I, rho, q, dc);
    if (m == "d2") e = discord(DiscordVariant::II, rho, q, dc);
    if (m == "d3") e = discord(DiscordVariant::III, rho, q, dc);
    if (m == "q1") e = correlation(CorrelationVariant::Q, rho, q, dc);
    if (m == "q2") e = correlation(CorrelationVariant::Q_II, rho, q, dc);
    r.value = e.value;
    r.n_value = e.n_value;
    r.restarts = e.restarts;
    r.restarts_converged = e.restarts_converged;
  }
  return r;
}

int run_measure(const MeasureOptions& o) {
  const LoadedState state = parse_state(read_text_file(o.input));
  const MeasureResult r = evaluate(o, state, o.q);
  if (o.json) {
    ordered_json j;
    j["measure"] = o.measure;
    j["q"] = o.q;
    j["value"] = r.value;
    if (r.second) j["state_independent"] = *r.second;
    if (r.n_value) j["n_value"] = *r.n_value;
    if (r.restarts) j["restarts"] = *r.restarts;
    if (r.restarts_converged) j["restarts_converged"] = *r.restarts_converged;
    std::cout << j.dump(2) << "\n";
  } else if (r.second) {
    std::cout << short_number(r.value) << " " << short_number(*r.second) << "\n";
  } else {
    std::cout << short_number(r.value) << "\n";
  }
  return kExitOk;
}

struct VerifyOptions {
  std::string suite;
  long samples = 24;
  std::string dims;
  std::string qs;
  std::uint64_t seed = 42;
  std::string out;
  bool timing = false;
};

std::vector<double> parse_q_list(const std::string& text) {
  std::vector<double> qs;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != piece.size()) throw Error(ErrorCode::ParseError, fmt::format("--q: bad entry \"{}\"", piece));
    (void)TsallisQ(v);
    qs.push_back(v);
  }
  if (qs.empty()) throw Error(ErrorCode::ParseError, "--q: empty list");
  return qs;
}

int run_verify(const VerifyOptions& o) {
  SuiteConfig cfg;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.timing = o.timing;
  if (!o.dims.empty()) cfg.dims = parse_dims(o.dims);
  if (!o.qs.empty()) cfg.qs = parse_q_list(o.qs);
  cfg.validate();

  std::vector<SuiteReport> reports;
  if (o.suite == "inequalities" || o.suite == "all") reports.push_back(suite_inequalities(cfg));
  if (o.suite == "monotonicity" || o.suite == "all") reports.push_back(suite_monotonicity(cfg));
  if (o.suite == "claim-audit" || o.suite == "all") reports.push_back(suite_claim_audit(cfg));
  write_text_file(o.out, serialize_reports(reports));

  bool passed = true;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      std::cout << fmt::format("{:<13} {:<26} {:<13} samples={} violations={} max={:.3g}\n", r.suite, c.claim_id,
                               to_string(c.status), c.samples, c.violation_count, c.max_violation);
    }
    passed = passed && r.passed();
  }
  return passed ? kExitOk : kExitFailed;
}

struct SweepOptions {
  MeasureOptions measure;
  double q_min = 0.1;
  double q_max = 2.0;
  int steps = 20;
  std::string out;
  bool timing = false;
};

int run_sweep(const SweepOptions& o) {
  if (o.steps < 1) throw InputError("--steps must be at least 1");
  if (!(o.q_min > 0.0) || !(o.q_max <= 2.0) || o.q_min > o.q_max) {
    throw Error(ErrorCode::QOutOfRange, fmt::format("--q-min/--q-max: need 0 < {} <= {} <= 2", o.q_min, o.q_max));
  }
  const LoadedState state = parse_state(read_text_file(o.measure.input));
  std::string csv = "q,value,n_value,restarts_converged,wall_ms\n";
  for (int k = 0; k < o.steps; ++k) {
    const double q = o.steps == 1 ? o.q_min : o.q_min + (o.q_max - o.q_min) * k / (o.steps - 1);
    // q = 1 is excluded from the domain; the row is kept with nan values.
    if (std::abs(q - 1.0) <= 1e-9) {
      csv += fmt::format("{:.17g},nan,,,0.000\n", q);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const MeasureResult r = evaluate(o.measure, state, q);
    const double ms =
        o.timing ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() : 0.0;
    csv += fmt::format("{:.17g},{:.17g},{},{},{:.3f}\n", q, r.value,
                       r.n_value ? fmt::format("{:.17g}", *r.n_value) : std::string(),
                       r.restarts_converged ? std::to_string(*r.restarts_converged) : std::string(), ms);
  }
  write_text_file(o.out, csv);
  return kExitOk;
}

struct RandomOptions {
  std::string kind;
  std::string dims;
  int rank = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_random(const RandomOptions& o) {
  const Dims dims = parse_dims(o.dims);
  std::string text;
  if (o.kind == "pure") {
    text = serialize_state(random_pure(dims, o.seed));
  } else if (o.kind == "ginibre") {
    text = serialize_state(random_density(dims, o.rank > 0 ? o.rank : dims.total(), o.seed));
  } else {
    const int d = dims.total();
    text = serialize_channel(random_cptp(d, o.rank > 0 ? o.rank : d, o.seed));
  }
  write_text_file(o.out, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tsallis coherence, discord and correlation toolkit"};
  app.require_subcommand(1);

  MeasureOptions mo;
  auto* measure = app.add_subcommand("measure", "Evaluate one measure on a state file");
  measure->add_option("--input", mo.input, "State file")->required();
  measure->add_option("--measure", mo.measure, "Measure")->required()->check(CLI::IsMember(kMeasures));
  measure->add_option("--q", mo.q, "Entropic index in (0,1) or (1,2]")->required();
  measure->add_option("--basis", mo.basis, "\"computational\" or a basis file (coherence only)");
  measure->add_option("--sigma", mo.sigma, "Second state for rel-entropy");
  measure->add_option("--variant", mo.variant, "Bound variant I or II (lower, upper)");
  measure->add_option("--restarts", mo.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  measure->add_option("--seed", mo.seed, "Optimizer seed");
  measure->add_flag("--json", mo.json, "Print JSON with full precision");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run verification suites and write a report");
  verify->add_option("--suite", vo.suite, "Suite")
      ->required()
      ->check(CLI::IsMember({"inequalities", "monotonicity", "claim-audit", "all"}));
  verify->add_option("--samples", vo.samples, "Samples per suite")->check(CLI::NonNegativeNumber);
  verify->add_option("--dims", vo.dims, "Bipartite dims AxB for discord checks");
  verify->add_option("--q", vo.qs, "Comma-separated q list");
  verify->add_option("--seed", vo.seed, "Seed");
  verify->add_option("--out", vo.out, "Report file")->required();
  verify->add_flag("--timing", vo.timing, "Record wall time in the report");

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a measure over a q grid, write CSV");
  sweep->add_option("--input", so.measure.input, "State file")->required();
  sweep->add_option("--measure", so.measure.measure, "Measure")->required()->check(CLI::IsMember(kMeasures));
  sweep->add_option("--q-min", so.q_min, "First q")->required();
  sweep->add_option("--q-max", so.q_max, "Last q")->required();
  sweep->add_option("--steps", so.steps, "Grid points")->required();
  sweep->add_option("--out", so.out, "CSV file")->required();
  sweep->add_option("--basis", so.measure.basis, "\"computational\" or a basis file (coherence only)");
  sweep->add_option("--sigma", so.measure.sigma, "Second state for rel-entropy");
  sweep->add_option("--variant", so.measure.variant, "Bound variant I or II");
  sweep->add_option("--restarts", so.measure.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", so.measure.seed, "Optimizer seed");
  sweep->add_flag("--timing", so.timing, "Fill the wall_ms column");

  RandomOptions ro;
  auto* random = app.add_subcommand("random", "Write a random state or channel file");
  random->add_option("--kind", ro.kind, "pure, ginibre or cptp")->required()->check(CLI::IsMember({"pure", "ginibre", "cptp"}));
  random->add_option("--dims", ro.dims, "AxB or D")->required();
  random->add_option("--rank", ro.rank, "Ginibre rank, or Kraus count for cptp")->check(CLI::PositiveNumber);
  random->add_option("--seed", ro.seed, "Seed")->required();
  random->add_option("--out", ro.out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*measure) return run_measure(mo);
    if (*verify) return run_verify(vo);
    if (*sweep) return run_sweep(so);
    if (*random) return run_random(ro);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
