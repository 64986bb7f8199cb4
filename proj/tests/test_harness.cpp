#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>

#include "tsq/discord.hpp"
#include "tsq/report.hpp"
#include "tsq/state_io.hpp"
#include "tsq/suites.hpp"

using namespace tsq;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TSQ_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "tsq_harness_test";
  fs::create_directories(dir);
  return dir;
}

ErrorCode code_of_parse(const std::string& text) {
  try {
    parse_state(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::DimMismatch;
}

SuiteConfig tiny(long samples) {
  SuiteConfig c;
  c.samples = samples;
  c.basis_restarts = 4;
  c.roof_restarts = 2;
  c.roof_max_iters = 200;
  c.d3_restarts = 2;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("state files round trip bit for bit") {
  for (int s = 0; s < 10; ++s) {
    const Dims dims = s % 2 ? Dims::bipartite(2, 3) : Dims::bipartite(2, 2);
    const DensityMatrix rho = random_density(dims, 1 + s % 4, 40 + s);
    const LoadedState back = parse_state(serialize_state(rho));
    CHECK(back.density.matrix() == rho.matrix());
    CHECK(back.density.dims() == dims);
    CHECK_FALSE(back.pure.has_value());

    const PureState psi = random_pure(dims, 50 + s);
    const LoadedState pure = parse_state(serialize_state(psi));
    REQUIRE(pure.pure.has_value());
    CHECK(pure.pure->amplitudes() == psi.amplitudes());
  }
  const BasisSet basis = BasisSet::from_unitary(haar_unitary(3, 7));
  CHECK(parse_basis(serialize_basis(basis)).unitary() == basis.unitary());
  const Channel ch = random_cptp(3, 2, 8);
  const Channel back = parse_channel(serialize_channel(ch));
  REQUIRE(back.kraus().size() == ch.kraus().size());
  for (size_t k = 0; k < ch.kraus().size(); ++k) CHECK(back.kraus()[k] == ch.kraus()[k]);
}

TEST_CASE("malformed state files") {
  CHECK(code_of_parse("{") == ErrorCode::ParseError);
  CHECK(code_of_parse(R"({"dims":[2],"kind":"density"})") == ErrorCode::ParseError);
  CHECK(code_of_parse(R"({"dims":[2],"kind":"mixed","data":[]})") == ErrorCode::ParseError);
  CHECK(code_of_parse(R"({"dims":[2],"kind":"pure","data":[[1,0]]})") == ErrorCode::DimMismatch);
  CHECK(code_of_parse(R"({"dims":[2],"kind":"density","data":[[1,0],[0,0],[0,0],[0.5,0]]})") ==
        ErrorCode::TraceMismatch);
  try {
    parse_state(R"({"dims":[2],"kind":"pure","data":[1,0]})");
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("data") != std::string::npos);
  }
  CHECK(parse_dims("2x3") == Dims::bipartite(2, 3));
  CHECK(parse_dims("4") == Dims::single(4));
  CHECK_THROWS_AS(parse_dims("2y3"), Error);
  CHECK_THROWS_AS(read_text_file("/nonexistent/tsq/state.json"), Error);
}

TEST_CASE("tally semantics") {
  Tally t(1e-9);
  t.add(-0.5);
  t.add(5e-10);
  CHECK(t.finish("c", "a <= b", true).status == CheckStatus::Pass);
  t.add(1e-6);
  t.add(std::numeric_limits<double>::quiet_NaN());
  const CheckRecord r = t.finish("c", "a <= b", true);
  CHECK(r.status == CheckStatus::Fail);
  CHECK(r.violation_count == 2);
  CHECK(r.samples == 4);
  // NaN counts as an unbounded violation.
  CHECK(std::isinf(r.max_violation));
  CHECK(t.finish("c", "a <= b", false).status == CheckStatus::Observational);

  Tally finite(1e-9);
  finite.add(1e-6);
  finite.add(3e-7);
  CHECK(finite.finish("c", "a <= b", true).max_violation == doctest::Approx(1e-6));

  Tally empty(1e-9);
  const CheckRecord e = empty.finish("c", "a", true);
  CHECK(e.status == CheckStatus::Pass);
  CHECK(e.max_violation == 0.0);
}

TEST_CASE("reports round trip byte for byte") {
  const SuiteReport a = suite_claim_audit(tiny(2));
  const std::string text = serialize_reports({a});
  CHECK(serialize_reports(parse_reports(text)) == text);
  const auto j = nlohmann::ordered_json::parse(text);
  CHECK(j.at("passed").get<bool>() == a.passed());
  CHECK(j.at("suites").at(0).at("wall_time").get<double>() == 0.0);
  CHECK_THROWS_AS(parse_reports("[]"), Error);
}

TEST_CASE("zero samples pass vacuously") {
  for (auto suite : {suite_inequalities, suite_monotonicity, suite_claim_audit}) {
    const SuiteReport r = suite(tiny(0));
    CHECK(r.passed());
    for (const auto& c : r.checks) {
      CHECK(c.samples == 0);
      CHECK(c.status != CheckStatus::Fail);
    }
  }
}

TEST_CASE("suite reports are independent of thread count") {
  SuiteConfig one = tiny(3);
  SuiteConfig three = tiny(3);
  three.threads = 3;
  CHECK(serialize_reports({suite_monotonicity(one)}) == serialize_reports({suite_monotonicity(three)}));
}

TEST_CASE("suite config validation") {
  SuiteConfig c = tiny(1);
  c.dims = Dims::bipartite(5, 2);
  CHECK_THROWS_AS(c.validate(), Error);
  c.dims = Dims::bipartite(2, 2);
  c.qs = {1.0};
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("CLI measure, random and exit codes") {
  const fs::path dir = scratch_dir();
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  const fs::path bell = dir / "bell.json";
  write_text_file(bell.string(), serialize_state(PureState::from_amplitudes(v, Dims::bipartite(2, 2))));

  const RunResult d1 = run_cli("measure --input " + bell.string() + " --measure d1 --q 2");
  CHECK(d1.exit_code == 0);
  CHECK(d1.out == "1.0\n");
  const RunResult entropy = run_cli("measure --input " + bell.string() + " --measure entropy --q 0.5 --json");
  CHECK(entropy.exit_code == 0);
  CHECK(nlohmann::json::parse(entropy.out).contains("value"));

  CHECK(run_cli("measure --input " + bell.string() + " --measure d1 --q 1").exit_code == 2);
  CHECK(run_cli("measure --input " + (dir / "missing.json").string() + " --measure d1 --q 2").exit_code == 2);
  CHECK(run_cli("measure --input " + bell.string() + " --measure bogus --q 2").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);

  const fs::path r1 = dir / "r1.json";
  const fs::path r2 = dir / "r2.json";
  CHECK(run_cli("random --kind ginibre --dims 2x3 --rank 2 --seed 5 --out " + r1.string()).exit_code == 0);
  CHECK(run_cli("random --kind ginibre --dims 2x3 --rank 2 --seed 5 --out " + r2.string()).exit_code == 0);
  CHECK(read_text_file(r1.string()) == read_text_file(r2.string()));
  CHECK(parse_state(read_text_file(r1.string())).density.dims() == Dims::bipartite(2, 3));
}

TEST_CASE("CLI verify and sweep are deterministic") {
  const fs::path dir = scratch_dir();
  const fs::path a = dir / "va.json";
  const fs::path b = dir / "vb.json";
  const std::string args = "verify --suite claim-audit --samples 2 --seed 9 --out ";
  CHECK(run_cli(args + a.string()).exit_code == 0);
  CHECK(run_cli(args + b.string()).exit_code == 0);
  CHECK(read_text_file(a.string()) == read_text_file(b.string()));

  CHECK(run_cli("verify --suite monotonicity --samples 0 --out " + a.string()).exit_code == 0);
  CHECK(nlohmann::json::parse(read_text_file(a.string())).at("passed").get<bool>());

  const fs::path state = dir / "sweep_state.json";
  write_text_file(state.string(), serialize_state(random_density(Dims::single(3), 3, 2)));
  const fs::path csv = dir / "sweep.csv";
  CHECK(run_cli("sweep --input " + state.string() + " --measure c1 --q-min 0.5 --q-max 1.5 --steps 3 --out " +
                csv.string())
            .exit_code == 0);
  const std::string text = read_text_file(csv.string());
  CHECK(text.rfind("q,value,n_value,restarts_converged,wall_ms\n", 0) == 0);
  CHECK(text.find("nan") != std::string::npos);
}
