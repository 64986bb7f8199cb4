#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace tsq {

enum class CheckStatus { Pass, Fail, Observational };

const char* to_string(CheckStatus s);

/// One record per claim id. `max_violation` is the largest amount by which
/// the checked relation was exceeded (0 when it always held); a sample
/// counts as a violation when that amount is above `tolerance`.
struct CheckRecord {
  std::string claim_id;
  std::string anchor;  // the relation checked, or "plumbing"
  long samples = 0;
  double max_violation = 0.0;
  long violation_count = 0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::Pass;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

/// Accumulates excess values; order of `add` calls does not affect the result.
class Tally {
 public:
  explicit Tally(double tolerance) : tolerance_(tolerance) {}

  void add(double excess);
  /// Asserted records pass iff no sample exceeded the tolerance.
  CheckRecord finish(std::string claim_id, std::string anchor, bool asserted) const;

  long samples() const noexcept { return samples_; }
  long violations() const noexcept { return violations_; }

 private:
  double tolerance_;
  long samples_ = 0;
  long violations_ = 0;
  double max_violation_ = 0.0;
};

struct SuiteReport {
  std::string suite;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<CheckRecord> checks;
  double wall_time = 0.0;  // seconds; left at 0 unless timing was requested

  /// Observational records never fail a suite.
  bool passed() const;
  const CheckRecord* find(const std::string& claim_id) const;
};

nlohmann::ordered_json to_json(const SuiteReport& report);
SuiteReport suite_report_from_json(const nlohmann::ordered_json& j);

/// Report file: {"passed": bool, "suites": [...]}.
std::string serialize_reports(const std::vector<SuiteReport>& reports);
std::vector<SuiteReport> parse_reports(const std::string& text);

}  // namespace tsq
