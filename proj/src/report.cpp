#include "tsq/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tsq/qcore.hpp"

namespace tsq {

using nlohmann::ordered_json;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Observational: return "observational";
  }
  return "?";
}

namespace {

CheckStatus status_from_string(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "observational") return CheckStatus::Observational;
  throw Error(ErrorCode::ParseError, fmt::format("field \"status\": unknown value \"{}\"", s));
}

template <typename T>
T get_field(const ordered_json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorCode::ParseError, fmt::format("field \"{}\": missing", name));
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::ParseError, fmt::format("field \"{}\": wrong type", name));
  }
}

}  // namespace

void Tally::add(double excess) {
  ++samples_;
  // NaN counts as a violation.
  if (!(excess <= tolerance_)) ++violations_;
  if (std::isnan(excess)) {
    max_violation_ = std::numeric_limits<double>::infinity();
  } else {
    max_violation_ = std::max(max_violation_, excess);
  }
}

CheckRecord Tally::finish(std::string claim_id, std::string anchor, bool asserted) const {
  CheckRecord rec;
  rec.claim_id = std::move(claim_id);
  rec.anchor = std::move(anchor);
  rec.samples = samples_;
  rec.max_violation = max_violation_;
  rec.violation_count = violations_;
  rec.tolerance = tolerance_;
  if (!asserted) {
    rec.status = CheckStatus::Observational;
  } else {
    rec.status = violations_ == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return rec;
}

bool SuiteReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == CheckStatus::Fail; });
}

const CheckRecord* SuiteReport::find(const std::string& claim_id) const {
  for (const auto& c : checks) {
    if (c.claim_id == claim_id) return &c;
  }
  return nullptr;
}

ordered_json to_json(const SuiteReport& report) {
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json r;
    r["claim_id"] = c.claim_id;
    r["anchor"] = c.anchor;
    r["samples"] = c.samples;
    // JSON has no infinity; an unbounded excess is written as null.
    r["max_violation"] = std::isfinite(c.max_violation) ? ordered_json(c.max_violation) : ordered_json(nullptr);
    r["violation_count"] = c.violation_count;
    r["tolerance"] = c.tolerance;
    r["status"] = to_string(c.status);
    r["details"] = c.details;
    checks.push_back(std::move(r));
  }
  ordered_json j;
  j["suite"] = report.suite;
  j["passed"] = report.passed();
  j["config"] = report.config;
  j["wall_time"] = report.wall_time;
  j["checks"] = std::move(checks);
  return j;
}

SuiteReport suite_report_from_json(const ordered_json& j) {
  SuiteReport report;
  report.suite = get_field<std::string>(j, "suite");
  report.config = get_field<ordered_json>(j, "config");
  report.wall_time = get_field<double>(j, "wall_time");
  for (const auto& r : get_field<ordered_json>(j, "checks")) {
    CheckRecord c;
    c.claim_id = get_field<std::string>(r, "claim_id");
    c.anchor = get_field<std::string>(r, "anchor");
    c.samples = get_field<long>(r, "samples");
    const ordered_json& mv = r.at("max_violation");
    c.max_violation = mv.is_null() ? std::numeric_limits<double>::infinity() : mv.get<double>();
    c.violation_count = get_field<long>(r, "violation_count");
    c.tolerance = get_field<double>(r, "tolerance");
    c.status = status_from_string(get_field<std::string>(r, "status"));
    c.details = get_field<ordered_json>(r, "details");
    report.checks.push_back(std::move(c));
  }
  return report;
}

std::string serialize_reports(const std::vector<SuiteReport>& reports) {
  ordered_json j;
  j["passed"] = std::all_of(reports.begin(), reports.end(), [](const SuiteReport& r) { return r.passed(); });
  j["suites"] = ordered_json::array();
  for (const auto& r : reports) j["suites"].push_back(to_json(r));
  return j.dump(2) + "\n";
}

std::vector<SuiteReport> parse_reports(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("malformed report: {}", e.what()));
  }
  std::vector<SuiteReport> out;
  for (const auto& s : get_field<ordered_json>(j, "suites")) out.push_back(suite_report_from_json(s));
  return out;
}

}  // namespace tsq
