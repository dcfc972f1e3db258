#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace soliton::verify {

struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  /// "<=": measured <= tolerance. "in": lo <= measured <= hi.
  std::string relation = "<=";
  double lo = 0.0;
  double hi = 0.0;
  bool passed = false;
};

struct CriterionResult {
  std::string id;
  std::string title;
  std::vector<Check> checks;  // checks.front() is the headline measurement
  nlohmann::json details = nlohmann::json::object();
  std::string error;          // module fault; the criterion fails
  std::string invariant;      // named invariant when the fault was an InvariantViolation
  bool passed() const;
};

struct Options {
  std::vector<std::string> only;                 // empty: every criterion
  std::map<std::string, double> tolerance_overrides;  // id -> headline tolerance
  unsigned seed = 20240601;
};

const std::vector<std::string>& criterion_ids();
std::string criterion_title(const std::string& id);

/// Throws ValidationError for an unknown id. Module faults are captured in
/// the result, never thrown.
CriterionResult run_criterion(const std::string& id, const Options& opt = {});
std::vector<CriterionResult> verify_all(const Options& opt = {});

nlohmann::json to_json(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

/// One line: id, PASS/FAIL, title, then each check with its tolerance.
std::string summary_line(const CriterionResult& r);

}  // namespace soliton::verify
