#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace selfsim {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  nlohmann::json details = nlohmann::json::object();
  bool pass() const;
  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::string suite;
  std::vector<CriterionResult> criteria;
  bool pass() const;
  nlohmann::json to_json() const;
};

/// identities, exponents, lemma21, dichotomy, uniqueness-probe, all.
const std::vector<std::string>& suite_names();
/// Criterion ids run by a suite. Throws InvalidArgument for an unknown name.
std::vector<int> suite_criteria(std::string_view suite);

/// Runs acceptance criterion 1..10. Output contains no timing, so repeated
/// runs serialize identically.
CriterionResult run_criterion(int id);
SuiteReport run_suite(std::string_view suite);

}  // namespace selfsim
