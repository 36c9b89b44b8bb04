#pragma once

#include <string>
#include <vector>

namespace mulab::acceptance {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// "A1" .. "A10".
std::vector<std::string> criterion_ids();

/// Runs one criterion; unknown ids throw InvalidInput.
CriterionResult run_criterion(const std::string& id);

/// One line: id, PASS or FAIL, measured quantities.
std::string format_line(const CriterionResult& r);

}  // namespace mulab::acceptance
