#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace tsqw {

struct CriterionResult {
  int id = 0;
  std::string key;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct Criterion {
  int id = 0;
  std::string key;
  std::string title;
  double time_limit_s = 0;  // 0: no limit
  std::function<bool(std::string& detail)> run;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs the selected criteria (all when `only` is empty; entries match a key
/// or an id) and prints one PASS/FAIL line per criterion. Throws ConfigError
/// for an unknown selector.
std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only, std::ostream& out);

}  // namespace tsqw
