#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace circkep {

/// Collects sub-check outcomes of one acceptance criterion.
class CheckLog {
 public:
  bool expect(bool ok, const std::string& what);
  void note(const std::string& what) { lines_.push_back("  " + what); }
  bool passed() const { return passed_; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  bool passed_ = true;
  std::vector<std::string> lines_;
};

struct AcceptanceCheck {
  int id = 0;
  std::string name;
  bool quick = true;       // part of `verify --quick`
  double limit_seconds = 0.0;
  std::function<void(CheckLog&)> body;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::vector<std::string> lines;
};

/// The ten numbered criteria. `jobs` is forwarded to the regime sweep.
std::vector<AcceptanceCheck> acceptance_checks(int jobs = 0);

/// Shell-style glob with * and ?.
bool glob_match(std::string_view pattern, std::string_view text);

/// Runs the selected checks (empty filter selects all), printing one PASS/FAIL
/// line per criterion followed by its details. A check fails if any sub-check
/// fails or it overruns its time limit.
std::vector<CheckResult> run_acceptance(std::ostream& out, std::string_view filter, bool quick, int jobs = 0);

}  // namespace circkep
