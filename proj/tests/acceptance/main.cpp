// Acceptance runner: one PASS/FAIL line per numbered criterion.
// Usage: acceptance [--quick] [name-glob]

#include <cstdlib>
#include <iostream>
#include <string>

#include "circkep/acceptance.h"

int main(int argc, char** argv) {
  bool quick = false;
  std::string filter;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--quick") {
      quick = true;
    } else {
      filter = a;
    }
  }
  int jobs = 0;
  if (const char* env = std::getenv("CIRCKEP_JOBS")) jobs = std::atoi(env);
  const auto results = circkep::run_acceptance(std::cout, filter, quick, jobs);
  for (const auto& r : results)
    if (!r.passed) return 1;
  return results.empty() ? 1 : 0;
}
