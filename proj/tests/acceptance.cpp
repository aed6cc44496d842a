// One line per acceptance criterion; exits nonzero if any fails.

#include <iostream>

#include "besov/verify.hpp"

int main() {
  int failed = 0;
  for (const auto& c : besov::verify::acceptance_suite()) {
    const auto r = besov::verify::timed(c.name, c.run);
    std::cout << besov::verify::report_line(r) << std::endl;
    failed += !r.passed;
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed" : "acceptance criteria failed: " + std::to_string(failed))
            << std::endl;
  return failed == 0 ? 0 : 1;
}
