#include <iostream>

#include "affdim/acceptance.hpp"

int main() {
  const auto report = affdim::run_acceptance({});
  std::cout << affdim::format_report(report);
  return report.all_passed() ? 0 : 1;
}
