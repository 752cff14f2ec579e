#include <iostream>

#include "bundlekit/acceptance.hpp"

int main() {
  const auto results = bundlekit::run_acceptance({});
  bundlekit::print_acceptance_report(results, std::cout);
  return bundlekit::all_passed(results) ? 0 : 1;
}
