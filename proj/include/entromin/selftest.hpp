#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace entromin {

struct SelftestOptions {
  bool quick = false;
  // Test hook: flips the sign of the threshold fed to the shrinkage check.
  bool corrupt_threshold_sign = false;
  unsigned long long seed = 20240601;
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<SelftestCheck> run_selftest(const SelftestOptions& opts = {});

void print_selftest_table(std::ostream& os, const std::vector<SelftestCheck>& checks);

}  // namespace entromin
