#pragma once

// Quick invariant checks over the library, run by `gridsmooth selftest`.

#include <string>
#include <vector>

namespace gridsmooth {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelftestCheck> run_selftest();

}  // namespace gridsmooth
