#include <iostream>
#include <string>
#include <vector>

#include "tsqw/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  bool ok = true;
  for (const auto& r : tsqw::run_acceptance(only, std::cout)) ok = ok && r.passed;
  return ok ? 0 : 1;
}
