// SPDX-License-Identifier: Apache-2.0
//
// acceptance [all | fast | <n> ...]: prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.
#include <iostream>
#include <stdexcept>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  bool ok = true;
  try {
    if (argc < 2) {
      for (const auto& r : wnls::acceptance::run_suite("all", std::cout)) ok = ok && r.pass;
    }
    for (int i = 1; i < argc; ++i)
      for (const auto& r : wnls::acceptance::run_suite(argv[i], std::cout)) ok = ok && r.pass;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return ok ? 0 : 1;
}
