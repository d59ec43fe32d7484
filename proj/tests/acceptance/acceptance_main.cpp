// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Usage: acceptance [--fast] [--threads N]
#include <cstdlib>
#include <iostream>
#include <string>

#include "srchart/verification.hpp"

int main(int argc, char** argv) {
  srchart::VerifyOptions options;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--fast") {
      options.full = false;
    } else if (arg == "--threads" && i + 1 < argc) {
      options.threads = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--fast] [--threads N]\n";
      return 2;
    }
  }
  options.on_result = [](const srchart::CheckResult& r) {
    std::cout << srchart::format_check(r) << std::endl;
  };
  const auto results = srchart::run_checks(options);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
