// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status 0 iff all pass.

#include <cstdio>
#include <exception>
#include <iostream>

#include "vstatic/acceptance.hpp"

int main() {
  try {
    vstatic::AcceptanceOptions opt;
    opt.seed = vstatic::seed_from_env();
    const vstatic::AcceptanceResult res = vstatic::run_acceptance(opt);
    for (const auto& c : res.criteria) std::cout << vstatic::criterion_line(c) << "\n";
    std::printf("%s overall (%.1f s)\n", res.overall_pass() ? "PASS" : "FAIL", res.summary.wall_time);
    return res.overall_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance run aborted: " << e.what() << "\n";
    return 2;
  }
}
