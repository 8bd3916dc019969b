#include <cstdio>
#include <cstdlib>
#include <string>

#include "lacuna/acceptance.hpp"

// Optional arguments: criterion numbers to run (default all).
int main(int argc, char** argv) {
  lacuna::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  auto results = lacuna::run_acceptance(opt, [](const lacuna::CriterionOutcome& c) {
    std::printf("[%s] criterion %2d  %-40s %7.2f s  %s\n", lacuna::to_string(c.verdict).c_str(), c.id,
                c.name.c_str(), c.seconds, c.detail.c_str());
    std::fflush(stdout);
  });
  bool ok = lacuna::suite_passed(results);
  std::printf("%s: %zu criteria run\n", ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", results.size());
  return ok ? 0 : 1;
}
