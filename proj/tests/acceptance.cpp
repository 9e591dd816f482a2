// Runs the nine acceptance criteria and prints one line per criterion.
// Optional arguments: criterion ids to run; HYPHEAT_THREADS sets parallelism.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "hypheat/crosscheck.hpp"
#include "hypheat/parallel.hpp"

int main(int argc, char** argv) {
  using namespace hypheat;
  crosscheck::SuiteOptions opts;
  opts.threads = default_threads();
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
  const bool verbose = std::getenv("HYPHEAT_ACCEPTANCE_VERBOSE") != nullptr;
  opts.on_result = [verbose](const crosscheck::CriterionResult& c) {
    std::printf("[%s] criterion %d: %s | %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                c.summary.c_str(), c.seconds);
    if (verbose || !c.pass) {
      for (const auto& r : c.residuals) {
        if (verbose || !r.pass) std::printf("    %s\n", crosscheck::to_json(r).c_str());
      }
      for (const auto& r : c.comparisons) {
        if (verbose || !r.pass) std::printf("    %s\n", crosscheck::to_json(r).c_str());
      }
      for (const auto& r : c.masses) {
        if (verbose || !r.pass) std::printf("    %s\n", crosscheck::to_json(r).c_str());
      }
      for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    }
    std::fflush(stdout);
  };
  const auto results = crosscheck::run_acceptance_suite(opts);
  int passed = 0;
  for (const auto& c : results) passed += c.pass ? 1 : 0;
  std::printf("%d/%zu criteria passed\n", passed, results.size());
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}
