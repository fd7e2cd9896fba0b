// Runs the twelve numbered criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only when every criterion passes, runtime budgets included.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "lrb/verification.hpp"

namespace {

// Wall-clock budgets in seconds; 0 means none.
double budget(int id) {
  switch (id) {
    case 1: return 10.0;
    case 2: return 30.0;
    case 3: return 60.0;
    case 9: return 300.0;
    default: return 0.0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  lrb::verify::Options opt;
  if (argc > 1) opt.workers = static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10));
  int failures = 0;
  for (const auto& c : lrb::verify::criteria()) {
    if (c.id == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    lrb::verify::Rows rows;
    std::string error;
    try {
      rows = c.run(opt);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = error.empty() && !rows.empty();
    for (const auto& r : rows) pass = pass && r.pass;
    const double limit = budget(c.id);
    const bool in_time = limit == 0.0 || secs < limit;
    pass = pass && in_time;
    failures += pass ? 0 : 1;

    std::printf("criterion %2d %-24s %s  (%.2fs", c.id, std::string(c.name).c_str(), pass ? "PASS" : "FAIL", secs);
    if (limit > 0.0) std::printf(", budget %.0fs", limit);
    std::printf(")\n");
    for (const auto& r : rows) {
      std::printf("    %-48s statistic=%-12.6g threshold=%-10.4g %s\n", r.check.c_str(), r.statistic, r.threshold,
                  r.pass ? "ok" : "FAILED");
    }
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    if (!in_time) std::printf("    over runtime budget\n");
    std::fflush(stdout);
  }
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
