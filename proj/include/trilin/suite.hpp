#pragma once

// Suite execution: each suite expands into independent checks, run in
// parallel up to `jobs` and collected in a fixed order.

#include <functional>
#include <string>
#include <vector>

#include "trilin/cache.hpp"
#include "trilin/config.hpp"
#include "trilin/report.hpp"

namespace trilin {

struct SuiteRun {
  Report report;
  CacheStats cache;
};

/// The records of one suite (no cache handling, no environment).
std::vector<Record> run_one_suite(const std::string& name, const SuiteConfig& c);

/// Validates the config, warms the cache, runs the selected suites.
SuiteRun run_suite(const SuiteConfig& c);

/// Runs `tasks` on up to `jobs` threads; results keep the task order.
std::vector<Record> run_parallel(const std::vector<std::function<Record()>>& tasks, int jobs);

/// The dimension of V^{I_s, omega} for a principal series of conductor n <= s.
int iwahori_dimension(int n, int s);

}  // namespace trilin
