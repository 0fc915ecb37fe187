#pragma once

#include <kernelforge/report.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace kernelforge::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<ReportItem> items;
  double seconds = 0.0;
  double time_limit = 0.0;
  /// Set when a check threw instead of producing items.
  std::string error;

  bool items_pass() const;
  bool within_time() const { return seconds <= time_limit; }
  bool pass() const { return error.empty() && items_pass() && within_time(); }
  /// Largest error over items, in each item's own measure, divided by its tolerance.
  double worst_ratio() const;
};

/// Runs acceptance criterion `id` (1..10) with the given seed.
CriterionResult run_criterion(int id, std::uint64_t seed);

int criterion_count();

struct Suite {
  std::string name;
  std::vector<int> criteria;
};

const std::vector<Suite>& suites();

/// Throws std::invalid_argument for an unknown suite name.
const Suite& find_suite(const std::string& name);

/// Runs every criterion of a suite and collects their items, plus one verdict
/// item per criterion that also carries the runtime limit.
EvalReport run_suite(const std::string& name, std::uint64_t seed);

}  // namespace kernelforge::verify
