#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qls/tasks.hpp"

namespace qls {

struct CheckReport {
  std::string id;
  std::string parameters;
  std::string computed;
  std::string expected;
  std::string provenance;  // exact-formula | reference-constant | monte-carlo-oracle
  double tolerance = 0;
  bool pass = true;
  bool info_only = false;  // reported, never gates the suite
};

// Runs the full identity/inequality suite. Sub-checks execute in parallel
// across `jobs` threads (0 = hardware default); the report list is sorted by
// check id and is byte-stable for a fixed seed.
std::vector<CheckReport> check_identities(std::uint64_t seed, int jobs = 0);

// True iff every non-info check passed.
bool all_pass(const std::vector<CheckReport>& reports);

std::string format_reports(const std::vector<CheckReport>& reports);

}  // namespace qls
