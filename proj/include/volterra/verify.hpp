#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "volterra/stats.hpp"

namespace volterra::verify {

// Seeds shipped with the acceptance set.
inline constexpr std::uint64_t kLawSeed = 1;
inline constexpr std::uint64_t kRoundtripSeed = 7;
inline constexpr std::uint64_t kLaguerreSeed = 2024;

struct CriterionResult {
  int id = 0;
  std::string title;
  ComparisonReport report;
  bool pass() const { return report.all_pass(); }
};

CriterionResult covariance_reproduction();
CriterionResult operator_algebra();
CriterionResult asymptotic_inverse();
// Criteria 4 and 5 share their ensembles.
std::vector<CriterionResult> transform_and_bridge_laws(unsigned threads = 1);
CriterionResult roundtrips(unsigned threads = 1);
CriterionResult laguerre_expansion(unsigned threads = 1);
CriterionResult special_functions();

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
// Throws InvalidArgument for an unknown suite.
std::vector<CriterionResult> run_suite(const std::string& name, unsigned threads = 1);

// One `label,estimate,target,se,pass` table; labels carry the criterion number.
void write_report(std::ostream& out, const std::vector<CriterionResult>& results);

}  // namespace volterra::verify
