#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hdqp/csv.hpp"

namespace hdqp::acceptance {

/// fast: reduced replicate counts where the criterion allows it (the
/// correction-quality criterion drops from 1000 to 100 replicates at 10%
/// tolerances); everything else already runs at its stated scale.
/// full: the stated replicate counts and tolerances everywhere.
enum class Tier { fast, full };

Tier tier_from_string(const std::string& s);
std::string to_string(Tier tier);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< measured quantity (worst part for multi-part)
  double target = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;     ///< tolerance minus deviation; >= 0 iff passed
  double seconds = 0.0;
  std::string details;
};

struct Report {
  Tier tier = Tier::fast;
  std::uint64_t base_seed = 0;
  std::vector<CriterionResult> results;
  bool all_passed() const;
};

/// Runs the acceptance criteria (all of them, or the single one selected
/// by `criterion` in 1..9), printing one pass/fail line per criterion to
/// `log`.
Report run(Tier tier, int criterion, std::ostream& log, int threads = 1,
           std::uint64_t base_seed = 20100801);

/// Machine-readable report. The header is stable:
/// criterion,name,status,value,target,tolerance,margin,seconds
csv::Table report_table(const Report& report);

}  // namespace hdqp::acceptance
