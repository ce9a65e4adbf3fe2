#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affdim/core_ifs.hpp"
#include "affdim/interval_union.hpp"

namespace affdim {

enum class Budget { small, full };

struct AcceptanceOptions {
  Budget budget = Budget::small;
  /// Multiplies every numeric tolerance; 0 turns them into exact comparisons.
  double tolerance_scale = 1.0;
  /// Criterion ids to run; empty runs all ten.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0;
  double target = 0;
  double tolerance = 0;
  double seconds = 0;
  double time_limit = 0;  // 0: none
  std::string detail;
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_passed() const;
};

AcceptanceReport run_acceptance(const AcceptanceOptions& options = {});
nlohmann::json to_json(const AcceptanceReport& report);
/// One line per criterion: "[PASS] 3 name: detail".
std::string format_report(const AcceptanceReport& report);

/// Seeded random dominated system with 2 to 4 maps on coarse rational grids,
/// so that projected exact overlaps are common.
IFSSystem random_system(std::uint64_t seed);

/// Quadratic reference implementations used to cross-check the fast paths.
std::size_t oracle_t_r(std::span<const Similarity1D> projected, const Rational& r);
std::optional<Rational> oracle_delta(std::span<const Similarity1D> projected, std::size_t n);

}  // namespace affdim
