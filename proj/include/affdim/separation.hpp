#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affdim/core_ifs.hpp"
#include "affdim/interval_union.hpp"

namespace affdim {

/// Two-sided count bracketing t_r at one scale.
struct TrSample {
  Rational r;
  std::size_t upper = 0;  // outer-hull count (upper bound on t_r)
  std::size_t lower = 0;  // anchor-point count (lower bound on t_r)
  std::size_t distinct_maps = 0;  // |{S_sigma : sigma in Lambda_r}|
};

enum class SeparationVerdict { wsc_consistent, awsc_consistent, inconclusive };
std::string to_string(SeparationVerdict v);

struct WordPair {
  Word first;
  Word second;
};

/// Finite-depth diagnostic; never a proof of WSC or AWSC.
struct SeparationReport {
  std::vector<TrSample> samples;
  SeparationVerdict verdict = SeparationVerdict::inconclusive;
  std::optional<WordPair> witness;  // exact overlap, or the minimizing pair of the deepest Delta_n
  std::optional<std::size_t> witness_level;
  bool witness_is_exact_overlap = false;
  std::string caveat = "diagnostic at finite depth";
};

/// Maximum over centres x in the cover of the number of distinct S_sigma,
/// sigma in Lambda_r, whose image of the cover's hull meets [x - r, x + r].
std::size_t t_r_count(std::span<const Similarity1D> projected, const Rational& r, const IntervalUnion& pi_K_cover,
                      std::size_t cap = enumeration_cap());

/// Upper (hull) and lower (anchor point) counts at scale r, using the
/// Lambda_r-level projection cover as the outer approximation of pi(K).
TrSample t_r_sample(std::span<const Similarity1D> projected, const Rational& r, std::size_t cap = enumeration_cap());

/// Samples t_r at r = alpha_max^n for each exponent n. WSC-consistent when
/// the running maximum of t_r does not grow over the deepest half of the
/// samples; AWSC-consistent when log t_r / log(1/r) decreases over that half.
SeparationReport wsc_diagnostic(std::span<const Similarity1D> projected, std::span<const int> r_exponents,
                                std::size_t overlap_depth = 6, std::size_t cap = enumeration_cap());

/// Delta_n: minimum |S_sigma(0) - S_tau(0)| over distinct equal-ratio words of
/// length n. `delta` is empty when no two words share a ratio (Delta_n = inf).
struct EscDelta {
  std::optional<Rational> delta;
  std::optional<WordPair> witness;
};
EscDelta esc_delta(std::span<const Similarity1D> projected, std::size_t n, std::size_t cap = enumeration_cap());

struct OverlapWitness {
  std::size_t n = 0;
  WordPair words;
};
/// First level n <= max_n with two distinct words composing to the same map.
std::optional<OverlapWitness> exact_overlap_exists(std::span<const Similarity1D> projected, std::size_t max_n,
                                                   std::size_t cap = enumeration_cap());

/// Unique s >= 0 with sum r_i^s = 1, by bisection.
double similarity_dimension(std::span<const Rational> ratios);

}  // namespace affdim
