#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affdim/core_ifs.hpp"
#include "affdim/interval_union.hpp"
#include "affdim/occupancy.hpp"
#include "affdim/symbolic_fibres.hpp"

namespace affdim {

enum class EstimateMethod { box_regression, assouad_sup, spectrum, quasi_extrapolation, formula };
std::string to_string(EstimateMethod m);

struct DimensionEstimate {
  double value = 0;
  EstimateMethod method = EstimateMethod::box_regression;
  std::optional<double> theta;
  int m_min = 0;  // coarsest scale exponent used
  int n_max = 0;  // finest scale exponent used
  bool lower_bound_only = false;
  std::vector<std::pair<double, double>> trend;  // fitted (x, y) series
  std::vector<double> residuals;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::string note;

  std::optional<double> diagnostic(const std::string& key) const;
};

/// Window maxima N(m, n) = max over windows Q of side 2^{-m} of the number of
/// occupied 2^{-n} cells in Q, with a(m, n) = log2 N / (n - m).
struct ScalePairEntry {
  int m = 0;
  int n = 0;
  std::size_t count = 0;
  DyadicWindow window;
  double exponent = 0;
};

class ScalePairMatrix {
 public:
  /// Keeps the larger count; equal counts keep the lexicographically smaller window.
  void record(int m, int n, std::size_t count, const DyadicWindow& window);
  const ScalePairEntry* find(int m, int n) const;
  const std::vector<ScalePairEntry>& entries() const { return entries_; }
  /// max over m of N(m, m + gap), or 0 when the gap was never sampled.
  std::size_t max_count_at_gap(int gap) const;

 private:
  std::vector<ScalePairEntry> entries_;
};

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  std::vector<double> residuals;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of log2 N_{2^{-n}} against n for n in [n_lo, n_hi];
/// needs at least five scales.
DimensionEstimate box_dimension_estimate(const CoverSource& source, int n_lo, int n_hi,
                                         std::size_t cap = enumeration_cap());
DimensionEstimate box_dimension_estimate(const IFSSystem& system, int n_lo, int n_hi);
DimensionEstimate box_dimension_estimate(const IntervalUnion& set, int n_lo, int n_hi);
/// Box estimate of the projection pi(K).
DimensionEstimate projection_box_estimate(const IFSSystem& system, int n_lo = 6, int n_hi = 16);

struct WindowOptions {
  std::size_t windows = 0;  // 0: 64 windows per scale on the line, 24 in the plane
  std::uint64_t seed = 0x5eed2024;
};

struct AssouadOptions {
  int m_min = 0;
  int m_max = 6;
  int gap_min = 0;  // 0: fit over the upper half of the gaps, past the saturated small-gap regime
  int gap_max = 0;  // 0: 12 on the line, 10 in the plane
  WindowOptions sampling;
};

struct AssouadResult {
  DimensionEstimate estimate;
  ScalePairMatrix matrix;
};

/// Slope of log2 max_{m, Q} N(m, m + g) against the gap g. This is a lower
/// estimate of dimA: finitely many scales cannot certify the supremum.
AssouadResult assouad_estimate(const CoverSource& source, const AssouadOptions& options = {},
                               std::size_t cap = enumeration_cap());

struct SpectrumOptions {
  int gap_min = 0;  // 0: upper half of the gaps, as for the Assouad estimate
  int gap_max = 0;  // 0: as for the Assouad estimate
  int m_per_gap = 1;
  int m_limit = 4000;
  WindowOptions sampling;
};

/// Pairs (m, n) with n = ceil(m / theta) realizing each gap in range
/// (gap_max 0 is read as 12 here; spectrum_estimate resolves it per source).
std::vector<std::pair<int, int>> spectrum_scale_pairs(double theta, const SpectrumOptions& options, int max_level);

/// Slope of log2 max_Q N(m, ceil(m/theta)) against the gap when at least three
/// gaps are available; otherwise the exponent at the deepest pair. Window
/// maxima are recorded into `matrix` when given.
DimensionEstimate spectrum_estimate(const CoverSource& source, double theta, const SpectrumOptions& options = {},
                                    std::size_t cap = enumeration_cap(), ScalePairMatrix* matrix = nullptr);

/// {0.80, 0.85, 0.90, 0.95} restricted to (theta0, 1); when fewer than three
/// survive, theta0 + (1 - theta0) {0.2, 0.4, 0.6, 0.8}.
std::vector<double> quasi_theta_grid(double theta0);

/// Linear extrapolation to theta = 1 of the spectrum estimates at the three
/// largest thetas. Needs at least three values.
DimensionEstimate quasi_assouad_estimate(const CoverSource& source, std::span<const double> thetas,
                                         const SpectrumOptions& options = {}, std::size_t cap = enumeration_cap());

enum class FibreKind { box, assouad, spectrum };

struct FibreQuery {
  FibreKind kind = FibreKind::assouad;
  double theta = 0.9;
};

struct FibreEstimate {
  DimensionEstimate estimate;
  OmegaPrefix prefix;
};

/// Dimension estimate of one fibre approximant: the midpoint of the hull
/// (X = [0,1]) and anchor (X = {0}) estimates.
DimensionEstimate fibre_dimension(const IFSSystem& system, const OmegaPrefix& prefix, std::size_t fibre_depth,
                                  const FibreQuery& query, std::size_t cap = enumeration_cap());

/// Maximum of fibre_dimension over enumerate_prefixes(prefix_depth), each
/// prefix extended periodically to fibre_depth letters.
FibreEstimate max_fibre_dimension(const IFSSystem& system, std::size_t prefix_depth, std::size_t fibre_depth,
                                  const FibreQuery& query, std::size_t cap = enumeration_cap());

/// How the fibres of a system are organized, decided from the projected maps.
enum class FibreStructure {
  singleton,     // projected semigroup free, generators distinct: every fibre is a point
  free_osc,      // free projection, each per-generator fibred IFS has disjoint images
  free_uniform,  // free projection, every per-generator fibred IFS is the same equicontractive IFS
  general,
};
std::string to_string(FibreStructure s);

struct FibreAnalysis {
  FibreStructure structure = FibreStructure::general;
  std::optional<double> dimension;  // closed-form or growth-rate fibre dimension when available
  std::string detail;
};
FibreAnalysis analyse_fibres(const IFSSystem& system, std::size_t overlap_depth = 6,
                             std::size_t cap = enumeration_cap());

/// Growth-rate dimension log(c_k / c_{k-1}) / log(1/lambda) of an
/// equicontractive IFS, c_k the number of distinct level-k maps.
double growth_dimension(std::span<const Similarity1D> maps, std::size_t max_maps = 200000);

struct FormulaOptions {
  std::size_t prefix_depth = 2;
  std::size_t fibre_depth = 8;
  std::size_t overlap_depth = 6;
  std::vector<int> r_exponents;  // empty: chosen from the system
  int projection_n_lo = 6;
  int projection_n_hi = 16;
};

/// dimA pi(K) + max over prefixes of the fibre Assouad dimension. Tagged
/// lower-bound-only unless the projection is WSC-consistent.
DimensionEstimate formula_dimA(const IFSSystem& system, const FormulaOptions& options = {});

/// dimH pi(K) + max over prefixes of the fibre spectrum at theta. Requires
/// theta0 <= theta < 1 (RangeError otherwise). Tagged lower-bound-only
/// unless the projection is WSC- or AWSC-consistent.
DimensionEstimate formula_dimAs(const IFSSystem& system, double theta, const FormulaOptions& options = {});

/// Default t_r exponents for the projection of `system`.
std::vector<int> default_r_exponents(const IFSSystem& system, std::size_t max_maps = 100000);

}  // namespace affdim
