#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "affdim/estimators.hpp"
#include "affdim/separation.hpp"

namespace affdim {

std::string to_string(FibreStructure s) {
  switch (s) {
    case FibreStructure::singleton:
      return "singleton";
    case FibreStructure::free_osc:
      return "free-osc";
    case FibreStructure::free_uniform:
      return "free-uniform";
    case FibreStructure::general:
      return "general";
  }
  return "general";
}

namespace {

std::vector<Similarity1D> distinct_projection(const IFSSystem& system) {
  auto maps = system.projected();
  std::sort(maps.begin(), maps.end());
  maps.erase(std::unique(maps.begin(), maps.end()), maps.end());
  return maps;
}

std::vector<Rational> ratios_of(std::span<const Similarity1D> maps) {
  std::vector<Rational> out;
  for (const auto& m : maps) out.push_back(m.ratio);
  return out;
}

// Largest n <= wanted with size^n <= budget.
std::size_t depth_within(std::size_t size, std::size_t wanted, std::size_t budget) {
  std::size_t n = 0, total = 1;
  while (n < wanted && size > 0 && total * size <= budget) {
    total *= size;
    ++n;
  }
  return n;
}

// Images F([0,1]) meet at most in endpoints, so (0,1) is an open set for the OSC.
bool disjoint_images(std::vector<Similarity1D> maps) {
  std::sort(maps.begin(), maps.end(),
            [](const Similarity1D& a, const Similarity1D& b) { return a.translate < b.translate; });
  for (std::size_t k = 1; k < maps.size(); ++k)
    if (maps[k].translate < maps[k - 1].translate + maps[k - 1].ratio) return false;
  return true;
}

struct ProjectionPart {
  double value = 0;
  bool from_similarity = false;
  SeparationReport report;
};

ProjectionPart projection_part(const IFSSystem& system, const FormulaOptions& options, bool hausdorff) {
  ProjectionPart part;
  const auto maps = distinct_projection(system);
  if (maps.size() == 1) {
    part.from_similarity = true;
    part.report.verdict = SeparationVerdict::wsc_consistent;
    return part;
  }
  const auto exps = options.r_exponents.empty() ? default_r_exponents(system) : options.r_exponents;
  part.report = wsc_diagnostic(maps, exps, options.overlap_depth);
  const auto ratios = ratios_of(maps);
  const double s = similarity_dimension(ratios);
  const bool separated = hausdorff ? part.report.verdict != SeparationVerdict::inconclusive
                                   : part.report.verdict == SeparationVerdict::wsc_consistent;
  if (!part.report.witness_is_exact_overlap && separated && s <= 1) {
    part.value = s;
    part.from_similarity = true;
  } else {
    part.value = projection_box_estimate(system, options.projection_n_lo, options.projection_n_hi).value;
  }
  return part;
}

double verdict_code(SeparationVerdict v) {
  switch (v) {
    case SeparationVerdict::wsc_consistent:
      return 2;
    case SeparationVerdict::awsc_consistent:
      return 1;
    case SeparationVerdict::inconclusive:
      return 0;
  }
  return 0;
}

}  // namespace

std::vector<int> default_r_exponents(const IFSSystem& system, std::size_t max_maps) {
  const std::size_t n = std::max<std::size_t>(2, depth_within(distinct_projection(system).size(), 10, max_maps));
  std::vector<int> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(static_cast<int>(k));
  return out;
}

double growth_dimension(std::span<const Similarity1D> maps, std::size_t max_maps) {
  if (maps.empty()) throw DomainError("growth dimension needs at least one map");
  for (const auto& m : maps)
    if (m.ratio != maps.front().ratio) throw DomainError("growth dimension needs equal contraction ratios");
  std::vector<Similarity1D> level{Similarity1D::identity()};
  std::size_t previous = 1;
  while (level.size() * maps.size() <= max_maps) {
    std::unordered_set<Similarity1D, Similarity1DHash> next;
    for (const auto& f : level)
      for (const auto& g : maps) next.insert(f.then_inner(g));
    previous = level.size();
    level.assign(next.begin(), next.end());
    if (level.size() == previous && previous == 1) break;
  }
  return std::log(static_cast<double>(level.size()) / static_cast<double>(previous)) /
         -std::log(to_double(maps.front().ratio));
}

FibreAnalysis analyse_fibres(const IFSSystem& system, std::size_t overlap_depth, std::size_t cap) {
  FibreAnalysis out;
  const auto distinct = distinct_projection(system);
  std::vector<std::vector<Similarity1D>> classes(distinct.size());
  for (const auto& t : system.maps()) {
    const auto k = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), project(t)) -
                                            distinct.begin());
    classes[k].push_back(fibre_map(t));
  }
  for (auto& c : classes) std::sort(c.begin(), c.end());

  bool free = distinct.size() == 1;
  if (!free) {
    const std::size_t depth = std::max<std::size_t>(1, depth_within(distinct.size(), overlap_depth, 200000));
    free = !exact_overlap_exists(distinct, depth, cap).has_value();
  }
  std::ostringstream detail;
  detail << distinct.size() << " distinct projected maps";
  if (!free) {
    out.detail = detail.str() + "; projected semigroup has exact overlaps";
    return out;
  }
  const bool single = std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.size() == 1; });
  if (single) {
    out.structure = FibreStructure::singleton;
    out.dimension = 0.0;
    out.detail = detail.str() + "; every fibre class is a single word";
    return out;
  }
  if (std::all_of(classes.begin(), classes.end(), [](const auto& c) { return disjoint_images(c); })) {
    double best = 0;
    for (const auto& c : classes)
      if (c.size() > 1) best = std::max(best, similarity_dimension(ratios_of(c)));
    out.structure = FibreStructure::free_osc;
    out.dimension = best;
    out.detail = detail.str() + "; per-generator fibred IFSs have disjoint images";
    return out;
  }
  const bool uniform = std::all_of(classes.begin(), classes.end(), [&](const auto& c) { return c == classes[0]; });
  const bool equal_ratios = std::all_of(classes[0].begin(), classes[0].end(),
                                        [&](const auto& f) { return f.ratio == classes[0].front().ratio; });
  if (uniform && equal_ratios) {
    out.structure = FibreStructure::free_uniform;
    out.dimension = growth_dimension(classes[0]);
    out.detail = detail.str() + "; every fibre is the attractor of one equicontractive IFS";
    return out;
  }
  out.detail = detail.str() + "; fibres vary with the symbolic path";
  return out;
}

DimensionEstimate fibre_dimension(const IFSSystem& system, const OmegaPrefix& prefix, std::size_t fibre_depth,
                                  const FibreQuery& query, std::size_t cap) {
  const OmegaPrefix deep = extend_periodic(system, prefix, fibre_depth);
  const auto hull = fibre_source(system, deep, ApproxMode::hull, cap);
  const auto anchor = fibre_source(system, deep, ApproxMode::anchor, cap);
  const int level = std::min(hull->max_level(), 48);
  auto measure = [&](const CoverSource& source) -> DimensionEstimate {
    switch (query.kind) {
      case FibreKind::box: {
        if (level < 4) throw DomainError("fibre depth too small for a box estimate");
        return box_dimension_estimate(source, std::min(level / 2, level - 4), level, cap);
      }
      case FibreKind::assouad: {
        AssouadOptions o;
        o.m_max = std::max(0, level / 3);
        o.gap_max = std::max(1, std::min(10, level - o.m_max));
        return assouad_estimate(source, o, cap).estimate;
      }
      case FibreKind::spectrum: {
        SpectrumOptions o;
        o.gap_min = 1;
        o.m_limit = std::max(1, static_cast<int>(std::floor(level * query.theta)));
        return spectrum_estimate(source, query.theta, o, cap);
      }
    }
    throw DomainError("unknown fibre estimate kind");
  };
  const auto outer = measure(*hull);
  const auto inner = measure(*anchor);
  DimensionEstimate est = outer;
  est.value = 0.5 * (outer.value + inner.value);
  est.diagnostics = {{"hull", outer.value}, {"anchor", inner.value}, {"resolution", static_cast<double>(level)}};
  est.note = "midpoint of hull and anchor estimates";
  return est;
}

FibreEstimate max_fibre_dimension(const IFSSystem& system, std::size_t prefix_depth, std::size_t fibre_depth,
                                  const FibreQuery& query, std::size_t cap) {
  if (fibre_depth < std::max<std::size_t>(prefix_depth, 1))
    throw DomainError("fibre depth must be at least the prefix depth");
  const auto prefixes = enumerate_prefixes(system, prefix_depth, cap);
  std::optional<FibreEstimate> best;
  double lowest = 2;
  for (const auto& p : prefixes) {
    auto est = fibre_dimension(system, p, fibre_depth, query, cap);
    lowest = std::min(lowest, est.value);
    if (!best || est.value > best->estimate.value) best = FibreEstimate{est, p};
  }
  best->estimate.diagnostics.push_back({"prefix_count", static_cast<double>(prefixes.size())});
  best->estimate.diagnostics.push_back({"min_over_prefixes", lowest});
  return *best;
}

DimensionEstimate formula_dimA(const IFSSystem& system, const FormulaOptions& options) {
  DimensionEstimate est;
  est.method = EstimateMethod::formula;
  const auto proj = projection_part(system, options, false);
  const auto fibres = analyse_fibres(system, options.overlap_depth);
  double fibre_value = 0;
  if (fibres.dimension) {
    fibre_value = *fibres.dimension;
  } else {
    fibre_value =
        max_fibre_dimension(system, options.prefix_depth, options.fibre_depth, FibreQuery{FibreKind::assouad, 0.9})
            .estimate.value;
  }
  est.value = std::clamp(proj.value + fibre_value, 0.0, 2.0);
  est.lower_bound_only = proj.report.verdict != SeparationVerdict::wsc_consistent;
  est.diagnostics = {{"projection", proj.value},
                     {"projection_from_similarity_dimension", proj.from_similarity ? 1.0 : 0.0},
                     {"fibre", fibre_value},
                     {"fibre_closed_form", fibres.dimension ? 1.0 : 0.0},
                     {"separation_verdict", verdict_code(proj.report.verdict)}};
  est.note = "projection " + to_string(proj.report.verdict) + "; fibres " + to_string(fibres.structure) + " (" +
             fibres.detail + ")";
  if (est.lower_bound_only) est.note += "; lower bound only: projection not WSC-consistent";
  return est;
}

DimensionEstimate formula_dimAs(const IFSSystem& system, double theta, const FormulaOptions& options) {
  const double theta0 = system.theta0();
  if (theta < theta0 - 1e-12 || theta >= 1) {
    std::ostringstream msg;
    msg << "spectrum formula requires theta0 <= theta < 1 with theta0 = max log(alpha_i)/log(beta_i) = " << theta0
        << " (got theta = " << theta << ")";
    throw RangeError(msg.str());
  }
  DimensionEstimate est;
  est.method = EstimateMethod::formula;
  est.theta = theta;
  const auto proj = projection_part(system, options, true);
  const auto fibres = analyse_fibres(system, options.overlap_depth);
  double fibre_value = 0;
  if (fibres.dimension) {
    fibre_value = *fibres.dimension;
  } else {
    fibre_value =
        max_fibre_dimension(system, options.prefix_depth, options.fibre_depth, FibreQuery{FibreKind::spectrum, theta})
            .estimate.value;
  }
  est.value = std::clamp(proj.value + fibre_value, 0.0, 2.0);
  est.lower_bound_only = proj.report.verdict == SeparationVerdict::inconclusive;
  est.diagnostics = {{"projection", proj.value},
                     {"projection_from_similarity_dimension", proj.from_similarity ? 1.0 : 0.0},
                     {"fibre", fibre_value},
                     {"fibre_closed_form", fibres.dimension ? 1.0 : 0.0},
                     {"separation_verdict", verdict_code(proj.report.verdict)},
                     {"theta0", theta0}};
  est.note = "projection " + to_string(proj.report.verdict) + "; fibres " + to_string(fibres.structure) + " (" +
             fibres.detail + ")";
  if (est.lower_bound_only) est.note += "; lower bound only: projection neither WSC- nor AWSC-consistent";
  return est;
}

}  // namespace affdim
