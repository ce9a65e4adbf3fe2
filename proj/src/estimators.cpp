#include "affdim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "affdim/separation.hpp"

namespace affdim {

std::string to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::box_regression:
      return "box-regression";
    case EstimateMethod::assouad_sup:
      return "assouad-sup";
    case EstimateMethod::spectrum:
      return "spectrum";
    case EstimateMethod::quasi_extrapolation:
      return "quasi-extrapolation";
    case EstimateMethod::formula:
      return "formula";
  }
  return "formula";
}

std::optional<double> DimensionEstimate::diagnostic(const std::string& key) const {
  for (const auto& [k, v] : diagnostics)
    if (k == key) return v;
  return std::nullopt;
}

namespace {

bool window_less(const DyadicWindow& a, const DyadicWindow& b) {
  if (a.ix != b.ix) return a.ix < b.ix;
  return a.iy < b.iy;
}

double clamp_dim(double v, unsigned dim) { return std::clamp(v, 0.0, static_cast<double>(dim)); }

int default_gap_max(const CoverSource& source) { return source.dimension() == 2 ? 10 : 12; }

std::size_t window_budget(const WindowOptions& o, const CoverSource& source) {
  if (o.windows) return o.windows;
  return source.dimension() == 2 ? 24 : 64;
}

}  // namespace

void ScalePairMatrix::record(int m, int n, std::size_t count, const DyadicWindow& window) {
  for (auto& e : entries_) {
    if (e.m != m || e.n != n) continue;
    if (count > e.count || (count == e.count && window_less(window, e.window))) {
      e.count = count;
      e.window = window;
      e.exponent = count ? std::log2(static_cast<double>(count)) / (n - m) : 0.0;
    }
    return;
  }
  entries_.push_back({m, n, count, window, count ? std::log2(static_cast<double>(count)) / (n - m) : 0.0});
}

const ScalePairEntry* ScalePairMatrix::find(int m, int n) const {
  for (const auto& e : entries_)
    if (e.m == m && e.n == n) return &e;
  return nullptr;
}

std::size_t ScalePairMatrix::max_count_at_gap(int gap) const {
  std::size_t best = 0;
  for (const auto& e : entries_)
    if (e.n - e.m == gap) best = std::max(best, e.count);
  return best;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0) throw DomainError("least squares needs two distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k) fit.residuals.push_back(y[k] - (fit.intercept + fit.slope * x[k]));
  return fit;
}

DimensionEstimate box_dimension_estimate(const CoverSource& source, int n_lo, int n_hi, std::size_t cap) {
  if (n_lo < 0 || n_hi - n_lo + 1 < 5) throw DomainError("box estimate needs at least five dyadic scales");
  if (n_hi > source.max_level())
    throw DomainError("box estimate scale " + std::to_string(n_hi) + " exceeds the cover resolution " +
                      std::to_string(source.max_level()));
  const auto counts = window_counts(source, DyadicWindow{}, n_hi, cap);
  std::vector<double> xs, ys;
  DimensionEstimate est;
  est.method = EstimateMethod::box_regression;
  est.m_min = n_lo;
  est.n_max = n_hi;
  for (int n = n_lo; n <= n_hi; ++n) {
    xs.push_back(n);
    ys.push_back(std::log2(static_cast<double>(std::max<std::size_t>(counts[static_cast<std::size_t>(n)], 1))));
    est.trend.push_back({xs.back(), ys.back()});
  }
  const auto fit = least_squares(xs, ys);
  est.value = clamp_dim(fit.slope, source.dimension());
  est.residuals = fit.residuals;
  est.diagnostics.push_back({"finest_count", static_cast<double>(counts.back())});
  return est;
}

DimensionEstimate box_dimension_estimate(const IFSSystem& system, int n_lo, int n_hi) {
  return box_dimension_estimate(*attractor_source(system), n_lo, n_hi);
}

DimensionEstimate box_dimension_estimate(const IntervalUnion& set, int n_lo, int n_hi) {
  return box_dimension_estimate(*interval_source(set), n_lo, n_hi);
}

DimensionEstimate projection_box_estimate(const IFSSystem& system, int n_lo, int n_hi) {
  // Overlapping projections have about 2^{n s} distinct pieces at level n, s the
  // similarity dimension of the distinct generators; keep that below 2^18.
  std::vector<Similarity1D> distinct;
  for (const auto& s : system.projected())
    if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) distinct.push_back(s);
  std::vector<Rational> ratios;
  for (const auto& s : distinct) ratios.push_back(s.ratio);
  const double s = similarity_dimension(ratios);
  if (s > 1) {
    const int affordable = std::max(5, static_cast<int>(18 / s));
    if (n_hi > affordable) {
      n_lo = std::max(0, n_lo - (n_hi - affordable));
      n_hi = affordable;
    }
  }
  auto est = box_dimension_estimate(*linear_source(std::move(distinct)), n_lo, n_hi);
  est.diagnostics.push_back({"similarity_dimension", s});
  return est;
}

AssouadResult assouad_estimate(const CoverSource& source, const AssouadOptions& requested, std::size_t cap) {
  AssouadOptions options = requested;
  if (options.gap_max == 0) options.gap_max = default_gap_max(source);
  if (options.gap_min == 0) options.gap_min = std::max(1, options.gap_max / 2);
  if (options.gap_min < 1 || options.gap_max < options.gap_min || options.m_min < 0 || options.m_max < options.m_min)
    throw DomainError("assouad estimate needs 0 <= m_min <= m_max and 1 <= gap_min <= gap_max");
  AssouadResult out;
  DimensionEstimate& est = out.estimate;
  est.method = EstimateMethod::assouad_sup;
  est.m_min = options.m_min;
  const int limit = source.max_level();
  for (int m = options.m_min; m <= options.m_max; ++m) {
    const int gap = std::min(options.gap_max, limit - m);
    if (gap < options.gap_min) break;
    for (const auto& w : select_windows(source, m, window_budget(options.sampling, source), options.sampling.seed + m, cap)) {
      const auto counts = window_counts(source, w, gap, cap);
      for (int g = options.gap_min; g <= gap; ++g) out.matrix.record(m, m + g, counts[static_cast<std::size_t>(g)], w);
    }
    est.n_max = std::max(est.n_max, m + gap);
  }
  std::vector<double> xs, ys;
  double naive = 0;
  int widest = 0;
  for (int g = options.gap_min; g <= options.gap_max; ++g) {
    const std::size_t c = out.matrix.max_count_at_gap(g);
    if (c == 0) continue;
    xs.push_back(g);
    ys.push_back(std::log2(static_cast<double>(c)));
    est.trend.push_back({xs.back(), ys.back()});
    widest = g;
  }
  if (xs.empty()) throw DomainError("assouad estimate found no occupied windows in range");
  for (const auto& e : out.matrix.entries())
    if (e.n - e.m == widest) naive = std::max(naive, e.exponent);
  if (xs.size() >= 2) {
    const auto fit = least_squares(xs, ys);
    est.value = clamp_dim(fit.slope, source.dimension());
    est.residuals = fit.residuals;
  } else {
    est.value = clamp_dim(naive, source.dimension());
  }
  est.diagnostics.push_back({"max_exponent_at_widest_gap", naive});
  est.diagnostics.push_back({"widest_gap", static_cast<double>(widest)});
  est.note = "lower estimate: finitely many scales";
  return out;
}

std::vector<std::pair<int, int>> spectrum_scale_pairs(double theta, const SpectrumOptions& options, int max_level) {
  if (!(theta > 0 && theta < 1)) throw DomainError("spectrum parameter theta must lie in (0,1)");
  std::vector<std::pair<int, int>> pairs;
  const double c = 1.0 / theta - 1.0;
  auto n_of = [&](int m) { return static_cast<int>(std::ceil(m / theta - 1e-9)); };
  const int gap_max = options.gap_max ? options.gap_max : 12;
  const int gap_min = options.gap_min ? options.gap_min : std::max(1, gap_max / 2);
  if (gap_min < 1 || gap_max < gap_min) throw DomainError("spectrum estimate needs 1 <= gap_min <= gap_max");
  for (int g = gap_min; g <= gap_max; ++g) {
    int m = std::max(1, static_cast<int>(std::floor((g - 1) / c)) - 1);
    while (m <= options.m_limit && n_of(m) - m < g) ++m;
    for (int k = 0; k < options.m_per_gap && m <= options.m_limit && n_of(m) - m == g; ++k, ++m) {
      if (n_of(m) > max_level) break;
      pairs.push_back({m, n_of(m)});
    }
  }
  return pairs;
}

DimensionEstimate spectrum_estimate(const CoverSource& source, double theta, const SpectrumOptions& requested,
                                    std::size_t cap, ScalePairMatrix* matrix) {
  SpectrumOptions options = requested;
  if (options.gap_max == 0) options.gap_max = default_gap_max(source);
  DimensionEstimate est;
  est.method = EstimateMethod::spectrum;
  est.theta = theta;
  auto pairs = spectrum_scale_pairs(theta, options, source.max_level());
  if (pairs.empty()) {
    // Not enough resolution for the requested gaps: fall back to the deepest feasible pair.
    const int limit = std::min(source.max_level(), options.m_limit + options.gap_max);
    for (int m = limit; m >= 1; --m) {
      const int n = static_cast<int>(std::ceil(m / theta - 1e-9));
      if (n <= limit && n > m) {
        pairs.push_back({m, n});
        break;
      }
    }
  }
  if (pairs.empty()) throw DomainError("no scale pair (m, ceil(m/theta)) fits the cover resolution");
  std::map<int, std::size_t> best_by_gap;
  std::pair<int, int> deepest = pairs.front();
  std::size_t deepest_count = 0;
  est.m_min = pairs.front().first;
  for (const auto& [m, n] : pairs) {
    std::size_t best = 0;
    for (const auto& w : select_windows(source, m, window_budget(options.sampling, source), options.sampling.seed + m, cap)) {
      const auto counts = window_counts(source, w, n - m, cap);
      best = std::max(best, counts.back());
      if (matrix) matrix->record(m, n, counts.back(), w);
    }
    auto& slot = best_by_gap[n - m];
    slot = std::max(slot, best);
    if (m >= deepest.first) {
      deepest = {m, n};
      deepest_count = best;
    }
    est.m_min = std::min(est.m_min, m);
    est.n_max = std::max(est.n_max, n);
  }
  std::vector<double> xs, ys;
  for (const auto& [g, c] : best_by_gap) {
    if (c == 0) continue;
    xs.push_back(g);
    ys.push_back(std::log2(static_cast<double>(c)));
    est.trend.push_back({xs.back(), ys.back()});
  }
  const double ratio =
      deepest_count ? std::log2(static_cast<double>(deepest_count)) / (deepest.second - deepest.first) : 0.0;
  if (xs.size() >= 3) {
    const auto fit = least_squares(xs, ys);
    est.value = clamp_dim(fit.slope, source.dimension());
    est.residuals = fit.residuals;
  } else {
    est.value = clamp_dim(ratio, source.dimension());
    est.note = "fewer than three gaps: exponent at the deepest scale pair";
  }
  est.diagnostics.push_back({"exponent_at_deepest_pair", ratio});
  est.diagnostics.push_back({"deepest_m", static_cast<double>(deepest.first)});
  return est;
}

std::vector<double> quasi_theta_grid(double theta0) {
  std::vector<double> grid;
  for (double t : {0.80, 0.85, 0.90, 0.95})
    if (t > theta0) grid.push_back(t);
  if (grid.size() < 3) {
    grid.clear();
    for (double f : {0.2, 0.4, 0.6, 0.8}) grid.push_back(theta0 + (1 - theta0) * f);
  }
  return grid;
}

DimensionEstimate quasi_assouad_estimate(const CoverSource& source, std::span<const double> thetas,
                                         const SpectrumOptions& options, std::size_t cap) {
  if (thetas.size() < 3) throw DomainError("quasi-Assouad extrapolation needs at least three theta values");
  for (std::size_t k = 1; k < thetas.size(); ++k)
    if (!(thetas[k] > thetas[k - 1])) throw DomainError("theta values must increase");
  DimensionEstimate est;
  est.method = EstimateMethod::quasi_extrapolation;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const auto s = spectrum_estimate(source, thetas[k], options, cap);
    est.trend.push_back({thetas[k], s.value});
    est.diagnostics.push_back({"spectrum@" + std::to_string(thetas[k]), s.value});
    if (k == 0 || s.m_min < est.m_min) est.m_min = s.m_min;
    est.n_max = std::max(est.n_max, s.n_max);
    if (k + 3 >= thetas.size()) {
      xs.push_back(thetas[k]);
      ys.push_back(s.value);
    }
  }
  const auto fit = least_squares(xs, ys);
  est.value = clamp_dim(fit.intercept + fit.slope, source.dimension());
  est.residuals = fit.residuals;
  est.theta = 1.0;
  return est;
}

}  // namespace affdim
