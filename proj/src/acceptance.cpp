#include "affdim/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "affdim/covering.hpp"
#include "affdim/estimators.hpp"
#include "affdim/gallery.hpp"
#include "affdim/separation.hpp"
#include "affdim/symbolic_fibres.hpp"

namespace affdim {

bool AcceptanceReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

nlohmann::json to_json(const AcceptanceReport& report) {
  nlohmann::json out;
  out["all_passed"] = report.all_passed();
  out["criteria"] = nlohmann::json::array();
  for (const auto& r : report.results) {
    out["criteria"].push_back({{"id", r.id},
                               {"name", r.name},
                               {"passed", r.passed},
                               {"measured", r.measured},
                               {"target", r.target},
                               {"tolerance", r.tolerance},
                               {"seconds", r.seconds},
                               {"time_limit", r.time_limit},
                               {"detail", r.detail}});
  }
  return out;
}

std::string format_report(const AcceptanceReport& report) {
  std::ostringstream out;
  for (const auto& r : report.results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail;
    out.precision(3);
    out << " (" << std::fixed << r.seconds << " s";
    if (r.time_limit > 0) out << ", limit " << r.time_limit << " s";
    out << ")\n";
    out.unsetf(std::ios::fixed);
    out.precision(6);
  }
  return out.str();
}

IFSSystem random_system(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const Rational alphas[] = {Rational(1, 2), Rational(1, 3)};
  const Rational betas[] = {Rational(1, 4), Rational(1, 5), Rational(1, 8)};
  const std::size_t count = 2 + pick(3);
  std::vector<AffineMap2D> maps;
  for (std::size_t i = 0; i < count; ++i) {
    const Rational alpha = alphas[pick(2)];
    const Rational beta = betas[pick(3)];
    // u on the grid alpha/2 * k with u + alpha <= 1, v on the grid k/8 with v + beta <= 1.
    const Rational ustep = alpha / 2;
    const auto usteps = static_cast<std::size_t>(to_u64(floor_int((1 - alpha) / ustep)));
    const auto vsteps = static_cast<std::size_t>(to_u64(floor_int((1 - beta) * 8)));
    const Rational u = ustep * Rational(static_cast<long>(pick(usteps + 1)));
    const Rational v = Rational(static_cast<long>(pick(vsteps + 1)), 8);
    maps.push_back(AffineMap2D::make(alpha, beta, u, v));
  }
  return IFSSystem(std::move(maps));
}

namespace {

void words_below(std::span<const Similarity1D> maps, const Rational& r, const Similarity1D& acc,
                 std::vector<Similarity1D>& out) {
  for (const auto& s : maps) {
    Similarity1D next = acc.then_inner(s);
    if (next.ratio <= r) {
      out.push_back(next);
    } else {
      words_below(maps, r, next, out);
    }
  }
}

void words_of_length(std::span<const Similarity1D> maps, std::size_t n, const Similarity1D& acc,
                     std::vector<Similarity1D>& out) {
  if (n == 0) {
    out.push_back(acc);
    return;
  }
  for (const auto& s : maps) words_of_length(maps, n - 1, acc.then_inner(s), out);
}

}  // namespace

std::size_t oracle_t_r(std::span<const Similarity1D> projected, const Rational& r) {
  std::vector<Similarity1D> all;
  words_below(projected, r, Similarity1D::identity(), all);
  std::vector<Similarity1D> maps;
  for (const auto& s : all)
    if (std::find(maps.begin(), maps.end(), s) == maps.end()) maps.push_back(s);
  std::vector<Interval> parts;
  for (const auto& s : maps) parts.push_back(image(s, Interval{0, 1}));
  const IntervalUnion cover(parts);
  std::vector<Interval> grown;
  for (const auto& s : maps) grown.push_back({s(cover.min()) - r, s(cover.max()) + r});
  std::vector<Rational> centres;
  for (const auto& g : grown) {
    centres.push_back(g.lo);
    centres.push_back(g.hi);
  }
  for (const auto& iv : cover.intervals()) {
    centres.push_back(iv.lo);
    centres.push_back(iv.hi);
  }
  std::size_t best = 0;
  for (const auto& x : centres) {
    if (!cover.contains(x)) continue;
    std::size_t hits = 0;
    for (const auto& g : grown) hits += g.contains(x) ? 1 : 0;
    best = std::max(best, hits);
  }
  return best;
}

std::optional<Rational> oracle_delta(std::span<const Similarity1D> projected, std::size_t n) {
  std::vector<Similarity1D> maps;
  words_of_length(projected, n, Similarity1D::identity(), maps);
  std::optional<Rational> best;
  for (std::size_t a = 0; a < maps.size(); ++a) {
    for (std::size_t b = a + 1; b < maps.size(); ++b) {
      if (maps[a].ratio != maps[b].ratio) continue;
      Rational d = abs(maps[a].translate - maps[b].translate);
      if (!best || d < *best) best = d;
    }
  }
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << x;
  return out.str();
}

CriterionResult criterion(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

struct Context {
  const AcceptanceOptions& options;
  bool full() const { return options.budget == Budget::full; }
  double tol(double t) const { return t * options.tolerance_scale; }
  bool close(double measured, double target, double t) const { return std::abs(measured - target) <= tol(t); }
};

CriterionResult similarity_dimension_criterion(const Context& ctx) {
  auto res = criterion(1, "similarity dimension");
  const double one = gallery_get("six-map-quarter").known("dimA(pi K)");
  const double cantor = gallery_get("cantor-third").known("dimB");
  const std::vector<Rational> halves{Rational(1, 2), Rational(1, 2)};
  const std::vector<Rational> thirds{Rational(1, 3), Rational(1, 3)};
  const auto start = Clock::now();
  const double a = similarity_dimension(halves);
  const double b = similarity_dimension(thirds);
  res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  res.time_limit = 1e-3;
  res.measured = b;
  res.target = cantor;
  res.tolerance = ctx.tol(1e-10);
  res.passed = ctx.close(a, one, 1e-12) && ctx.close(b, cantor, 1e-10);
  res.detail = "(1/2,1/2) -> " + fmt(a, 15) + ", (1/3,1/3) -> " + fmt(b, 15) + " vs " + fmt(cantor, 15);
  return res;
}

CriterionResult overlap_criterion(const Context&) {
  auto res = criterion(2, "exact overlap in Phi_lambda");
  res.time_limit = 1;
  const Rational lambdas[] = {Rational(1, 4), Rational(1, 3), Rational(1, 5), Rational(1, 10), Rational(3, 8)};
  const WordPair expected{{0, 2}, {1, 0}};
  std::size_t found = 0;
  std::string failures;
  for (const auto& lambda : lambdas) {
    const auto maps = phi_lambda(lambda);
    const auto none = exact_overlap_exists(maps, 1);
    const auto w = exact_overlap_exists(maps, 2);
    const bool ok = !none && w && w->n == 2 && w->words.first == expected.first && w->words.second == expected.second;
    if (ok) {
      ++found;
    } else {
      failures += " lambda=" + to_string(lambda);
    }
  }
  res.measured = static_cast<double>(found);
  res.target = 5;
  res.passed = found == 5;
  res.detail = "witness (1,3)=(2,1) at n=2 for " + std::to_string(found) + "/5 lambdas" + failures;
  return res;
}

CriterionResult box_criterion(const Context& ctx) {
  auto res = criterion(3, "box dimension of the Phi_{1/4} attractor");
  res.time_limit = 30;
  const auto g = gallery_get("phi-quarter");
  res.target = g.known("dimB");
  res.tolerance = ctx.tol(0.05);
  const auto est = box_dimension_estimate(*linear_source(g.system.projected()), 8, 16);
  res.measured = est.value;
  res.passed = ctx.close(est.value, res.target, 0.05);
  res.detail = "slope over 2^-8..2^-16 = " + fmt(est.value) + " vs " + fmt(res.target);
  return res;
}

CriterionResult theorem_a_criterion(const Context& ctx) {
  auto res = criterion(4, "Assouad formula on the six-map system");
  res.time_limit = 120;
  const auto g = gallery_get("six-map-quarter");
  res.target = g.known("dimA");
  res.tolerance = ctx.tol(0.02);
  const auto formula = formula_dimA(g.system);
  AssouadOptions opt;
  opt.m_max = 8;
  opt.gap_max = 8;
  if (ctx.full()) opt.sampling.windows = 48;
  const auto direct = assouad_estimate(*attractor_source(g.system), opt);
  res.measured = formula.value;
  const bool formula_ok = ctx.close(formula.value, res.target, 0.02);
  const bool direct_ok = ctx.close(direct.estimate.value, formula.value, 0.15);
  res.passed = formula_ok && direct_ok;
  res.detail = "formula " + fmt(formula.value) + " vs " + fmt(res.target) + (formula_ok ? "" : " (off)") +
               "; planar estimate " + fmt(direct.estimate.value) + (direct_ok ? " within " : " outside ") +
               fmt(ctx.tol(0.15), 2) + " of the formula";
  return res;
}

CriterionResult product_criterion(const Context& ctx) {
  auto res = criterion(5, "product law for Cantor x Cantor");
  res.time_limit = 60;
  const auto g = gallery_get("cantor-third");
  res.target = g.known("dimA(C x C)");
  res.tolerance = ctx.tol(0.15);
  const auto c = linear_source(g.system.projected());
  AssouadOptions opt;
  opt.gap_max = 12;
  if (ctx.full()) opt.sampling.windows = 48;
  const auto est = assouad_estimate(*product_source(c, c), opt);
  res.measured = est.estimate.value;
  res.passed = ctx.close(res.measured, res.target, 0.15);
  res.detail = "Assouad estimate " + fmt(res.measured) + " vs " + fmt(res.target);
  return res;
}

CriterionResult quasi_criterion(const Context& ctx) {
  auto res = criterion(6, "quasi-Assouad vs Assouad for the N = 9 surrogate");
  const auto g = gallery_get("ss-esc-N9");
  const double theta0 = g.system.theta0();
  res.target = g.known("dimqA");
  res.tolerance = ctx.tol(0.15);

  SpectrumOptions opt;
  opt.gap_min = 2;
  // Binary scales beat against the base-9 construction with period log2 9;
  // a wide gap range averages several periods out of the slope.
  opt.gap_max = 14;
  opt.sampling.windows = ctx.full() ? 64 : 32;
  const auto grid = quasi_theta_grid(theta0);
  const auto quasi = quasi_assouad_estimate(*attractor_source(g.system), grid, opt);
  res.measured = quasi.value;
  const bool quasi_ok = ctx.close(quasi.value, res.target, 0.15);

  const auto projected = g.system.projected();
  std::vector<double> deltas;
  bool positive = true;
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto d = esc_delta(projected, n);
    positive = positive && d.delta && *d.delta > 0;
    deltas.push_back(d.delta ? to_double(*d.delta) : 0.0);
  }
  bool monotone = true;
  for (std::size_t k = 1; k < deltas.size(); ++k) monotone = monotone && deltas[k] <= deltas[k - 1];
  const bool decaying = positive && monotone && deltas.back() < deltas.front();

  const double formula_target = g.known("dimH(pi K)");
  std::string formula_detail;
  bool formula_ok = false;
  try {
    const auto f = formula_dimAs(g.system, 0.9);
    formula_ok = ctx.close(f.value, formula_target, 0.02);
    formula_detail = "formula at theta=0.9 " + fmt(f.value);
  } catch (const RangeError&) {
    const auto f = formula_dimAs(g.system, theta0);
    formula_detail = "formula undefined at theta=0.9 < theta0=" + fmt(theta0) + " (value at theta0 " +
                     fmt(f.value) + " vs " + fmt(formula_target) + ")";
  }
  res.passed = quasi_ok && decaying && formula_ok;
  std::ostringstream d;
  d << "quasi " << fmt(quasi.value) << " vs " << fmt(res.target) << (quasi_ok ? "" : " (off)") << "; Delta_1..8";
  d << std::scientific << std::setprecision(2);
  for (double x : deltas) d << ' ' << x;
  d << std::defaultfloat;
  d << (decaying ? " positive and decaying" : " not positive and decaying") << "; " << formula_detail
    << "; dimA >= 1 rests on arbitrarily deep near-overlaps and is not reproducible at finite depth";
  res.detail = d.str();
  return res;
}

CriterionResult tag_criterion(const Context&) {
  auto res = criterion(7, "lower-bound tag under WSC failure");
  std::size_t checked = 0, consistent = 0, tagged = 0;
  std::string detail;
  for (const char* name : {"pu-surrogate", "six-map-quarter"}) {
    const auto g = gallery_get(name);
    const auto projected = g.system.projected();
    const auto exponents = default_r_exponents(g.system);
    const auto report = wsc_diagnostic(projected, exponents);
    const auto formula = formula_dimA(g.system);
    const bool expect_tag = report.verdict != SeparationVerdict::wsc_consistent;
    ++checked;
    consistent += formula.lower_bound_only == expect_tag ? 1 : 0;
    tagged += formula.lower_bound_only ? 1 : 0;
    detail += std::string(detail.empty() ? "" : "; ") + name + " " + to_string(report.verdict) + ", " +
              (formula.lower_bound_only ? "tagged" : "untagged") + " at " + fmt(formula.value);
  }
  res.measured = static_cast<double>(consistent);
  res.target = static_cast<double>(checked);
  res.passed = consistent == checked && tagged >= 1 && tagged < checked;
  res.detail = detail;
  return res;
}

CriterionResult fibre_criterion(const Context& ctx) {
  auto res = criterion(8, "symbolic fibre invariants");
  res.time_limit = 60;
  std::vector<std::pair<std::string, IFSSystem>> systems{{"six-map-quarter", gallery_get("six-map-quarter").system}};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) systems.emplace_back("random#" + std::to_string(seed), random_system(seed));
  const std::size_t per_depth = ctx.full() ? 32 : 8;
  std::size_t checks = 0, failures = 0;
  std::string first_failure;
  auto fail = [&](const std::string& what) {
    ++failures;
    if (first_failure.empty()) first_failure = what;
  };
  std::mt19937_64 rng(20241019);
  for (const auto& [name, system] : systems) {
    const auto letters = static_cast<std::uint32_t>(system.size());
    for (std::size_t k = 1; k <= 6; ++k) {
      std::vector<Word> words;
      const auto all = enumerate_prefixes(system, k);
      if (all.size() <= per_depth) {
        for (const auto& p : all) words.push_back(p.indices);
      } else {
        for (std::size_t j = 0; j < per_depth; ++j) {
          Word w;
          for (std::size_t i = 0; i < k; ++i) w.push_back(static_cast<std::uint32_t>(rng() % letters));
          words.push_back(w);
        }
      }
      for (const auto& w : words) {
        const auto prefix = make_prefix(system, w);
        for (std::size_t split = 1; split < k; ++split) {
          ++checks;
          if (!check_shift_embedding(system, prefix, split)) fail(name + " shift " + format_word(w));
        }
        Word longer = w;
        for (int extra = 0; extra < 2; ++extra) longer.push_back(static_cast<std::uint32_t>(rng() % letters));
        const auto e_k = fibre_approximant(system, prefix, IntervalUnion::unit());
        const auto e_k2 = fibre_approximant(system, make_prefix(system, longer), IntervalUnion::unit());
        ++checks;
        if (!(pseudo_distance(e_k, e_k2) <= fibre_limit_bound(system, k)))
          fail(name + " convergence " + format_word(longer));
      }
    }
    for (std::size_t n = 1; n <= 6; ++n) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < n; ++i) total *= system.size();
      if (total > 50000) break;
      std::size_t sum = 0;
      for (const auto& [key, members] : fibre_classes(system, n)) sum += members.size();
      ++checks;
      if (sum != total) fail(name + " class count n=" + std::to_string(n));
    }
  }
  res.measured = static_cast<double>(failures);
  res.target = 0;
  res.passed = failures == 0;
  res.detail = std::to_string(checks) + " exact checks on " + std::to_string(systems.size()) + " systems, " +
               std::to_string(failures) + " failures" + (first_failure.empty() ? "" : " (first: " + first_failure + ")");
  return res;
}

CriterionResult ordering_criterion(const Context& ctx) {
  auto res = criterion(9, "estimator ordering and containment");
  // box <= spectrum(0.9) + 0.05 <= assouad + 0.1, and every planar estimate
  // <= projection box + 1 + 0.05.
  const double spec_pad = ctx.tol(0.05), assouad_pad = ctx.tol(0.1), planar_pad = ctx.tol(0.05);
  std::size_t violations = 0, systems = 0;
  std::string detail;
  for (const auto& g : gallery_list()) {
    ++systems;
    const auto source = attractor_source(g.system);
    const double box = box_dimension_estimate(*source, 4, 10).value;
    const double spec = spectrum_estimate(*source, 0.9).value;
    const double assouad = assouad_estimate(*source).estimate.value;
    const double projection = projection_box_estimate(g.system).value;
    const double planar = std::max({box, spec, assouad});
    const bool ok = box <= spec + spec_pad && spec + spec_pad <= assouad + assouad_pad &&
                    planar <= projection + 1 + planar_pad;
    if (!ok) {
      ++violations;
      detail += " " + g.name + " (B " + fmt(box, 3) + ", S " + fmt(spec, 3) + ", A " + fmt(assouad, 3) + ", piB " +
                fmt(projection, 3) + ")";
    }
  }
  res.measured = static_cast<double>(violations);
  res.passed = violations == 0;
  res.detail = std::to_string(systems - violations) + "/" + std::to_string(systems) + " gallery systems ordered" +
               (detail.empty() ? "" : ";" + detail);
  return res;
}

CriterionResult oracle_criterion(const Context&) {
  auto res = criterion(10, "t_r and Delta_n against brute-force oracles");
  constexpr std::size_t word_limit = 10000;
  std::vector<std::pair<std::string, IFSSystem>> systems;
  for (const auto& g : gallery_list()) systems.emplace_back(g.name, g.system);
  for (std::uint64_t seed = 101; seed <= 105; ++seed) systems.emplace_back("random#" + std::to_string(seed), random_system(seed));
  std::size_t checks = 0, mismatches = 0;
  std::string first;
  for (const auto& [name, system] : systems) {
    const auto projected = system.projected();
    const auto ratios = system.alphas();
    const Rational base = system.alpha_max();
    for (unsigned long e = 1;; ++e) {
      const Rational r = pow(base, e);
      std::size_t words = 0;
      try {
        words = stopping_words(ratios, r, word_limit).size();
      } catch (const ResourceError&) {
        break;
      }
      if (words > word_limit / 5) break;  // the oracle is quadratic
      ++checks;
      const auto fast = t_r_sample(projected, r).upper;
      const auto slow = oracle_t_r(projected, r);
      if (fast != slow) {
        ++mismatches;
        if (first.empty()) first = name + " t_r at r=" + to_string(r);
      }
    }
    std::size_t total = 1;
    for (std::size_t n = 1; total * projected.size() <= 2000; ++n) {
      total *= projected.size();
      ++checks;
      const auto fast = esc_delta(projected, n).delta;
      const auto slow = oracle_delta(projected, n);
      if (fast != slow) {
        ++mismatches;
        if (first.empty()) first = name + " Delta_" + std::to_string(n);
      }
    }
  }
  res.measured = static_cast<double>(mismatches);
  res.passed = mismatches == 0 && checks > 0;
  res.detail = std::to_string(checks) + " comparisons on " + std::to_string(systems.size()) + " systems, " +
               std::to_string(mismatches) + " mismatches" + (first.empty() ? "" : " (first: " + first + ")");
  return res;
}

}  // namespace

AcceptanceReport run_acceptance(const AcceptanceOptions& options) {
  const Context ctx{options};
  const std::vector<std::function<CriterionResult(const Context&)>> criteria{
      similarity_dimension_criterion, overlap_criterion, box_criterion,   theorem_a_criterion, product_criterion,
      quasi_criterion,                tag_criterion,     fibre_criterion, ordering_criterion,  oracle_criterion};
  AcceptanceReport report;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    const auto start = Clock::now();
    CriterionResult r;
    try {
      r = criteria[i](ctx);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (r.seconds == 0) r.seconds = elapsed;
    if (r.time_limit > 0 && r.seconds > r.time_limit) {
      r.passed = false;
      r.detail += "; over the time limit";
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace affdim
