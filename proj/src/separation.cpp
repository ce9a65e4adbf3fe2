#include "affdim/separation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace affdim {

std::string to_string(SeparationVerdict v) {
  switch (v) {
    case SeparationVerdict::wsc_consistent:
      return "WSC-consistent";
    case SeparationVerdict::awsc_consistent:
      return "AWSC-consistent";
    case SeparationVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

void check_radius(const Rational& r) {
  if (!(r > 0 && r < 1)) throw DomainError("t_r needs r in (0,1), got " + to_string(r));
}

bool pair_less(const WordPair& a, const WordPair& b) {
  if (a.first != b.first) return a.first < b.first;
  return a.second < b.second;
}

// Largest n <= wanted with |I|^n <= cap.
std::size_t feasible_depth(std::size_t alphabet, std::size_t wanted, std::size_t cap) {
  std::size_t n = 0;
  std::size_t total = 1;
  while (n < wanted && alphabet > 0 && total <= cap / alphabet) {
    total *= alphabet;
    ++n;
  }
  return n;
}

}  // namespace

std::size_t t_r_count(std::span<const Similarity1D> projected, const Rational& r, const IntervalUnion& pi_K_cover,
                      std::size_t cap) {
  check_radius(r);
  if (pi_K_cover.empty()) throw DomainError("t_r needs a nonempty projection cover");
  const auto maps = stopping_maps(projected, r, cap);
  const Rational& hull_lo = pi_K_cover.min();
  const Rational& hull_hi = pi_K_cover.max();
  std::vector<Rational> lefts, rights, candidates;
  lefts.reserve(maps.size());
  rights.reserve(maps.size());
  for (const auto& s : maps) {
    lefts.push_back(s(hull_lo) - r);
    rights.push_back(s(hull_hi) + r);
  }
  // The count is piecewise constant with breakpoints at the shifted image
  // endpoints; the cover's own endpoints bound the admissible centres.
  for (const auto& x : lefts)
    if (pi_K_cover.contains(x)) candidates.push_back(x);
  for (const auto& x : rights)
    if (pi_K_cover.contains(x)) candidates.push_back(x);
  for (const auto& iv : pi_K_cover.intervals()) {
    candidates.push_back(iv.lo);
    candidates.push_back(iv.hi);
  }
  std::sort(lefts.begin(), lefts.end());
  std::sort(rights.begin(), rights.end());
  std::size_t best = 0;
  for (const auto& x : candidates) {
    auto started = static_cast<std::size_t>(std::upper_bound(lefts.begin(), lefts.end(), x) - lefts.begin());
    auto ended = static_cast<std::size_t>(std::lower_bound(rights.begin(), rights.end(), x) - rights.begin());
    best = std::max(best, started - ended);
  }
  return best;
}

TrSample t_r_sample(std::span<const Similarity1D> projected, const Rational& r, std::size_t cap) {
  check_radius(r);
  const auto maps = stopping_maps(projected, r, cap);
  std::vector<Interval> parts;
  parts.reserve(maps.size());
  for (const auto& s : maps) parts.push_back(image(s, Interval{0, 1}));
  const IntervalUnion cover(std::move(parts));

  TrSample sample;
  sample.r = r;
  sample.distinct_maps = maps.size();
  sample.upper = t_r_count(projected, r, cover, cap);

  // Anchor points S_sigma(p) with p the fixed point of the first generator lie in pi(K).
  const Similarity1D& first = projected.front();
  const Rational fixed = first.translate / (1 - first.ratio);
  std::vector<Rational> anchors;
  anchors.reserve(maps.size());
  for (const auto& s : maps) anchors.push_back(s(fixed));
  std::sort(anchors.begin(), anchors.end());
  std::size_t lo = 0, hi = 0;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    while (anchors[lo] < anchors[k] - r) ++lo;
    if (hi < k) hi = k;
    while (hi + 1 < anchors.size() && anchors[hi + 1] <= anchors[k] + r) ++hi;
    sample.lower = std::max(sample.lower, hi - lo + 1);
  }
  return sample;
}

SeparationReport wsc_diagnostic(std::span<const Similarity1D> projected, std::span<const int> r_exponents,
                                std::size_t overlap_depth, std::size_t cap) {
  validate_similarities(projected);
  for (std::size_t k = 0; k < r_exponents.size(); ++k) {
    if (r_exponents[k] <= 0) throw DomainError("r exponents must be positive");
    if (k && r_exponents[k] <= r_exponents[k - 1]) throw DomainError("r exponents must be increasing");
  }
  Rational base = projected.front().ratio;
  for (const auto& s : projected) base = max(base, s.ratio);

  SeparationReport report;
  for (int e : r_exponents) report.samples.push_back(t_r_sample(projected, pow(base, static_cast<unsigned long>(e)), cap));

  const std::size_t count = report.samples.size();
  if (count >= 2) {
    std::vector<std::size_t> running(count);
    for (std::size_t k = 0; k < count; ++k)
      running[k] = std::max(report.samples[k].upper, k ? running[k - 1] : std::size_t{0});
    const std::size_t half = count / 2;
    if (running[half] == running[count - 1]) {
      report.verdict = SeparationVerdict::wsc_consistent;
    } else {
      std::vector<double> q;
      for (std::size_t k = half; k < count; ++k) {
        const auto& s = report.samples[k];
        q.push_back(std::log(static_cast<double>(s.upper)) / -std::log(to_double(s.r)));
      }
      bool decreasing = q.back() < q.front();
      for (std::size_t k = 1; k < q.size(); ++k) decreasing = decreasing && q[k] <= q[k - 1];
      report.verdict = decreasing ? SeparationVerdict::awsc_consistent : SeparationVerdict::inconclusive;
    }
  }

  const std::size_t depth = feasible_depth(projected.size(), overlap_depth, std::min<std::size_t>(cap, 2'000'000));
  if (depth >= 1) {
    if (auto w = exact_overlap_exists(projected, depth, cap)) {
      report.witness = w->words;
      report.witness_level = w->n;
      report.witness_is_exact_overlap = true;
    } else if (auto d = esc_delta(projected, depth, cap); d.witness) {
      report.witness = d.witness;
      report.witness_level = depth;
    }
  }
  return report;
}

EscDelta esc_delta(std::span<const Similarity1D> projected, std::size_t n, std::size_t cap) {
  if (n == 0) throw DomainError("Delta_n needs n >= 1");
  if (feasible_depth(projected.size(), n, cap) < n) throw ResourceError("Delta_n enumeration of |I|^n words", cap);
  struct Entry {
    Word word;
    Similarity1D map;
  };
  std::vector<Entry> level{{Word{}, Similarity1D::identity()}};
  for (std::size_t depth = 0; depth < n; ++depth) {
    std::vector<Entry> next;
    next.reserve(level.size() * projected.size());
    for (const auto& e : level) {
      for (std::uint32_t i = 0; i < projected.size(); ++i) {
        Word w = e.word;
        w.push_back(i);
        next.push_back({std::move(w), e.map.then_inner(projected[i])});
      }
    }
    level = std::move(next);
  }
  // Bucket by ratio; inside a bucket the closest pair of points is adjacent after sorting.
  std::sort(level.begin(), level.end(), [](const Entry& a, const Entry& b) {
    if (a.map.ratio != b.map.ratio) return a.map.ratio < b.map.ratio;
    if (a.map.translate != b.map.translate) return a.map.translate < b.map.translate;
    return a.word < b.word;
  });
  EscDelta out;
  for (std::size_t k = 1; k < level.size(); ++k) {
    const auto& a = level[k - 1];
    const auto& b = level[k];
    if (a.map.ratio != b.map.ratio) continue;
    Rational d = b.map.translate - a.map.translate;
    WordPair pair = a.word < b.word ? WordPair{a.word, b.word} : WordPair{b.word, a.word};
    if (!out.delta || d < *out.delta || (d == *out.delta && pair_less(pair, *out.witness))) {
      out.delta = d;
      out.witness = std::move(pair);
    }
  }
  return out;
}

std::optional<OverlapWitness> exact_overlap_exists(std::span<const Similarity1D> projected, std::size_t max_n,
                                                   std::size_t cap) {
  if (max_n == 0) throw DomainError("overlap search needs max_n >= 1");
  struct Entry {
    Word word;
    Similarity1D map;
  };
  std::vector<Entry> level{{Word{}, Similarity1D::identity()}};
  for (std::size_t n = 1; n <= max_n; ++n) {
    check_cap(level.size() * projected.size(), cap, "overlap search");
    std::vector<Entry> next;
    next.reserve(level.size() * projected.size());
    std::unordered_map<Similarity1D, std::size_t, Similarity1DHash> seen;
    for (const auto& e : level) {
      for (std::uint32_t i = 0; i < projected.size(); ++i) {
        Word w = e.word;
        w.push_back(i);
        Similarity1D m = e.map.then_inner(projected[i]);
        // Words arrive in lexicographic order, so the first collision pairs
        // the smallest colliding word with its earliest partner.
        auto [it, inserted] = seen.emplace(m, next.size());
        if (!inserted) return OverlapWitness{n, {next[it->second].word, std::move(w)}};
        next.push_back({std::move(w), std::move(m)});
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

double similarity_dimension(std::span<const Rational> ratios) {
  if (ratios.empty()) throw DomainError("similarity dimension needs at least one ratio");
  std::vector<double> r;
  for (const auto& q : ratios) {
    if (!(q > 0 && q < 1)) throw DomainError("similarity ratios must lie in (0,1)");
    r.push_back(to_double(q));
  }
  auto excess = [&](double s) {
    double total = 0;
    for (double x : r) total += std::pow(x, s);
    return total - 1.0;
  };
  if (excess(0) <= 0) return 0.0;
  double lo = 0, hi = 1;
  while (excess(hi) > 0) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace affdim
