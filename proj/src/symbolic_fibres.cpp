#include "affdim/symbolic_fibres.hpp"

#include <algorithm>
#include <unordered_set>

namespace affdim {

namespace {

struct Node {
  Similarity1D projected;
  Similarity1D fibre;
  friend bool operator==(const Node& a, const Node& b) {
    return a.projected == b.projected && a.fibre == b.fibre;
  }
};

struct NodeHash {
  std::size_t operator()(const Node& n) const noexcept {
    std::size_t seed = Similarity1DHash{}(n.projected);
    hash_combine(seed, Similarity1DHash{}(n.fibre));
    return seed;
  }
};

// S([0,1]) contains f([0,1]); necessary for S to be a left factor of f because
// every generator maps [0,1] into itself.
bool covers(const Similarity1D& s, const Similarity1D& f) {
  return s.translate <= f.translate && f.translate + f.ratio <= s.translate + s.ratio;
}

std::size_t power_count(std::size_t base, std::size_t exponent, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (base != 0 && total > cap / base) return cap + 1;
    total *= base;
  }
  return total;
}

}  // namespace

OmegaPrefix make_prefix(const IFSSystem& system, const Word& indices) {
  OmegaPrefix p;
  p.indices = indices;
  Similarity1D acc;
  for (auto i : indices) {
    if (i >= system.size()) throw InvalidWordError("prefix index " + std::to_string(i + 1) + " out of range");
    acc = acc.then_inner(project(system.map(i)));
    p.keys.push_back(acc);
  }
  return p;
}

OmegaPrefix extend_periodic(const IFSSystem& system, const OmegaPrefix& prefix, std::size_t depth) {
  if (prefix.empty()) throw DomainError("cannot extend an empty prefix");
  Word w;
  w.reserve(depth);
  for (std::size_t k = 0; k < depth; ++k) w.push_back(prefix.indices[k % prefix.size()]);
  return make_prefix(system, w);
}

std::map<SemigroupKey, std::vector<Word>> fibre_classes(const IFSSystem& system, std::size_t n, std::size_t cap) {
  if (n == 0) throw DomainError("fibre classes need n >= 1");
  check_cap(power_count(system.size(), n, cap), cap, "fibre class enumeration");
  const auto proj = system.projected();
  std::map<SemigroupKey, std::vector<Word>> classes;
  Word w(n, 0);
  while (true) {
    classes[compose_similarities(proj, w)].push_back(w);
    std::size_t pos = n;
    while (pos > 0 && ++w[pos - 1] == system.size()) w[--pos] = 0;
    if (pos == 0) break;
  }
  return classes;
}

Interval anchor_point(const OmegaPrefix& prefix) {
  if (prefix.empty()) throw DomainError("anchor point of an empty prefix");
  return image(prefix.last(), Interval{0, 1});
}

std::vector<Word> fibre_class_words(const IFSSystem& system, const SemigroupKey& target, std::size_t cap) {
  if (target.is_identity()) return {Word{}};
  const auto proj = system.projected();
  std::vector<Word> out;
  std::vector<std::pair<Word, Similarity1D>> frontier{{Word{}, Similarity1D::identity()}};
  std::size_t visited = 0;
  while (!frontier.empty()) {
    std::vector<std::pair<Word, Similarity1D>> next;
    for (const auto& [word, s] : frontier) {
      for (std::uint32_t i = 0; i < proj.size(); ++i) {
        Similarity1D child = s.then_inner(proj[i]);
        if (child.ratio < target.ratio || !covers(child, target)) continue;
        Word w = word;
        w.push_back(i);
        if (child == target) {
          out.push_back(std::move(w));
        } else if (child.ratio != target.ratio) {
          next.emplace_back(std::move(w), std::move(child));
        }
        check_cap(++visited, cap, "fibre class search");
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t for_each_fibre_map(const IFSSystem& system, const SemigroupKey& target,
                               const std::optional<Interval>& window,
                               const std::function<void(const Similarity1D&)>& visit, std::size_t cap) {
  if (target.is_identity()) {
    visit(Similarity1D::identity());
    return 0;
  }
  const auto proj = system.projected();
  const auto fib = system.fibred();
  std::unordered_set<Similarity1D, Similarity1DHash> found;
  std::vector<Node> frontier{{Similarity1D::identity(), Similarity1D::identity()}};
  std::size_t expanded = 0;
  while (!frontier.empty()) {
    std::unordered_set<Node, NodeHash> next;
    for (const auto& node : frontier) {
      for (std::size_t i = 0; i < proj.size(); ++i) {
        Similarity1D s = node.projected.then_inner(proj[i]);
        if (s.ratio < target.ratio || !covers(s, target)) continue;
        Similarity1D f = node.fibre.then_inner(fib[i]);
        if (window && !image(f, Interval{0, 1}).intersects(*window)) continue;
        if (s == target) {
          found.insert(std::move(f));
        } else if (s.ratio != target.ratio) {
          next.insert(Node{std::move(s), std::move(f)});
        }
      }
      check_cap(++expanded, cap, "fibre map search");
    }
    frontier.assign(next.begin(), next.end());
  }
  std::vector<Similarity1D> ordered(found.begin(), found.end());
  std::sort(ordered.begin(), ordered.end());
  for (const auto& f : ordered) visit(f);
  return expanded;
}

IntervalUnion fibre_approximant(const IFSSystem& system, const OmegaPrefix& prefix, const IntervalUnion& X,
                                std::size_t cap) {
  if (prefix.empty()) throw DomainError("fibre approximant needs a prefix of length >= 1");
  if (X.empty()) throw DomainError("fibre approximant needs a nonempty X");
  std::vector<Interval> parts;
  for_each_fibre_map(
      system, prefix.last(), std::nullopt,
      [&](const Similarity1D& f) {
        for (const auto& iv : X.intervals()) parts.push_back(image(f, iv));
        check_cap(parts.size(), cap, "fibre approximant");
      },
      cap);
  return IntervalUnion(std::move(parts));
}

Rational fibre_limit_bound(const IFSSystem& system, std::size_t k, const IntervalUnion& X) {
  return X.diameter() * pow(system.beta_max(), k);
}

bool check_shift_embedding(const IFSSystem& system, const OmegaPrefix& prefix, std::size_t split, std::size_t cap) {
  const std::size_t k = prefix.size();
  if (split < 1 || split >= k) throw DomainError("shift embedding needs 1 <= m < k");
  const IntervalUnion whole = fibre_approximant(system, prefix, IntervalUnion::unit(), cap);
  const OmegaPrefix shifted =
      make_prefix(system, Word(prefix.indices.begin() + static_cast<std::ptrdiff_t>(split), prefix.indices.end()));
  const IntervalUnion tail = fibre_approximant(system, shifted, IntervalUnion::unit(), cap);
  bool ok = true;
  for_each_fibre_map(
      system, prefix.keys[split - 1], std::nullopt,
      [&](const Similarity1D& omega) {
        if (ok && !whole.contains(tail.image(omega))) ok = false;
      },
      cap);
  return ok;
}

std::vector<OmegaPrefix> enumerate_prefixes(const IFSSystem& system, std::size_t depth, std::size_t cap) {
  if (depth == 0) throw DomainError("prefix depth must be >= 1");
  // Left cancellation (f o S_i = f o S_j implies S_i = S_j) means key
  // sequences correspond to sequences of distinct generator similarities.
  std::vector<std::uint32_t> reps;
  {
    std::vector<Similarity1D> seen;
    for (std::uint32_t i = 0; i < system.size(); ++i) {
      Similarity1D s = project(system.map(i));
      if (std::find(seen.begin(), seen.end(), s) == seen.end()) {
        seen.push_back(s);
        reps.push_back(i);
      }
    }
  }
  std::sort(reps.begin(), reps.end());
  check_cap(power_count(reps.size(), depth, cap), cap, "prefix enumeration");
  std::vector<OmegaPrefix> out;
  std::vector<std::size_t> digits(depth, 0);
  while (true) {
    Word w;
    for (auto d : digits) w.push_back(reps[d]);
    out.push_back(make_prefix(system, w));
    std::size_t pos = depth;
    while (pos > 0 && ++digits[pos - 1] == reps.size()) digits[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

}  // namespace affdim
