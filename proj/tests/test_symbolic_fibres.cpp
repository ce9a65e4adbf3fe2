#include <doctest.h>

#include <algorithm>
#include <set>

#include "affdim/acceptance.hpp"
#include "affdim/covering.hpp"
#include "affdim/gallery.hpp"
#include "affdim/symbolic_fibres.hpp"

using namespace affdim;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

IFSSystem six_map() { return six_map_system(q(1, 4), q(1, 4)); }

// All words of length n, lexicographic.
std::vector<Word> all_words(std::size_t letters, std::size_t n) {
  std::vector<Word> out{Word{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (std::uint32_t i = 0; i < letters; ++i) {
        Word v = w;
        v.push_back(i);
        next.push_back(v);
      }
    out = next;
  }
  return out;
}

// E_k by brute force: every word up to max_len whose projected composition
// equals f_k contributes F_sigma(X).
IntervalUnion brute_fibre(const IFSSystem& sys, const OmegaPrefix& prefix, std::size_t max_len) {
  std::vector<Interval> parts;
  const auto proj = sys.projected();
  const auto fib = sys.fibred();
  for (std::size_t n = 1; n <= max_len; ++n)
    for (const auto& w : all_words(sys.size(), n))
      if (compose_similarities(proj, w) == prefix.last())
        parts.push_back(image(compose_similarities(fib, w), Interval{0, 1}));
  return IntervalUnion(parts);
}

}  // namespace

TEST_CASE("fibre classes of the six-map system") {
  const auto classes = fibre_classes(six_map(), 1);
  REQUIRE(classes.size() == 2);
  const Similarity1D left{q(1, 2), q(0)}, right{q(1, 2), q(1, 2)};
  CHECK(classes.at(left) == std::vector<Word>{{0}, {2}, {4}});
  CHECK(classes.at(right) == std::vector<Word>{{1}, {3}, {5}});
}

TEST_CASE("fibre classes of a free system are singletons") {
  const IFSSystem free({AffineMap2D::make(q(1, 2), q(1, 4), 0, 0), AffineMap2D::make(q(1, 2), q(1, 4), q(1, 2), q(3, 4))});
  const auto classes = fibre_classes(free, 2);
  CHECK(classes.size() == 4);
  for (const auto& [key, words] : classes) CHECK(words.size() == 1);
}

TEST_CASE("Phi_{1/4} has the class {(1,3),(2,1)} at n = 2") {
  const auto sys = embed_linear(phi_lambda(q(1, 4)));
  const auto classes = fibre_classes(sys, 2);
  const auto key = compose_similarities(sys.projected(), {0, 2});
  CHECK(classes.at(key) == std::vector<Word>{{0, 2}, {1, 0}});
  std::size_t total = 0;
  for (const auto& [k, w] : classes) total += w.size();
  CHECK(total == 9);
  CHECK(classes.size() == 8);
}

TEST_CASE("anchor points") {
  const auto sys = six_map();
  CHECK(anchor_point(make_prefix(sys, {1, 1, 1})) == Interval{q(7, 8), q(1)});
  CHECK(anchor_point(make_prefix(sys, {0, 0})) == Interval{q(0), q(1, 4)});
  const auto p = make_prefix(sys, {0, 1});
  CHECK(p.last() == Similarity1D{q(1, 4), q(1, 4)});
  CHECK(anchor_point(p) == Interval{q(1, 4), q(1, 2)});
  CHECK_THROWS_AS(make_prefix(sys, {6}), InvalidWordError);
}

TEST_CASE("fibre approximant examples") {
  const auto sys = six_map();
  const auto e1 = fibre_approximant(sys, make_prefix(sys, {0}), IntervalUnion::unit());
  CHECK(e1 == IntervalUnion({{q(0), q(7, 16)}, {q(3, 4), q(1)}}));

  const IFSSystem free({AffineMap2D::make(q(1, 2), q(1, 4), 0, 0), AffineMap2D::make(q(1, 2), q(1, 4), q(1, 2), q(3, 4))});
  CHECK(fibre_approximant(free, make_prefix(free, {1}), IntervalUnion::unit()) ==
        IntervalUnion({{q(3, 4), q(1)}}));

  const auto prefix = make_prefix(sys, {0, 1, 0});
  const auto points = fibre_approximant(sys, prefix, IntervalUnion::point(0));
  std::vector<Interval> expected;
  for (const Word& w : fibre_class_words(sys, prefix.last())) {
    const Rational y = fibre_map(compose_word(sys, w)).translate;
    expected.push_back({y, y});
  }
  CHECK(points == IntervalUnion(expected));
  CHECK(points.size() < expected.size());
}

TEST_CASE("J_f collects words of every length, checked against brute force") {
  const auto sys = embed_linear(phi_lambda(q(1, 4)));
  for (const Word& w : {Word{0, 2}, Word{1, 0, 2}, Word{2, 2}}) {
    const auto prefix = make_prefix(sys, w);
    CHECK(fibre_approximant(sys, prefix, IntervalUnion::unit()) == brute_fibre(sys, prefix, 4));
  }
  const auto six = six_map();
  const auto prefix = make_prefix(six, {0, 3});
  CHECK(fibre_approximant(six, prefix, IntervalUnion::unit()) == brute_fibre(six, prefix, 3));
}

TEST_CASE("fibre limit bound") {
  const auto sys = six_map();
  CHECK(fibre_limit_bound(sys, 3) == q(1, 64));
  CHECK(fibre_limit_bound(sys, 0) == 1);
  const auto p3 = make_prefix(sys, {1, 0, 1});
  const auto p6 = extend_periodic(sys, p3, 6);
  CHECK(p6.indices == Word{1, 0, 1, 1, 0, 1});
  const auto e3 = fibre_approximant(sys, p3, IntervalUnion::unit());
  const auto e6 = fibre_approximant(sys, p6, IntervalUnion::unit());
  CHECK(hausdorff_distance(e3, e6) <= q(1, 64));
  CHECK(e3.contains(e6));
}

TEST_CASE("shift embedding") {
  const auto sys = six_map();
  CHECK(check_shift_embedding(sys, make_prefix(sys, {0, 1, 1, 0}), 2));
  CHECK_THROWS_AS(check_shift_embedding(sys, make_prefix(sys, {0, 1}), 2), DomainError);
  const IFSSystem free({AffineMap2D::make(q(1, 2), q(1, 4), 0, 0), AffineMap2D::make(q(1, 2), q(1, 4), q(1, 2), q(3, 4))});
  for (std::size_t split = 1; split < 3; ++split) CHECK(check_shift_embedding(free, make_prefix(free, {1, 0, 1}), split));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = random_system(seed);
    Word w;
    for (std::size_t k = 0; k < 5; ++k) w.push_back(static_cast<std::uint32_t>((seed + 3 * k) % r.size()));
    for (std::size_t split = 1; split < w.size(); ++split) CHECK(check_shift_embedding(r, make_prefix(r, w), split));
  }
}

TEST_CASE("prefix enumeration") {
  CHECK(enumerate_prefixes(six_map(), 2).size() == 4);
  CHECK(enumerate_prefixes(six_map(), 1).size() == 2);
  // Phi_{1/4}: key sequences (f_1, f_2) are distinct for all nine index pairs,
  // because (1,3) and (2,1) already differ at f_1.
  const auto sys = embed_linear(phi_lambda(q(1, 4)));
  std::set<std::vector<Similarity1D>> sequences;
  for (const auto& w : all_words(3, 2)) sequences.insert(make_prefix(sys, w).keys);
  CHECK(enumerate_prefixes(sys, 2).size() == sequences.size());
  CHECK(sequences.size() == 9);
  CHECK_THROWS_AS(enumerate_prefixes(sys, 0), DomainError);
}

TEST_CASE("class counts sum to |I|^n") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto sys = random_system(seed);
    std::size_t total = 0;
    for (const auto& [key, words] : fibre_classes(sys, 4)) total += words.size();
    CHECK(total == sys.size() * sys.size() * sys.size() * sys.size());
  }
}
