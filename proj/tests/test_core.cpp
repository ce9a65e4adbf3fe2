#include <doctest.h>

#include <algorithm>
#include <functional>

#include "affdim/core_ifs.hpp"
#include "affdim/gallery.hpp"
#include "affdim/interval_union.hpp"
#include "affdim/system_io.hpp"

using namespace affdim;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// Applies T_{i_1} o ... o T_{i_n} to a point by direct evaluation, innermost first.
std::pair<Rational, Rational> apply_word(const IFSSystem& sys, const Word& w, Rational x, Rational y) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const auto& m = sys.map(*it);
    x = m.alpha * x + m.u;
    y = m.beta * y + m.v;
  }
  return {x, y};
}

// Every word whose ratio first drops to <= r, by exhaustive search over all
// words up to `depth` letters.
std::vector<Word> brute_stopping(const std::vector<Rational>& ratios, const Rational& r, std::size_t depth) {
  std::vector<Word> out;
  std::function<void(Word, Rational)> walk = [&](Word w, Rational prod) {
    if (!w.empty() && prod <= r) {
      out.push_back(w);
      return;
    }
    if (w.size() == depth) return;
    for (std::uint32_t i = 0; i < ratios.size(); ++i) {
      Word next = w;
      next.push_back(i);
      walk(next, prod * ratios[i]);
    }
  };
  walk({}, 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3/4") == q(3, 4));
  CHECK(parse_rational("0.125") == q(1, 8));
  CHECK(parse_rational("-2") == q(-2));
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
  CHECK(to_string(q(6, 8)) == "3/4");
}

TEST_CASE("generator invariants are enforced with named inequalities") {
  CHECK_NOTHROW(AffineMap2D::make(q(1, 2), q(1, 4), 0, 0));
  CHECK_THROWS_AS(AffineMap2D::make(q(1, 4), q(1, 2), 0, 0), ValidationError);
  CHECK_THROWS_AS(AffineMap2D::make(q(1, 2), q(1, 4), q(3, 4), 0), ValidationError);
  try {
    AffineMap2D::make(q(1, 4), q(1, 2), 0, 0);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("beta") != std::string::npos);
  }
  CHECK_THROWS_AS(IFSSystem({}), ValidationError);
}

TEST_CASE("compose_word") {
  const IFSSystem sys({AffineMap2D::make(q(1, 2), q(1, 4), 0, 0)});
  const auto t = compose_word(sys, {0, 0});
  CHECK(t.alpha == q(1, 4));
  CHECK(t.beta == q(1, 16));
  CHECK(t.u == 0);
  CHECK(t.v == 0);
  CHECK(compose_word(sys, {}).identity);
  CHECK_THROWS_AS(compose_word(sys, {1}), InvalidWordError);

  const IFSSystem shifted({AffineMap2D::make(q(1, 2), q(1, 4), q(1, 2), q(3, 4))});
  const auto s = compose_word(shifted, {0, 0});
  CHECK(s.u == q(3, 4));
  CHECK(s.v == q(15, 16));
  const auto origin = apply_word(shifted, {0, 0}, 0, 0);
  CHECK(origin.first == s.u);
  CHECK(origin.second == s.v);
}

TEST_CASE("compose_word agrees with pointwise application on the gallery") {
  for (const auto& g : gallery_list()) {
    const Word w{0, static_cast<std::uint32_t>(g.system.size() - 1), 0};
    const auto t = compose_word(g.system, w);
    for (const auto& [x, y] : {std::pair{q(0), q(0)}, std::pair{q(1), q(1, 3)}}) {
      const auto p = apply_word(g.system, w, x, y);
      CHECK(p.first == t.alpha * x + t.u);
      CHECK(p.second == t.beta * y + t.v);
    }
  }
}

TEST_CASE("projection and fibre maps") {
  const auto m = AffineMap2D::make(q(1, 2), q(1, 4), q(1, 2), 0);
  CHECK(project(m) == Similarity1D{q(1, 2), q(1, 2)});
  CHECK(project(AffineMap2D::identity_map()).is_identity());
  CHECK(fibre_map(AffineMap2D::make(q(1, 2), q(1, 4), 0, q(3, 4))) == Similarity1D{q(1, 4), q(3, 4)});
  CHECK(fibre_map(AffineMap2D::make(q(1, 2), q(1, 4), 0, q(3, 16))) == Similarity1D{q(1, 4), q(3, 16)});

  const auto sys = six_map_system(q(1, 4), q(1, 4));
  const Word w{0, 1, 3, 4};
  CHECK(project(compose_word(sys, w)) == compose_similarities(sys.projected(), w));
  CHECK(fibre_map(compose_word(sys, w)) == compose_similarities(sys.fibred(), w));
}

TEST_CASE("stopping words") {
  const std::vector<Rational> halves{q(1, 2), q(1, 2)};
  CHECK(stopping_words(halves, q(1, 4)) == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(stopping_words(halves, q(1, 3)) == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const std::vector<Rational> mixed{q(1, 2), q(1, 3)};
  const auto words = stopping_words(mixed, q(1, 4));
  CHECK(words == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(words == brute_stopping(mixed, q(1, 4), 4));
  CHECK(stopping_words(mixed, q(1, 50)) == brute_stopping(mixed, q(1, 50), 8));
  CHECK_THROWS_AS(stopping_words(halves, q(1)), DomainError);
  CHECK_THROWS_AS(stopping_words(halves, q(1, 1024), 100), ResourceError);
}

TEST_CASE("stopping sets are prefix-free and cover every long word") {
  const std::vector<Rational> ratios{q(1, 2), q(1, 3), q(2, 5)};
  for (const auto& r : {q(1, 7), q(1, 20), q(3, 100)}) {
    const auto words = stopping_words(ratios, r);
    for (std::size_t a = 0; a < words.size(); ++a)
      for (std::size_t b = 0; b < words.size(); ++b) {
        if (a == b) continue;
        const auto& u = words[a];
        const auto& v = words[b];
        CHECK_FALSE((u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin())));
      }
    // Total mass sum of prod(ratios)^s with s = 1: each infinite word has exactly one prefix in the set,
    // so the Bernoulli measures with weights p_i sum to 1.
    Rational total = 0;
    const Rational p = q(1, 3);
    for (const auto& w : words) {
      Rational mass = 1;
      for (std::size_t k = 0; k < w.size(); ++k) mass *= p;
      total += mass;
    }
    CHECK(total == 1);
  }
}

TEST_CASE("interval unions merge touching intervals") {
  const IntervalUnion u({{q(3, 4), q(1)}, {q(0), q(1, 4)}, {q(3, 16), q(7, 16)}});
  REQUIRE(u.size() == 2);
  CHECK(u.intervals()[0] == Interval{q(0), q(7, 16)});
  CHECK(u.intervals()[1] == Interval{q(3, 4), q(1)});
  CHECK(u.measure() == q(11, 16));
  CHECK(u.contains(q(1, 2)) == false);
  CHECK(u.contains(q(7, 16)));
  CHECK(u.distance_to(q(1, 2)) == q(1, 16));
  const IntervalUnion touch({{q(0), q(1, 2)}, {q(1, 2), q(1)}});
  CHECK(touch.size() == 1);
}

TEST_CASE("system JSON round trip is lossless on the gallery") {
  for (const auto& g : gallery_list()) {
    const auto doc = system_to_json(g.system);
    const auto again = system_from_json(nlohmann::json::parse(doc.dump()));
    CHECK(again.maps() == g.system.maps());
    CHECK(system_to_json(again) == doc);
  }
}

TEST_CASE("system JSON rejects inexact and invalid input") {
  using nlohmann::json;
  CHECK_THROWS_AS(system_from_json(json::parse(R"({"maps":[{"alpha":0.5,"beta":"1/4","u":"0","v":"0"}]})")),
                  ValidationError);
  CHECK_THROWS_AS(system_from_json(json::parse(R"({"maps":[{"alpha":"1/4","beta":"1/2","u":"0","v":"0"}]})")),
                  ValidationError);
  CHECK_THROWS_AS(system_from_json(json::parse(R"({"maps":[]})")), ValidationError);
  const auto ok = system_from_json(json::parse(R"({"maps":[{"alpha":"1/2","beta":"0.25","u":0,"v":"3/4"}]})"));
  CHECK(ok.map(0).v == q(3, 4));
  CHECK(word_from_json(word_to_json({0, 2})) == Word{0, 2});
  CHECK(word_to_json({0, 2}) == json::array({1, 3}));
}

TEST_CASE("enumeration cap from the environment") {
  CHECK(enumeration_cap() > 0);
  CHECK_THROWS_AS(check_cap(11, 10, "test"), ResourceError);
  try {
    check_cap(11, 10, "test");
  } catch (const ResourceError& e) {
    CHECK(e.cap() == 10);
  }
}
