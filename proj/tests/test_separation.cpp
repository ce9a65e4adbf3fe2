#include <doctest.h>

#include <cmath>

#include "affdim/acceptance.hpp"
#include "affdim/gallery.hpp"
#include "affdim/separation.hpp"

using namespace affdim;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

const std::vector<Similarity1D> halves{{q(1, 2), q(0)}, {q(1, 2), q(1, 2)}};
const std::vector<Similarity1D> cantor{{q(1, 3), q(0)}, {q(1, 3), q(2, 3)}};

}  // namespace

TEST_CASE("t_r on the binary tiling") {
  CHECK(t_r_sample(halves, pow2(-5)).upper == 4);
  CHECK(oracle_t_r(halves, pow2(-5)) == 4);
}

TEST_CASE("t_r of a single map is 1") {
  const std::vector<Similarity1D> one{{q(1, 3), q(1, 3)}};
  for (long e = 1; e <= 6; ++e) CHECK(t_r_sample(one, pow2(-e)).upper == 1);
}

TEST_CASE("t_r of Phi_{1/4} matches the quadratic oracle") {
  const auto phi = phi_lambda(q(1, 4));
  const Rational r = pow(q(1, 4), 3);
  CHECK(t_r_sample(phi, r).upper == oracle_t_r(phi, r));
  const auto s = t_r_sample(phi, r);
  CHECK(s.lower <= s.upper);
}

TEST_CASE("wsc diagnostic verdicts") {
  const std::vector<int> exps{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto c = wsc_diagnostic(cantor, exps);
  for (const auto& s : c.samples) CHECK(s.upper <= 2);
  CHECK(c.verdict == SeparationVerdict::wsc_consistent);
  CHECK_FALSE(c.witness_is_exact_overlap);

  const auto phi = wsc_diagnostic(phi_lambda(q(1, 4)), std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(phi.verdict == SeparationVerdict::wsc_consistent);
  REQUIRE(phi.witness);
  CHECK(phi.witness_is_exact_overlap);
  CHECK(*phi.witness_level == 2);

  const auto pu = gallery_get("pu-surrogate").system.projected();
  const auto growing = wsc_diagnostic(pu, std::vector<int>{2, 4, 6, 8, 10, 12, 14});
  CHECK(growing.verdict != SeparationVerdict::wsc_consistent);
  CHECK(growing.samples.back().upper > growing.samples.front().upper);

  CHECK_THROWS_AS(wsc_diagnostic(cantor, std::vector<int>{2, 1}), DomainError);
}

TEST_CASE("esc delta") {
  const auto d4 = esc_delta(halves, 4);
  REQUIRE(d4.delta);
  CHECK(*d4.delta == q(1, 16));
  const auto phi = esc_delta(phi_lambda(q(1, 4)), 2);
  REQUIRE(phi.delta);
  CHECK(*phi.delta == 0);
  REQUIRE(phi.witness);
  CHECK(phi.witness->first == Word{0, 2});
  CHECK(phi.witness->second == Word{1, 0});

  // Different ratios are never compared: at n = 1 the two buckets are singletons.
  const std::vector<Similarity1D> mixed{{q(1, 2), q(0)}, {q(1, 3), q(2, 3)}};
  CHECK_FALSE(esc_delta(mixed, 1).delta);
  const auto d2 = esc_delta(mixed, 2);
  REQUIRE(d2.delta);
  CHECK(*d2.delta == *oracle_delta(mixed, 2));
  CHECK_THROWS_AS(esc_delta(halves, 0), DomainError);
  CHECK_THROWS_AS(esc_delta(halves, 12, 1000), ResourceError);
}

TEST_CASE("esc delta agrees with the quadratic oracle on random systems") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto p = random_system(seed).projected();
    for (std::size_t n = 1; n <= 4; ++n) CHECK(esc_delta(p, n).delta == oracle_delta(p, n));
  }
}

TEST_CASE("exact overlaps") {
  const auto w = exact_overlap_exists(phi_lambda(q(1, 4)), 4);
  REQUIRE(w);
  CHECK(w->n == 2);
  CHECK(w->words.first == Word{0, 2});
  CHECK(w->words.second == Word{1, 0});
  CHECK_FALSE(exact_overlap_exists(phi_lambda(q(1, 4)), 1));
  CHECK_FALSE(exact_overlap_exists(halves, 10));
  const std::vector<Similarity1D> thirds{{q(1, 3), q(0)}, {q(1, 3), q(1, 3)}, {q(1, 3), q(2, 3)}};
  CHECK_FALSE(exact_overlap_exists(thirds, 8));
  for (std::size_t n = 1; n <= 10; ++n) CHECK(*esc_delta(halves, n).delta == pow2(-static_cast<long>(n)));
}

TEST_CASE("similarity dimension") {
  const std::vector<Rational> a{q(1, 2), q(1, 2)}, b{q(1, 3), q(1, 3)}, c{q(1, 4), q(1, 4), q(1, 4)};
  CHECK(std::abs(similarity_dimension(a) - 1.0) < 1e-12);
  CHECK(std::abs(similarity_dimension(b) - std::log(2.0) / std::log(3.0)) < 1e-10);
  CHECK(std::abs(similarity_dimension(c) - std::log(3.0) / std::log(4.0)) < 1e-10);
  const std::vector<Rational> one{q(1, 2)};
  CHECK(similarity_dimension(one) == 0.0);
}

TEST_CASE("the N = 9 surrogate has no exact overlaps to n = 8 and decaying Delta_n") {
  const auto p = gallery_get("ss-esc-N9").system.projected();
  CHECK_FALSE(exact_overlap_exists(p, 8));
  Rational previous = 1;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto d = esc_delta(p, n);
    REQUIRE(d.delta);
    CHECK(*d.delta > 0);
    CHECK(*d.delta <= previous);
    previous = *d.delta;
  }
}
