#include <doctest.h>

#include <cmath>

#include "affdim/estimators.hpp"
#include "affdim/gallery.hpp"

using namespace affdim;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

const std::vector<Similarity1D> cantor{{q(1, 3), q(0)}, {q(1, 3), q(2, 3)}};
const std::vector<Similarity1D> halves{{q(1, 2), q(0)}, {q(1, 2), q(1, 2)}};

const double log2_3 = std::log(2.0) / std::log(3.0);
const double golden_quarter = std::log((3 + std::sqrt(5.0)) / 2) / std::log(4.0);

SourcePtr unit_square() { return product_source(interval_source(IntervalUnion::unit()), interval_source(IntervalUnion::unit())); }

// Two columns of width 1/2, each holding a two-map Cantor fibre of ratio 1/4.
IFSSystem quarter_grid() {
  std::vector<AffineMap2D> maps;
  for (long i : {0, 1})
    for (long j : {0, 3}) maps.push_back(AffineMap2D::make(q(1, 2), q(1, 4), q(i, 2), q(j, 4)));
  return IFSSystem(maps);
}

}  // namespace

TEST_CASE("least squares recovers an exact line") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{3, 5, 7, 9, 11};
  const auto fit = least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2));
  CHECK(fit.intercept == doctest::Approx(1));
  for (double r : fit.residuals) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("box dimension estimates") {
  CHECK(box_dimension_estimate(*linear_source(cantor), 8, 16).value == doctest::Approx(log2_3).epsilon(0.02 / log2_3));
  CHECK(std::abs(box_dimension_estimate(IntervalUnion::unit(), 4, 12).value - 1) <= 0.01);
  CHECK(std::abs(box_dimension_estimate(*linear_source(phi_lambda(q(1, 4))), 8, 16).value - golden_quarter) <= 0.05);
  CHECK_THROWS(box_dimension_estimate(IntervalUnion::unit(), 4, 6));
  const auto e = box_dimension_estimate(*linear_source(cantor), 8, 16);
  CHECK(e.m_min == 8);
  CHECK(e.n_max == 16);
  CHECK(e.trend.size() == 9);
}

TEST_CASE("Assouad estimates") {
  const auto ixc = product_source(interval_source(IntervalUnion::unit()), linear_source(cantor));
  AssouadOptions planar;
  planar.m_max = 4;
  planar.gap_max = 8;
  planar.sampling.windows = 8;
  CHECK(std::abs(assouad_estimate(*ixc, planar).estimate.value - (1 + log2_3)) <= 0.1);
  CHECK(std::abs(assouad_estimate(*unit_square(), planar).estimate.value - 2) <= 0.01);
  CHECK(std::abs(assouad_estimate(*linear_source(cantor)).estimate.value - log2_3) <= 0.05);
  const auto result = assouad_estimate(*linear_source(halves));
  CHECK(result.estimate.value == doctest::Approx(1).epsilon(0.01));
  CHECK_FALSE(result.matrix.entries().empty());
  for (const auto& entry : result.matrix.entries()) CHECK(entry.count <= (std::size_t{1} << (entry.n - entry.m)) + 1);
}

TEST_CASE("scale pair matrix keeps maxima") {
  ScalePairMatrix m;
  m.record(1, 3, 3, DyadicWindow{1, 1, 0});
  m.record(1, 3, 4, DyadicWindow{1, 0, 1});
  m.record(1, 3, 4, DyadicWindow{1, 0, 0});
  m.record(1, 3, 2, DyadicWindow{1, 1, 1});
  const auto* e = m.find(1, 3);
  REQUIRE(e != nullptr);
  CHECK(e->count == 4);
  CHECK(e->window.ix == 0);
  CHECK(e->window.iy == 0);
  CHECK(e->exponent == doctest::Approx(1));
  CHECK(m.find(2, 3) == nullptr);
  CHECK(m.max_count_at_gap(2) == 4);
  CHECK(m.max_count_at_gap(5) == 0);
}

TEST_CASE("spectrum estimates") {
  const auto ixc = product_source(interval_source(IntervalUnion::unit()), linear_source(cantor));
  SpectrumOptions planar;
  planar.gap_max = 8;
  planar.sampling.windows = 8;
  const auto at08 = spectrum_estimate(*ixc, 0.8, planar);
  CHECK(std::abs(at08.value - (1 + log2_3)) <= 0.1);
  REQUIRE(at08.theta.has_value());
  CHECK(*at08.theta == 0.8);
  CHECK(std::abs(spectrum_estimate(*unit_square(), 0.9, planar).value - 2) <= 0.02);
  const auto c = linear_source(cantor);
  CHECK(spectrum_estimate(*c, 0.5).value <= spectrum_estimate(*c, 0.9).value + 0.05);
  for (auto [m, n] : spectrum_scale_pairs(0.75, SpectrumOptions{}, 40)) {
    CHECK(n == static_cast<int>(std::ceil(m / 0.75 - 1e-9)));
    CHECK(n <= 40);
  }
}

TEST_CASE("quasi-Assouad extrapolation") {
  const std::vector<double> grid = quasi_theta_grid(0.5);
  CHECK(grid == std::vector<double>{0.80, 0.85, 0.90, 0.95});
  const auto fallback = quasi_theta_grid(0.9);
  REQUIRE(fallback.size() == 4);
  CHECK(fallback.front() == doctest::Approx(0.92));
  CHECK(std::abs(quasi_assouad_estimate(*linear_source(cantor), grid).value - log2_3) <= 0.1);
  const std::vector<double> two{0.8, 0.9};
  CHECK_THROWS_AS(quasi_assouad_estimate(*linear_source(cantor), two), DomainError);
}

TEST_CASE("Assouad formula") {
  const auto six = six_map_system(q(1, 4), q(1, 4));
  const auto e = formula_dimA(six);
  CHECK(e.value == doctest::Approx(1 + golden_quarter).epsilon(1e-6));
  CHECK_FALSE(e.lower_bound_only);
  CHECK(formula_dimA(quarter_grid()).value == doctest::Approx(1.5).epsilon(1e-6));
  const IFSSystem one({AffineMap2D::make(q(1, 2), q(1, 4), q(0), q(0))});
  CHECK(formula_dimA(one).value == doctest::Approx(0).epsilon(1e-9));
}

TEST_CASE("Assouad spectrum formula") {
  const auto six = six_map_system(q(1, 4), q(1, 4));
  CHECK(formula_dimAs(six, 0.75).value == doctest::Approx(1 + golden_quarter).epsilon(0.02));
  for (double theta : {0.5, 0.6, 0.7, 0.8, 0.95})
    CHECK(std::abs(formula_dimAs(six, theta).value - (1 + golden_quarter)) <= 0.02);
  const auto n9 = gallery_get("ss-esc-N9").system;
  CHECK_THROWS_AS(formula_dimAs(n9, 0.9), RangeError);
  CHECK_THROWS_AS(formula_dimAs(six, 1.0), RangeError);
  CHECK(formula_dimAs(n9, n9.theta0()).value == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("fibre structure analysis") {
  CHECK(analyse_fibres(six_map_system(q(1, 4), q(1, 4))).structure != FibreStructure::singleton);
  const auto single = analyse_fibres(gallery_get("cantor-third").system);
  CHECK(single.structure == FibreStructure::singleton);
  CHECK(growth_dimension(cantor) == doctest::Approx(log2_3).epsilon(1e-9));
  CHECK(growth_dimension(phi_lambda(q(1, 4))) == doctest::Approx(golden_quarter).epsilon(0.02));
}
