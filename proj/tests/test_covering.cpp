#include <doctest.h>

#include <sstream>

#include "affdim/covering.hpp"
#include "affdim/gallery.hpp"
#include "affdim/occupancy.hpp"

using namespace affdim;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// Cells meeting a closed rectangle, by testing every cell of the grid.
std::size_t brute_cells(const Rect& rect, int n) {
  const Rational side = pow2(-n);
  std::size_t count = 0;
  for (long ix = 0; ix < (1L << n); ++ix)
    for (long iy = 0; iy < (1L << n); ++iy) {
      const Rational x0 = side * ix, y0 = side * iy;
      const bool hit = !(x0 + side < rect.x0 || rect.x0 + rect.width < x0 || y0 + side < rect.y0 ||
                         rect.y0 + rect.height < y0);
      count += hit ? 1 : 0;
    }
  return count;
}

}  // namespace

TEST_CASE("attractor cover") {
  const auto six = six_map_system(q(1, 4), q(1, 4));
  const auto cover = attractor_cover(six, q(1, 2));
  REQUIRE(cover.rects.size() == 6);
  for (const auto& r : cover.rects) {
    CHECK(r.width == q(1, 2));
    CHECK(r.height == q(1, 4));
  }
  const IFSSystem one({AffineMap2D::make(q(1, 2), q(1, 4), 0, 0)});
  const auto c = attractor_cover(one, q(1, 4));
  REQUIRE(c.rects.size() == 1);
  CHECK(c.rects[0].width == q(1, 4));
  CHECK(c.rects[0].height == q(1, 16));

  const auto fine = attractor_cover(six, q(1, 8));
  Rational area = 0;
  for (const auto& r : fine.rects) area += r.width * r.height;
  CHECK(area <= 1);
}

TEST_CASE("rasterize uses the closed-touching rule") {
  const RectCover one{q(1, 4), {Rect{q(0), q(0), q(1, 4), q(1, 16)}}};
  const auto grid = rasterize(one, 4);
  CHECK(grid.size() == 10);
  for (const auto& c : grid.cells()) {
    CHECK(c.ix <= 4);
    CHECK(c.iy <= 1);
  }
  CHECK(grid.size() == brute_cells(one.rects[0], 4));
  const RectCover full{q(1), {Rect{q(0), q(0), q(1), q(1)}}};
  CHECK(rasterize(full, 3).size() == 64);
  CHECK_THROWS_AS(rasterize(RectCover{q(1), {}}, 3), DomainError);

  const RectCover odd{q(1, 8), {Rect{q(1, 3), q(2, 7), q(1, 5), q(1, 9)}}};
  CHECK(rasterize(odd, 5).size() == brute_cells(odd.rects[0], 5));
}

TEST_CASE("covering numbers") {
  const RectCover full{q(1), {Rect{q(0), q(0), q(1), q(1)}}};
  const auto grid = rasterize(full, 6);
  CHECK(covering_number(grid, DyadicSquare{0, 0, 0}, 6) == 4096);
  CHECK(covering_number(grid, DyadicSquare{1, 1, 0}, 3) == 16);
  CHECK_THROWS_AS(covering_number(grid, DyadicSquare{4, 0, 0}, 3), ScaleOrderError);
  CHECK_THROWS_AS(covering_number(grid, DyadicSquare{0, 0, 0}, 7), ScaleOrderError);

  const auto cantor = gallery_get("cantor-third").system;
  const auto cgrid = rasterize(attractor_cover(cantor, pow(q(1, 3), 6)), 8);
  CHECK(covering_number(cgrid, DyadicSquare{2, 1, 3}, 8) == 0);
  // Halving: the left half window sees the left copy only.
  const auto left = covering_number(cgrid, DyadicSquare{1, 0, 0}, 8);
  const auto right = covering_number(cgrid, DyadicSquare{1, 1, 0}, 8);
  CHECK(left + right >= covering_number(cgrid, DyadicSquare{0, 0, 0}, 8));
  CHECK(left == right);
}

TEST_CASE("projection covers") {
  const auto six = six_map_system(q(1, 4), q(1, 4));
  CHECK(projection_cover(six, q(1, 16)) == IntervalUnion::unit());
  const auto cantor = gallery_get("cantor-third").system;
  const auto level2 = projection_cover(cantor, q(1, 9));
  CHECK(level2 == IntervalUnion({{q(0), q(1, 9)}, {q(2, 9), q(1, 3)}, {q(2, 3), q(7, 9)}, {q(8, 9), q(1)}}));
  const IFSSystem one({AffineMap2D::make(q(1, 2), q(1, 4), q(1, 4), 0)});
  CHECK(projection_cover(one, q(1, 8)).size() == 1);
}

TEST_CASE("slice approximants") {
  const auto six = six_map_system(q(1, 4), q(1, 4));
  const auto slice = slice_approximant(six, q(0), q(1, 2));
  CHECK(slice == IntervalUnion({{q(0), q(7, 16)}, {q(3, 4), q(1)}}));
  const auto deeper = slice_approximant(six, q(0), q(1, 8));
  CHECK(slice.contains(deeper));
  const auto cantor = gallery_get("cantor-third").system;
  CHECK(slice_approximant(cantor, q(1, 2), q(1, 9)).empty());
  CHECK_THROWS_AS(slice_approximant(six, q(2), q(1, 2)), DomainError);
}

TEST_CASE("Hausdorff distances") {
  const IntervalUnion a({{q(0), q(1, 2)}});
  const auto unit = IntervalUnion::unit();
  CHECK(pseudo_distance(a, unit) == 0);
  CHECK(pseudo_distance(unit, a) == q(1, 2));
  const IntervalUnion gapped({{q(0), q(1, 4)}, {q(3, 4), q(1)}});
  CHECK(hausdorff_distance(gapped, unit) == q(1, 4));
  CHECK(hausdorff_distance(gapped, gapped) == 0);
  const IntervalUnion c({{q(1, 10), q(1, 5)}});
  CHECK(hausdorff_distance(a, c) <= hausdorff_distance(a, gapped) + hausdorff_distance(gapped, c));
}

TEST_CASE("cell exports") {
  const auto six = six_map_system(q(1, 4), q(1, 4));
  const auto grid = rasterize(attractor_cover(six, q(1, 32)), 5);
  std::stringstream rle;
  write_cells_rle(rle, grid);
  const auto back = read_cells_rle(rle);
  CHECK(back.scale_exponent() == 5);
  CHECK(back.codes() == grid.codes());
  std::stringstream csv;
  write_cells_csv(csv, grid);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "ix,iy");
  std::size_t lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == grid.size());
  std::stringstream pgm;
  write_pgm(pgm, grid);
  CHECK(pgm.str().rfind("P5", 0) == 0);
  std::stringstream bad("nonsense");
  CHECK_THROWS(read_cells_rle(bad));
}

TEST_CASE("occupancy engine agrees with the rectangle rasterizer") {
  // The engine works with window-local codes; at the root window they are global.
  const auto six = six_map_system(q(1, 4), q(1, 4));
  const auto source = attractor_source(six);
  const auto engine = occupied_cells(*source, DyadicWindow{}, 4);
  const auto grid = rasterize(attractor_cover(six, pow2(-4)), 4);
  // Both outer-approximate K; the engine's pieces are finer so it never sees more cells.
  CHECK(engine.size() <= grid.size());
  for (auto code : engine) CHECK(std::binary_search(grid.codes().begin(), grid.codes().end(), code));
  const auto counts = window_counts(*source, DyadicWindow{}, 4);
  REQUIRE(counts.size() == 5);
  CHECK(counts[0] == 1);
  for (std::size_t g = 1; g < counts.size(); ++g) CHECK(counts[g] >= counts[g - 1]);
}
