#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "affdim/core_ifs.hpp"
#include "affdim/interval_union.hpp"

namespace affdim {

/// Axis-aligned closed rectangle [x0, x0 + width] x [y0, y0 + height].
struct Rect {
  Rational x0, y0, width, height;
};

/// Cylinder cover {T_sigma([0,1]^2) : sigma in Lambda_r}.
struct RectCover {
  Rational r;
  std::vector<Rect> rects;
};

RectCover attractor_cover(const IFSSystem& system, const Rational& r, std::size_t cap = enumeration_cap());

/// Interleaves the bits of x and y (x in the even positions).
std::uint64_t morton_encode(std::uint32_t x, std::uint32_t y);
void morton_decode(std::uint64_t code, std::uint32_t& x, std::uint32_t& y);

/// Occupied cells of side 2^{-n} in the unit square, stored as sorted Morton codes.
class GridCover {
 public:
  GridCover(int n, std::vector<std::uint64_t> codes);

  int scale_exponent() const { return n_; }
  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  const std::vector<std::uint64_t>& codes() const { return codes_; }

  struct Cell {
    std::uint32_t ix, iy;
  };
  std::vector<Cell> cells() const;  // sorted by (iy, ix)
  bool occupied(std::uint32_t ix, std::uint32_t iy) const;

 private:
  int n_;
  std::vector<std::uint64_t> codes_;
};

/// Every cell of side 2^{-n} meeting some rect (closed intersection), computed
/// with exact floor/ceil. Throws DomainError for an empty rect list.
GridCover rasterize(const RectCover& cover, int n, std::size_t cap = enumeration_cap());

/// Dyadic square [ix 2^{-level}, (ix+1) 2^{-level}] x [iy 2^{-level}, (iy+1) 2^{-level}].
struct DyadicSquare {
  int level = 0;
  std::uint32_t ix = 0;
  std::uint32_t iy = 0;
};

/// Number of occupied cells of side 2^{-m} inside the window. Requires
/// window.level <= m <= grid scale; otherwise ScaleOrderError.
std::size_t covering_number(const GridCover& grid, const DyadicSquare& window, int m);

/// Union of S_sigma([0,1]) over sigma in Lambda_r; contains pi(K).
IntervalUnion projection_cover(const IFSSystem& system, const Rational& r, std::size_t cap = enumeration_cap());

/// Union of F_sigma([0,1]) over sigma in Lambda_r with x in S_sigma([0,1]).
IntervalUnion slice_approximant(const IFSSystem& system, const Rational& x, const Rational& r,
                                std::size_t cap = enumeration_cap());

/// p_H(A, B) = sup over a in A of dist(a, B). Both sets must be nonempty.
Rational pseudo_distance(const IntervalUnion& a, const IntervalUnion& b);
Rational hausdorff_distance(const IntervalUnion& a, const IntervalUnion& b);

/// "ix,iy" lines with a header row.
void write_cells_csv(std::ostream& out, const GridCover& grid);
/// Little-endian binary: magic "AFRLE1\0\0", u32 n, u32 row count, then per
/// nonempty row u32 iy, u32 run count and (u32 start, u32 length) runs.
void write_cells_rle(std::ostream& out, const GridCover& grid);
GridCover read_cells_rle(std::istream& in);
/// Binary PGM (P5), occupied cells black, y increasing upwards. Grids finer
/// than 2^max_side_log2 are coarsened.
void write_pgm(std::ostream& out, const GridCover& grid, int max_side_log2 = 10);

}  // namespace affdim
