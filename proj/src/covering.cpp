#include "affdim/covering.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace affdim {

RectCover attractor_cover(const IFSSystem& system, const Rational& r, std::size_t cap) {
  const auto alphas = system.alphas();
  const auto words = stopping_words(alphas, r, cap);
  RectCover cover{r, {}};
  cover.rects.reserve(words.size());
  for (const auto& w : words) {
    const AffineMap2D t = compose_word(system, w);
    cover.rects.push_back({t.u, t.v, t.alpha, t.beta});
  }
  return cover;
}

namespace {

std::uint64_t spread_bits(std::uint32_t v) {
  std::uint64_t x = v;
  x = (x | (x << 16)) & 0x0000FFFF0000FFFFULL;
  x = (x | (x << 8)) & 0x00FF00FF00FF00FFULL;
  x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0FULL;
  x = (x | (x << 2)) & 0x3333333333333333ULL;
  x = (x | (x << 1)) & 0x5555555555555555ULL;
  return x;
}

std::uint32_t compact_bits(std::uint64_t x) {
  x &= 0x5555555555555555ULL;
  x = (x | (x >> 1)) & 0x3333333333333333ULL;
  x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0FULL;
  x = (x | (x >> 4)) & 0x00FF00FF00FF00FFULL;
  x = (x | (x >> 8)) & 0x0000FFFF0000FFFFULL;
  x = (x | (x >> 16)) & 0x00000000FFFFFFFFULL;
  return static_cast<std::uint32_t>(x);
}

void check_grid_scale(int n) {
  if (n < 0 || n > 31) throw DomainError("grid scale exponent must lie in [0, 31], got " + std::to_string(n));
}

// Closed-touching index range of [lo, hi] at cells of side 2^{-n}, clipped to the unit grid.
std::pair<std::uint32_t, std::uint32_t> cell_range(const Rational& lo, const Rational& hi, int n) {
  const Rational scale = pow2(n);
  Integer first = ceil_int(lo * scale) - 1;
  Integer last = floor_int(hi * scale);
  const Integer top = (Integer(1) << n) - 1;
  if (first < 0) first = 0;
  if (last > top) last = top;
  return {static_cast<std::uint32_t>(to_u64(first)), static_cast<std::uint32_t>(to_u64(last))};
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw ValidationError("truncated RLE cell file");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

std::uint64_t morton_encode(std::uint32_t x, std::uint32_t y) { return spread_bits(x) | (spread_bits(y) << 1); }

void morton_decode(std::uint64_t code, std::uint32_t& x, std::uint32_t& y) {
  x = compact_bits(code);
  y = compact_bits(code >> 1);
}

GridCover::GridCover(int n, std::vector<std::uint64_t> codes) : n_(n), codes_(std::move(codes)) {
  check_grid_scale(n);
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
}

std::vector<GridCover::Cell> GridCover::cells() const {
  std::vector<Cell> out;
  out.reserve(codes_.size());
  for (auto c : codes_) {
    Cell cell{};
    morton_decode(c, cell.ix, cell.iy);
    out.push_back(cell);
  }
  std::sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) {
    return a.iy != b.iy ? a.iy < b.iy : a.ix < b.ix;
  });
  return out;
}

bool GridCover::occupied(std::uint32_t ix, std::uint32_t iy) const {
  return std::binary_search(codes_.begin(), codes_.end(), morton_encode(ix, iy));
}

GridCover rasterize(const RectCover& cover, int n, std::size_t cap) {
  check_grid_scale(n);
  if (cover.rects.empty()) throw DomainError("cannot rasterize an empty rect cover");
  std::vector<std::array<std::uint32_t, 4>> ranges;
  ranges.reserve(cover.rects.size());
  std::size_t total = 0;
  for (const auto& rect : cover.rects) {
    auto [x0, x1] = cell_range(rect.x0, rect.x0 + rect.width, n);
    auto [y0, y1] = cell_range(rect.y0, rect.y0 + rect.height, n);
    const std::size_t count = std::size_t{x1 - x0 + 1} * std::size_t{y1 - y0 + 1};
    total += count;
    check_cap(total, cap, "rasterization");
    ranges.push_back({x0, x1, y0, y1});
  }
  std::vector<std::uint64_t> codes;
  codes.reserve(total);
  for (const auto& [x0, x1, y0, y1] : ranges)
    for (std::uint32_t iy = y0; iy <= y1; ++iy)
      for (std::uint32_t ix = x0; ix <= x1; ++ix) codes.push_back(morton_encode(ix, iy));
  return GridCover(n, std::move(codes));
}

std::size_t covering_number(const GridCover& grid, const DyadicSquare& window, int m) {
  const int n = grid.scale_exponent();
  if (window.level < 0 || window.level > m || m > n)
    throw ScaleOrderError("covering number needs window level <= m <= grid scale (got window " +
                          std::to_string(window.level) + ", m " + std::to_string(m) + ", grid " +
                          std::to_string(n) + "); re-rasterize finer");
  const std::uint64_t side = std::uint64_t{1} << window.level;
  if (window.ix >= side || window.iy >= side) return 0;
  const int shift = 2 * (n - window.level);
  const std::uint64_t key = morton_encode(window.ix, window.iy);
  const std::uint64_t lo = key << shift;
  const std::uint64_t hi = (key + 1) << shift;
  const auto& codes = grid.codes();
  auto it = std::lower_bound(codes.begin(), codes.end(), lo);
  const auto end = std::lower_bound(it, codes.end(), hi);
  const int coarsen = 2 * (n - m);
  std::size_t count = 0;
  std::uint64_t previous = 0;
  for (; it != end; ++it) {
    const std::uint64_t c = *it >> coarsen;
    if (count == 0 || c != previous) {
      ++count;
      previous = c;
    }
  }
  return count;
}

IntervalUnion projection_cover(const IFSSystem& system, const Rational& r, std::size_t cap) {
  const auto projected = system.projected();
  const auto maps = stopping_maps(projected, r, cap);
  std::vector<Interval> parts;
  parts.reserve(maps.size());
  for (const auto& s : maps) parts.push_back(image(s, Interval{0, 1}));
  return IntervalUnion(std::move(parts));
}

IntervalUnion slice_approximant(const IFSSystem& system, const Rational& x, const Rational& r, std::size_t cap) {
  if (x < 0 || x > 1) throw DomainError("slice position must lie in [0,1], got " + to_string(x));
  if (!(r > 0 && r < 1)) throw DomainError("slice scale r must lie in (0,1), got " + to_string(r));
  std::vector<Interval> parts;
  std::vector<AffineMap2D> frontier{AffineMap2D::identity_map()};
  std::unordered_set<AffineMap2D, AffineMap2DHash> done;
  while (!frontier.empty()) {
    std::unordered_set<AffineMap2D, AffineMap2DHash> next;
    for (const auto& t : frontier) {
      for (const auto& g : system.maps()) {
        AffineMap2D h = t.then_inner(g);
        if (x < h.u || x > h.u + h.alpha) continue;
        if (h.alpha <= r) {
          if (done.insert(h).second) parts.push_back({h.v, h.v + h.beta});
          check_cap(done.size(), cap, "slice approximant");
        } else {
          next.insert(std::move(h));
          check_cap(next.size(), cap, "slice approximant");
        }
      }
    }
    frontier.assign(next.begin(), next.end());
  }
  return IntervalUnion(std::move(parts));
}

Rational pseudo_distance(const IntervalUnion& a, const IntervalUnion& b) {
  if (a.empty() || b.empty()) throw DomainError("Hausdorff distance needs nonempty sets");
  // dist(., B) restricted to A peaks at an endpoint of A or at a gap midpoint of B.
  Rational best = 0;
  for (const auto& iv : a.intervals()) {
    best = max(best, b.distance_to(iv.lo));
    best = max(best, b.distance_to(iv.hi));
  }
  const auto& parts = b.intervals();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    Rational mid = (parts[k - 1].hi + parts[k].lo) / 2;
    if (a.contains(mid)) best = max(best, b.distance_to(mid));
  }
  return best;
}

Rational hausdorff_distance(const IntervalUnion& a, const IntervalUnion& b) {
  return max(pseudo_distance(a, b), pseudo_distance(b, a));
}

void write_cells_csv(std::ostream& out, const GridCover& grid) {
  out << "ix,iy\n";
  for (const auto& c : grid.cells()) out << c.ix << ',' << c.iy << '\n';
}

void write_cells_rle(std::ostream& out, const GridCover& grid) {
  const auto cells = grid.cells();
  std::vector<std::pair<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>>> rows;
  for (const auto& c : cells) {
    if (rows.empty() || rows.back().first != c.iy) rows.push_back({c.iy, {}});
    auto& runs = rows.back().second;
    if (!runs.empty() && runs.back().first + runs.back().second == c.ix)
      ++runs.back().second;
    else
      runs.push_back({c.ix, 1});
  }
  out.write("AFRLE1\0\0", 8);
  put_u32(out, static_cast<std::uint32_t>(grid.scale_exponent()));
  put_u32(out, static_cast<std::uint32_t>(rows.size()));
  for (const auto& [iy, runs] : rows) {
    put_u32(out, iy);
    put_u32(out, static_cast<std::uint32_t>(runs.size()));
    for (const auto& [start, length] : runs) {
      put_u32(out, start);
      put_u32(out, length);
    }
  }
}

GridCover read_cells_rle(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "AFRLE1\0\0", 8) != 0) throw ValidationError("not an RLE cell file");
  const int n = static_cast<int>(get_u32(in));
  check_grid_scale(n);
  const std::uint32_t rows = get_u32(in);
  std::vector<std::uint64_t> codes;
  for (std::uint32_t k = 0; k < rows; ++k) {
    const std::uint32_t iy = get_u32(in);
    const std::uint32_t runs = get_u32(in);
    for (std::uint32_t j = 0; j < runs; ++j) {
      const std::uint32_t start = get_u32(in);
      const std::uint32_t length = get_u32(in);
      for (std::uint32_t ix = start; ix < start + length; ++ix) codes.push_back(morton_encode(ix, iy));
    }
  }
  return GridCover(n, std::move(codes));
}

void write_pgm(std::ostream& out, const GridCover& grid, int max_side_log2) {
  const int level = std::min(grid.scale_exponent(), max_side_log2);
  const int shift = grid.scale_exponent() - level;
  const std::size_t side = std::size_t{1} << level;
  std::vector<unsigned char> pixels(side * side, 255);
  for (const auto& c : grid.cells()) {
    const std::size_t px = c.ix >> shift;
    const std::size_t py = c.iy >> shift;
    pixels[(side - 1 - py) * side + px] = 0;
  }
  out << "P5\n" << side << ' ' << side << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace affdim
