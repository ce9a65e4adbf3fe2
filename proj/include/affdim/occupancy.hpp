#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "affdim/core_ifs.hpp"
#include "affdim/interval_union.hpp"
#include "affdim/symbolic_fibres.hpp"

namespace affdim {

/// Dyadic window of side 2^{-level} with lower-left corner (ix, iy) 2^{-level}.
/// Indices are arbitrary precision so windows can sit far below double resolution.
/// Linear sets ignore iy.
struct DyadicWindow {
  int level = 0;
  Integer ix{0};
  Integer iy{0};
};

/// Closed box [x0, x1] x [y0, y1]; linear sets use y0 = y1 = 0.
struct Box {
  Rational x0, x1, y0, y1;
};

struct Point {
  Rational x, y;
};

using PieceSink = std::function<void(const Box&)>;

/// Outer approximation of a compact set in [0,1] or [0,1]^2, queried window
/// by window. for_each_piece emits boxes of side at most 2^{-level} whose
/// union contains the set inside the window.
class CoverSource {
 public:
  virtual ~CoverSource() = default;
  virtual unsigned dimension() const = 0;
  /// Finest level at which pieces stay below the cell side.
  virtual int max_level() const { return std::numeric_limits<int>::max(); }
  virtual void for_each_piece(const DyadicWindow& window, int level, const PieceSink& emit) const = 0;
  /// Appends window-local cell codes (possibly repeated) of every cell of side
  /// 2^{-level} touched by a piece. The default rasterizes for_each_piece.
  virtual void collect_codes(const DyadicWindow& window, int level, std::vector<std::uint64_t>& codes,
                             std::size_t cap) const;
  /// Points on (or within 2^{-level} of) the set, for choosing windows.
  virtual std::vector<Point> sample_points(std::size_t count, int level, std::uint64_t seed) const;
  virtual std::string describe() const = 0;
};

using SourcePtr = std::shared_ptr<const CoverSource>;

/// Sorted window-local cell codes (Morton in the plane) of the occupied cells
/// of side 2^{-level} inside the window, closed-touching rule.
std::vector<std::uint64_t> occupied_cells(const CoverSource& source, const DyadicWindow& window, int level,
                                          std::size_t cap = enumeration_cap());

/// counts[g] = number of occupied cells of side 2^{-(window.level + g)} for g = 0..gap,
/// obtained by coarsening the occupancy `refine_levels` levels finer.
std::vector<std::size_t> window_counts(const CoverSource& source, const DyadicWindow& window, int gap,
                                       std::size_t cap = enumeration_cap(), int refine_levels = 1);

/// Occupied windows at `level`: every one when there are at most `limit`,
/// otherwise windows around seeded sample points. Sorted lexicographically.
std::vector<DyadicWindow> select_windows(const CoverSource& source, int level, std::size_t limit, std::uint64_t seed,
                                         std::size_t cap = enumeration_cap());

DyadicWindow window_containing(const Point& p, int level, unsigned dimension);

enum class ApproxMode { hull, anchor };

/// Planar attractor of a dominated rectangular IFS.
SourcePtr attractor_source(const IFSSystem& system);
/// Attractor of a one-dimensional similarity IFS (duplicates are dropped).
/// Hull mode covers with S_sigma([0,1]); anchor mode uses the points S_sigma(p).
SourcePtr linear_source(std::vector<Similarity1D> maps, ApproxMode mode = ApproxMode::hull);
SourcePtr interval_source(IntervalUnion set);
/// Fibre approximant E_k with X = [0,1] (hull) or X = {0} (anchor).
SourcePtr fibre_source(const IFSSystem& system, const OmegaPrefix& prefix, ApproxMode mode,
                       std::size_t cap = enumeration_cap());
/// Product A x B of two linear sources.
SourcePtr product_source(SourcePtr a, SourcePtr b);

}  // namespace affdim
