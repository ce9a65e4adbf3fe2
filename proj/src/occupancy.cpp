#include "affdim/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "affdim/covering.hpp"

namespace affdim {

namespace {

Integer floor_scaled(const Rational& q, int level) {
  Integer num = q.get_num();
  num <<= level;
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  return out;
}

Integer ceil_scaled(const Rational& q, int level) {
  Integer num = q.get_num();
  num <<= level;
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  return out;
}

struct WindowBounds {
  Rational x0, x1, y0, y1;
};

WindowBounds bounds_of(const DyadicWindow& w) {
  const Rational side = pow2(-w.level);
  Rational x0 = Rational(w.ix) * side;
  Rational y0 = Rational(w.iy) * side;
  return {x0, x0 + side, y0, y0 + side};
}

bool meets(const Rational& a0, const Rational& a1, const Rational& b0, const Rational& b1) {
  return !(a1 < b0 || b1 < a0);
}

std::vector<Similarity1D> distinct_maps(std::vector<Similarity1D> maps) {
  std::sort(maps.begin(), maps.end());
  maps.erase(std::unique(maps.begin(), maps.end()), maps.end());
  return maps;
}

// When the first-level images cover [0,1], [0,1] is invariant and hence the attractor.
bool attractor_is_unit_interval(const std::vector<Similarity1D>& maps) {
  std::vector<Interval> parts;
  for (const auto& m : maps) parts.push_back(image(m, Interval{0, 1}));
  return IntervalUnion(std::move(parts)) == IntervalUnion::unit();
}

// Shared breadth-first expansion of a 1-D similarity IFS restricted to [lo, hi].
template <class Emit>
void expand_linear(const std::vector<Similarity1D>& gens, const Similarity1D& start, const Rational& lo,
                   const Rational& hi, const Rational& r, Emit&& emit, std::size_t cap) {
  std::vector<Similarity1D> frontier{start};
  while (!frontier.empty()) {
    std::unordered_set<Similarity1D, Similarity1DHash> next;
    for (const auto& s : frontier) {
      if (s.ratio <= r) {
        emit(s);
        continue;
      }
      for (const auto& g : gens) {
        Similarity1D h = s.then_inner(g);
        if (meets(h.translate, h.translate + h.ratio, lo, hi)) next.insert(std::move(h));
      }
      check_cap(next.size(), cap, "window expansion");
    }
    frontier.assign(next.begin(), next.end());
  }
}

class PlanarAttractor final : public CoverSource {
 public:
  explicit PlanarAttractor(const IFSSystem& system)
      : system_(system),
        projected_(distinct_maps(system.projected())),
        interval_projection_(attractor_is_unit_interval(projected_)) {
    const auto& t = system.map(0);
    fixed_ = {t.u / (1 - t.alpha), t.v / (1 - t.beta)};
  }
  unsigned dimension() const override { return 2; }
  std::string describe() const override { return "planar attractor"; }

  void for_each_piece(const DyadicWindow& window, int level, const PieceSink& emit) const override {
    const WindowBounds w = bounds_of(window);
    const Rational r = pow2(-level);
    const std::size_t cap = enumeration_cap();
    struct Strip {
      Similarity1D x;
      Rational y0, y1;
      bool operator==(const Strip& o) const { return x == o.x && y0 == o.y0 && y1 == o.y1; }
    };
    struct StripHash {
      std::size_t operator()(const Strip& s) const noexcept {
        std::size_t seed = Similarity1DHash{}(s.x);
        hash_combine(seed, hash_value(s.y0));
        return seed;
      }
    };
    // Phase 1: refine until the vertical side drops to r. Phase 2: the strip
    // T_sigma([0,1]^2) is already thin, so only the horizontal factor is refined.
    std::unordered_set<Strip, StripHash> strips;
    std::vector<AffineMap2D> frontier{AffineMap2D::identity_map()};
    while (!frontier.empty()) {
      std::unordered_set<AffineMap2D, AffineMap2DHash> next;
      for (const auto& t : frontier) {
        if (t.beta <= r) {
          strips.insert({Similarity1D{t.alpha, t.u}, t.v, t.v + t.beta});
          continue;
        }
        for (const auto& g : system_.maps()) {
          AffineMap2D h = t.then_inner(g);
          if (meets(h.u, h.u + h.alpha, w.x0, w.x1) && meets(h.v, h.v + h.beta, w.y0, w.y1)) next.insert(std::move(h));
        }
        check_cap(next.size(), cap, "window expansion");
      }
      frontier.assign(next.begin(), next.end());
    }
    for (const auto& s : strips) {
      if (interval_projection_) {
        // The strip's projection is exactly S_sigma([0,1]).
        emit(Box{max(s.x.translate, w.x0), min(s.x.translate + s.x.ratio, w.x1), s.y0, s.y1});
        continue;
      }
      expand_linear(
          projected_, s.x, w.x0, w.x1, r,
          [&](const Similarity1D& x) { emit(Box{x.translate, x.translate + x.ratio, s.y0, s.y1}); }, cap);
    }
  }

  std::vector<Point> sample_points(std::size_t count, int level, std::uint64_t seed) const override {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, system_.size() - 1);
    const Rational r = pow2(-level - 1);
    std::vector<Point> out;
    for (std::size_t k = 0; k < count; ++k) {
      AffineMap2D t = AffineMap2D::identity_map();
      while (t.alpha > r) t = t.then_inner(system_.map(pick(rng)));
      out.push_back({t.alpha * fixed_.x + t.u, t.beta * fixed_.y + t.v});
    }
    return out;
  }

 private:
  IFSSystem system_;
  std::vector<Similarity1D> projected_;
  bool interval_projection_;
  Point fixed_;
};

class LinearAttractor final : public CoverSource {
 public:
  LinearAttractor(std::vector<Similarity1D> maps, ApproxMode mode) : maps_(distinct_maps(std::move(maps))), mode_(mode) {
    validate_similarities(maps_);
    unit_ = mode_ == ApproxMode::hull && attractor_is_unit_interval(maps_);
    fixed_ = maps_.front().translate / (1 - maps_.front().ratio);
  }
  unsigned dimension() const override { return 1; }
  std::string describe() const override { return mode_ == ApproxMode::hull ? "linear attractor" : "linear anchors"; }

  void for_each_piece(const DyadicWindow& window, int level, const PieceSink& emit) const override {
    const WindowBounds w = bounds_of(window);
    if (unit_) {
      if (meets(0, 1, w.x0, w.x1)) emit(Box{max(Rational(0), w.x0), min(Rational(1), w.x1), 0, 0});
      return;
    }
    expand_linear(
        maps_, Similarity1D::identity(), w.x0, w.x1, pow2(-level),
        [&](const Similarity1D& s) {
          if (mode_ == ApproxMode::hull) {
            emit(Box{s.translate, s.translate + s.ratio, 0, 0});
          } else {
            Rational p = s(fixed_);
            emit(Box{p, p, 0, 0});
          }
        },
        enumeration_cap());
  }

  std::vector<Point> sample_points(std::size_t count, int level, std::uint64_t seed) const override {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, maps_.size() - 1);
    const Rational r = pow2(-level - 1);
    std::vector<Point> out;
    for (std::size_t k = 0; k < count; ++k) {
      Similarity1D s;
      while (s.ratio > r) s = s.then_inner(maps_[pick(rng)]);
      out.push_back({s(fixed_), 0});
    }
    return out;
  }

 private:
  std::vector<Similarity1D> maps_;
  ApproxMode mode_;
  bool unit_ = false;
  Rational fixed_;
};

class IntervalSet final : public CoverSource {
 public:
  explicit IntervalSet(IntervalUnion set) : set_(std::move(set)) {
    if (set_.empty()) throw DomainError("interval source needs a nonempty set");
  }
  unsigned dimension() const override { return 1; }
  std::string describe() const override { return "interval union"; }
  void for_each_piece(const DyadicWindow& window, int, const PieceSink& emit) const override {
    const WindowBounds w = bounds_of(window);
    for (const auto& iv : set_.intervals())
      if (meets(iv.lo, iv.hi, w.x0, w.x1)) emit(Box{max(iv.lo, w.x0), min(iv.hi, w.x1), 0, 0});
  }

 private:
  IntervalUnion set_;
};

class FibreApprox final : public CoverSource {
 public:
  FibreApprox(const IFSSystem& system, const OmegaPrefix& prefix, ApproxMode mode, std::size_t cap) : mode_(mode) {
    for_each_fibre_map(
        system, prefix.last(), std::nullopt, [&](const Similarity1D& f) { maps_.push_back(f); }, cap);
    std::sort(maps_.begin(), maps_.end(),
              [](const Similarity1D& a, const Similarity1D& b) { return a.translate < b.translate; });
    widest_ = 0;
    for (const auto& f : maps_) widest_ = max(widest_, f.ratio);
    level_ = widest_ > 0 ? static_cast<int>(std::floor(-log2(widest_))) : 0;
  }
  unsigned dimension() const override { return 1; }
  int max_level() const override { return mode_ == ApproxMode::hull ? level_ : std::numeric_limits<int>::max(); }
  std::string describe() const override { return mode_ == ApproxMode::hull ? "fibre hull" : "fibre anchors"; }
  std::size_t map_count() const { return maps_.size(); }

  void for_each_piece(const DyadicWindow& window, int, const PieceSink& emit) const override {
    const WindowBounds w = bounds_of(window);
    const Rational from = w.x0 - widest_;
    auto it = std::lower_bound(maps_.begin(), maps_.end(), from,
                               [](const Similarity1D& f, const Rational& x) { return f.translate < x; });
    for (; it != maps_.end() && it->translate <= w.x1; ++it) {
      if (mode_ == ApproxMode::hull) {
        if (meets(it->translate, it->translate + it->ratio, w.x0, w.x1))
          emit(Box{it->translate, it->translate + it->ratio, 0, 0});
      } else {
        emit(Box{it->translate, it->translate, 0, 0});
      }
    }
  }

  std::vector<Point> sample_points(std::size_t count, int, std::uint64_t seed) const override {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, maps_.size() - 1);
    std::vector<Point> out;
    for (std::size_t k = 0; k < count && !maps_.empty(); ++k) out.push_back({maps_[pick(rng)].translate, 0});
    return out;
  }

 private:
  std::vector<Similarity1D> maps_;
  ApproxMode mode_;
  Rational widest_;
  int level_ = 0;
};

class Product final : public CoverSource {
 public:
  Product(SourcePtr a, SourcePtr b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_->dimension() != 1 || b_->dimension() != 1) throw DomainError("product source needs two linear sources");
  }
  unsigned dimension() const override { return 2; }
  int max_level() const override { return std::min(a_->max_level(), b_->max_level()); }
  std::string describe() const override { return a_->describe() + " x " + b_->describe(); }

  void for_each_piece(const DyadicWindow& window, int level, const PieceSink& emit) const override {
    std::vector<Box> xs, ys;
    a_->for_each_piece(DyadicWindow{window.level, window.ix, 0}, level, [&](const Box& b) { xs.push_back(b); });
    if (xs.empty()) return;
    b_->for_each_piece(DyadicWindow{window.level, window.iy, 0}, level, [&](const Box& b) { ys.push_back(b); });
    for (const auto& x : xs)
      for (const auto& y : ys) emit(Box{x.x0, x.x1, y.x0, y.x1});
  }

  void collect_codes(const DyadicWindow& window, int level, std::vector<std::uint64_t>& codes,
                     std::size_t cap) const override {
    const auto xs = occupied_cells(*a_, DyadicWindow{window.level, window.ix, 0}, level, cap);
    if (xs.empty()) return;
    const auto ys = occupied_cells(*b_, DyadicWindow{window.level, window.iy, 0}, level, cap);
    check_cap(codes.size() + xs.size() * ys.size(), cap, "occupied cells");
    for (auto y : ys)
      for (auto x : xs) codes.push_back(morton_encode(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)));
  }

  std::vector<Point> sample_points(std::size_t count, int level, std::uint64_t seed) const override {
    auto xs = a_->sample_points(count, level, seed);
    auto ys = b_->sample_points(count, level, seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Point> out;
    for (std::size_t k = 0; k < std::min(xs.size(), ys.size()); ++k) out.push_back({xs[k].x, ys[k].x});
    return out;
  }

 private:
  SourcePtr a_, b_;
};

}  // namespace

std::vector<Point> CoverSource::sample_points(std::size_t count, int level, std::uint64_t seed) const {
  const int coarse = std::min({level, max_level(), dimension() == 2 ? 10 : 20});
  const auto cells = occupied_cells(*this, DyadicWindow{}, coarse);
  std::vector<Point> out;
  if (cells.empty()) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  const Rational side = pow2(-coarse);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint32_t ix = 0, iy = 0;
    const std::uint64_t code = cells[pick(rng)];
    if (dimension() == 2)
      morton_decode(code, ix, iy);
    else
      ix = static_cast<std::uint32_t>(code);
    out.push_back({(Rational(ix) + Rational(1, 2)) * side, (Rational(iy) + Rational(1, 2)) * side});
  }
  return out;
}

void CoverSource::collect_codes(const DyadicWindow& window, int level, std::vector<std::uint64_t>& codes,
                                std::size_t cap) const {
  const int gap = level - window.level;
  const unsigned dim = dimension();
  const Integer base_x = window.ix << gap;
  const Integer base_y = window.iy << gap;
  const Integer last_local = (Integer(1) << gap) - 1;
  auto local_range = [&](const Rational& lo, const Rational& hi, const Integer& base, std::uint64_t& a,
                         std::uint64_t& b) {
    Integer first = ceil_scaled(lo, level) - 1 - base;
    Integer last = floor_scaled(hi, level) - base;
    if (first < 0) first = 0;
    if (last > last_local) last = last_local;
    if (first > last) return false;
    a = to_u64(first);
    b = to_u64(last);
    return true;
  };
  for_each_piece(window, level, [&](const Box& box) {
    std::uint64_t x0, x1;
    if (!local_range(box.x0, box.x1, base_x, x0, x1)) return;
    if (dim == 1) {
      for (std::uint64_t x = x0; x <= x1; ++x) codes.push_back(x);
    } else {
      std::uint64_t y0, y1;
      if (!local_range(box.y0, box.y1, base_y, y0, y1)) return;
      for (std::uint64_t y = y0; y <= y1; ++y)
        for (std::uint64_t x = x0; x <= x1; ++x)
          codes.push_back(morton_encode(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)));
    }
    if (codes.size() > cap) {
      std::sort(codes.begin(), codes.end());
      codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
      check_cap(codes.size(), cap, "occupied cells");
    }
  });
}

std::vector<std::uint64_t> occupied_cells(const CoverSource& source, const DyadicWindow& window, int level,
                                          std::size_t cap) {
  const int gap = level - window.level;
  if (gap < 0) throw ScaleOrderError("cell level must not be coarser than the window");
  if (gap > (source.dimension() == 2 ? 31 : 62)) throw DomainError("window gap too large for cell codes");
  std::vector<std::uint64_t> codes;
  source.collect_codes(window, level, codes, cap);
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

std::vector<std::size_t> window_counts(const CoverSource& source, const DyadicWindow& window, int gap,
                                       std::size_t cap, int refine_levels) {
  const unsigned dim = source.dimension();
  // Pieces may be as wide as a cell at the level they are emitted for, which
  // inflates the count there by up to 3^dim. Counting a few levels finer and
  // coarsening leaves only the set's own boundary contacts.
  const int local_bits = dim == 2 ? 31 : 62;
  int finest = window.level + gap + refine_levels;
  finest = std::min({finest, source.max_level(), window.level + local_bits});
  finest = std::max(finest, window.level + gap);
  const auto codes = occupied_cells(source, window, finest, cap);
  std::vector<std::size_t> counts(static_cast<std::size_t>(gap) + 1, 0);
  for (int g = 0; g <= gap; ++g) {
    const unsigned shift = dim * static_cast<unsigned>(finest - window.level - g);
    std::size_t count = 0;
    std::uint64_t previous = 0;
    for (auto c : codes) {
      const std::uint64_t k = c >> shift;
      if (count == 0 || k != previous) {
        ++count;
        previous = k;
      }
    }
    counts[static_cast<std::size_t>(g)] = count;
  }
  return counts;
}

DyadicWindow window_containing(const Point& p, int level, unsigned dimension) {
  const Integer top = (Integer(1) << level) - 1;
  auto index = [&](const Rational& v) {
    Integer i = floor_scaled(v, level);
    if (i > top) i = top;
    if (i < 0) i = 0;
    return i;
  };
  return DyadicWindow{level, index(p.x), dimension == 2 ? index(p.y) : Integer(0)};
}

std::vector<DyadicWindow> select_windows(const CoverSource& source, int level, std::size_t limit, std::uint64_t seed,
                                         std::size_t cap) {
  const unsigned dim = source.dimension();
  std::vector<DyadicWindow> out;
  if (static_cast<unsigned>(level) * dim <= 16 && level <= source.max_level()) {
    const auto cells = occupied_cells(source, DyadicWindow{}, level, cap);
    std::vector<std::size_t> chosen(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) chosen[k] = k;
    if (cells.size() > limit) {
      std::mt19937_64 rng(seed);
      std::shuffle(chosen.begin(), chosen.end(), rng);
      chosen.resize(limit);
    }
    for (auto k : chosen) {
      std::uint32_t ix = 0, iy = 0;
      if (dim == 2)
        morton_decode(cells[k], ix, iy);
      else
        ix = static_cast<std::uint32_t>(cells[k]);
      out.push_back(DyadicWindow{level, Integer(ix), Integer(iy)});
    }
  } else {
    for (const auto& p : source.sample_points(2 * limit, level, seed)) {
      DyadicWindow w = window_containing(p, level, dim);
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const DyadicWindow& o) { return o.ix == w.ix && o.iy == w.iy; });
      if (!seen) out.push_back(std::move(w));
      if (out.size() == limit) break;
    }
  }
  std::sort(out.begin(), out.end(), [](const DyadicWindow& a, const DyadicWindow& b) {
    return a.ix != b.ix ? a.ix < b.ix : a.iy < b.iy;
  });
  return out;
}

SourcePtr attractor_source(const IFSSystem& system) { return std::make_shared<PlanarAttractor>(system); }

SourcePtr linear_source(std::vector<Similarity1D> maps, ApproxMode mode) {
  return std::make_shared<LinearAttractor>(std::move(maps), mode);
}

SourcePtr interval_source(IntervalUnion set) { return std::make_shared<IntervalSet>(std::move(set)); }

SourcePtr fibre_source(const IFSSystem& system, const OmegaPrefix& prefix, ApproxMode mode, std::size_t cap) {
  return std::make_shared<FibreApprox>(system, prefix, mode, cap);
}

SourcePtr product_source(SourcePtr a, SourcePtr b) { return std::make_shared<Product>(std::move(a), std::move(b)); }

}  // namespace affdim
