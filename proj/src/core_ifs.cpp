#include "affdim/core_ifs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_set>

namespace affdim {

std::size_t enumeration_cap() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("AFFINE_DIM_CAP")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return static_cast<std::size_t>(10'000'000);
  }();
  return cap;
}

void check_cap(std::size_t count, std::size_t cap, const char* what) {
  if (count > cap) throw ResourceError(std::string(what) + " needs " + std::to_string(count) + " items", cap);
}

std::string format_word(const Word& word) {
  std::string out = "(";
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(word[k] + 1);
  }
  return out + ")";
}

std::string generator_violation(const Rational& alpha, const Rational& beta, const Rational& u, const Rational& v) {
  auto show = [](const Rational& q) { return to_string(q); };
  if (!(beta > 0)) return "requires 0 < beta (got beta=" + show(beta) + ")";
  if (!(beta < alpha))
    return "requires beta < alpha (got beta=" + show(beta) + ", alpha=" + show(alpha) + ")";
  if (!(alpha < 1)) return "requires alpha < 1 (got alpha=" + show(alpha) + ")";
  if (u < 0) return "requires 0 <= u (got u=" + show(u) + ")";
  if (u > 1 - alpha) return "requires u <= 1 - alpha (got u=" + show(u) + ", alpha=" + show(alpha) + ")";
  if (v < 0) return "requires 0 <= v (got v=" + show(v) + ")";
  if (v > 1 - beta) return "requires v <= 1 - beta (got v=" + show(v) + ", beta=" + show(beta) + ")";
  return {};
}

AffineMap2D AffineMap2D::make(Rational alpha, Rational beta, Rational u, Rational v) {
  for (Rational* c : {&alpha, &beta, &u, &v}) c->canonicalize();
  if (auto msg = generator_violation(alpha, beta, u, v); !msg.empty()) throw ValidationError(msg);
  return {std::move(alpha), std::move(beta), std::move(u), std::move(v), false};
}

AffineMap2D AffineMap2D::then_inner(const AffineMap2D& inner) const {
  if (identity) return inner;
  if (inner.identity) return *this;
  return {alpha * inner.alpha, beta * inner.beta, alpha * inner.u + u, beta * inner.v + v, false};
}

std::size_t AffineMap2DHash::operator()(const AffineMap2D& m) const noexcept {
  std::size_t seed = hash_value(m.alpha);
  hash_combine(seed, hash_value(m.beta));
  hash_combine(seed, hash_value(m.u));
  hash_combine(seed, hash_value(m.v));
  return seed;
}

IFSSystem::IFSSystem(std::vector<AffineMap2D> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw ValidationError("a system needs at least one map");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const auto& m = maps_[i];
    if (auto msg = generator_violation(m.alpha, m.beta, m.u, m.v); !msg.empty())
      throw ValidationError("map " + std::to_string(i + 1) + ": " + msg);
    maps_[i].identity = false;
  }
  alpha_max_ = alpha_min_ = maps_.front().alpha;
  beta_max_ = beta_min_ = maps_.front().beta;
  theta0_ = 0;
  for (const auto& m : maps_) {
    alpha_max_ = max(alpha_max_, m.alpha);
    alpha_min_ = min(alpha_min_, m.alpha);
    beta_max_ = max(beta_max_, m.beta);
    beta_min_ = min(beta_min_, m.beta);
    theta0_ = std::max(theta0_, std::log(to_double(m.alpha)) / std::log(to_double(m.beta)));
  }
}

std::vector<Similarity1D> IFSSystem::projected() const {
  std::vector<Similarity1D> out;
  out.reserve(maps_.size());
  for (const auto& m : maps_) out.push_back(project(m));
  return out;
}

std::vector<Similarity1D> IFSSystem::fibred() const {
  std::vector<Similarity1D> out;
  out.reserve(maps_.size());
  for (const auto& m : maps_) out.push_back(fibre_map(m));
  return out;
}

std::vector<Rational> IFSSystem::alphas() const {
  std::vector<Rational> out;
  for (const auto& m : maps_) out.push_back(m.alpha);
  return out;
}

AffineMap2D compose_word(const IFSSystem& system, const Word& word) {
  AffineMap2D acc = AffineMap2D::identity_map();
  for (auto i : word) {
    if (i >= system.size())
      throw InvalidWordError("index " + std::to_string(i + 1) + " out of range for a " +
                             std::to_string(system.size()) + "-map system");
    acc = acc.then_inner(system.map(i));
  }
  return acc;
}

Similarity1D project(const AffineMap2D& map) { return {map.alpha, map.u}; }
Similarity1D fibre_map(const AffineMap2D& map) { return {map.beta, map.v}; }

Similarity1D compose_similarities(std::span<const Similarity1D> maps, const Word& word) {
  Similarity1D acc;
  for (auto i : word) {
    if (i >= maps.size()) throw InvalidWordError("index " + std::to_string(i + 1) + " out of range");
    acc = acc.then_inner(maps[i]);
  }
  return acc;
}

void validate_similarities(std::span<const Similarity1D> maps) {
  if (maps.empty()) throw ValidationError("a similarity system needs at least one map");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& s = maps[i];
    const std::string tag = "map " + std::to_string(i + 1) + ": ";
    if (!(s.ratio > 0 && s.ratio < 1)) throw ValidationError(tag + "requires 0 < ratio < 1");
    if (s.translate < 0 || s.translate > 1 - s.ratio)
      throw ValidationError(tag + "requires 0 <= translate <= 1 - ratio");
  }
}

namespace {

void check_scale(const Rational& r) {
  if (!(r > 0 && r < 1)) throw DomainError("stopping scale r must lie in (0,1), got " + to_string(r));
}

}  // namespace

std::vector<Word> stopping_words(std::span<const Rational> ratios, const Rational& r, std::size_t cap) {
  check_scale(r);
  for (const auto& a : ratios)
    if (!(a > 0 && a < 1)) throw DomainError("ratios must lie in (0,1)");
  if (ratios.empty()) return {};
  std::vector<Word> out;
  Word current;
  // Depth-first expansion, pruned as soon as the product drops to r.
  struct Frame {
    Rational product;
    std::uint32_t next = 0;
  };
  std::vector<Frame> stack{{Rational(1), 0}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == ratios.size()) {
      stack.pop_back();
      if (!current.empty()) current.pop_back();
      continue;
    }
    const std::uint32_t i = top.next++;
    Rational product = top.product * ratios[i];
    current.push_back(i);
    if (product <= r) {
      out.push_back(current);
      check_cap(out.size(), cap, "stopping set");
      current.pop_back();
    } else {
      stack.push_back({std::move(product), 0});
    }
  }
  return out;
}

std::vector<Similarity1D> stopping_maps(std::span<const Similarity1D> maps, const Rational& r, std::size_t cap) {
  check_scale(r);
  std::unordered_set<Similarity1D, Similarity1DHash> done;
  std::vector<Similarity1D> frontier{Similarity1D::identity()};
  // Maps that coincide share every extension, so deduplicating the frontier
  // never loses a member of the stopping set.
  while (!frontier.empty()) {
    std::unordered_set<Similarity1D, Similarity1DHash> next;
    for (const auto& f : frontier) {
      for (const auto& g : maps) {
        Similarity1D h = f.then_inner(g);
        if (h.ratio <= r) {
          done.insert(std::move(h));
          check_cap(done.size(), cap, "stopping maps");
        } else {
          next.insert(std::move(h));
          check_cap(next.size(), cap, "stopping maps");
        }
      }
    }
    frontier.assign(next.begin(), next.end());
  }
  std::vector<Similarity1D> out(done.begin(), done.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace affdim
