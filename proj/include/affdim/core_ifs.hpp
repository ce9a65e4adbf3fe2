#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "affdim/errors.hpp"
#include "affdim/rational.hpp"

namespace affdim {

/// Finite index sequence over the alphabet {0, ..., |I|-1}. Indices are
/// 0-based in code; text and JSON output print them 1-based.
using Word = std::vector<std::uint32_t>;

std::string format_word(const Word& word);  // "(1,3)"

/// One-dimensional similarity x -> ratio * x + translate.
struct Similarity1D {
  Rational ratio{1};
  Rational translate{0};

  static Similarity1D identity() { return {}; }

  bool is_identity() const { return ratio == 1 && translate == 0; }
  Rational operator()(const Rational& x) const { return ratio * x + translate; }

  /// Composition (*this) o inner.
  Similarity1D then_inner(const Similarity1D& inner) const {
    return {ratio * inner.ratio, ratio * inner.translate + translate};
  }

  friend bool operator==(const Similarity1D& a, const Similarity1D& b) {
    return a.ratio == b.ratio && a.translate == b.translate;
  }
  friend bool operator<(const Similarity1D& a, const Similarity1D& b) {
    if (a.ratio != b.ratio) return a.ratio < b.ratio;
    return a.translate < b.translate;
  }
};

struct Similarity1DHash {
  std::size_t operator()(const Similarity1D& s) const noexcept {
    std::size_t seed = hash_value(s.ratio);
    hash_combine(seed, hash_value(s.translate));
    return seed;
  }
};

/// Diagonal affine map (x, y) -> (alpha x + u, beta y + v). Generators obey
/// 0 < beta < alpha < 1 and map the unit square into itself; the empty-word
/// composition is the tagged identity record.
struct AffineMap2D {
  Rational alpha{1};
  Rational beta{1};
  Rational u{0};
  Rational v{0};
  bool identity = true;

  /// Validated generator. Throws ValidationError naming the violated inequality.
  static AffineMap2D make(Rational alpha, Rational beta, Rational u, Rational v);
  static AffineMap2D identity_map() { return {}; }

  /// (*this) o inner.
  AffineMap2D then_inner(const AffineMap2D& inner) const;

  friend bool operator==(const AffineMap2D& a, const AffineMap2D& b) {
    return a.identity == b.identity && a.alpha == b.alpha && a.beta == b.beta && a.u == b.u && a.v == b.v;
  }
};

struct AffineMap2DHash {
  std::size_t operator()(const AffineMap2D& m) const noexcept;
};

/// Checks the generator invariants; returns an empty string when they hold,
/// otherwise a message naming the first violated inequality.
std::string generator_violation(const Rational& alpha, const Rational& beta, const Rational& u, const Rational& v);

/// Dominated rectangular self-affine IFS.
class IFSSystem {
 public:
  explicit IFSSystem(std::vector<AffineMap2D> maps);

  std::size_t size() const { return maps_.size(); }
  const AffineMap2D& map(std::size_t i) const { return maps_.at(i); }
  const std::vector<AffineMap2D>& maps() const { return maps_; }

  const Rational& alpha_max() const { return alpha_max_; }
  const Rational& alpha_min() const { return alpha_min_; }
  const Rational& beta_max() const { return beta_max_; }
  const Rational& beta_min() const { return beta_min_; }
  /// max_i log(alpha_i) / log(beta_i), the left end of the spectrum-formula range.
  double theta0() const { return theta0_; }

  std::vector<Similarity1D> projected() const;
  std::vector<Similarity1D> fibred() const;
  std::vector<Rational> alphas() const;

 private:
  std::vector<AffineMap2D> maps_;
  Rational alpha_max_, alpha_min_, beta_max_, beta_min_;
  double theta0_ = 0;
};

/// T_sigma = T_{i_1} o ... o T_{i_n}; the empty word yields the identity record.
AffineMap2D compose_word(const IFSSystem& system, const Word& word);

/// Horizontal similarity S with S o pi = pi o T.
Similarity1D project(const AffineMap2D& map);
/// Vertical similarity F with F o pibar = pibar o T.
Similarity1D fibre_map(const AffineMap2D& map);

/// Composition S_{i_1} o ... o S_{i_n} of one-dimensional maps.
Similarity1D compose_similarities(std::span<const Similarity1D> maps, const Word& word);

/// Validates a one-dimensional similarity system (ratios in (0,1), images in [0,1]).
void validate_similarities(std::span<const Similarity1D> maps);

/// The stopping set Lambda_r: words with prod ratios <= r < prod of the word
/// without its last letter, in lexicographic order.
std::vector<Word> stopping_words(std::span<const Rational> ratios, const Rational& r,
                                 std::size_t cap = enumeration_cap());

/// Distinct maps {S_sigma : sigma in Lambda_r}, deduplicated by exact equality.
std::vector<Similarity1D> stopping_maps(std::span<const Similarity1D> maps, const Rational& r,
                                        std::size_t cap = enumeration_cap());

}  // namespace affdim
