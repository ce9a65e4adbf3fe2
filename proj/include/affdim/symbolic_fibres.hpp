#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "affdim/core_ifs.hpp"
#include "affdim/interval_union.hpp"

namespace affdim {

/// Element of the projected semigroup. Keys compare equal exactly when the
/// underlying similarities agree as functions.
using SemigroupKey = Similarity1D;
using SemigroupKeyHash = Similarity1DHash;

/// Finite prefix (f_1, ..., f_k) of a sequence eta in Omega, together with a
/// generator word realizing it: f_j = f_{j-1} o S_{i_j}.
struct OmegaPrefix {
  Word indices;
  std::vector<SemigroupKey> keys;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  /// f_k, or the identity for the empty prefix.
  SemigroupKey last() const { return keys.empty() ? SemigroupKey::identity() : keys.back(); }

  /// Prefixes are the same element of Omega's cylinder iff their key sequences agree.
  friend bool operator==(const OmegaPrefix& a, const OmegaPrefix& b) { return a.keys == b.keys; }
};

OmegaPrefix make_prefix(const IFSSystem& system, const Word& indices);

/// Repeats the prefix's index word periodically until it has `depth` letters.
OmegaPrefix extend_periodic(const IFSSystem& system, const OmegaPrefix& prefix, std::size_t depth);

/// Partition of I^n by exact projected similarity: key -> words (lexicographic).
std::map<SemigroupKey, std::vector<Word>> fibre_classes(const IFSSystem& system, std::size_t n,
                                                        std::size_t cap = enumeration_cap());

/// f_k([0,1]), an interval of width ratio(f_k) that contains x_eta for every
/// extension of the prefix.
Interval anchor_point(const OmegaPrefix& prefix);

/// All words sigma (of any length) with S_sigma = target, in lexicographic order.
std::vector<Word> fibre_class_words(const IFSSystem& system, const SemigroupKey& target,
                                    std::size_t cap = enumeration_cap());

/// Visits each distinct fibred map F_sigma, sigma in J_target. When `window`
/// is set, branches whose vertical image cannot meet it are pruned (valid for
/// images of subsets of [0,1]). Returns the number of search nodes expanded.
std::size_t for_each_fibre_map(const IFSSystem& system, const SemigroupKey& target,
                               const std::optional<Interval>& window,
                               const std::function<void(const Similarity1D&)>& visit,
                               std::size_t cap = enumeration_cap());

/// E_{k,eta} = union over sigma in J_{f_k} of F_sigma(X).
IntervalUnion fibre_approximant(const IFSSystem& system, const OmegaPrefix& prefix,
                                const IntervalUnion& X = IntervalUnion::unit(), std::size_t cap = enumeration_cap());

/// Certified bound diam(X) * beta_max^k on the pseudo-distance from E_{k,eta}
/// to any deeper approximant (and to the limit fibre).
Rational fibre_limit_bound(const IFSSystem& system, std::size_t k, const IntervalUnion& X = IntervalUnion::unit());

/// Exact check that F_omega(E_{k-m, shifted}) is contained in E_{k, eta} for
/// every omega in J_{f_m}.
bool check_shift_embedding(const IFSSystem& system, const OmegaPrefix& prefix, std::size_t split,
                           std::size_t cap = enumeration_cap());

/// One representative (lexicographically smallest word) per distinct key
/// sequence of the given length.
std::vector<OmegaPrefix> enumerate_prefixes(const IFSSystem& system, std::size_t depth,
                                            std::size_t cap = enumeration_cap());

}  // namespace affdim
