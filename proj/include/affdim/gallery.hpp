#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affdim/core_ifs.hpp"

namespace affdim {

struct KnownValue {
  std::string quantity;    // e.g. "dimA", "dimH(pi K)"
  double value = 0;
  std::string expression;  // closed form
  std::string provenance;  // why the value holds
};

struct GallerySystem {
  std::string name;
  std::string description;
  IFSSystem system;
  std::vector<KnownValue> known_values;
  std::string caveats;

  /// Value of the named quantity; throws DomainError when absent.
  double known(const std::string& quantity) const;
};

std::vector<GallerySystem> gallery_list();
/// Throws DomainError for unknown names.
GallerySystem gallery_get(const std::string& name);

/// Phi_lambda = {lambda x, lambda x + lambda - lambda^2, lambda x + 1 - lambda}.
std::vector<Similarity1D> phi_lambda(const Rational& lambda);
/// Six-map system with left column Phi_{lambda1} and right column Phi_{lambda2} as fibred maps.
IFSSystem six_map_system(const Rational& lambda1, const Rational& lambda2);
/// Strong-separation three-map system with ratios 1/N, 1/(N+1) and middle translate t.
IFSSystem ss_esc_system(unsigned N, const Rational& t);
/// Embeds a one-dimensional similarity IFS as maps (r x + c, r^2 y).
IFSSystem embed_linear(const std::vector<Similarity1D>& maps);

/// log((3 + sqrt 5) / 2) / log(1 / lambda).
double phi_dimension(double lambda);

}  // namespace affdim
