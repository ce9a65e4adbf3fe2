#include "affdim/gallery.hpp"

#include <cmath>

namespace affdim {

double GallerySystem::known(const std::string& quantity) const {
  for (const auto& k : known_values)
    if (k.quantity == quantity) return k.value;
  throw DomainError("gallery system " + name + " has no known value for " + quantity);
}

std::vector<Similarity1D> phi_lambda(const Rational& lambda) {
  if (!(lambda > 0 && lambda < 1)) throw DomainError("Phi_lambda needs lambda in (0,1)");
  return {{lambda, 0}, {lambda, lambda - lambda * lambda}, {lambda, 1 - lambda}};
}

IFSSystem six_map_system(const Rational& lambda1, const Rational& lambda2) {
  const Rational half(1, 2);
  std::vector<AffineMap2D> maps;
  // Order: T1..T6 alternate left and right columns.
  const auto left = phi_lambda(lambda1);
  const auto right = phi_lambda(lambda2);
  for (int k = 2; k >= 0; --k) {
    maps.push_back(AffineMap2D::make(half, lambda1, 0, left[static_cast<std::size_t>(k)].translate));
    maps.push_back(AffineMap2D::make(half, lambda2, half, right[static_cast<std::size_t>(k)].translate));
  }
  return IFSSystem(std::move(maps));
}

IFSSystem ss_esc_system(unsigned N, const Rational& t) {
  const Rational a(1, N), b(1, N + 1);
  Rational middle(N - 1, 2 * (N + 1));
  middle.canonicalize();
  return IFSSystem({AffineMap2D::make(a, b, 0, 0), AffineMap2D::make(a, b, t, middle),
                    AffineMap2D::make(a, b, 1 - a, Rational(N, N + 1))});
}

IFSSystem embed_linear(const std::vector<Similarity1D>& maps) {
  std::vector<AffineMap2D> out;
  for (const auto& s : maps) out.push_back(AffineMap2D::make(s.ratio, s.ratio * s.ratio, s.translate, 0));
  return IFSSystem(std::move(out));
}

double phi_dimension(double lambda) { return std::log((3 + std::sqrt(5.0)) / 2) / -std::log(lambda); }

namespace {

std::vector<Similarity1D> compose_all(const std::vector<Similarity1D>& outer, const std::vector<Similarity1D>& inner) {
  std::vector<Similarity1D> out;
  for (const auto& f : outer)
    for (const auto& g : inner) out.push_back(f.then_inner(g));
  return out;
}

}  // namespace

std::vector<GallerySystem> gallery_list() {
  const Rational quarter(1, 4), half(1, 2), third(1, 3);
  const double phi4 = phi_dimension(0.25);
  const double log2_3 = std::log(2.0) / std::log(3.0);
  const std::string phi_expr = "log((3+sqrt5)/2)/log 4";
  std::vector<GallerySystem> g;

  g.push_back({"six-map-quarter",
               "six maps, two columns x/2 and x/2+1/2, fibred maps Phi_{1/4} in both columns",
               six_map_system(quarter, quarter),
               {{"dimA", 1 + phi4, "1 + " + phi_expr,
                 "product of [0,1] with the Phi_{1/4} attractor; Assouad dimension adds for products of self-similar sets"},
                {"dimA(pi K)", 1, "1", "projection is [0,1]"},
                {"max fibre dim", phi4, phi_expr, "every fibre is the Phi_{1/4} attractor (WSC, equicontractive)"}},
               ""});

  g.push_back({"six-map-mixed",
               "six-map system with lambda1 = 1/4 (left column) and lambda2 = 1/8 (right column)",
               six_map_system(quarter, Rational(1, 8)),
               {{"dimA(pi K)", 1, "1", "projection is [0,1]"},
                {"dimA lower bound", 1 + phi4, "1 + " + phi_expr,
                 "the constant path through the left column has fibre Phi_{1/4}"}},
               "rational lambdas satisfy the WSC; this system exercises path-dependent fibres, not the failure of "
               "the WSC for small irrational-type parameters"});

  g.push_back({"phi-quarter",
               "Phi_{1/4} embedded as (x, y) -> (r x + c, r^2 y)",
               embed_linear(phi_lambda(quarter)),
               {{"dimA", phi4, phi_expr, "attractor of Phi_{1/4} (WSC) times a point"},
                {"dimB", phi4, phi_expr, "attractor of Phi_{1/4}"},
                {"dimA(pi K)", phi4, phi_expr, "projection is the Phi_{1/4} attractor"}},
               ""});

  g.push_back({"phi-lambda-product",
               "{f o g : f, g in Phi_{1/4}} embedded; same attractor as Phi_{1/4}",
               embed_linear(compose_all(phi_lambda(quarter), phi_lambda(quarter))),
               {{"dimA", phi4, phi_expr, "second iterate of Phi_{1/4} has the same attractor"},
                {"dimA(pi K)", phi4, phi_expr, "projection is the Phi_{1/4} attractor"}},
               "exact overlaps: (1,3) and (2,1) compose to the same map"});

  {
    const Rational l1(6, 25), l2(25, 96);
    g.push_back({"phi-lambda-mixed",
                 "{f o g : f in Phi_{6/25}, g in Phi_{25/96}} embedded, common ratio r = 1/16",
                 embed_linear(compose_all(phi_lambda(l1), phi_lambda(l2))),
                 {{"similarity dimension bound", std::log(9.0) / std::log(16.0), "log 9 / log 16",
                   "nine maps of ratio 1/16 bound every dimension of the attractor"}},
                 "rational surrogate: lambda1 is taken near sqrt(r) but rational, so the WSC cannot fail "
                 "exactly; only the growth of t_r at finite depth is observable"});
  }

  g.push_back({"pu-surrogate",
               "T1 = (7/10 x, y/4), T2 = (7/10 x + 3/10, y/4 + 3/4)",
               IFSSystem({AffineMap2D::make(Rational(7, 10), quarter, 0, 0),
                          AffineMap2D::make(Rational(7, 10), quarter, Rational(3, 10), Rational(3, 4))}),
               {{"formula lower bound", 1, "1",
                 "projection is [0,1] with no exact overlaps, fibres are singletons"},
                {"dimA (Garsia case)", 1 + std::log(2 / std::sqrt(2.0)) / std::log(4.0), "1 + log(2 beta)/log 4",
                 "only for 1/beta a Garsia number, e.g. beta = 1/sqrt 2"}},
               "7/10 replaces the Garsia parameter 1/sqrt 2; the Garsia value of dimA does not transfer, the "
               "failure of the WSC and the lower-bound tag do"});

  {
    // 8/81 + 9^-7: base-9 digits 0,8,0,0,0,0,1 follow a Cantor left endpoint for five digits.
    const Rational t = Rational(8, 81) + Rational(1, 4782969);
    g.push_back({"ss-esc-N9",
                 "strong-separation example with N = 9: ratios 1/9 and 1/10, middle translate t = 8/81 + 9^-7",
                 ss_esc_system(9, t),
                 {{"dimH", 0.5, "log 3 / log 9", "projected IFS has no exact overlaps and fibres are points"},
                  {"dimqA", 0.5, "log 3 / log 9", "quasi-Assouad equals Hausdorff when fibres carry no dimension"},
                  {"dimH(pi K)", 0.5, "log 3 / log 9", "three maps of ratio 1/9 without exact overlaps"}},
                 "rational t surrogate for an irrational t0 approximated by Cantor endpoints: no exact overlaps up "
                 "to n = 8 and Delta_n decays, but exact overlaps appear at n = 9; dimA >= 1 needs arbitrarily deep "
                 "near-overlaps and is not reproducible"});
  }

  g.push_back({"cantor-third",
               "middle-third Cantor set embedded as (x/3, y/9), (x/3 + 2/3, y/9)",
               embed_linear({{third, 0}, {third, Rational(2, 3)}}),
               {{"dimA", log2_3, "log 2 / log 3", "Ahlfors regular self-similar set"},
                {"dimB", log2_3, "log 2 / log 3", "Ahlfors regular self-similar set"},
                {"dimA(C x C)", 2 * log2_3, "2 log 2 / log 3", "Assouad dimension adds for products of self-similar sets"}},
               ""});

  g.push_back({"interval-x-cantor",
               "[0,1] x C: maps (x/2 + a, y/3 + b), a in {0, 1/2}, b in {0, 2/3}",
               IFSSystem({AffineMap2D::make(half, third, 0, 0), AffineMap2D::make(half, third, half, 0),
                          AffineMap2D::make(half, third, 0, Rational(2, 3)),
                          AffineMap2D::make(half, third, half, Rational(2, 3))}),
               {{"dimA", 1 + log2_3, "1 + log 2 / log 3", "product of [0,1] and the middle-third Cantor set"},
                {"dimB", 1 + log2_3, "1 + log 2 / log 3", "product of [0,1] and the middle-third Cantor set"}},
               ""});

  g.push_back({"gl-quarter",
               "two columns x/2, x/2 + 1/2, each with fibred maps y/4 and y/4 + 3/4",
               IFSSystem({AffineMap2D::make(half, quarter, 0, 0), AffineMap2D::make(half, quarter, 0, Rational(3, 4)),
                          AffineMap2D::make(half, quarter, half, 0),
                          AffineMap2D::make(half, quarter, half, Rational(3, 4))}),
               {{"dimA", 1.5, "1 + log 2 / log 4", "projection [0,1], fibred IFSs satisfy the OSC with a_i = 1/2"}},
               ""});
  return g;
}

GallerySystem gallery_get(const std::string& name) {
  for (auto& s : gallery_list())
    if (s.name == name) return s;
  throw DomainError("unknown gallery system: " + name);
}

}  // namespace affdim
