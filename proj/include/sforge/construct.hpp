#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "sforge/braid.hpp"
#include "sforge/numerics.hpp"
#include "sforge/trigpoly.hpp"

namespace sforge {

/// Monomial u^i a^j b^n e^{i m t} of the braid polynomial.
struct GradedKey {
  int u_deg = 0;
  int a_deg = 0;
  int b_deg = 0;
  int freq = 0;
  auto operator<=>(const GradedKey&) const = default;
};

/// prod_j (u - a X_j(t) - i b Y_j(t)) with a and b kept symbolic.
struct GradedBraidPoly {
  int strands = 0;
  std::map<GradedKey, Complex> terms;

  Complex coeff(const GradedKey& key) const;
  Complex eval(double a, double b, Complex u, double t) const;
  /// Largest i + |m| over the terms: the total degree in u, v, vbar.
  int total_degree() const;
};

/// Expands the strand product with exact quarter-turn roots of unity, so
/// dyadic inputs give bit-exact coefficients.
GradedBraidPoly expand_g(const BraidParam& b);

/// Exponents that make the homogenized polynomial a polynomial in u, v, vbar.
struct ScalingExponents {
  int m = 0;             ///< 2^m is the largest power of two dividing s_C
  int x = 0;             ///< x-frequency class mod 2^(m+1), represented in [1, 2^(m+1)]
  int y = 0;             ///< same for the y-frequencies
  double q1 = 0.0;       ///< x / 2^m
  double q2 = 0.0;       ///< y / 2^m
  bool from_square = false; ///< every component runs at even speed; q1 = q2 = 0
};

/// Throws UnequalComponents when the components differ in strand count and
/// MixedResidues when some coordinate's frequencies occupy two residue classes.
ScalingExponents derive_scaling(const BraidParam& b);

/// Smallest integer k >= max(1, deg f / 2s).
int choose_k(const GradedBraidPoly& g);

/// u^i v^alpha vbar^beta.
struct MixedKey {
  int u_deg = 0;
  int alpha = 0;
  int beta = 0;
  auto operator<=>(const MixedKey&) const = default;
};

/// u^i v^alpha vbar^beta a^j b^n: the homogenized polynomial before a and b
/// are substituted.
struct GradedMixedKey {
  int u_deg = 0;
  int alpha = 0;
  int beta = 0;
  int a_deg = 0;
  int b_deg = 0;
  auto operator<=>(const GradedMixedKey&) const = default;
};

using GradedMixedPoly = std::map<GradedMixedKey, Complex>;

/// Parameters a polynomial was built from. The coefficients use the stretch
/// factors lambda * a and lambda * b.
struct ConstructionMeta {
  double a = 1.0;
  double b = 1.0;
  int k = 1;
  double q1 = 0.0;
  double q2 = 0.0;
  double lambda = 1.0;

  double effective_a() const { return lambda * a; }
  double effective_b() const { return lambda * b; }
};

/// Semiholomorphic polynomial sum c u^i v^alpha vbar^beta.
class MixedPoly {
public:
  using Terms = std::map<MixedKey, Complex>;

  MixedPoly() = default;
  MixedPoly(int strands, Terms terms, ConstructionMeta meta = {});

  int strands() const { return strands_; }
  const Terms& terms() const { return terms_; }
  const ConstructionMeta& meta() const { return meta_; }
  Complex coeff(const MixedKey& key) const;

  int deg_u() const;
  bool monic_in_u() const;

  Complex eval(Complex u, Complex v) const;
  /// Sum of |c u^i v^alpha vbar^beta| over the terms: the local scale of p.
  double abs_eval(Complex u, Complex v) const;
  /// u -> p(u, v) as a dense polynomial.
  ComplexPoly u_poly(Complex v) const;

  /// Returns a copy with c added to the coefficient of key.
  MixedPoly with_term(const MixedKey& key, Complex c) const;

private:
  int strands_ = 0;
  Terms terms_;
  ConstructionMeta meta_;
};

/// Turns every u^i a^j b^n e^{imt} into u^i a^j b^n v^m (v vbar)^{e/2}
/// (vbar^{|m|} for m < 0) with e = 2(s-i)k + q1 j + q2 n - |m|.
/// Throws OddExponent when some e is odd or not an integer, NegativeExponent
/// when some e < 0.
GradedMixedPoly homogenize_graded(const GradedBraidPoly& g, int k, double q1, double q2);

MixedPoly homogenize(const GradedBraidPoly& g, double a, double b, int k, double q1, double q2);

/// homogenize with a and b stretched by lambda, recording lambda in the metadata.
MixedPoly build_polynomial(const GradedBraidPoly& g, const ConstructionMeta& meta);

struct Wirtinger {
  MixedPoly du;
  MixedPoly dv;
  MixedPoly dvbar;
};

Wirtinger wirtinger(const MixedPoly& p);

/// Real 2x4 Jacobian of (Re p, Im p) in the coordinates (Re u, Im u, Re v, Im v).
Matrix2x4 real_jacobian(const Wirtinger& w, Complex u, Complex v);

/// Roots of u -> p(u, r e^{it}) predicted by the construction:
/// r^{2k+q1} a X_j(t) + i r^{2k+q2} b Y_j(t), in strand order.
std::vector<Complex> explicit_roots(const BraidParam& b, const ConstructionMeta& meta, double r, double t);

/// Human-readable term list, (i, alpha, beta) descending, 17 significant digits.
std::string to_text(const MixedPoly& p);

} // namespace sforge
