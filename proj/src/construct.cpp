#include "sforge/construct.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "sforge/errors.hpp"

namespace sforge {

namespace {

constexpr double kDropRelative = 1e-14;

template <class Map>
void drop_negligible(Map& terms) {
  double biggest = 0.0;
  for (const auto& [k, c] : terms) biggest = std::max(biggest, std::abs(c));
  const double floor = kDropRelative * biggest;
  std::erase_if(terms, [floor](const auto& kv) { return kv.second == Complex{} || std::abs(kv.second) < floor; });
}

// Key with the frequency stored as a numerator over a common denominator.
using RawKey = GradedKey;

std::map<RawKey, Complex> multiply(const std::map<RawKey, Complex>& p, const std::map<RawKey, Complex>& q) {
  std::map<RawKey, Complex> out;
  for (const auto& [kp, cp] : p) {
    for (const auto& [kq, cq] : q) {
      const RawKey k{kp.u_deg + kq.u_deg, kp.a_deg + kq.a_deg, kp.b_deg + kq.b_deg, kp.freq + kq.freq};
      out[k] += cp * cq;
    }
  }
  drop_negligible(out);
  return out;
}

std::string describe(const GradedKey& k) {
  std::ostringstream out;
  out << "u^" << k.u_deg << " a^" << k.a_deg << " b^" << k.b_deg << " e^{" << k.freq << "it}";
  return out.str();
}

} // namespace

Complex GradedBraidPoly::coeff(const GradedKey& key) const {
  auto it = terms.find(key);
  return it == terms.end() ? Complex{} : it->second;
}

Complex GradedBraidPoly::eval(double a, double b, Complex u, double t) const {
  Complex acc{};
  for (const auto& [k, c] : terms)
    acc += c * std::pow(u, k.u_deg) * std::pow(a, k.a_deg) * std::pow(b, k.b_deg) * std::polar(1.0, k.freq * t);
  return acc;
}

int GradedBraidPoly::total_degree() const {
  int d = 0;
  for (const auto& [k, c] : terms) d = std::max(d, k.u_deg + std::abs(k.freq));
  return d;
}

GradedBraidPoly expand_g(const BraidParam& b) {
  long denom = 1;
  for (const auto& c : b.components()) denom = std::lcm(denom, static_cast<long>(c.strands));

  std::map<RawKey, Complex> acc{{RawKey{0, 0, 0, 0}, Complex{1.0, 0.0}}};
  for (const auto& comp : b.components()) {
    const long unit = comp.speed * (denom / comp.strands);
    for (int j = 1; j <= comp.strands; ++j) {
      std::map<RawKey, Complex> factor{{RawKey{1, 0, 0, 0}, Complex{1.0, 0.0}}};
      for (const auto& [f, c] : comp.x.coeffs()) {
        const Complex rot = unit_root(static_cast<long>(f) * j, comp.strands);
        factor[RawKey{0, 1, 0, static_cast<int>(f * unit)}] -= c * rot;
      }
      for (const auto& [f, c] : comp.y.coeffs()) {
        const Complex rot = unit_root(static_cast<long>(f) * j, comp.strands);
        factor[RawKey{0, 0, 1, static_cast<int>(f * unit)}] -= Complex{0.0, 1.0} * c * rot;
      }
      drop_negligible(factor);
      acc = multiply(acc, factor);
    }
  }

  double biggest = 0.0;
  for (const auto& [k, c] : acc) biggest = std::max(biggest, std::abs(c));
  GradedBraidPoly g;
  g.strands = b.total_strands();
  for (const auto& [k, c] : acc) {
    if (k.freq % denom != 0) {
      // Fractional frequencies cancel for a closed braid; anything left is rounding.
      if (std::abs(c) > 1e-12 * biggest) {
        std::ostringstream msg;
        msg << "expand_g: non-integer frequency " << k.freq << "/" << denom << " survives with modulus " << std::abs(c);
        throw InvalidBraid(msg.str());
      }
      continue;
    }
    g.terms[GradedKey{k.u_deg, k.a_deg, k.b_deg, static_cast<int>(k.freq / denom)}] += c;
  }
  drop_negligible(g.terms);
  return g;
}

ScalingExponents derive_scaling(const BraidParam& b) {
  const auto& comps = b.components();
  const int sc = comps.front().strands;
  for (const auto& c : comps) {
    if (c.strands != sc) {
      std::ostringstream msg;
      msg << "derive_scaling: components have " << sc << " and " << c.strands << " strands";
      throw UnequalComponents(msg.str());
    }
  }
  ScalingExponents out;
  out.m = std::countr_zero(static_cast<unsigned>(sc));

  const bool all_even = std::all_of(comps.begin(), comps.end(), [](const auto& c) { return c.speed % 2 == 0; });
  const bool all_odd = std::all_of(comps.begin(), comps.end(), [](const auto& c) { return c.speed % 2 == 1; });
  if (all_even) {
    out.from_square = true;
    return out;
  }
  if (!all_odd) throw MixedResidues("derive_scaling: components mix even and odd speeds");

  const int modulus = 1 << (out.m + 1);
  auto residue_of = [&](auto select, const char* coordinate) {
    std::set<int> classes;
    std::map<int, int> witness;
    for (const auto& c : comps) {
      for (const auto& [f, coef] : select(c).coeffs()) {
        if (f < 0) continue;
        const int r = f % modulus;
        classes.insert(r);
        witness.emplace(r, f);
      }
    }
    if (classes.size() > 1) {
      std::ostringstream msg;
      msg << "derive_scaling: " << coordinate << "-frequencies occupy residue classes";
      for (int r : classes) msg << ' ' << r << " (frequency " << witness[r] << ")";
      msg << " mod " << modulus;
      throw MixedResidues(msg.str());
    }
    // Smallest positive representative, so class 0 maps to the modulus and
    // the coordinate still shrinks with r.
    if (classes.empty()) return 0;
    return *classes.begin() == 0 ? modulus : *classes.begin();
  };
  out.x = residue_of([](const StrandComponent& c) -> const TrigPoly& { return c.x; }, "x");
  out.y = residue_of([](const StrandComponent& c) -> const TrigPoly& { return c.y; }, "y");
  out.q1 = static_cast<double>(out.x) / (1 << out.m);
  out.q2 = static_cast<double>(out.y) / (1 << out.m);
  return out;
}

int choose_k(const GradedBraidPoly& g) {
  const int s = std::max(g.strands, 1);
  const int deg = g.total_degree();
  return std::max(1, (deg + 2 * s - 1) / (2 * s));
}

GradedMixedPoly homogenize_graded(const GradedBraidPoly& g, int k, double q1, double q2) {
  GradedMixedPoly out;
  for (const auto& [key, c] : g.terms) {
    const double e = 2.0 * (g.strands - key.u_deg) * k + q1 * key.a_deg + q2 * key.b_deg - std::abs(key.freq);
    const double rounded = std::round(e);
    if (std::abs(e - rounded) > 1e-9 || static_cast<long>(rounded) % 2 != 0) {
      std::ostringstream msg;
      msg << "homogenize: exponent e = " << std::setprecision(17) << e << " of sqrt(v vbar) is not an even integer for term "
          << describe(key);
      throw OddExponent(msg.str());
    }
    if (rounded < 0) {
      std::ostringstream msg;
      msg << "homogenize: exponent e = " << rounded << " is negative for term " << describe(key) << " (k = " << k
          << " too small)";
      throw NegativeExponent(msg.str());
    }
    const int half = static_cast<int>(rounded) / 2;
    const int alpha = half + std::max(key.freq, 0);
    const int beta = half + std::max(-key.freq, 0);
    out[GradedMixedKey{key.u_deg, alpha, beta, key.a_deg, key.b_deg}] += c;
  }
  return out;
}

MixedPoly homogenize(const GradedBraidPoly& g, double a, double b, int k, double q1, double q2) {
  ConstructionMeta meta{a, b, k, q1, q2, 1.0};
  return build_polynomial(g, meta);
}

MixedPoly build_polynomial(const GradedBraidPoly& g, const ConstructionMeta& meta) {
  const double a = meta.effective_a(), b = meta.effective_b();
  MixedPoly::Terms terms;
  for (const auto& [key, c] : homogenize_graded(g, meta.k, meta.q1, meta.q2))
    terms[MixedKey{key.u_deg, key.alpha, key.beta}] += c * std::pow(a, key.a_deg) * std::pow(b, key.b_deg);
  return MixedPoly(g.strands, std::move(terms), meta);
}

MixedPoly::MixedPoly(int strands, Terms terms, ConstructionMeta meta)
    : strands_(strands), terms_(std::move(terms)), meta_(meta) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{}; });
}

Complex MixedPoly::coeff(const MixedKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Complex{} : it->second;
}

int MixedPoly::deg_u() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.u_deg);
  return d;
}

bool MixedPoly::monic_in_u() const {
  const int d = deg_u();
  for (const auto& [k, c] : terms_)
    if (k.u_deg == d && (k.alpha != 0 || k.beta != 0)) return false;
  return coeff(MixedKey{d, 0, 0}) == Complex{1.0, 0.0};
}

namespace {

std::vector<Complex> powers(Complex z, int n) {
  std::vector<Complex> out(static_cast<std::size_t>(n) + 1);
  out[0] = 1.0;
  for (int i = 1; i <= n; ++i) out[i] = out[i - 1] * z;
  return out;
}

struct DegreeBounds {
  int u = 0, alpha = 0, beta = 0;
};

DegreeBounds bounds_of(const MixedPoly::Terms& terms) {
  DegreeBounds d;
  for (const auto& [k, c] : terms) {
    d.u = std::max(d.u, k.u_deg);
    d.alpha = std::max(d.alpha, k.alpha);
    d.beta = std::max(d.beta, k.beta);
  }
  return d;
}

} // namespace

Complex MixedPoly::eval(Complex u, Complex v) const {
  const auto d = bounds_of(terms_);
  const auto pu = powers(u, d.u), pv = powers(v, d.alpha), pb = powers(std::conj(v), d.beta);
  Complex acc{};
  for (const auto& [k, c] : terms_) acc += c * pu[k.u_deg] * pv[k.alpha] * pb[k.beta];
  return acc;
}

double MixedPoly::abs_eval(Complex u, Complex v) const {
  double acc = 0.0;
  const double au = std::abs(u), av = std::abs(v);
  for (const auto& [k, c] : terms_) acc += std::abs(c) * std::pow(au, k.u_deg) * std::pow(av, k.alpha + k.beta);
  return acc;
}

ComplexPoly MixedPoly::u_poly(Complex v) const {
  const auto d = bounds_of(terms_);
  const auto pv = powers(v, d.alpha), pb = powers(std::conj(v), d.beta);
  std::vector<Complex> c(static_cast<std::size_t>(d.u) + 1);
  for (const auto& [k, coef] : terms_) c[k.u_deg] += coef * pv[k.alpha] * pb[k.beta];
  return ComplexPoly(std::move(c));
}

MixedPoly MixedPoly::with_term(const MixedKey& key, Complex c) const {
  Terms t = terms_;
  t[key] += c;
  return MixedPoly(strands_, std::move(t), meta_);
}

Wirtinger wirtinger(const MixedPoly& p) {
  MixedPoly::Terms du, dv, dvb;
  for (const auto& [k, c] : p.terms()) {
    if (k.u_deg > 0) du[MixedKey{k.u_deg - 1, k.alpha, k.beta}] += static_cast<double>(k.u_deg) * c;
    if (k.alpha > 0) dv[MixedKey{k.u_deg, k.alpha - 1, k.beta}] += static_cast<double>(k.alpha) * c;
    if (k.beta > 0) dvb[MixedKey{k.u_deg, k.alpha, k.beta - 1}] += static_cast<double>(k.beta) * c;
  }
  return Wirtinger{MixedPoly(p.strands(), std::move(du), p.meta()), MixedPoly(p.strands(), std::move(dv), p.meta()),
                   MixedPoly(p.strands(), std::move(dvb), p.meta())};
}

Matrix2x4 real_jacobian(const Wirtinger& w, Complex u, Complex v) {
  const Complex pu = w.du.eval(u, v), pv = w.dv.eval(u, v), pb = w.dvbar.eval(u, v);
  const Complex I{0.0, 1.0};
  const std::array<Complex, 4> cols{pu, I * pu, pv + pb, I * (pv - pb)};
  Matrix2x4 J{};
  for (int c = 0; c < 4; ++c) {
    J[0][c] = cols[c].real();
    J[1][c] = cols[c].imag();
  }
  return J;
}

std::vector<Complex> explicit_roots(const BraidParam& b, const ConstructionMeta& meta, double r, double t) {
  const double sx = std::pow(r, 2.0 * meta.k + meta.q1) * meta.effective_a();
  const double sy = std::pow(r, 2.0 * meta.k + meta.q2) * meta.effective_b();
  return b.positions(t, sx, sy);
}

std::string to_text(const MixedPoly& p) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [k, c] = *it;
    out << "(" << c.real() << (c.imag() < 0 || std::signbit(c.imag()) ? " - " : " + ") << std::abs(c.imag()) << "i)";
    if (k.u_deg) out << " u^" << k.u_deg;
    if (k.alpha) out << " v^" << k.alpha;
    if (k.beta) out << " vbar^" << k.beta;
    out << '\n';
  }
  return out.str();
}

} // namespace sforge
