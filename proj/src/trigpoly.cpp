#include "sforge/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sforge {

namespace {

constexpr double kDropRelative = 1e-14;
constexpr double kRealTolerance = 1e-13;

void sparsify(TrigPoly::Coeffs& coeffs, double reference) {
  const double floor = kDropRelative * reference;
  std::erase_if(coeffs, [floor](const auto& kv) {
    return kv.second == Complex{0.0, 0.0} || std::abs(kv.second) < floor;
  });
}

double max_modulus_of(const TrigPoly::Coeffs& coeffs) {
  double m = 0.0;
  for (const auto& [j, c] : coeffs) m = std::max(m, std::abs(c));
  return m;
}

bool conjugate_symmetric(const TrigPoly::Coeffs& coeffs) {
  const double tol = kRealTolerance * std::max(max_modulus_of(coeffs), 1e-300);
  for (const auto& [j, c] : coeffs) {
    auto it = coeffs.find(-j);
    const Complex partner = it == coeffs.end() ? Complex{} : it->second;
    if (std::abs(partner - std::conj(c)) > tol) return false;
  }
  return true;
}

} // namespace

Complex unit_root(long num, long den) {
  if (den <= 0) throw std::invalid_argument("unit_root: denominator must be positive");
  long n = num % den;
  if (n < 0) n += den;
  if ((4 * n) % den == 0) {
    switch ((4 * n) / den) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

TrigPoly::TrigPoly(Coeffs coeffs) : coeffs_(std::move(coeffs)) {
  sparsify(coeffs_, 0.0);
  real_valued_ = conjugate_symmetric(coeffs_);
}

TrigPoly TrigPoly::constant(Complex c) { return TrigPoly(Coeffs{{0, c}}); }

TrigPoly TrigPoly::exp_i(int freq, Complex amplitude) {
  return TrigPoly(Coeffs{{freq, amplitude}});
}

TrigPoly TrigPoly::cosine(int freq, double amplitude, double phase) {
  return cosine_rotated(freq, amplitude, std::polar(1.0, phase));
}

TrigPoly TrigPoly::sine(int freq, double amplitude, double phase) {
  return sine_rotated(freq, amplitude, std::polar(1.0, phase));
}

TrigPoly TrigPoly::cosine_rotated(int freq, double amplitude, Complex rot) {
  if (freq == 0) return constant(amplitude * rot.real());
  return TrigPoly(Coeffs{{freq, 0.5 * amplitude * rot}, {-freq, 0.5 * amplitude * std::conj(rot)}});
}

TrigPoly TrigPoly::sine_rotated(int freq, double amplitude, Complex rot) {
  if (freq == 0) return constant(amplitude * rot.imag());
  // sin x = (e^{ix} - e^{-ix}) / 2i
  const Complex half_over_i{0.0, -0.5 * amplitude};
  return TrigPoly(Coeffs{{freq, half_over_i * rot}, {-freq, -half_over_i * std::conj(rot)}});
}

Complex TrigPoly::coeff(int freq) const {
  auto it = coeffs_.find(freq);
  return it == coeffs_.end() ? Complex{} : it->second;
}

int TrigPoly::max_abs_freq() const {
  int m = 0;
  for (const auto& [j, c] : coeffs_) m = std::max(m, std::abs(j));
  return m;
}

double TrigPoly::abs_sum() const {
  double s = 0.0;
  for (const auto& [j, c] : coeffs_) s += std::abs(c);
  return s;
}

double TrigPoly::max_modulus() const { return max_modulus_of(coeffs_); }

Complex TrigPoly::eval(double t) const {
  Complex acc{};
  for (const auto& [j, c] : coeffs_) acc += c * std::polar(1.0, j * t);
  return acc;
}

TrigPoly TrigPoly::d_dt() const {
  Coeffs out;
  for (const auto& [j, c] : coeffs_) {
    if (j != 0) out.emplace(j, Complex{0.0, static_cast<double>(j)} * c);
  }
  return TrigPoly(std::move(out));
}

TrigPoly TrigPoly::dilate(int c) const {
  if (c < 1) throw std::invalid_argument("TrigPoly::dilate: factor must be >= 1");
  Coeffs out;
  for (const auto& [j, v] : coeffs_) out.emplace(j * c, v);
  return TrigPoly(std::move(out));
}

TrigPoly TrigPoly::operator-() const {
  Coeffs out;
  for (const auto& [j, c] : coeffs_) out.emplace(j, -c);
  return TrigPoly(std::move(out));
}

TrigPoly operator+(const TrigPoly& p, const TrigPoly& q) {
  TrigPoly::Coeffs out = p.coeffs_;
  for (const auto& [j, c] : q.coeffs_) out[j] += c;
  const double ref = std::max(p.max_modulus(), q.max_modulus());
  sparsify(out, ref);
  return TrigPoly(std::move(out));
}

TrigPoly operator-(const TrigPoly& p, const TrigPoly& q) { return p + (-q); }

TrigPoly operator*(const TrigPoly& p, const TrigPoly& q) {
  TrigPoly::Coeffs out;
  for (const auto& [j, c] : p.coeffs_) {
    for (const auto& [l, d] : q.coeffs_) out[j + l] += c * d;
  }
  sparsify(out, max_modulus_of(out));
  return TrigPoly(std::move(out));
}

TrigPoly operator*(Complex s, const TrigPoly& p) {
  TrigPoly::Coeffs out;
  for (const auto& [j, c] : p.coeffs_) out.emplace(j, s * c);
  return TrigPoly(std::move(out));
}

TrigPoly add(const TrigPoly& p, const TrigPoly& q) { return p + q; }
TrigPoly mul(const TrigPoly& p, const TrigPoly& q) { return p * q; }

double max_coeff_distance(const TrigPoly& p, const TrigPoly& q) {
  double d = 0.0;
  for (const auto& [j, c] : p.coeffs()) d = std::max(d, std::abs(c - q.coeff(j)));
  for (const auto& [j, c] : q.coeffs()) d = std::max(d, std::abs(c - p.coeff(j)));
  return d;
}

} // namespace sforge
