#pragma once

#include <complex>
#include <map>

namespace sforge {

using Complex = std::complex<double>;

/// Exact value of exp(2*pi*i*num/den). Multiples of a quarter turn come back
/// as exact 0/+-1 pairs so dyadic expansions stay bit-exact.
Complex unit_root(long num, long den);

/// Finite Laurent series sum_j c_j e^{ijt} with complex coefficients.
///
/// The coefficient map is sparse (no stored zeros) and kept in a
/// single-frequency normal form, so a product never carries e^{it}e^{-it}
/// pairs. Values are immutable once built.
class TrigPoly {
public:
  using Coeffs = std::map<int, Complex>;

  TrigPoly() = default;
  explicit TrigPoly(Coeffs coeffs);

  static TrigPoly constant(Complex c);
  static TrigPoly exp_i(int freq, Complex amplitude = 1.0);
  /// amplitude * cos(freq*t + phase)
  static TrigPoly cosine(int freq, double amplitude = 1.0, double phase = 0.0);
  /// amplitude * sin(freq*t + phase)
  static TrigPoly sine(int freq, double amplitude = 1.0, double phase = 0.0);
  /// Same as cosine/sine with the phase given as the unit rotation e^{i phase}.
  static TrigPoly cosine_rotated(int freq, double amplitude, Complex rot);
  static TrigPoly sine_rotated(int freq, double amplitude, Complex rot);

  const Coeffs& coeffs() const { return coeffs_; }
  Complex coeff(int freq) const;
  bool empty() const { return coeffs_.empty(); }
  int max_abs_freq() const;
  double abs_sum() const;
  double max_modulus() const;

  /// c_{-j} = conj(c_j) for every j, to 1e-13 relative to the largest
  /// coefficient. Evaluations of such a series are real.
  bool real_valued() const { return real_valued_; }

  Complex eval(double t) const;
  TrigPoly d_dt() const;
  /// t -> c t, i.e. frequency j -> c j. Requires c >= 1.
  TrigPoly dilate(int c) const;

  TrigPoly operator-() const;
  friend TrigPoly operator+(const TrigPoly& p, const TrigPoly& q);
  friend TrigPoly operator-(const TrigPoly& p, const TrigPoly& q);
  friend TrigPoly operator*(const TrigPoly& p, const TrigPoly& q);
  friend TrigPoly operator*(Complex s, const TrigPoly& p);

  friend bool operator==(const TrigPoly& p, const TrigPoly& q) {
    return p.coeffs_ == q.coeffs_;
  }

private:
  Coeffs coeffs_;
  bool real_valued_ = true;
};

TrigPoly add(const TrigPoly& p, const TrigPoly& q);
TrigPoly mul(const TrigPoly& p, const TrigPoly& q);

/// Largest |c_j - d_j| over the union of frequencies.
double max_coeff_distance(const TrigPoly& p, const TrigPoly& q);

} // namespace sforge
