#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "sforge/trigpoly.hpp"

namespace sforge {

/// Dense univariate complex polynomial c_0 + c_1 z + ... + c_d z^d.
class ComplexPoly {
public:
  ComplexPoly() = default;
  /// Trailing coefficients below 1e-30 of the largest one are trimmed so the
  /// leading coefficient is always meaningful.
  explicit ComplexPoly(std::vector<Complex> coeffs);

  /// prod_i (z - roots[i])
  static ComplexPoly from_roots(std::span<const Complex> roots);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return c_; }
  Complex leading() const { return c_.back(); }
  double abs_sum() const;

  Complex operator()(Complex z) const;
  /// Value and first derivative in one Horner pass.
  std::pair<Complex, Complex> eval_with_derivative(Complex z) const;
  ComplexPoly derivative() const;

private:
  std::vector<Complex> c_;
};

struct RootOptions {
  int max_iterations = 500;
  double residual_factor = 1e-9;
};

/// All d roots, with multiplicity, by Aberth-Ehrlich iteration from a
/// perturbed circle followed by one Newton polish per root. Deterministic:
/// the same coefficients always give the same roots in the same order.
/// Throws NoConvergence when some residual stays above
/// residual_factor * sum|c_i| * max(1,|z|)^d.
std::vector<Complex> all_roots(const ComplexPoly& p, const RootOptions& opts = {});

/// Root of a sign-changing scalar function on [lo, hi] to 1e-12 absolute.
/// Returns an endpoint directly when f vanishes there. Throws NoSignChange.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-12, int max_iterations = 200);

using Point4 = std::array<double, 4>;
using Value2 = std::array<double, 2>;
using Matrix2x4 = std::array<std::array<double, 4>, 2>;

/// Central-difference Jacobian of F: R^4 -> R^2. h must lie in [1e-8, 1e-4].
Matrix2x4 fd_jacobian(const std::function<Value2(const Point4&)>& F, const Point4& x, double h);

/// Singular values (largest first) of a 2x4 real matrix.
std::array<double, 2> singular_values(const Matrix2x4& m);
double max_abs_entry(const Matrix2x4& m);

/// n points lo + (hi-lo) i/n, i = 0..n-1 (periodic grid, hi excluded).
std::vector<double> periodic_grid(std::size_t n, double lo, double hi);

} // namespace sforge
