#include "sforge/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sforge/errors.hpp"

namespace sforge {

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  double biggest = 0.0;
  for (const auto& c : c_) biggest = std::max(biggest, std::abs(c));
  while (c_.size() > 1 && std::abs(c_.back()) <= 1e-30 * biggest) c_.pop_back();
  if (c_.empty()) c_.push_back(Complex{});
}

ComplexPoly ComplexPoly::from_roots(std::span<const Complex> roots) {
  std::vector<Complex> c{Complex{1.0, 0.0}};
  for (const Complex& z : roots) {
    std::vector<Complex> next(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= z * c[i];
    }
    c = std::move(next);
  }
  return ComplexPoly(std::move(c));
}

double ComplexPoly::abs_sum() const {
  double s = 0.0;
  for (const auto& c : c_) s += std::abs(c);
  return s;
}

Complex ComplexPoly::operator()(Complex z) const {
  Complex acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::pair<Complex, Complex> ComplexPoly::eval_with_derivative(Complex z) const {
  Complex p{}, dp{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

ComplexPoly ComplexPoly::derivative() const {
  if (c_.size() <= 1) return ComplexPoly(std::vector<Complex>{Complex{}});
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return ComplexPoly(std::move(d));
}

namespace {

double residual_bound(const ComplexPoly& p, Complex z, double factor) {
  return factor * p.abs_sum() * std::pow(std::max(1.0, std::abs(z)), p.degree());
}

} // namespace

std::vector<Complex> all_roots(const ComplexPoly& p, const RootOptions& opts) {
  const int d = p.degree();
  if (d < 1) throw std::invalid_argument("all_roots: degree must be >= 1");

  std::vector<Complex> monic(p.coeffs().size());
  const Complex lead = p.leading();
  for (std::size_t i = 0; i < monic.size(); ++i) monic[i] = p.coeffs()[i] / lead;
  const ComplexPoly q(monic);

  if (d == 1) return {-monic[0]};

  // Start on a circle around the root centroid. The radius is the geometric
  // mean distance of the roots from it, falling back to the coefficient bound.
  const Complex centre = -monic[d - 1] / static_cast<double>(d);
  double radius = std::pow(std::abs(q(centre)), 1.0 / d);
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    radius = 0.0;
    for (int k = 1; k <= d; ++k) {
      const double a = std::abs(monic[d - k]);
      if (a > 0.0) radius = std::max(radius, std::pow(a, 1.0 / k));
    }
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;

  std::vector<Complex> z(d);
  for (int k = 0; k < d; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / d + 0.7;
    z[k] = centre + std::polar(radius, angle);
  }

  std::vector<bool> done(d, false);
  int converged = 0;
  for (int iter = 0; iter < opts.max_iterations && converged < d; ++iter) {
    for (int k = 0; k < d; ++k) {
      if (done[k]) continue;
      const auto [val, der] = q.eval_with_derivative(z[k]);
      if (val == Complex{}) {
        done[k] = true;
        ++converged;
        continue;
      }
      Complex repulsion{};
      for (int j = 0; j < d; ++j) {
        if (j != k && z[k] != z[j]) repulsion += 1.0 / (z[k] - z[j]);
      }
      const Complex newton = val / der;
      Complex step = newton / (1.0 - newton * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = newton;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = Complex{radius * 1e-3, 0.0};
      z[k] -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z[k]))) {
        done[k] = true;
        ++converged;
      }
    }
  }

  for (auto& root : z) {
    const auto [val, der] = q.eval_with_derivative(root);
    if (der != Complex{}) {
      const Complex polished = root - val / der;
      if (std::abs(q(polished)) <= std::abs(val)) root = polished;
    }
  }

  double worst = 0.0;
  bool ok = true;
  for (const auto& root : z) {
    const double res = std::abs(p(root));
    const double bound = residual_bound(p, root, opts.residual_factor);
    if (!(res < bound) && res != 0.0) {
      ok = false;
      worst = std::max(worst, res / bound);
    }
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "all_roots: no convergence for degree " << d << " (worst residual/bound = " << worst << ")";
    throw NoConvergence(msg.str());
  }
  return z;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iterations) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    std::ostringstream msg;
    msg << "bisect: no sign change on [" << lo << ", " << hi << "]";
    throw NoSignChange(msg.str());
  }
  for (int i = 0; i < max_iterations && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Matrix2x4 fd_jacobian(const std::function<Value2(const Point4&)>& F, const Point4& x, double h) {
  if (!(h >= 1e-8 && h <= 1e-4)) throw std::invalid_argument("fd_jacobian: h must lie in [1e-8, 1e-4]");
  Matrix2x4 J{};
  for (int c = 0; c < 4; ++c) {
    Point4 xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const Value2 fp = F(xp), fm = F(xm);
    for (int r = 0; r < 2; ++r) J[r][c] = (fp[r] - fm[r]) / (2.0 * h);
  }
  return J;
}

std::array<double, 2> singular_values(const Matrix2x4& m) {
  double p = 0.0, q = 0.0, r = 0.0;
  for (int c = 0; c < 4; ++c) {
    p += m[0][c] * m[0][c];
    q += m[0][c] * m[1][c];
    r += m[1][c] * m[1][c];
  }
  const double mean = 0.5 * (p + r);
  const double spread = std::hypot(0.5 * (p - r), q);
  const double big = std::sqrt(mean + spread);
  // det(A A^T) via Cauchy-Binet keeps the small singular value accurate.
  double det = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double minor = m[0][i] * m[1][j] - m[0][j] * m[1][i];
      det += minor * minor;
    }
  }
  const double small = big > 0.0 ? std::sqrt(det) / big : 0.0;
  return {big, small};
}

double max_abs_entry(const Matrix2x4& m) {
  double best = 0.0;
  for (const auto& row : m)
    for (double v : row) best = std::max(best, std::abs(v));
  return best;
}

std::vector<double> periodic_grid(std::size_t n, double lo, double hi) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  return g;
}

} // namespace sforge
