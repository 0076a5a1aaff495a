#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's expansion or construction code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

/// Strand j (1-based) of lemniscate (s, ell, r), x + iy, with t -> speed * t.
inline C lemniscate_strand(int s, int ell, int r, int speed, int j, double t) {
  const double tau = (r * speed * t + 2.0 * kPi * j) / s;
  return {std::cos(tau), std::sin(ell * tau)};
}

/// prod_j (u - a X_j - i b Y_j) straight from the strand formula.
inline C direct_g(int s, int ell, int r, int speed, double a, double b, C u, double t) {
  C acc{1.0, 0.0};
  for (int j = 1; j <= s; ++j) {
    const C z = lemniscate_strand(s, ell, r, speed, j, t);
    acc *= u - C{a * z.real(), b * z.imag()};
  }
  return acc;
}

/// r^{2sk} g_{r^q1 a, r^q2 b}(u / r^{2k}, t).
inline C scaled_g(int s, int ell, int r_lem, int speed, double a, double b, int k, double q1, double q2, C u,
                  double r, double t) {
  const double scale = std::pow(r, 2.0 * k);
  return std::pow(r, 2.0 * s * k) *
         direct_g(s, ell, r_lem, speed, std::pow(r, q1) * a, std::pow(r, q2) * b, u / scale, t);
}

/// Coefficient of u^i a^j b^n e^{imt}.
struct GradedTerm {
  int i, j, n, m;
  double re, im;
};

/// g_{a,b} of the strands (a cos((2t+2 pi j)/4), b sin(3(2t+2 pi j)/4)) as
/// published for the L6a1 example, read off term by term with de Moivre.
inline std::vector<GradedTerm> l6a1_printed() {
  return {
      {4, 0, 0, 0, 1, 0},        {2, 0, 2, 0, 1, 0},          {2, 2, 0, 0, -1, 0},
      {2, 1, 1, 2, -1, 0},       {2, 1, 1, -2, 1, 0},         {0, 4, 0, 0, 0.125, 0},
      {0, 2, 2, 0, -0.25, 0},    {0, 0, 4, 0, 0.125, 0},      {0, 4, 0, 2, -0.0625, 0},
      {0, 4, 0, -2, -0.0625, 0}, {0, 2, 2, 2, -0.375, 0},     {0, 2, 2, -2, -0.375, 0},
      {0, 2, 2, 4, 0.125, 0},    {0, 2, 2, -4, 0.125, 0},     {0, 0, 4, 6, -0.0625, 0},
      {0, 0, 4, -6, -0.0625, 0}, {0, 3, 1, 2, 0.25, 0},       {0, 3, 1, -2, -0.25, 0},
      {0, 1, 3, 2, -0.25, 0},    {0, 1, 3, -2, 0.25, 0},      {0, 1, 3, 4, -0.25, 0},
      {0, 1, 3, -4, 0.25, 0},
  };
}

/// prod_j (u - a X_j - i b Y_j) with complex a and b, for coefficient fitting.
inline C direct_g_complex(int s, int ell, int r, int speed, C a, C b, C u, double t) {
  C acc{1.0, 0.0};
  for (int j = 1; j <= s; ++j) {
    const C z = lemniscate_strand(s, ell, r, speed, j, t);
    acc *= u - a * z.real() - C{0.0, 1.0} * b * z.imag();
  }
  return acc;
}

/// Coefficients of u^i a^j b^n e^{imt} fitted by a discrete Fourier transform
/// over (s+1)-th roots of unity in u, a, b and a uniform t-grid. Exact up to
/// rounding when |m| stays below n_t / 2.
inline std::vector<GradedTerm> dft_expand(int s, int ell, int r, int speed, int n_t = 32) {
  const int n_poly = s + 1;
  auto root = [](int k, int n) { return std::polar(1.0, 2.0 * kPi * k / n); };
  std::vector<GradedTerm> out;
  // samples[pu][pa][pb][pt]
  std::vector<C> samples(static_cast<std::size_t>(n_poly * n_poly * n_poly * n_t));
  auto at = [&](int pu, int pa, int pb, int pt) -> C& {
    return samples[static_cast<std::size_t>(((pu * n_poly + pa) * n_poly + pb) * n_t + pt)];
  };
  for (int pu = 0; pu < n_poly; ++pu)
    for (int pa = 0; pa < n_poly; ++pa)
      for (int pb = 0; pb < n_poly; ++pb)
        for (int pt = 0; pt < n_t; ++pt)
          at(pu, pa, pb, pt) = direct_g_complex(s, ell, r, speed, root(pa, n_poly), root(pb, n_poly),
                                                root(pu, n_poly), 2.0 * kPi * pt / n_t);
  const double norm = 1.0 / (double(n_poly) * n_poly * n_poly * n_t);
  for (int i = 0; i <= s; ++i)
    for (int j = 0; j + i <= s; ++j) {
      const int n = s - i - j;
      for (int m = -n_t / 2 + 1; m < n_t / 2; ++m) {
        C acc{};
        for (int pu = 0; pu < n_poly; ++pu)
          for (int pa = 0; pa < n_poly; ++pa)
            for (int pb = 0; pb < n_poly; ++pb)
              for (int pt = 0; pt < n_t; ++pt)
                acc += at(pu, pa, pb, pt) * std::conj(root(pu * i, n_poly) * root(pa * j, n_poly) *
                                                      root(pb * n, n_poly) * root(pt * m, n_t));
        acc *= norm;
        if (std::abs(acc) > 1e-12) out.push_back({i, j, n, m, acc.real(), acc.imag()});
      }
    }
  return out;
}

/// Homogenized term u^i v^alpha vbar^beta a^j b^n.
struct MixedTerm {
  int i, alpha, beta, j, n;
  double re;
};

/// The k = 1, q1 = q2 = 0 polynomial as printed, one entry per monomial in
/// (u, v, vbar, a, b).
inline std::vector<MixedTerm> l6a1_homogenized_printed() {
  const double h = 1.0 / 16.0;
  return {
      {4, 0, 0, 0, 0, 1},
      {2, 2, 2, 0, 2, 1},      {2, 2, 2, 2, 0, -1},
      {2, 3, 1, 1, 1, -1},     {2, 1, 3, 1, 1, 1},
      {0, 4, 4, 4, 0, 2 * h},  {0, 4, 4, 2, 2, -4 * h}, {0, 4, 4, 0, 4, 2 * h},
      {0, 5, 3, 4, 0, -h},     {0, 3, 5, 4, 0, -h},
      {0, 5, 3, 2, 2, -6 * h}, {0, 3, 5, 2, 2, -6 * h},
      {0, 6, 2, 2, 2, 2 * h},  {0, 2, 6, 2, 2, 2 * h},
      {0, 7, 1, 0, 4, -h},     {0, 1, 7, 0, 4, -h},
      {0, 5, 3, 3, 1, 4 * h},  {0, 3, 5, 3, 1, -4 * h},
      {0, 5, 3, 1, 3, -4 * h}, {0, 3, 5, 1, 3, 4 * h},
      {0, 6, 2, 1, 3, -4 * h}, {0, 2, 6, 1, 3, 4 * h},
  };
}

/// Number of adjacent x-order changes between consecutive samples, counted
/// by brute force on a fine grid. Equals the letter count when no two
/// crossings share a sample interval.
template <class Strands>
int count_crossings(int n, Strands&& xy, int samples, double origin = 0.1234) {
  auto order_at = [&](double t) {
    std::vector<std::pair<double, int>> xs;
    for (int j = 0; j < n; ++j) xs.push_back({xy(j, t).real(), j});
    std::sort(xs.begin(), xs.end());
    std::vector<int> out;
    for (auto& p : xs) out.push_back(p.second);
    return out;
  };
  int count = 0;
  auto prev = order_at(origin);
  for (int i = 1; i <= samples; ++i) {
    auto cur = order_at(origin + 2.0 * kPi * i / samples);
    // Inversions between the two orders, i.e. the number of adjacent swaps.
    std::vector<int> pos(n);
    for (int k = 0; k < n; ++k) pos[cur[k]] = k;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (pos[prev[a]] > pos[prev[b]]) ++count;
    prev = std::move(cur);
  }
  return count;
}

} // namespace oracle
