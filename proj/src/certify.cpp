#include "sforge/certify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "sforge/errors.hpp"
#include "sforge/numerics.hpp"

namespace sforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kArgCritThreshold = 1e-6;
constexpr double kIsolationThreshold = 1e-8;
constexpr double kRadialTolerance = 1e-6;
constexpr double kSphereThreshold = 1e-6;
constexpr double kDRegThreshold = 1e-6;
constexpr char kEvidence[] = "numerical evidence at grid resolution, not a proof";

std::string threshold_note(double threshold, const std::string& extra = {}) {
  std::ostringstream out;
  out << "pass iff margin > " << std::setprecision(3) << threshold;
  if (!extra.empty()) out << "; " << extra;
  out << "; " << kEvidence;
  return out.str();
}

CertParams params_of(const ConstructionMeta& m, std::vector<double> radii = {}) {
  return CertParams{m.a, m.b, m.k, m.q1, m.q2, m.lambda, std::move(radii)};
}

// ---- argument-critical points --------------------------------------------

// All critical points of u -> g(u, t) with the signed d_t arg g at each.
struct ArgCritSample {
  double t = 0.0;
  std::vector<Complex> u;
  std::vector<double> value;

  std::size_t argmin() const {
    std::size_t k = 0;
    for (std::size_t i = 1; i < value.size(); ++i)
      if (std::abs(value[i]) < std::abs(value[k])) k = i;
    return k;
  }
  double min_abs() const { return value.empty() ? kInfiniteMargin : std::abs(value[argmin()]); }
};

ArgCritSample arg_crit_at(const BraidParam& b, double a, double bb, double t) {
  const auto z = b.positions(t, a, bb);
  const auto zdot = b.velocities(t, a, bb);
  ArgCritSample out;
  out.t = t;
  out.u = all_roots(ComplexPoly::from_roots(z).derivative());
  for (const Complex& u : out.u) {
    Complex g{1.0, 0.0};
    double scale = 1.0;
    Complex log_dt{};
    for (std::size_t j = 0; j < z.size(); ++j) {
      g *= u - z[j];
      scale *= std::abs(u) + std::abs(z[j]);
      log_dt -= zdot[j] / (u - z[j]);
    }
    if (!(std::abs(g) > 1e-10 * scale)) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "arg_crit_scan: critical point u = " << u << " lies on the zero set at t = " << t;
      throw ZeroAtCritical(msg.str());
    }
    out.value.push_back(log_dt.imag());
  }
  return out;
}

// Follows the critical points from A to B by nearest-neighbour pairing
// (accepted within half the smallest gap at A) and reports whether some
// branch changes the sign of d_t arg g. Unpairable intervals are bisected.
class BranchTracker {
public:
  BranchTracker(const BraidParam& b, double a, double bb) : b_(b), a_(a), bb_(bb) {}

  struct Crossing {
    bool found = false;
    double t = 0.0;
    Complex u{};
  };

  Crossing check(const ArgCritSample& A, const ArgCritSample& B, double tb, int depth = 0) {
    const std::size_t n = A.u.size();
    double gap = kInfiniteMargin;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) gap = std::min(gap, std::abs(A.u[i] - A.u[j]));
    std::vector<int> match(n, -1);
    std::vector<bool> taken(B.u.size(), false);
    bool paired = B.u.size() == n;
    for (std::size_t i = 0; i < n && paired; ++i) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < B.u.size(); ++j)
        if (std::abs(B.u[j] - A.u[i]) < std::abs(B.u[best] - A.u[i])) best = j;
      if (taken[best] || !(std::abs(B.u[best] - A.u[i]) < gap / 2.0)) paired = false;
      else {
        taken[best] = true;
        match[i] = static_cast<int>(best);
      }
    }
    if (paired) {
      for (std::size_t i = 0; i < n; ++i)
        if (!(A.value[i] * B.value[static_cast<std::size_t>(match[i])] > 0.0)) return {true, 0.5 * (A.t + tb), A.u[i]};
      return {};
    }
    if (depth < kMaxDepth) {
      ++refinements_;
      const double tm = 0.5 * (A.t + tb);
      const ArgCritSample M = arg_crit_at(b_, a_, bb_, tm);
      min_abs_ = std::min(min_abs_, M.min_abs());
      Crossing left = check(A, M, tm, depth + 1);
      if (left.found) return left;
      return check(M, B, tb, depth + 1);
    }
    // Branches still collide: compare how many values are negative on each side.
    auto negatives = [](const ArgCritSample& s) { return std::count_if(s.value.begin(), s.value.end(), [](double v) { return v < 0.0; }); };
    if (negatives(A) != negatives(B)) return {true, 0.5 * (A.t + tb), A.u[A.argmin()]};
    return {};
  }

  int refinements() const { return refinements_; }
  double min_abs() const { return min_abs_; }

private:
  static constexpr int kMaxDepth = 16;
  const BraidParam& b_;
  double a_, bb_;
  int refinements_ = 0;
  double min_abs_ = kInfiniteMargin;
};

// ---- isolation ------------------------------------------------------------

struct IsolationPoint {
  double ratio = kInfiniteMargin;
  bool det_ok = true;
  double radial_rel = 0.0;
  Complex u{};
  Complex v{};
};

double radial_residual(const MixedPoly& p, Complex u, double r, double t) {
  constexpr double h = 1e-6;
  const Complex e = std::polar(1.0, t);
  const Complex dpr = (p.eval(u, (r + h) * e) - p.eval(u, (r - h) * e)) / (2.0 * h);
  const Complex predicted = 2.0 * p.strands() * p.meta().k * p.eval(u, r * e) / r;
  return std::abs(dpr - predicted) / (std::abs(predicted) + 1e-30);
}

IsolationPoint isolation_at(const MixedPoly& p, const Wirtinger& w, double r, double t, bool radial) {
  const Complex v = std::polar(r, t);
  IsolationPoint out;
  out.v = v;
  const ComplexPoly pu = w.du.u_poly(v);
  if (pu.degree() < 1) return out;
  for (const Complex& u : all_roots(pu)) {
    // At a u-critical point the u-columns vanish; only the v-block carries rank.
    Matrix2x4 J = real_jacobian(w, u, v);
    const double norm = max_abs_entry(J);
    for (auto& row : J) row[0] = row[1] = 0.0;
    const double ratio = norm > 0.0 ? singular_values(J)[1] / norm : 0.0;

    // Closed-form rank test in the (r, arg v) basis.
    const Complex pv = w.dv.eval(u, v), pb = w.dvbar.eval(u, v);
    const Complex e = std::polar(1.0, t);
    const Complex dr = pv * e + pb * std::conj(e);
    const Complex dt = Complex{0.0, r} * (pv * e - pb * std::conj(e));
    const double det = dt.real() * dr.imag() - dr.real() * dt.imag();
    const double denom = std::abs(dr) * std::abs(dt);
    const bool flat = std::abs(w.du.eval(u, v)) < 1e-8 * std::max(1.0, w.du.abs_eval(u, v));
    const bool det_ok = !flat || (denom > 0.0 && std::abs(det) > kIsolationThreshold * denom);

    if (ratio < out.ratio || (!det_ok && out.det_ok)) {
      out.ratio = std::min(out.ratio, ratio);
      out.u = u;
    }
    out.det_ok = out.det_ok && det_ok;
    if (radial) out.radial_rel = std::max(out.radial_rel, radial_residual(p, u, r, t));
  }
  return out;
}

// ---- sphere intersection --------------------------------------------------

struct StrandScale {
  double ex = 0.0, ey = 0.0, a = 0.0, b = 0.0;
};

StrandScale scale_of(const ConstructionMeta& m) {
  return {2.0 * m.k + m.q1, 2.0 * m.k + m.q2, m.effective_a(), m.effective_b()};
}

// r in [0, rho] with r^2 + |r^ex a X + i r^ey b Y|^2 = rho^2.
double sphere_radius(const StrandScale& s, Complex xy, double rho) {
  const double X = xy.real(), Y = xy.imag();
  auto f = [&](double r) {
    const double ux = std::pow(r, s.ex) * s.a * X, uy = std::pow(r, s.ey) * s.b * Y;
    return r * r + ux * ux + uy * uy - rho * rho;
  };
  return bisect(f, 0.0, rho);
}

Complex root_at(const StrandScale& s, Complex xy, double r) {
  return {std::pow(r, s.ex) * s.a * xy.real(), std::pow(r, s.ey) * s.b * xy.imag()};
}

Complex root_dr(const StrandScale& s, Complex xy, double r) {
  return {s.ex * std::pow(r, s.ex - 1.0) * s.a * xy.real(), s.ey * std::pow(r, s.ey - 1.0) * s.b * xy.imag()};
}

struct TransversalityPoint {
  double cosine = kInfiniteMargin;
  double residual = 0.0;
  Complex u{};
  Complex v{};
  double t = 0.0;
};

// ---- d-regularity ---------------------------------------------------------

using Vec4 = std::array<double, 4>;

double dot(const Vec4& x, const Vec4& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]; }
double norm(const Vec4& x) { return std::sqrt(dot(x, x)); }

// Gradient of arg p in (Re u, Im u, Re v, Im v).
Vec4 arg_gradient(const MixedPoly& p, const Wirtinger& w, Complex u, Complex v) {
  const Complex val = p.eval(u, v);
  const Complex pu = w.du.eval(u, v), pv = w.dv.eval(u, v), pb = w.dvbar.eval(u, v);
  const Complex I{0.0, 1.0};
  const std::array<Complex, 4> dirs{pu, I * pu, pv + pb, I * (pv - pb)};
  Vec4 g{};
  for (int c = 0; c < 4; ++c) g[c] = (dirs[c] / val).imag();
  return g;
}

struct DRegPoint {
  double ratio = kInfiniteMargin;
  int bin = -1;
  Complex u{};
  Complex v{};
};

struct CasePoint {
  double non_tangency = kInfiniteMargin; ///< |cos| of the angle to the sphere normal
  double arg_drift = 0.0;                ///< relative derivative of arg p along the vector
  Complex u{};
  Complex v{};
};

CasePoint case_vector(const MixedPoly& p, const Wirtinger& w, Complex u, Complex v, const Vec4& d) {
  CasePoint out{kInfiniteMargin, 0.0, u, v};
  if (std::abs(p.eval(u, v)) < 1e-10 * p.abs_eval(u, v)) return out;
  const Vec4 x{u.real(), u.imag(), v.real(), v.imag()};
  const Vec4 g = arg_gradient(p, w, u, v);
  out.non_tangency = std::abs(dot(d, x)) / (norm(d) * norm(x));
  const double gn = norm(g);
  out.arg_drift = gn > 0.0 ? std::abs(dot(g, d)) / (gn * norm(d)) : 0.0;
  return out;
}

} // namespace

std::string to_string(CertKind k) {
  switch (k) {
    case CertKind::ArgCritFree: return "ArgCritFree";
    case CertKind::Isolation: return "Isolation";
    case CertKind::SphereLink: return "SphereLink";
    case CertKind::DRegular: return "DRegular";
    case CertKind::RadialIdentity: return "RadialIdentity";
  }
  return "?";
}

Certificate arg_crit_scan(const BraidParam& b, double a, double bb, std::size_t t_samples, Exec exec) {
  if (t_samples < 4) throw std::invalid_argument("arg_crit_scan: need at least 4 t-samples");
  Certificate cert;
  cert.kind = CertKind::ArgCritFree;
  cert.threshold = kArgCritThreshold;
  cert.grid.t_samples = t_samples;
  cert.params.a = a;
  cert.params.b = bb;
  cert.note = threshold_note(kArgCritThreshold, "critical points of u -> g(u, t)");

  if (b.total_strands() < 2) {
    cert.pass = true;
    cert.margin = kInfiniteMargin;
    cert.note = threshold_note(kArgCritThreshold, "no critical points: vacuous pass");
    return cert;
  }

  const auto ts = periodic_grid(t_samples, 0.0, kTwoPi);
  auto coarse = kernels::map_grid<ArgCritSample>(exec, ts.size(), [&](std::size_t i) { return arg_crit_at(b, a, bb, ts[i]); });
  const std::size_t i0 = kernels::ordered_argmin(coarse, [](const ArgCritSample& p) { return p.min_abs(); });

  // One x4 refinement on the two cells around the coarse minimizer.
  const double dt = kTwoPi / static_cast<double>(t_samples);
  std::vector<double> fine_t;
  for (int j = -3; j <= 3; ++j)
    if (j != 0) fine_t.push_back(ts[i0] + j * dt / 4.0);
  auto fine = kernels::map_grid<ArgCritSample>(exec, fine_t.size(), [&](std::size_t i) { return arg_crit_at(b, a, bb, fine_t[i]); });

  const ArgCritSample* best = &coarse[i0];
  for (const auto& f : fine)
    if (f.min_abs() < best->min_abs()) best = &f;
  cert.grid.refinement_depth = 1;
  cert.margin = best->min_abs();
  cert.worst.u = best->u[best->argmin()];
  cert.worst.t = best->t;

  // A sign change along a followed branch is an argument-critical point
  // between samples, whatever the sampled values look like.
  BranchTracker tracker(b, a, bb);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const bool wrap = i + 1 == coarse.size();
    const auto crossing = tracker.check(coarse[i], coarse[wrap ? 0 : i + 1], wrap ? kTwoPi : ts[i + 1]);
    if (crossing.found) {
      cert.margin = 0.0;
      cert.worst.u = crossing.u;
      cert.worst.t = crossing.t;
      break;
    }
  }
  if (cert.margin > 0.0 && tracker.min_abs() < cert.margin) cert.margin = tracker.min_abs();
  cert.pass = cert.margin > kArgCritThreshold;
  std::ostringstream extra;
  extra << "critical points of u -> g(u, t) followed along t";
  if (tracker.refinements() > 0) extra << " (" << tracker.refinements() << " bisections for pairing)";
  if (cert.margin == 0.0) extra << "; d_t arg g changes sign along a branch";
  cert.note = threshold_note(kArgCritThreshold, extra.str());
  return cert;
}

Certificate isolation_check(const MixedPoly& p, std::size_t r_samples, std::size_t t_samples, Exec exec) {
  if (!p.monic_in_u() || p.deg_u() < 1) throw std::invalid_argument("isolation_check: p must be monic in u of degree >= 1");
  if (r_samples < 1 || t_samples < 1) throw std::invalid_argument("isolation_check: empty grid");
  const auto& m = p.meta();
  const bool radial = m.q1 == 0.0 && m.q2 == 0.0;

  Certificate cert;
  cert.kind = CertKind::Isolation;
  cert.threshold = kIsolationThreshold;
  cert.grid.r_samples = r_samples;
  cert.grid.t_samples = t_samples;
  cert.params = params_of(m);

  const Wirtinger w = wirtinger(p);
  const auto ts = periodic_grid(t_samples, 0.0, kTwoPi);
  auto points = kernels::map_grid<IsolationPoint>(exec, r_samples * t_samples, [&](std::size_t n) {
    const double r = static_cast<double>(n / t_samples + 1) / static_cast<double>(r_samples);
    return isolation_at(p, w, r, ts[n % t_samples], radial);
  });

  const std::size_t worst = kernels::ordered_argmin(points, [](const IsolationPoint& q) { return q.ratio; });
  bool det_ok = true;
  double radial_rel = 0.0;
  for (const auto& q : points) {
    det_ok = det_ok && q.det_ok;
    radial_rel = std::max(radial_rel, q.radial_rel);
  }
  const bool radial_ok = !radial || radial_rel < kRadialTolerance;

  cert.margin = points[worst].ratio;
  cert.worst.u = points[worst].u;
  cert.worst.v = points[worst].v;
  cert.worst.t = std::arg(points[worst].v);
  cert.pass = cert.margin > kIsolationThreshold && det_ok && radial_ok;

  std::ostringstream extra;
  extra << "normalized smallest singular value at u-critical points";
  if (!det_ok) extra << "; closed-form rank test failed";
  if (radial) extra << "; radial identity max relative error " << std::setprecision(3) << radial_rel;
  if (p.deg_u() == 1) extra << "; no u-critical points: vacuous pass";
  cert.note = threshold_note(kIsolationThreshold, extra.str());
  return cert;
}

Certificate radial_identity_check(const MixedPoly& p, std::size_t r_samples, std::size_t t_samples, double tol,
                                  Exec exec) {
  const auto& m = p.meta();
  if (m.q1 != 0.0 || m.q2 != 0.0) throw std::invalid_argument("radial_identity_check: needs q1 = q2 = 0");
  const Wirtinger w = wirtinger(p);
  const auto ts = periodic_grid(t_samples, 0.0, kTwoPi);
  auto points = kernels::map_grid<IsolationPoint>(exec, r_samples * t_samples, [&](std::size_t n) {
    const double r = static_cast<double>(n / t_samples + 1) / static_cast<double>(r_samples);
    return isolation_at(p, w, r, ts[n % t_samples], true);
  });

  // Margin is the headroom below tol, so it is positive exactly when the check passes.
  std::size_t worst = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].radial_rel > points[worst].radial_rel) worst = i;

  Certificate cert;
  cert.kind = CertKind::RadialIdentity;
  cert.grid.r_samples = r_samples;
  cert.grid.t_samples = t_samples;
  cert.params = params_of(m);
  cert.margin = tol - (points.empty() ? 0.0 : points[worst].radial_rel);
  cert.threshold = 0.0;
  cert.pass = cert.margin > 0.0;
  if (!points.empty()) {
    cert.worst.u = points[worst].u;
    cert.worst.v = points[worst].v;
    cert.worst.t = std::arg(points[worst].v);
  }
  std::ostringstream extra;
  extra << "margin = " << tol << " - max relative error of d_r p - 2sk p / r at u-critical points";
  cert.note = threshold_note(0.0, extra.str());
  return cert;
}

SphereCurve sample_sphere_curve(const MixedPoly& p, const BraidParam& b, double rho, std::size_t t_samples) {
  const StrandScale sc = scale_of(p.meta());
  const std::size_t s = static_cast<std::size_t>(b.total_strands());
  SphereCurve out;
  out.rho = rho;
  out.t = periodic_grid(t_samples, 0.0, kTwoPi);
  out.u.assign(s, std::vector<Complex>(t_samples));
  out.r.assign(s, std::vector<double>(t_samples));
  for (std::size_t i = 0; i < t_samples; ++i) {
    const auto xy = b.positions(out.t[i]);
    for (std::size_t j = 0; j < s; ++j) {
      const double r = sphere_radius(sc, xy[j], rho);
      out.r[j][i] = r;
      out.u[j][i] = root_at(sc, xy[j], r);
    }
  }
  return out;
}

Certificate sphere_link_check(const MixedPoly& p, const BraidParam& b, const std::vector<double>& radii,
                              const SphereOptions& opts, Exec exec) {
  for (double rho : radii)
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("sphere_link_check: radii must lie in (0, 1]");
  if (p.strands() != b.total_strands()) throw std::invalid_argument("sphere_link_check: p was not built from this braid");

  Certificate cert;
  cert.kind = CertKind::SphereLink;
  cert.threshold = kSphereThreshold;
  cert.grid.t_samples = opts.t_samples;
  cert.grid.point_samples = opts.transversality_samples;
  cert.params = params_of(p.meta(), radii);

  const StrandScale sc = scale_of(p.meta());
  const std::size_t s = static_cast<std::size_t>(b.total_strands());
  const ExtractedWord raw = extract_word(curves_of(b), ExtractOptions{opts.t_samples, std::nullopt});

  bool words_ok = true;
  bool residual_ok = true;
  std::ostringstream extra;
  extra << "raw word " << raw.word.to_string();
  cert.margin = kInfiniteMargin;

  for (double rho : radii) {
    StrandCurves curves{s, [&](double t, std::span<Complex> out) {
                          const auto xy = b.positions(t);
                          for (std::size_t j = 0; j < s; ++j) out[j] = root_at(sc, xy[j], sphere_radius(sc, xy[j], rho));
                        }};
    const ExtractedWord at_rho = extract_word(curves, ExtractOptions{opts.t_samples, raw.origin});
    if (!(at_rho.word == raw.word)) {
      words_ok = false;
      extra << "; rho " << rho << " gives " << at_rho.word.to_string();
    }

    const auto ts = periodic_grid(opts.transversality_samples, 0.0, kTwoPi);
    auto points = kernels::map_grid<TransversalityPoint>(exec, ts.size() * s, [&](std::size_t n) {
      const double t = ts[n / s];
      const Complex xy = b.positions(t)[n % s];
      const double r = sphere_radius(sc, xy, rho);
      const Complex u = root_at(sc, xy, r), du = root_dr(sc, xy, r);
      const Complex e = std::polar(1.0, t), v = r * e;
      TransversalityPoint q;
      q.u = u;
      q.v = v;
      q.t = t;
      const double along = (std::conj(u) * du).real() + r;
      q.cosine = along / (std::sqrt(std::norm(u) + r * r) * std::sqrt(std::norm(du) + 1.0));
      q.residual = std::abs(p.eval(u, v)) / std::max(p.abs_eval(u, v), 1e-300);
      return q;
    });
    const std::size_t worst = kernels::ordered_argmin(points, [](const TransversalityPoint& q) { return q.cosine; });
    for (const auto& q : points) residual_ok = residual_ok && q.residual < 1e-8;
    if (points[worst].cosine < cert.margin) {
      cert.margin = points[worst].cosine;
      cert.worst = {points[worst].u, points[worst].v, points[worst].t, rho};
    }
  }
  if (!residual_ok) extra << "; p does not vanish on the predicted roots";
  cert.pass = words_ok && residual_ok && cert.margin > kSphereThreshold;
  cert.note = threshold_note(kSphereThreshold, extra.str());
  return cert;
}

Certificate d_regularity_check(const MixedPoly& p, const std::vector<double>& radii, std::size_t pencil_samples,
                               std::size_t point_samples, Exec exec) {
  if (pencil_samples < 1) throw std::invalid_argument("d_regularity_check: need at least one pencil bin");
  for (double rho : radii)
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("d_regularity_check: radii must lie in (0, 1]");
  const auto& m = p.meta();
  const Wirtinger w = wirtinger(p);

  std::size_t n = 1;
  while (n * n * n < point_samples) ++n;

  Certificate cert;
  cert.kind = CertKind::DRegular;
  cert.threshold = kDRegThreshold;
  cert.grid.point_samples = n * n * n;
  cert.grid.pencil_samples = pencil_samples;
  cert.grid.t_samples = 256;
  cert.params = params_of(m, radii);
  cert.margin = kInfiniteMargin;

  const bool cases = m.q1 == m.q2;
  bool covered = true;
  double drift = 0.0;
  std::ostringstream extra;
  extra << "tangential part of grad arg p on the sphere";

  for (double rho : radii) {
    auto points = kernels::map_grid<DRegPoint>(exec, n * n * n, [&](std::size_t idx) {
      const std::size_t ie = idx / (n * n), i1 = (idx / n) % n, i2 = idx % n;
      const double eta = (static_cast<double>(ie) + 0.5) * std::numbers::pi / (2.0 * static_cast<double>(n));
      // Angles are jittered inside their cells by a golden-ratio sequence, so
      // arg u and arg v take n^3 distinct values instead of n.
      const double jitter1 = std::fmod(0.618034 * static_cast<double>(ie * n + i2), 1.0);
      const double jitter2 = std::fmod(0.754878 * static_cast<double>(ie * n + i1), 1.0);
      const double phi1 = kTwoPi * (static_cast<double>(i1) + jitter1) / static_cast<double>(n);
      DRegPoint out;
      out.ratio = 0.0;
      for (int attempt = 0; attempt < 8; ++attempt) {
        const double phi2 = kTwoPi * (static_cast<double>(i2) + jitter2 + 0.618034 * attempt) / static_cast<double>(n);
        const Complex u = std::polar(rho * std::cos(eta), phi1), v = std::polar(rho * std::sin(eta), phi2);
        out.u = u;
        out.v = v;
        const Complex val = p.eval(u, v);
        if (std::abs(val) < 1e-10 * p.abs_eval(u, v)) continue;
        const Vec4 x{u.real() / rho, u.imag() / rho, v.real() / rho, v.imag() / rho};
        Vec4 g = arg_gradient(p, w, u, v);
        const double gn = norm(g), radial = dot(g, x);
        for (int c = 0; c < 4; ++c) g[c] -= radial * x[c];
        out.ratio = gn > 0.0 ? norm(g) / gn : 0.0;
        double phase = std::fmod(std::arg(val) + kTwoPi, std::numbers::pi);
        out.bin = std::min(static_cast<int>(phase / std::numbers::pi * static_cast<double>(pencil_samples)),
                           static_cast<int>(pencil_samples) - 1);
        break;
      }
      return out;
    });
    const std::size_t worst = kernels::ordered_argmin(points, [](const DRegPoint& q) { return q.ratio; });
    if (points[worst].ratio < cert.margin) {
      cert.margin = points[worst].ratio;
      cert.worst = {points[worst].u, points[worst].v, std::arg(points[worst].v), rho};
    }
    std::vector<bool> hit(pencil_samples, false);
    for (const auto& q : points)
      if (q.bin >= 0) hit[static_cast<std::size_t>(q.bin)] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) covered = false;

    if (!cases) continue;
    // Vectors tangent to the pencil leaves from the case split: radial in v
    // on u = 0, radial in u on v = 0, along u = r^{2k+q} w otherwise.
    const std::size_t nc = cert.grid.t_samples;
    const auto ts = periodic_grid(nc, 0.0, kTwoPi);
    const double q = m.q1;
    auto checks = kernels::map_grid<CasePoint>(exec, 2 * nc + points.size(), [&](std::size_t idx) {
      if (idx < 2 * nc) {
        const double t = ts[idx % nc];
        const Complex e = std::polar(1.0, t);
        if (idx < nc) return case_vector(p, w, Complex{}, rho * e, Vec4{0.0, 0.0, e.real(), e.imag()});
        return case_vector(p, w, rho * e, Complex{}, Vec4{e.real(), e.imag(), 0.0, 0.0});
      }
      const auto& pt = points[idx - 2 * nc];
      const double r = std::abs(pt.v);
      const Complex du = (2.0 * m.k + q) * pt.u / r, e = pt.v / r;
      return case_vector(p, w, pt.u, pt.v, Vec4{du.real(), du.imag(), e.real(), e.imag()});
    });
    for (const auto& c : checks) {
      drift = std::max(drift, c.arg_drift);
      if (c.non_tangency < cert.margin) {
        cert.margin = c.non_tangency;
        cert.worst = {c.u, c.v, std::arg(c.v), rho};
      }
    }
  }

  const bool drift_ok = drift < 1e-6;
  if (!covered) extra << "; some pencil leaf was never sampled";
  if (cases) extra << "; case-split vectors: max arg drift " << std::setprecision(3) << drift;
  else extra << "; case-split vectors skipped (q1 != q2)";
  cert.pass = cert.margin > kDRegThreshold && covered && drift_ok;
  cert.note = threshold_note(kDRegThreshold, extra.str());
  return cert;
}

TuneResult tune_lambda(const BraidParam& b, int k, double q1, double q2, double lambda0, const TuneOptions& opts) {
  if (!(lambda0 > 0.0 && lambda0 <= 1.0)) throw std::invalid_argument("tune_lambda: lambda0 must lie in (0, 1]");
  const GradedBraidPoly g = expand_g(b);
  std::ostringstream history;
  double lambda = lambda0;
  for (int halving = 0; halving <= opts.max_halvings; ++halving, lambda /= 2.0) {
    TuneResult out;
    out.lambda = lambda;
    out.p = build_polynomial(g, ConstructionMeta{opts.a, opts.b, k, q1, q2, lambda});
    Certificate link = sphere_link_check(out.p, b, opts.radii, opts.sphere, opts.exec);
    bool ok = link.pass;
    history << " lambda " << lambda << ": sphere margin " << link.margin << (link.pass ? " pass" : " fail");
    out.certificates.push_back(std::move(link));
    if (ok && opts.require_isolation) {
      Certificate iso = isolation_check(out.p, opts.r_samples, opts.t_samples, opts.exec);
      ok = iso.pass;
      history << ", isolation margin " << iso.margin << (iso.pass ? " pass" : " fail");
      out.certificates.push_back(std::move(iso));
    }
    history << ';';
    if (ok) return out;
  }
  throw Exhausted("tune_lambda: no lambda passed after " + std::to_string(opts.max_halvings) + " halvings:" + history.str());
}

} // namespace sforge
