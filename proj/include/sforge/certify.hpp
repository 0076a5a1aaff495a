#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "sforge/braid.hpp"
#include "sforge/construct.hpp"
#include "sforge/kernels.hpp"

namespace sforge {

enum class CertKind { ArgCritFree, Isolation, SphereLink, DRegular, RadialIdentity };
std::string to_string(CertKind k);

struct GridSpec {
  std::size_t t_samples = 0;
  std::size_t r_samples = 0;
  int refinement_depth = 0;
  std::size_t point_samples = 0;
  std::size_t pencil_samples = 0;
};

struct CertParams {
  double a = 1.0;
  double b = 1.0;
  int k = 0;
  double q1 = 0.0;
  double q2 = 0.0;
  double lambda = 1.0;
  std::vector<double> radii;
};

/// Where the margin was attained. Scans over t alone leave u and v at zero.
struct WorstPoint {
  Complex u{};
  Complex v{};
  double t = 0.0;
  double rho = 0.0;
};

/// Outcome of one numerical check. pass means margin > threshold plus any
/// side conditions named in note; it is evidence at grid resolution only.
struct Certificate {
  CertKind kind = CertKind::ArgCritFree;
  bool pass = false;
  double margin = 0.0;
  double threshold = 0.0;
  GridSpec grid;
  CertParams params;
  WorstPoint worst;
  std::string note;
};

inline constexpr double kInfiniteMargin = std::numeric_limits<double>::infinity();

/// Checks that g_{a,bb}(., t) has no argument-critical points: at the s-1
/// critical points u_k(t) of u -> g(u, t), Im(d_t g / g) stays away from 0.
/// The t-grid is refined x4 around the minimizer. Throws ZeroAtCritical when
/// a critical point lies on the zero set.
Certificate arg_crit_scan(const BraidParam& b, double a, double bb, std::size_t t_samples,
                          Exec exec = Exec::Parallel);

/// Rank test of the real Jacobian at the u-critical points over v = r e^{it},
/// r = i/r_samples. When q1 = q2 = 0 the radial identity
/// d_r p = 2sk p / r is checked at the same points.
Certificate isolation_check(const MixedPoly& p, std::size_t r_samples, std::size_t t_samples,
                            Exec exec = Exec::Parallel);

/// Radial identity alone, relative error against tol. Needs q1 = q2 = 0.
Certificate radial_identity_check(const MixedPoly& p, std::size_t r_samples, std::size_t t_samples,
                                  double tol = 1e-6, Exec exec = Exec::Parallel);

struct SphereOptions {
  std::size_t t_samples = 4096;
  std::size_t transversality_samples = 512;
};

/// Intersects the zero set with spheres of the given radii, reads off the
/// braid word at each and compares it with the word of the raw strands.
Certificate sphere_link_check(const MixedPoly& p, const BraidParam& b, const std::vector<double>& radii,
                              const SphereOptions& opts = {}, Exec exec = Exec::Parallel);

/// Sphere-curve samples for one radius: strand j's (u, r) at every t.
struct SphereCurve {
  double rho = 0.0;
  std::vector<double> t;
  /// u[j][i], r[j][i] for strand j at t[i]
  std::vector<std::vector<Complex>> u;
  std::vector<std::vector<double>> r;
};

SphereCurve sample_sphere_curve(const MixedPoly& p, const BraidParam& b, double rho, std::size_t t_samples);

/// Transversality of the spheres to every pencil leaf arg p = const.
Certificate d_regularity_check(const MixedPoly& p, const std::vector<double>& radii, std::size_t pencil_samples = 64,
                               std::size_t point_samples = 10000, Exec exec = Exec::Parallel);

struct TuneOptions {
  double a = 1.0;
  double b = 1.0;
  std::vector<double> radii{0.25, 0.5, 1.0};
  SphereOptions sphere;
  std::size_t r_samples = 32;
  std::size_t t_samples = 256;
  bool require_isolation = true;
  int max_halvings = 20;
  Exec exec = Exec::Parallel;
};

struct TuneResult {
  double lambda = 1.0;
  MixedPoly p;
  std::vector<Certificate> certificates;
};

/// Halves lambda from lambda0 until the sphere check (and the isolation check
/// when required) passes. Throws Exhausted with the last margins.
TuneResult tune_lambda(const BraidParam& b, int k, double q1, double q2, double lambda0,
                       const TuneOptions& opts = {});

} // namespace sforge
