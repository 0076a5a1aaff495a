// singular-forge: construct semiholomorphic polynomials from braids and
// certify them numerically.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid input or impossible
// construction, 3 certification failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sforge/certify.hpp"
#include "sforge/construct.hpp"
#include "sforge/errors.hpp"
#include "sforge/io.hpp"
#include "sforge/kernels.hpp"

using namespace sforge;

namespace {

constexpr int kOk = 0;
constexpr int kIoFailure = 1;
constexpr int kInvalid = 2;
constexpr int kCertFailure = 3;
constexpr std::size_t kCurveSamples = 1024;

struct Overrides {
  std::string config;
  std::optional<int> s, ell, r, k, strands;
  std::optional<double> a, b, lambda0, b_lo, b_hi;
  std::optional<int> b_steps;
  std::optional<std::size_t> t_samples, r_samples;
  std::optional<std::string> word, out_dir;
  std::vector<double> radii;
  std::vector<std::string> checks;
  bool square = false;
  bool tune = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON job description");
  cmd->add_option("--s", o.s, "lemniscate strand count");
  cmd->add_option("--ell", o.ell, "lemniscate y-frequency");
  cmd->add_option("--r", o.r, "lemniscate twist (default 1)");
  cmd->add_option("--a", o.a, "x stretch a > 0");
  cmd->add_option("--b", o.b, "y stretch b > 0");
  cmd->add_option("--k", o.k, "homogenization degree k >= 1 (default: smallest valid)");
  cmd->add_flag("--square", o.square, "use the square of the braid (t -> 2t)");
  cmd->add_option("--radii", o.radii, "sphere radii in (0, 1]")->delimiter(',');
  cmd->add_option("--t-samples", o.t_samples, "t-grid size");
  cmd->add_option("--r-samples", o.r_samples, "r-grid size");
  cmd->add_option("--lambda0", o.lambda0, "stretch factor lambda, or the tuning start");
  cmd->add_flag("--tune", o.tune, "halve lambda until the sphere and isolation checks pass");
  cmd->add_option("--out-dir", o.out_dir, "directory for output files");
}

JobConfig resolve(const Overrides& o) {
  JobConfig cfg;
  bool has_input = false;
  if (!o.config.empty()) {
    cfg = load_config(o.config);
    has_input = true;
  }
  if (o.s || o.ell || o.r) {
    if (!o.s || !o.ell) throw ConfigError("--s and --ell must be given together");
    cfg.input = LemniscateInput{*o.s, *o.ell, o.r.value_or(1)};
    has_input = true;
  }
  if (o.word) {
    if (!o.strands) throw ConfigError("--word needs --strands");
    cfg.input = WordInput{parse_word(*o.strands, *o.word)};
    has_input = true;
  }
  if (!has_input) throw ConfigError("no input: give --config, --s/--ell or --word");
  if (o.a) cfg.a = *o.a;
  if (o.b) cfg.b = *o.b;
  if (o.k) cfg.k = *o.k;
  if (o.square) cfg.square = true;
  if (o.tune) cfg.tune = true;
  if (!o.radii.empty()) cfg.radii = o.radii;
  if (o.t_samples) cfg.t_samples = *o.t_samples;
  if (o.r_samples) cfg.r_samples = *o.r_samples;
  if (o.lambda0) cfg.lambda0 = *o.lambda0;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (!o.checks.empty()) cfg.checks = o.checks;
  if (o.b_lo) cfg.b_range.lo = *o.b_lo;
  if (o.b_hi) cfg.b_range.hi = *o.b_hi;
  if (o.b_steps) cfg.b_range.steps = *o.b_steps;
  validate(cfg);
  return cfg;
}

/// p at lambda0, or the first passing lambda when tuning is requested.
Construction build(const JobConfig& cfg) {
  Construction c = construct(cfg);
  if (!cfg.tune) return c;
  TuneOptions opts;
  opts.a = cfg.a;
  opts.b = cfg.b;
  opts.radii = cfg.radii;
  opts.r_samples = cfg.r_samples;
  TuneResult res = tune_lambda(c.braid, c.p.meta().k, c.p.meta().q1, c.p.meta().q2, cfg.lambda0, opts);
  c.p = with_extra_terms(res.p, cfg.extra_terms);
  std::cout << "tuned lambda: " << res.lambda << '\n';
  return c;
}

std::filesystem::path out_path(const JobConfig& cfg, const char* name) { return std::filesystem::path(cfg.out_dir) / name; }

int cmd_construct(const JobConfig& cfg) {
  const Construction c = build(cfg);
  const auto& m = c.p.meta();
  write_file(out_path(cfg, "poly.json"), poly_to_json(c.p));
  write_file(out_path(cfg, "poly.txt"), to_text(c.p));
  std::cout << "s = " << c.p.strands() << ", k = " << m.k << ", q1 = " << m.q1 << ", q2 = " << m.q2
            << ", lambda = " << m.lambda << ", " << c.p.terms().size() << " terms\n";
  return kOk;
}

Certificate failed_record(CertKind kind, const JobConfig& cfg, const std::string& why) {
  Certificate cert;
  cert.kind = kind;
  cert.pass = false;
  cert.margin = 0.0;
  cert.params.a = cfg.a;
  cert.params.b = cfg.b;
  cert.note = why;
  return cert;
}

int cmd_certify(const JobConfig& cfg) {
  std::vector<std::string> checks = cfg.checks;
  if (checks.empty()) checks = {"arg-crit", "isolation", "sphere-link", "d-regular"};
  for (const auto& name : checks)
    if (name != "arg-crit" && name != "isolation" && name != "radial" && name != "sphere-link" && name != "d-regular")
      throw ConfigError("unknown check '" + name + "' (arg-crit, isolation, radial, sphere-link, d-regular)");

  const BraidParam braid = braid_of(cfg);
  std::optional<Construction> built;
  auto poly = [&]() -> const MixedPoly& {
    if (!built) built = build(cfg);
    return built->p;
  };

  std::vector<Certificate> certs;
  for (const auto& name : checks) {
    if (name == "arg-crit") {
      try {
        certs.push_back(arg_crit_scan(braid, cfg.a, cfg.b, cfg.t_samples));
      } catch (const ZeroAtCritical& e) {
        certs.push_back(failed_record(CertKind::ArgCritFree, cfg, e.what()));
      }
    } else if (name == "isolation") {
      certs.push_back(isolation_check(poly(), cfg.r_samples, std::max<std::size_t>(cfg.t_samples / 8, 64)));
    } else if (name == "radial") {
      certs.push_back(radial_identity_check(poly(), cfg.r_samples, std::max<std::size_t>(cfg.t_samples / 8, 64)));
    } else if (name == "sphere-link") {
      certs.push_back(sphere_link_check(poly(), braid, cfg.radii, SphereOptions{cfg.t_samples, 512}));
    } else {
      certs.push_back(d_regularity_check(poly(), cfg.radii, cfg.pencil_samples, cfg.point_samples));
    }
  }
  write_file(out_path(cfg, "certificates.json"), certificates_to_json(certs));
  bool all = true;
  for (const auto& c : certs) {
    std::cout << to_string(c.kind) << ": " << (c.pass ? "pass" : "FAIL") << " (margin " << c.margin << ")\n";
    all = all && c.pass;
  }
  return all ? kOk : kCertFailure;
}

int cmd_scan_b(const JobConfig& cfg) {
  const BraidParam braid = braid_of(cfg);
  std::vector<ScanRow> rows;
  std::optional<double> best;
  for (double b : log_spaced(cfg.b_range.lo, cfg.b_range.hi, cfg.b_range.steps)) {
    ScanRow row{b, 0.0, false};
    try {
      const Certificate cert = arg_crit_scan(braid, cfg.a, b, cfg.t_samples);
      row.margin = cert.margin;
      row.pass = cert.pass;
    } catch (const ZeroAtCritical&) {
    }
    if (row.pass && (!best || b > *best)) best = b;
    rows.push_back(row);
  }
  write_file(out_path(cfg, "scan.csv"), scan_to_csv(rows));
  if (best) std::cout << "largest passing b: " << *best << '\n';
  else std::cout << "no passing b\n";
  return kOk;
}

int cmd_sample_curve(const JobConfig& cfg) {
  const Construction c = build(cfg);
  std::vector<SphereCurve> curves;
  for (double rho : cfg.radii) curves.push_back(sample_sphere_curve(c.p, c.braid, rho, kCurveSamples));
  write_file(out_path(cfg, "curves.csv"), curves_to_csv(curves));
  std::cout << curves.size() << " radii x " << c.braid.total_strands() << " strands x " << kCurveSamples << " samples\n";
  return kOk;
}

int cmd_word(const JobConfig& cfg) {
  BraidWord w;
  if (const auto* in = std::get_if<WordInput>(&cfg.input)) {
    w = in->word;
  } else {
    w = extract_word(curves_of(braid_of(cfg), cfg.a, cfg.b), ExtractOptions{cfg.t_samples, std::nullopt}).word;
  }
  std::cout << "word: " << w.to_string() << '\n'
            << "strictly_homogeneous: " << (is_strictly_homogeneous(w) ? "true" : "false") << '\n'
            << "symmetry: " << to_string(word_symmetry(w)) << '\n';
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  apply_thread_cap_from_env();
  std::cout.precision(17);

  CLI::App app{"Polynomials with prescribed links of singularities, and numerical certificates for them"};
  app.require_subcommand(1);
  Overrides o;

  auto* construct_cmd = app.add_subcommand("construct", "write poly.json and poly.txt");
  auto* certify_cmd = app.add_subcommand("certify", "write certificates.json; exit 3 if any check fails");
  auto* scan_cmd = app.add_subcommand("scan-b", "sweep b and write scan.csv");
  auto* curve_cmd = app.add_subcommand("sample-curve", "write curves.csv");
  auto* word_cmd = app.add_subcommand("word", "print a braid word and its predicates");
  for (auto* cmd : {construct_cmd, certify_cmd, scan_cmd, curve_cmd, word_cmd}) add_common(cmd, o);
  certify_cmd->add_option("--check", o.checks, "arg-crit, isolation, radial, sphere-link, d-regular")->delimiter(',');
  scan_cmd->add_option("--b-lo", o.b_lo, "smallest b");
  scan_cmd->add_option("--b-hi", o.b_hi, "largest b (at most 10)");
  scan_cmd->add_option("--b-steps", o.b_steps, "number of log-spaced values");
  word_cmd->add_option("--word", o.word, "literal word such as \"s1 s2^-1\"");
  word_cmd->add_option("--strands", o.strands, "strand count of --word");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    const JobConfig cfg = resolve(o);
    if (construct_cmd->parsed()) return cmd_construct(cfg);
    if (certify_cmd->parsed()) return cmd_certify(cfg);
    if (scan_cmd->parsed()) return cmd_scan_b(cfg);
    if (curve_cmd->parsed()) return cmd_sample_curve(cfg);
    return cmd_word(cfg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const Exhausted& e) {
    std::cerr << "certification failed: " << e.what() << '\n';
    return kCertFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
}
