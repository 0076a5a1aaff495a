#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sforge/braid.hpp"
#include "sforge/certify.hpp"
#include "sforge/construct.hpp"
#include "sforge/errors.hpp"

namespace sforge {

/// Malformed or out-of-range job description.
class ConfigError : public Error { using Error::Error; };
/// File could not be read or written.
class IoError : public Error { using Error::Error; };

struct LemniscateInput {
  int s = 2;
  int ell = 1;
  int r = 1;
};

struct FourierInput {
  std::vector<StrandComponent> components;
};

struct WordInput {
  BraidWord word;
};

struct BRange {
  double lo = 1.0 / 64.0;
  double hi = 1.0;
  int steps = 13;
};

struct ExtraTerm {
  MixedKey key;
  Complex c;
};

struct JobConfig {
  std::variant<LemniscateInput, FourierInput, WordInput> input;
  double a = 1.0;
  double b = 1.0;
  double lambda0 = 1.0;
  bool tune = false;
  std::optional<int> k;
  std::optional<std::pair<double, double>> q; ///< explicit (q1, q2); unset means derive
  bool square = false;
  std::vector<double> radii{0.25, 0.5, 1.0};
  std::size_t t_samples = 2048;
  std::size_t r_samples = 32;
  std::size_t point_samples = 10000;
  std::size_t pencil_samples = 64;
  std::vector<std::string> checks;
  BRange b_range;
  std::string out_dir = ".";
  /// Added to p after construction; used for negative controls.
  std::vector<ExtraTerm> extra_terms;
};

JobConfig parse_config(const std::string& json_text);
JobConfig load_config(const std::filesystem::path& path);
/// Throws ConfigError naming the first violated constraint.
void validate(const JobConfig& cfg);

/// Parses "s1 s2^-1" (or "e" for the empty word).
BraidWord parse_word(int strands, const std::string& text);

/// The parametrised braid of a lemniscate or Fourier input, squared when asked.
BraidParam braid_of(const JobConfig& cfg);

struct Construction {
  BraidParam braid;
  GradedBraidPoly g;
  MixedPoly p;
};

/// expand_g, derive_scaling (or the explicit q), choose_k (or the explicit k)
/// and homogenize at lambda0, then the extra terms.
Construction construct(const JobConfig& cfg);
MixedPoly with_extra_terms(const MixedPoly& p, const std::vector<ExtraTerm>& extra);

std::string poly_to_json(const MixedPoly& p);
MixedPoly poly_from_json(const std::string& json_text);
std::string certificates_to_json(const std::vector<Certificate>& certs);

struct ScanRow {
  double b = 0.0;
  double margin = 0.0;
  bool pass = false;
};
std::string scan_to_csv(const std::vector<ScanRow>& rows);
std::string curves_to_csv(const std::vector<SphereCurve>& curves);

/// b values lo * (hi/lo)^(i/(steps-1)) via exp2, so powers of two land exactly.
std::vector<double> log_spaced(double lo, double hi, int steps);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace sforge
