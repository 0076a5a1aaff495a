#include "sforge/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace sforge {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

TrigPoly series_from_json(const json& list, const char* what) {
  TrigPoly::Coeffs c;
  bool has_negative = false;
  for (const auto& term : list) {
    const int f = term.at("freq").get<int>();
    const Complex v{get_or(term, "re", 0.0), get_or(term, "im", 0.0)};
    has_negative = has_negative || f < 0;
    c[f] += v;
  }
  // Only the nonnegative half was given: complete by conjugate symmetry.
  if (!has_negative) {
    TrigPoly::Coeffs full = c;
    for (const auto& [f, v] : c)
      if (f > 0) full[-f] = std::conj(v);
    c = std::move(full);
  }
  TrigPoly p(std::move(c));
  if (!p.real_valued()) throw ConfigError(std::string("fourier input: ") + what + " coefficients are not conjugate-symmetric");
  return p;
}

FourierInput fourier_from_json(const json& j) {
  FourierInput in;
  for (const auto& comp : j.at("components")) {
    StrandComponent c;
    c.strands = comp.at("strands").get<int>();
    c.speed = get_or(comp, "speed", 1);
    c.x = series_from_json(comp.at("x_coeffs"), "x");
    c.y = series_from_json(comp.at("y_coeffs"), "y");
    in.components.push_back(std::move(c));
  }
  if (in.components.empty()) throw ConfigError("fourier input needs at least one component");
  return in;
}

WordInput word_from_json(const json& j) {
  const int strands = j.at("strands").get<int>();
  const auto& letters = j.at("letters");
  if (letters.is_string()) return {parse_word(strands, letters.get<std::string>())};
  std::vector<Letter> out;
  for (const auto& l : letters) {
    const int signed_index = l.get<int>();
    if (signed_index == 0) throw ConfigError("word input: letter 0 is not a generator");
    out.push_back(Letter{std::abs(signed_index), signed_index > 0 ? 1 : -1});
  }
  try {
    return {BraidWord(strands, std::move(out))};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json complex_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

json margin_json(double m) {
  if (std::isinf(m)) return m > 0 ? json("inf") : json("-inf");
  if (std::isnan(m)) return json("nan");
  return json(m);
}

std::ostringstream csv_stream() {
  std::ostringstream out;
  out << std::setprecision(17);
  return out;
}

} // namespace

BraidWord parse_word(int strands, const std::string& text) {
  std::istringstream in(text);
  std::vector<Letter> letters;
  std::string tok;
  while (in >> tok) {
    if (tok == "e") continue;
    int index = 0, sign = 1;
    char tail = 0;
    if (std::sscanf(tok.c_str(), "s%d^%d%c", &index, &sign, &tail) == 2 ||
        std::sscanf(tok.c_str(), "s%d%c", &index, &tail) == 1) {
      letters.push_back(Letter{index, sign});
    } else {
      throw ConfigError("word: cannot read letter '" + tok + "' (expected s<i> or s<i>^-1)");
    }
  }
  try {
    return BraidWord(strands, std::move(letters));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

JobConfig parse_config(const std::string& json_text) {
  JobConfig cfg;
  try {
    const json j = json::parse(json_text);
    const auto& in = j.at("input");
    int variants = 0;
    if (in.contains("lemniscate")) {
      const auto& l = in.at("lemniscate");
      cfg.input = LemniscateInput{l.at("s").get<int>(), l.at("ell").get<int>(), get_or(l, "r", 1)};
      ++variants;
    }
    if (in.contains("fourier")) {
      cfg.input = fourier_from_json(in.at("fourier"));
      ++variants;
    }
    if (in.contains("word")) {
      cfg.input = word_from_json(in.at("word"));
      ++variants;
    }
    if (variants != 1) throw ConfigError("input must hold exactly one of lemniscate, fourier, word");

    cfg.a = get_or(j, "a", cfg.a);
    cfg.b = get_or(j, "b", cfg.b);
    cfg.lambda0 = get_or(j, "lambda0", cfg.lambda0);
    cfg.tune = get_or(j, "tune", cfg.tune);
    if (j.contains("k") && !j.at("k").is_null()) cfg.k = j.at("k").get<int>();
    if (j.contains("q_mode")) {
      const auto& q = j.at("q_mode");
      if (q.is_string()) {
        if (q.get<std::string>() != "auto") throw ConfigError("q_mode must be \"auto\" or {q1, q2}");
      } else {
        cfg.q = std::make_pair(q.at("q1").get<double>(), q.at("q2").get<double>());
      }
    }
    cfg.square = get_or(j, "square", cfg.square);
    cfg.radii = get_or(j, "radii", cfg.radii);
    if (j.contains("grids")) {
      const auto& g = j.at("grids");
      cfg.t_samples = get_or(g, "t_samples", cfg.t_samples);
      cfg.r_samples = get_or(g, "r_samples", cfg.r_samples);
      cfg.point_samples = get_or(g, "point_samples", cfg.point_samples);
      cfg.pencil_samples = get_or(g, "pencil_samples", cfg.pencil_samples);
    }
    cfg.checks = get_or(j, "checks", cfg.checks);
    if (j.contains("b_range")) {
      const auto& r = j.at("b_range");
      cfg.b_range = BRange{get_or(r, "lo", cfg.b_range.lo), get_or(r, "hi", cfg.b_range.hi), get_or(r, "steps", cfg.b_range.steps)};
    }
    cfg.out_dir = get_or(j, "out_dir", cfg.out_dir);
    if (j.contains("extra_terms")) {
      for (const auto& t : j.at("extra_terms"))
        cfg.extra_terms.push_back(ExtraTerm{MixedKey{t.at("i").get<int>(), t.at("alpha").get<int>(), t.at("beta").get<int>()},
                                            Complex{get_or(t, "re", 0.0), get_or(t, "im", 0.0)}});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

JobConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

void validate(const JobConfig& cfg) {
  if (!(cfg.a > 1e-12 && cfg.b > 1e-12)) throw ConfigError("a,b must exceed 1e-12");
  if (!std::isfinite(cfg.a) || !std::isfinite(cfg.b)) throw ConfigError("a,b must be finite");
  if (!(cfg.lambda0 > 0.0 && cfg.lambda0 <= 1.0)) throw ConfigError("lambda0 must lie in (0, 1]");
  if (cfg.radii.empty()) throw ConfigError("radii must not be empty");
  for (double r : cfg.radii)
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("radii must lie in (0, 1]");
  if (cfg.k && *cfg.k < 1) throw ConfigError("k must be >= 1");
  if (cfg.t_samples < 1024) throw ConfigError("t_samples must be >= 1024");
  if (cfg.r_samples < 1) throw ConfigError("r_samples must be >= 1");
  const auto& br = cfg.b_range;
  if (!(br.lo > 0.0 && br.lo <= br.hi && br.hi <= 10.0)) throw ConfigError("b_range must satisfy 0 < lo <= hi <= 10");
  if (br.steps < 1) throw ConfigError("b_range steps must be >= 1");
  if (std::holds_alternative<LemniscateInput>(cfg.input)) {
    const auto& l = std::get<LemniscateInput>(cfg.input);
    if (l.s < 1 || l.ell < 1 || l.r < 1) throw ConfigError("lemniscate s, ell, r must be >= 1");
  }
}

BraidParam braid_of(const JobConfig& cfg) {
  BraidParam b = std::visit(
      [](const auto& in) -> BraidParam {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, LemniscateInput>) return lemniscate(in.s, in.ell, in.r);
        else if constexpr (std::is_same_v<T, FourierInput>) return BraidParam(in.components);
        else throw ConfigError("word inputs are accepted only by the word command");
      },
      cfg.input);
  return cfg.square ? square_parametrisation(b) : b;
}

MixedPoly with_extra_terms(const MixedPoly& p, const std::vector<ExtraTerm>& extra) {
  MixedPoly out = p;
  for (const auto& t : extra) out = out.with_term(t.key, t.c);
  return out;
}

Construction construct(const JobConfig& cfg) {
  BraidParam b = braid_of(cfg);
  GradedBraidPoly g = expand_g(b);
  double q1 = 0.0, q2 = 0.0;
  if (cfg.q) {
    std::tie(q1, q2) = *cfg.q;
  } else {
    const ScalingExponents sc = derive_scaling(b);
    q1 = sc.q1;
    q2 = sc.q2;
  }
  const int k = cfg.k ? *cfg.k : choose_k(g);
  MixedPoly p = build_polynomial(g, ConstructionMeta{cfg.a, cfg.b, k, q1, q2, cfg.lambda0});
  return Construction{std::move(b), std::move(g), with_extra_terms(p, cfg.extra_terms)};
}

std::string poly_to_json(const MixedPoly& p) {
  json terms = json::array();
  for (const auto& [k, c] : p.terms())
    terms.push_back({{"i", k.u_deg}, {"alpha", k.alpha}, {"beta", k.beta}, {"re", c.real()}, {"im", c.imag()}});
  const auto& m = p.meta();
  json meta{{"s", p.strands()}, {"a", m.a}, {"b", m.b}, {"k", m.k}, {"q1", m.q1}, {"q2", m.q2}, {"lambda", m.lambda}};
  return json{{"terms", terms}, {"metadata", meta}}.dump(2) + "\n";
}

MixedPoly poly_from_json(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    MixedPoly::Terms terms;
    for (const auto& t : j.at("terms"))
      terms[MixedKey{t.at("i").get<int>(), t.at("alpha").get<int>(), t.at("beta").get<int>()}] +=
          Complex{t.at("re").get<double>(), t.at("im").get<double>()};
    const auto& m = j.at("metadata");
    ConstructionMeta meta{m.at("a").get<double>(), m.at("b").get<double>(), m.at("k").get<int>(),
                          m.at("q1").get<double>(), m.at("q2").get<double>(), m.at("lambda").get<double>()};
    return MixedPoly(m.at("s").get<int>(), std::move(terms), meta);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("poly.json: ") + e.what());
  }
}

std::string certificates_to_json(const std::vector<Certificate>& certs) {
  json out = json::array();
  for (const auto& c : certs) {
    out.push_back({
        {"kind", to_string(c.kind)},
        {"pass", c.pass},
        {"margin", margin_json(c.margin)},
        {"grid",
         {{"t_samples", c.grid.t_samples},
          {"r_samples", c.grid.r_samples},
          {"refinement_depth", c.grid.refinement_depth},
          {"point_samples", c.grid.point_samples},
          {"pencil_samples", c.grid.pencil_samples}}},
        {"params",
         {{"a", c.params.a},
          {"b", c.params.b},
          {"k", c.params.k},
          {"q1", c.params.q1},
          {"q2", c.params.q2},
          {"lambda", c.params.lambda},
          {"radii", c.params.radii}}},
        {"worst_point", {{"u", complex_json(c.worst.u)}, {"v", complex_json(c.worst.v)}, {"t", c.worst.t}, {"rho", c.worst.rho}}},
        {"note", c.note},
    });
  }
  return out.dump(2) + "\n";
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  auto out = csv_stream();
  out << "b,margin,pass\n";
  for (const auto& r : rows) {
    out << r.b << ',';
    if (std::isinf(r.margin)) out << "inf";
    else out << r.margin;
    out << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string curves_to_csv(const std::vector<SphereCurve>& curves) {
  auto out = csv_stream();
  out << "rho,strand,t,re_u,im_u,r\n";
  for (const auto& c : curves)
    for (std::size_t j = 0; j < c.u.size(); ++j)
      for (std::size_t i = 0; i < c.t.size(); ++i)
        out << c.rho << ',' << j + 1 << ',' << c.t[i] << ',' << c.u[j][i].real() << ',' << c.u[j][i].imag() << ','
            << c.r[j][i] << '\n';
  return out.str();
}

std::vector<double> log_spaced(double lo, double hi, int steps) {
  if (steps == 1) return {lo};
  const double l0 = std::log2(lo), l1 = std::log2(hi);
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) out.push_back(std::exp2(l0 + (l1 - l0) * i / (steps - 1)));
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace sforge
