#include "sforge/braid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

#include "sforge/errors.hpp"
#include "sforge/numerics.hpp"

namespace sforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMatchTolerance = 1e-8;
constexpr double kTripleTolerance = 1e-10;

double strand_tau(const StrandComponent& c, int j, double t) {
  return (c.speed * t + kTwoPi * j) / c.strands;
}

} // namespace

BraidParam::BraidParam(std::vector<StrandComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidBraid("BraidParam: at least one component is required");
  for (const auto& c : components_) {
    if (c.strands < 1) throw InvalidBraid("BraidParam: component strand count must be >= 1");
    if (c.speed < 1) throw InvalidBraid("BraidParam: component speed must be >= 1");
    if (!c.x.real_valued() || !c.y.real_valued())
      throw InvalidBraid("BraidParam: coordinate series must satisfy c_{-j} = conj(c_j)");
    total_ += c.strands;
    derivatives_.emplace_back(c.x.d_dt(), c.y.d_dt());
  }
  if (total_ > 1) {
    // Positive up to rounding: a true crossing of strands evaluates to a
    // distance of a few ulps of the coordinate scale, not exactly 0.
    double scale = 0.0;
    for (const auto& c : components_) scale = std::max({scale, c.x.abs_sum(), c.y.abs_sum()});
    const double sep = min_separation(4096);
    if (!(sep > 1e-12 * scale)) {
      std::ostringstream msg;
      msg << "BraidParam: strands intersect (minimum separation " << sep << " on a 4096-point grid)";
      throw InvalidBraid(msg.str());
    }
  }
}

void BraidParam::positions(double t, double a, double b, std::span<Complex> out) const {
  std::size_t k = 0;
  for (const auto& c : components_) {
    for (int j = 1; j <= c.strands; ++j) {
      const double tau = strand_tau(c, j, t);
      out[k++] = Complex{a * c.x.eval(tau).real(), b * c.y.eval(tau).real()};
    }
  }
}

std::vector<Complex> BraidParam::positions(double t, double a, double b) const {
  std::vector<Complex> out(static_cast<std::size_t>(total_));
  positions(t, a, b, out);
  return out;
}

std::vector<Complex> BraidParam::velocities(double t, double a, double b) const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(total_));
  for (std::size_t ci = 0; ci < components_.size(); ++ci) {
    const auto& c = components_[ci];
    const auto& [dx, dy] = derivatives_[ci];
    const double chain = static_cast<double>(c.speed) / c.strands;
    for (int j = 1; j <= c.strands; ++j) {
      const double tau = strand_tau(c, j, t);
      out.emplace_back(a * chain * dx.eval(tau).real(), b * chain * dy.eval(tau).real());
    }
  }
  return out;
}

double BraidParam::min_separation(std::size_t samples) const {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Complex> pos(static_cast<std::size_t>(total_));
  for (double t : periodic_grid(samples, 0.0, kTwoPi)) {
    positions(t, 1.0, 1.0, pos);
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = i + 1; j < pos.size(); ++j) best = std::min(best, std::abs(pos[i] - pos[j]));
  }
  return best;
}

BraidParam lemniscate(int s, int ell, int r) {
  if (s < 1 || ell < 1 || r < 1) throw InvalidBraid("lemniscate: s, ell and r must be >= 1");
  const int d = std::gcd(s, r);
  std::vector<StrandComponent> comps;
  for (int j0 = 0; j0 < d; ++j0) {
    // Strands j = j0 + d k share tau' = (r/d t + 2 pi k)/(s/d) shifted by 2 pi j0/s.
    StrandComponent c;
    c.strands = s / d;
    c.speed = r / d;
    c.x = TrigPoly::cosine_rotated(1, 1.0, unit_root(j0, s));
    c.y = TrigPoly::sine_rotated(ell, 1.0, unit_root(static_cast<long>(ell) * j0, s));
    comps.push_back(std::move(c));
  }
  return BraidParam(std::move(comps));
}

BraidParam square_parametrisation(const BraidParam& b) {
  std::vector<StrandComponent> comps = b.components();
  for (auto& c : comps) c.speed *= 2;
  return BraidParam(std::move(comps));
}

std::vector<int> closure_permutation(const BraidParam& b) {
  const auto start = b.positions(0.0);
  const auto end = b.positions(kTwoPi);
  const std::size_t n = start.size();
  std::vector<int> perm(n, -1);
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    int found = -1;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(end[j] - start[k]) < kMatchTolerance) {
        if (found >= 0) {
          std::ostringstream msg;
          msg << "closure_permutation: strand " << j << " end matches starts " << found << " and " << k;
          throw AmbiguousMatch(msg.str());
        }
        found = static_cast<int>(k);
      }
    }
    if (found < 0 || used[static_cast<std::size_t>(found)]) {
      std::ostringstream msg;
      msg << "closure_permutation: no unique start point for the end of strand " << j;
      throw AmbiguousMatch(msg.str());
    }
    used[static_cast<std::size_t>(found)] = true;
    perm[j] = found;
  }
  return perm;
}

Complex braid_polynomial(const BraidParam& b, double a, double bb, Complex u, double t) {
  Complex acc{1.0, 0.0};
  for (const Complex& z : b.positions(t, a, bb)) acc *= (u - z);
  return acc;
}

BraidWord::BraidWord(int strands, std::vector<Letter> letters) : strands_(strands), letters_(std::move(letters)) {
  if (strands_ < 1) throw std::invalid_argument("BraidWord: strand count must be >= 1");
  for (const auto& l : letters_) {
    if (l.index < 1 || l.index > strands_ - 1) {
      std::ostringstream msg;
      msg << "BraidWord: generator index " << l.index << " outside [1, " << strands_ - 1 << "]";
      throw std::invalid_argument(msg.str());
    }
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("BraidWord: sign must be +1 or -1");
  }
}

std::vector<int> BraidWord::slot_permutation() const {
  std::vector<int> slots(static_cast<std::size_t>(strands_));
  std::iota(slots.begin(), slots.end(), 0);
  for (const auto& l : letters_) std::swap(slots[l.index - 1], slots[l.index]);
  return slots;
}

std::string BraidWord::to_string() const {
  if (letters_.empty()) return "e";
  std::ostringstream out;
  for (std::size_t k = 0; k < letters_.size(); ++k) {
    if (k) out << ' ';
    out << 's' << letters_[k].index;
    if (letters_[k].sign < 0) out << "^-1";
  }
  return out.str();
}

StrandCurves curves_of(const BraidParam& b, double a, double bb) {
  return StrandCurves{static_cast<std::size_t>(b.total_strands()),
                      [b, a, bb](double t, std::span<Complex> out) { b.positions(t, a, bb, out); }};
}

namespace {

struct Sample {
  double t;
  std::vector<Complex> pos;
};

class WordReader {
public:
  WordReader(const StrandCurves& curves, double refine_dt) : curves_(curves), refine_dt_(refine_dt) {}

  Sample sample(double t) const {
    Sample s{t, std::vector<Complex>(curves_.strands)};
    curves_.eval(t, s.pos);
    return s;
  }

  // Processes the crossings between two samples, splitting the interval when
  // the swaps cannot be applied one adjacent pair at a time.
  void process(const Sample& lo, const Sample& hi, std::vector<int>& order, std::vector<int>& slot_of,
               std::vector<Letter>& letters, int depth) const {
    struct Event {
      double t;
      int p, q;
    };
    std::vector<Event> events;
    const std::size_t n = curves_.strands;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double d0 = lo.pos[p].real() - lo.pos[q].real();
        const double d1 = hi.pos[p].real() - hi.pos[q].real();
        if ((d0 < 0.0) != (d1 < 0.0)) events.push_back({crossing_time(lo, hi, p, q), static_cast<int>(p), static_cast<int>(q)});
      }
    }
    if (events.empty()) return;
    std::sort(events.begin(), events.end(), [](const Event& e, const Event& f) {
      return e.t != f.t ? e.t < f.t : (e.p != f.p ? e.p < f.p : e.q < f.q);
    });

    auto trial_order = order;
    auto trial_slot = slot_of;
    std::vector<Letter> trial_letters;
    bool consistent = true;
    for (const auto& e : events) {
      const int sp = trial_slot[e.p], sq = trial_slot[e.q];
      if (std::abs(sp - sq) != 1) {
        consistent = false;
        break;
      }
      const int left = sp < sq ? e.p : e.q;
      const int right = sp < sq ? e.q : e.p;
      const Sample at = sample(e.t);
      check_triple(at, left, right);
      const int sign = at.pos[left].imag() > at.pos[right].imag() ? 1 : -1;
      trial_letters.push_back({std::min(sp, sq) + 1, sign});
      std::swap(trial_order[sp], trial_order[sq]);
      trial_slot[left] = std::max(sp, sq);
      trial_slot[right] = std::min(sp, sq);
    }
    if (consistent) {
      order = std::move(trial_order);
      slot_of = std::move(trial_slot);
      letters.insert(letters.end(), trial_letters.begin(), trial_letters.end());
      return;
    }
    if (depth > 40 || hi.t - lo.t < 1e-13) {
      const Sample at = sample(events.front().t);
      check_triple(at, events.front().p, events.front().q);
      throw DegenerateCrossing("extract_word: crossings could not be ordered into adjacent swaps");
    }
    const Sample mid = sample(0.5 * (lo.t + hi.t));
    process(lo, mid, order, slot_of, letters, depth + 1);
    process(mid, hi, order, slot_of, letters, depth + 1);
  }

private:
  double crossing_time(const Sample& lo, const Sample& hi, std::size_t p, std::size_t q) const {
    double a = lo.t, b = hi.t;
    const bool neg_at_a = lo.pos[p].real() - lo.pos[q].real() < 0.0;
    std::vector<Complex> buf(curves_.strands);
    while (b - a > refine_dt_) {
      const double m = 0.5 * (a + b);
      curves_.eval(m, buf);
      if ((buf[p].real() - buf[q].real() < 0.0) == neg_at_a)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  }

  void check_triple(const Sample& at, int p, int q) const {
    double scale = 0.0;
    for (const auto& z : at.pos) scale = std::max(scale, std::abs(z.real()));
    const double tol = kTripleTolerance * std::max(scale, 1e-300);
    const double xm = 0.5 * (at.pos[p].real() + at.pos[q].real());
    for (std::size_t r = 0; r < at.pos.size(); ++r) {
      if (static_cast<int>(r) == p || static_cast<int>(r) == q) continue;
      if (std::abs(at.pos[r].real() - xm) < tol && std::abs(at.pos[p].real() - at.pos[q].real()) < tol) {
        std::ostringstream msg;
        msg << "extract_word: strands " << p << ", " << q << ", " << r << " share an x-coordinate at t = " << at.t;
        throw DegenerateCrossing(msg.str());
      }
    }
  }

  const StrandCurves& curves_;
  double refine_dt_;
};

double min_x_gap(const std::vector<Complex>& pos) {
  std::vector<double> xs;
  xs.reserve(pos.size());
  double scale = 0.0;
  for (const auto& z : pos) {
    xs.push_back(z.real());
    scale = std::max(scale, std::abs(z.real()));
  }
  std::sort(xs.begin(), xs.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < xs.size(); ++i) gap = std::min(gap, xs[i] - xs[i - 1]);
  return scale > 0.0 ? gap / scale : gap;
}

} // namespace

ExtractedWord extract_word(const StrandCurves& curves, const ExtractOptions& opts) {
  if (opts.samples < 1024) throw std::invalid_argument("extract_word: at least 1024 samples are required");
  const std::size_t n = curves.strands;
  ExtractedWord out;
  out.samples = opts.samples;
  const double step = kTwoPi / static_cast<double>(opts.samples);
  WordReader reader(curves, opts.refine_dt);

  std::vector<Sample> grid;
  auto build_grid = [&](double origin) {
    grid.clear();
    grid.reserve(opts.samples + 1);
    for (std::size_t i = 0; i <= opts.samples; ++i) grid.push_back(reader.sample(origin + step * static_cast<double>(i)));
  };
  auto grid_is_clean = [&]() {
    return std::all_of(grid.begin(), grid.end(), [](const Sample& s) { return min_x_gap(s.pos) > 1e-10; });
  };

  if (opts.origin) {
    out.origin = *opts.origin;
    build_grid(out.origin);
    if (min_x_gap(grid.front().pos) <= 1e-10)
      throw DegenerateCrossing("extract_word: two strands share an x-coordinate at the requested origin");
  } else {
    // Golden-ratio fractions of a grid step avoid landing on symmetric crossings.
    constexpr double kGolden = 0.38196601125010515;
    bool found = false;
    for (int k = 0; k < 64 && !found; ++k) {
      out.origin = step * std::fmod(kGolden * k, 1.0);
      build_grid(out.origin);
      found = n < 2 || grid_is_clean();
    }
    if (!found) throw DegenerateCrossing("extract_word: no grid origin keeps the strands' x-coordinates apart");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int p, int q) { return grid.front().pos[p].real() < grid.front().pos[q].real(); });
  std::vector<int> slot_of(n);
  for (std::size_t k = 0; k < n; ++k) slot_of[order[k]] = static_cast<int>(k);
  out.start_order = order;

  std::vector<Letter> letters;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) reader.process(grid[i], grid[i + 1], order, slot_of, letters, 0);
  out.end_order = order;
  out.word = BraidWord(static_cast<int>(std::max<std::size_t>(n, 1)), std::move(letters));
  return out;
}

bool is_strictly_homogeneous(const BraidWord& w) {
  std::vector<int> sign(static_cast<std::size_t>(w.strands()), 0);
  for (const auto& l : w.letters()) {
    int& s = sign[static_cast<std::size_t>(l.index)];
    if (s == 0)
      s = l.sign;
    else if (s != l.sign)
      return false;
  }
  for (int i = 1; i < w.strands(); ++i)
    if (sign[static_cast<std::size_t>(i)] == 0) return false;
  return true;
}

WordSymmetry word_symmetry(const BraidWord& w) {
  const auto& L = w.letters();
  if (L.empty() || L.size() % 2 != 0) return WordSymmetry::None;
  const std::size_t half = L.size() / 2;
  auto matches = [&](auto&& map) {
    for (std::size_t k = 0; k < half; ++k)
      if (!(L[half + k] == map(L[k]))) return false;
    return true;
  };
  if (matches([](Letter l) { return l; })) return WordSymmetry::Square;
  if (matches([](Letter l) { return Letter{l.index, -l.sign}; })) return WordSymmetry::SignFlipped;
  const int s = w.strands();
  if (matches([s](Letter l) { return Letter{s - l.index, l.sign}; })) return WordSymmetry::Mirrored;
  return WordSymmetry::None;
}

std::string to_string(WordSymmetry s) {
  switch (s) {
    case WordSymmetry::Mirrored: return "mirrored";
    case WordSymmetry::SignFlipped: return "sign_flipped";
    case WordSymmetry::Square: return "square";
    case WordSymmetry::None: break;
  }
  return "none";
}

} // namespace sforge
