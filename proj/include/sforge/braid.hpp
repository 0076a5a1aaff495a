#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sforge/trigpoly.hpp"

namespace sforge {

/// One group of strands sharing a trigonometric parametrisation.
///
/// Strand j = 1..strands sits at (x(tau), y(tau)) with
/// tau = (speed * t + 2 pi j) / strands. speed = 1 is the plain Fourier form;
/// speed = 2 is the same braid traversed twice (its square).
struct StrandComponent {
  int strands = 1;
  int speed = 1;
  TrigPoly x;
  TrigPoly y;
};

/// A braid given by finite Fourier data per component.
///
/// Construction checks that every coordinate series is real-valued and that
/// the strands stay pairwise disjoint on a 4096-point t-grid.
class BraidParam {
public:
  explicit BraidParam(std::vector<StrandComponent> components);

  const std::vector<StrandComponent>& components() const { return components_; }
  int total_strands() const { return total_; }

  /// a X_j(t) + i b Y_j(t) for every strand, components in order, j = 1..s_C.
  std::vector<Complex> positions(double t, double a = 1.0, double b = 1.0) const;
  void positions(double t, double a, double b, std::span<Complex> out) const;
  /// Time derivative of positions().
  std::vector<Complex> velocities(double t, double a = 1.0, double b = 1.0) const;

  /// Smallest pairwise strand distance over a periodic t-grid.
  double min_separation(std::size_t samples = 4096) const;

private:
  std::vector<StrandComponent> components_;
  // Per-component derivatives, cached for velocities().
  std::vector<std::pair<TrigPoly, TrigPoly>> derivatives_;
  int total_ = 0;
};

/// Strands cos((r t + 2 pi j)/s) + i sin(l (r t + 2 pi j)/s), grouped into
/// gcd(r, s) components of s / gcd(r, s) strands each.
BraidParam lemniscate(int s, int ell, int r);

/// t -> 2t in every strand curve; the parametrised braid becomes its square.
BraidParam square_parametrisation(const BraidParam& b);

/// pi with (X_j(2 pi), Y_j(2 pi)) = (X_{pi(j)}(0), Y_{pi(j)}(0)), 0-based.
/// Strands are matched within 1e-8. Throws AmbiguousMatch.
std::vector<int> closure_permutation(const BraidParam& b);

/// prod_j (u - a X_j(t) - i b Y_j(t)) evaluated directly from the strands.
Complex braid_polynomial(const BraidParam& b, double a, double bb, Complex u, double t);

struct Letter {
  int index = 1; ///< generator sigma_index, 1-based
  int sign = 1;  ///< +1 or -1

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Literal braid word on a fixed number of strands.
class BraidWord {
public:
  BraidWord() = default;
  /// Throws std::invalid_argument when an index leaves [1, strands-1] or a sign is not +-1.
  BraidWord(int strands, std::vector<Letter> letters);

  int strands() const { return strands_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }

  /// Slot permutation realised by the word: slot k ends up holding the strand
  /// that started in slot perm[k] (0-based).
  std::vector<int> slot_permutation() const;
  std::string to_string() const;

  friend bool operator==(const BraidWord&, const BraidWord&) = default;

private:
  int strands_ = 1;
  std::vector<Letter> letters_;
};

/// Sampled strand positions as a function of t, one complex x + iy per strand.
struct StrandCurves {
  std::size_t strands = 0;
  std::function<void(double, std::span<Complex>)> eval;
};

/// Curves of a parametrisation with x stretched by a and y by b.
StrandCurves curves_of(const BraidParam& b, double a = 1.0, double bb = 1.0);

struct ExtractOptions {
  std::size_t samples = 4096;
  /// Grid origin. When unset, the first origin in a fixed deterministic
  /// sequence whose grid keeps every pair of x-coordinates apart is used.
  std::optional<double> origin;
  double refine_dt = 1e-6;
};

struct ExtractedWord {
  BraidWord word;
  double origin = 0.0;
  std::size_t samples = 0;
  /// Strand indices sorted by x at the origin, and after one full period.
  std::vector<int> start_order;
  std::vector<int> end_order;
};

/// Reads off a braid word from x-order swaps over t in [origin, origin + 2 pi].
///
/// Convention: the letter's index is the 1-based slot of the left strand
/// before the swap; the sign is +1 when that strand (moving right) has the
/// larger y at the crossing. Near-simultaneous crossings are ordered by
/// bisection to refine_dt. Throws DegenerateCrossing when three strands meet
/// in x within 1e-10.
ExtractedWord extract_word(const StrandCurves& curves, const ExtractOptions& opts = {});

/// Every generator appears and each index keeps one sign throughout.
bool is_strictly_homogeneous(const BraidWord& w);

enum class WordSymmetry { Mirrored, SignFlipped, Square, None };

/// Compares the second half of the letter list with the first half: verbatim
/// (Square), with all signs switched (SignFlipped), or with indices mirrored
/// i -> s - i (Mirrored). Checked in that order on the literal word.
WordSymmetry word_symmetry(const BraidWord& w);
std::string to_string(WordSymmetry s);

} // namespace sforge
