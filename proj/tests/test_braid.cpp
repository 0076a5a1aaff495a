#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sforge/braid.hpp"
#include "sforge/errors.hpp"

using namespace sforge;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> cycle_lengths(const std::vector<int>& perm) {
  std::vector<int> out;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BraidWord word_of(const BraidParam& b, double a = 1.0, double bb = 1.0) {
  return extract_word(curves_of(b, a, bb)).word;
}

/// Some cyclic rotation of w is (odd-index letters, even-index letters)^r
/// with each block using every generator once.
bool has_lemniscate_form(const BraidWord& w, int r) {
  const int s = w.strands();
  const auto& L = w.letters();
  const std::size_t block = static_cast<std::size_t>(s - 1);
  if (L.size() != block * static_cast<std::size_t>(r)) return false;
  for (std::size_t shift = 0; shift < L.size(); ++shift) {
    bool ok = true;
    for (std::size_t start = 0; start < L.size() && ok; start += block) {
      std::set<int> seen;
      bool in_even = false;
      for (std::size_t k = 0; k < block; ++k) {
        const int idx = L[(shift + start + k) % L.size()].index;
        if (idx % 2 == 0) in_even = true;
        else if (in_even) ok = false;
        seen.insert(idx);
      }
      ok = ok && seen.size() == block;
    }
    if (ok) return true;
  }
  return false;
}

} // namespace

TEST_SUITE("braid") {
  TEST_CASE("lemniscate(2,1,1) strands at t = 0") {
    const auto pos = lemniscate(2, 1, 1).positions(0.0);
    REQUIRE(pos.size() == 2);
    CHECK(std::abs(pos[0] - Complex{-1, 0}) < 1e-15);
    CHECK(std::abs(pos[1] - Complex{1, 0}) < 1e-15);
  }

  TEST_CASE("square of lemniscate(4,3,1) at t = 0") {
    const auto pos = square_parametrisation(lemniscate(4, 3, 1)).positions(0.0);
    REQUIRE(pos.size() == 4);
    for (int j = 1; j <= 4; ++j)
      CHECK(std::abs(pos[j - 1] - Complex{std::cos(kPi * j / 2), std::sin(3 * kPi * j / 2)}) < 1e-15);
  }

  TEST_CASE("positions follow the strand oracle and stretch by a, b") {
    const BraidParam b = lemniscate(5, 3, 2);
    for (double t : {0.0, 0.4, 2.2, 5.9}) {
      const auto pos = b.positions(t, 0.7, 0.3);
      for (int j = 1; j <= 5; ++j) {
        // gcd(5, 2) = 1: one component, strand order matches j.
        const Complex z = oracle::lemniscate_strand(5, 3, 2, 1, j, t);
        CHECK(std::abs(pos[j - 1] - Complex{0.7 * z.real(), 0.3 * z.imag()}) < 1e-14);
      }
    }
  }

  TEST_CASE("velocities against central differences") {
    const BraidParam b = lemniscate(3, 2, 1);
    const double h = 1e-6, t = 1.1;
    const auto v = b.velocities(t, 1.0, 0.5);
    const auto p = b.positions(t + h, 1.0, 0.5), m = b.positions(t - h, 1.0, 0.5);
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(std::abs(v[j] - (p[j] - m[j]) / (2 * h)) < 1e-8);
  }

  TEST_CASE("gcd(s, r) components") {
    const BraidParam b = lemniscate(4, 1, 2);
    CHECK(b.components().size() == 2);
    CHECK(b.total_strands() == 4);
    const auto pos = b.positions(0.3);
    std::vector<Complex> want;
    for (int j = 1; j <= 4; ++j) want.push_back(oracle::lemniscate_strand(4, 1, 2, 1, j, 0.3));
    for (const Complex& w : want) {
      const bool found = std::any_of(pos.begin(), pos.end(), [&](Complex z) { return std::abs(z - w) < 1e-14; });
      CHECK(found);
    }
  }

  TEST_CASE("colliding strands are rejected") {
    CHECK_THROWS_AS(lemniscate(2, 2, 1), InvalidBraid);
    CHECK(lemniscate(5, 3, 1).min_separation() > 0.0);
  }

  TEST_CASE("closure permutations") {
    CHECK(closure_permutation(lemniscate(2, 1, 1)) == std::vector<int>{1, 0});
    CHECK(closure_permutation(lemniscate(1, 1, 1)) == std::vector<int>{0});
    CHECK(cycle_lengths(closure_permutation(lemniscate(5, 3, 1))) == std::vector<int>{5});
    CHECK(cycle_lengths(closure_permutation(square_parametrisation(lemniscate(4, 3, 1)))) == std::vector<int>{2, 2});
  }

  TEST_CASE("lemniscate(2,1,3) reads as a single generator cubed") {
    const BraidWord w = word_of(lemniscate(2, 1, 3));
    REQUIRE(w.size() == 3);
    for (const Letter& l : w.letters()) {
      CHECK(l.index == 1);
      CHECK(l.sign == w.letters().front().sign);
    }
  }

  TEST_CASE("trivial braids give empty words") {
    CHECK(word_of(lemniscate(1, 1, 1)).size() == 0);
    const BraidWord sq = word_of(square_parametrisation(lemniscate(1, 1, 1)));
    CHECK(sq.strands() == 1);
    CHECK(sq.size() == 0);
  }

  TEST_CASE("letter counts match brute-force crossing detection") {
    for (auto [s, ell, r] : {std::tuple{3, 2, 1}, {4, 3, 1}, {5, 3, 1}, {5, 3, 2}, {3, 1, 2}}) {
      CAPTURE(s);
      CAPTURE(ell);
      CAPTURE(r);
      const BraidWord w = word_of(lemniscate(s, ell, r));
      const int brute = oracle::count_crossings(
          s, [&](int j, double t) { return oracle::lemniscate_strand(s, ell, r, 1, j + 1, t); }, 20000);
      CHECK(static_cast<int>(w.size()) == brute);
      CHECK(static_cast<int>(w.size()) == r * (s - 1));
      CHECK(has_lemniscate_form(w, r));
    }
  }

  TEST_CASE("stretching x and y leaves the word unchanged") {
    const BraidParam b = lemniscate(5, 3, 1);
    const BraidWord w = word_of(b);
    for (auto [a, bb] : {std::pair{0.5, 1.0}, {1.0, 0.25}, {3.0, 0.1}}) {
      const ExtractedWord e = extract_word(curves_of(b, a, bb), ExtractOptions{4096, 0.1234});
      const ExtractedWord ref = extract_word(curves_of(b), ExtractOptions{4096, 0.1234});
      CHECK(e.word == ref.word);
    }
    CHECK(w.size() == 4);
  }

  TEST_CASE("word permutation matches the closure permutation") {
    for (const BraidParam& b : {lemniscate(5, 3, 1), lemniscate(3, 2, 1), square_parametrisation(lemniscate(4, 3, 1))}) {
      const ExtractedWord e = extract_word(curves_of(b));
      const auto slots = e.word.slot_permutation();
      for (std::size_t k = 0; k < slots.size(); ++k)
        CHECK(e.end_order[k] == e.start_order[static_cast<std::size_t>(slots[k])]);
      CHECK(cycle_lengths(slots) == cycle_lengths(closure_permutation(b)));
    }
  }

  TEST_CASE("square doubles the word") {
    const BraidWord w = word_of(square_parametrisation(lemniscate(2, 1, 1)));
    REQUIRE(w.size() == 2);
    CHECK(w.letters()[0] == w.letters()[1]);
    CHECK(word_symmetry(w) == WordSymmetry::Square);
  }

  TEST_CASE("strict homogeneity") {
    CHECK(is_strictly_homogeneous(BraidWord(3, {{1, 1}, {2, -1}})));
    CHECK_FALSE(is_strictly_homogeneous(BraidWord(2, {{1, 1}, {1, -1}})));
    CHECK_FALSE(is_strictly_homogeneous(BraidWord(3, {{1, 1}})));
  }

  TEST_CASE("word symmetries") {
    CHECK(word_symmetry(BraidWord(2, {{1, 1}, {1, 1}})) == WordSymmetry::Square);
    CHECK(word_symmetry(BraidWord(2, {{1, 1}, {1, -1}})) == WordSymmetry::SignFlipped);
    CHECK(word_symmetry(BraidWord(3, {{1, 1}, {2, 1}})) == WordSymmetry::Mirrored);
    CHECK(word_symmetry(BraidWord(3, {{1, 1}, {1, 1}, {2, 1}})) == WordSymmetry::None);
    CHECK(to_string(WordSymmetry::SignFlipped) == "sign_flipped");
  }

  TEST_CASE("invalid letters are rejected") {
    CHECK_THROWS_AS(BraidWord(2, {{2, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(BraidWord(3, {{1, 0}}), std::invalid_argument);
  }

  TEST_CASE("direct braid polynomial matches the oracle") {
    const BraidParam b = lemniscate(5, 3, 1);
    const Complex u{0.2, -0.4};
    CHECK(std::abs(braid_polynomial(b, 1.0, 0.25, u, 0.8) - oracle::direct_g(5, 3, 1, 1, 1.0, 0.25, u, 0.8)) < 1e-14);
  }
}
