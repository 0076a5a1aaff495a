#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sforge/certify.hpp"
#include "sforge/kernels.hpp"

using namespace sforge;

namespace {

bool bit_identical(const Certificate& x, const Certificate& y) {
  return x.pass == y.pass && x.margin == y.margin && x.worst.u == y.worst.u && x.worst.v == y.worst.v &&
         x.worst.t == y.worst.t && x.worst.rho == y.worst.rho;
}

MixedPoly l6a1(double lambda) {
  const GradedBraidPoly g = expand_g(square_parametrisation(lemniscate(4, 3, 1)));
  return build_polynomial(g, ConstructionMeta{1.0, 1.0, 1, 0.0, 0.0, lambda});
}

} // namespace

TEST_SUITE("kernels") {
  TEST_CASE("map_serial and map_parallel agree") {
    auto f = [](std::size_t i) { return std::sin(0.1 * static_cast<double>(i)) * std::exp(-1e-3 * i); };
    CHECK(kernels::map_serial<double>(10000, f) == kernels::map_parallel<double>(10000, f));
    CHECK(kernels::map_parallel<double>(0, f).empty());
  }

  TEST_CASE("ordered_argmin keeps the lowest index on ties") {
    const std::vector<double> v{3.0, 1.0, 2.0, 1.0};
    CHECK(kernels::ordered_argmin(v, [](double x) { return x; }) == 1);
    const std::vector<double> w{1.0, NAN, 0.0};
    CHECK(kernels::ordered_argmin(w, [](double x) { return x; }) == 1);
  }

  TEST_CASE("the lowest-index exception propagates") {
    auto f = [](std::size_t i) -> int {
      if (i == 700) throw std::runtime_error("700");
      if (i == 300) throw std::runtime_error("300");
      return static_cast<int>(i);
    };
    for (Exec e : {Exec::Serial, Exec::Parallel}) {
      try {
        kernels::map_grid<int>(e, 1000, f);
        FAIL("no exception");
      } catch (const std::runtime_error& err) {
        CHECK(std::string(err.what()) == "300");
      }
    }
  }

  TEST_CASE("thread cap") {
    set_thread_cap(2);
    CHECK(max_threads() <= 2);
    set_thread_cap(0);
    CHECK(max_threads() >= 1);
  }

  TEST_CASE("serial and parallel scans are bit-identical") {
    const BraidParam b = lemniscate(5, 3, 1);
    CHECK(bit_identical(arg_crit_scan(b, 1.0, 0.25, 1024, Exec::Serial), arg_crit_scan(b, 1.0, 0.25, 1024, Exec::Parallel)));
    const MixedPoly p = l6a1(0.5);
    CHECK(bit_identical(isolation_check(p, 8, 64, Exec::Serial), isolation_check(p, 8, 64, Exec::Parallel)));
    CHECK(bit_identical(radial_identity_check(p, 8, 64, 1e-6, Exec::Serial),
                        radial_identity_check(p, 8, 64, 1e-6, Exec::Parallel)));
    const BraidParam sq = square_parametrisation(lemniscate(4, 3, 1));
    CHECK(bit_identical(sphere_link_check(p, sq, {0.5, 1.0}, {}, Exec::Serial),
                        sphere_link_check(p, sq, {0.5, 1.0}, {}, Exec::Parallel)));
    CHECK(bit_identical(d_regularity_check(p, {0.5, 1.0}, 32, 3000, Exec::Serial),
                        d_regularity_check(p, {0.5, 1.0}, 32, 3000, Exec::Parallel)));
  }
}
