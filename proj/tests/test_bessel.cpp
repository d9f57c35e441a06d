// levyzero tests: modified Bessel functions against frozen high-precision values.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "levyzero/bessel.hpp"
#include "reference_values.hpp"

using namespace levyzero;
namespace ref = levyzero::testref;

TEST_CASE("scaled I0/I1 match reference to 1e-12 across the argument range") {
  struct Row {
    double z, i0, i1;
  };
  const Row rows[] = {
      {1e-8, ref::i0_scaled_1em8, ref::i1_scaled_1em8},
      {0.1, ref::i0_scaled_0p1, ref::i1_scaled_0p1},
      {1.0, ref::i0_scaled_1p0, ref::i1_scaled_1p0},
      {5.0, ref::i0_scaled_5p0, ref::i1_scaled_5p0},
      {14.9, ref::i0_scaled_14p9, ref::i1_scaled_14p9},
      {15.1, ref::i0_scaled_15p1, ref::i1_scaled_15p1},
      {50.0, ref::i0_scaled_50p0, ref::i1_scaled_50p0},
      {199.0, ref::i0_scaled_199p0, ref::i1_scaled_199p0},
      {201.0, ref::i0_scaled_201p0, ref::i1_scaled_201p0},
      {500.0, ref::i0_scaled_500p0, ref::i1_scaled_500p0},
      {700.0, ref::i0_scaled_700p0, ref::i1_scaled_700p0},
  };
  for (const auto& r : rows) {
    INFO("z = " << r.z);
    CHECK(bessel_i0_scaled(r.z) == Catch::Approx(r.i0).epsilon(1e-12));
    CHECK(bessel_i1_scaled(r.z) == Catch::Approx(r.i1).epsilon(1e-12));
  }
}

TEST_CASE("unscaled I0/I1 match reference") {
  struct Row {
    double z, i0, i1;
  };
  const Row rows[] = {
      {0.1, ref::i0_plain_0p1, ref::i1_plain_0p1},
      {1.0, ref::i0_plain_1p0, ref::i1_plain_1p0},
      {5.0, ref::i0_plain_5p0, ref::i1_plain_5p0},
      {15.1, ref::i0_plain_15p1, ref::i1_plain_15p1},
      {50.0, ref::i0_plain_50p0, ref::i1_plain_50p0},
  };
  for (const auto& r : rows) {
    INFO("z = " << r.z);
    CHECK(bessel_i0(r.z) == Catch::Approx(r.i0).epsilon(1e-12));
    CHECK(bessel_i1(r.z) == Catch::Approx(r.i1).epsilon(1e-12));
  }
}

TEST_CASE("parity, limits, and scaling identities") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(bessel_i1(0.0) == 0.0);
  CHECK(bessel_i0(-3.0) == bessel_i0(3.0));
  CHECK(bessel_i1(-3.0) == -bessel_i1(3.0));
  for (double z : {0.5, 3.0, 20.0, 120.0}) {
    CHECK(bessel_i0_scaled(z) * std::exp(z) == Catch::Approx(bessel_i0(z)).epsilon(1e-13));
    CHECK(bessel_i1_scaled(z) * std::exp(z) == Catch::Approx(bessel_i1(z)).epsilon(1e-13));
    // 0 < I1 < I0 for z > 0
    CHECK(bessel_i1(z) > 0.0);
    CHECK(bessel_i1(z) < bessel_i0(z));
  }
}

TEST_CASE("continuity across the series/asymptotic crossover") {
  // Values straddling the crossover must agree with each other to ~1e-13
  // relative through the reference; also check a fine local sweep is monotone.
  double prev = bessel_i0_scaled(199.5);
  for (double z = 199.6; z <= 200.6; z += 0.1) {
    double cur = bessel_i0_scaled(z);
    CHECK(cur < prev);  // e^{-z} I0(z) ~ 1/sqrt(2 pi z) decreases
    prev = cur;
  }
}
