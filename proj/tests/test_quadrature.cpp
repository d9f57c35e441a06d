// levyzero tests: quadrature building blocks on integrals with known values.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "levyzero/quadrature.hpp"

using namespace levyzero;

TEST_CASE("GK15 is exact on low-degree polynomials") {
  auto cubic = [](double x) { return x * x * x - 2.0 * x + 1.0; };
  // Int_0^2 = [x^4/4 - x^2 + x] = 4 - 4 + 2 = 2
  CHECK(gk15(cubic, 0.0, 2.0).value == Catch::Approx(2.0).epsilon(1e-15));
  auto deg12 = [](double x) { return std::pow(x, 12); };
  CHECK(gk15(deg12, 0.0, 1.0).value == Catch::Approx(1.0 / 13.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration hits tight tolerances") {
  auto f = [](double x) { return std::sin(x); };
  QuadResult r = integrate_adaptive(f, 0.0, M_PI, 1e-12);
  CHECK(r.value == Catch::Approx(2.0).epsilon(1e-12));

  // A narrow spike: 1/(1e-4 + x^2) on [0, 1]; exact = atan(1e2)/1e-2
  auto spike = [](double x) { return 1.0 / (1e-4 + x * x); };
  const double exact = std::atan(100.0) / 1e-2;
  QuadResult s = integrate_adaptive(spike, 0.0, 1.0, 1e-9);
  CHECK(s.value == Catch::Approx(exact).epsilon(1e-10));
}

TEST_CASE("adaptive integration refuses a divergent integrand") {
  auto f = [](double x) { return 1.0 / x; };
  CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, 1e-10, 1e-12, 200), Error);
}

TEST_CASE("power-flattened tail integrates exact and perturbed power laws") {
  // Int_2^inf x^{-3/2} dx = 2 / sqrt(2) = sqrt(2)
  auto pure = [](double x) { return std::pow(x, -1.5); };
  QuadResult r = integrate_power_tail(pure, 2.0, 1.5, 1e-12);
  CHECK(r.value == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // Int_1^inf dx/(1+x^2) = pi/4; envelope ~ x^{-2}
  auto lorentz = [](double x) { return 1.0 / (1.0 + x * x); };
  QuadResult l = integrate_power_tail(lorentz, 1.0, 2.0, 1e-12);
  CHECK(l.value == Catch::Approx(M_PI / 4.0).epsilon(1e-12));

  CHECK_THROWS_AS(integrate_power_tail(pure, 1.0, 0.9, 1e-10), Error);
}

TEST_CASE("oscillating tail reproduces the Laplace kernel integral") {
  // Int_0^inf cos(w x)/(1+x^2) dx = (pi/2) e^{-w}.  Split head/tail at 8.
  for (double w : {0.5, 2.0, 7.0}) {
    auto f = [w](double x) { return std::cos(w * x) / (1.0 + x * x); };
    QuadResult head = integrate_adaptive(f, 0.0, 8.0, 1e-12);
    QuadResult tail = integrate_oscillating_tail(f, 8.0, M_PI / w, 1e-12);
    const double exact = 0.5 * M_PI * std::exp(-w);
    INFO("w = " << w);
    CHECK(head.value + tail.value == Catch::Approx(exact).margin(5e-11));
  }
}

TEST_CASE("oscillating tail handles a slowly decaying envelope") {
  // Int_8^inf sin(x)/x dx = pi/2 - Si(8); compare against a brute-force
  // deep partial sum with many more cells.
  auto f = [](double x) { return std::sin(x) / x; };
  QuadResult fast = integrate_oscillating_tail(f, 8.0, M_PI, 1e-12, 48);
  QuadResult deep = integrate_oscillating_tail(f, 8.0, M_PI, 1e-14, 512);
  CHECK(fast.value == Catch::Approx(deep.value).margin(1e-10));
}
