// levyzero tests: model definitions, characteristic exponents, parsing.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "levyzero/models.hpp"
#include "reference_values.hpp"

using namespace levyzero;

TEST_CASE("Brownian exponent is sigma^2 l^2 / 2") {
  LevyModel m = BrownianDiffusion{1.0};
  CHECK(theta(m, 2.0) == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(omega(m, 2.0) == 0.0);
  LevyModel wide = BrownianDiffusion{2.0};
  CHECK(theta(wide, 3.0) == Catch::Approx(18.0).epsilon(1e-15));
}

TEST_CASE("symmetric stable exponent matches its normalisation") {
  LevyModel m = parse_model("stable-sym-1.5");
  const auto& s = std::get<StrictlyStable>(m);
  CHECK(stable_beta(s) == Catch::Approx(0.0).margin(1e-16));
  CHECK(stable_scale(s) == Catch::Approx(testref::stable_sym15_c).epsilon(1e-14));
  CHECK(theta(m, 1.0) == Catch::Approx(testref::stable_sym15_c).epsilon(1e-14));
  CHECK(omega(m, 1.0) == Catch::Approx(0.0).margin(1e-16));
  // scaling law theta(l) = c l^alpha
  CHECK(theta(m, 4.0) == Catch::Approx(8.0 * theta(m, 1.0)).epsilon(1e-13));
}

TEST_CASE("asymmetric stable exponent has the right skew sign") {
  LevyModel m = parse_model("stable-asym-1.5");
  const auto& s = std::get<StrictlyStable>(m);
  CHECK(stable_beta(s) == Catch::Approx(0.5).epsilon(1e-15));
  // tan(3 pi / 4) = -1, so omega(l) = -c beta tan(..) |l|^1.5 sgn l = +c/2 at l=1
  CHECK(omega(m, 1.0) ==
        Catch::Approx(0.5 * testref::stable_asym15_c).epsilon(1e-13));
  CHECK(omega(m, -1.0) == Catch::Approx(-omega(m, 1.0)).epsilon(1e-15));
  CHECK(theta(m, -2.0) == Catch::Approx(theta(m, 2.0)).epsilon(1e-15));
}

TEST_CASE("drifted Brownian exponent") {
  LevyModel m = parse_model("bm-drift");
  auto p = psi(m, 1.0);
  CHECK(p.real() == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(p.imag() == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(!is_recurrent(m));
}

TEST_CASE("jump-diffusion exponent and moments") {
  LevyModel m = parse_model("kou");
  const auto& k = std::get<JumpDiffusion>(m);
  CHECK(mean_jump(k) == Catch::Approx(0.0).margin(1e-16));  // preset is balanced
  CHECK(second_moment(m) == Catch::Approx(testref::kou_m2).epsilon(1e-14));

  // theta even, omega odd, omega = O(l^3) near zero (compensation is exact)
  CHECK(theta(m, 0.7) == Catch::Approx(theta(m, -0.7)).epsilon(1e-15));
  CHECK(omega(m, 0.7) == Catch::Approx(-omega(m, -0.7)).epsilon(1e-15));
  const double w1 = omega(m, 1e-3);
  const double w2 = omega(m, 2e-3);
  CHECK(w2 / w1 == Catch::Approx(8.0).epsilon(1e-4));  // cubic scaling

  // Against an independent complex-arithmetic evaluation of the exponent
  const std::complex<double> il(0.0, 1.0);
  const double l = 1.3;
  std::complex<double> phi =
      k.p_up * k.eta_plus / (k.eta_plus - il * l) +
      (1.0 - k.p_up) * k.eta_minus / (k.eta_minus + il * l);
  std::complex<double> direct = 0.5 * k.sigma * k.sigma * l * l +
                                k.jump_rate * (1.0 - phi) +
                                il * k.jump_rate * mean_jump(k) * l;
  CHECK(theta(m, l) == Catch::Approx(direct.real()).epsilon(1e-13));
  CHECK(omega(m, l) == Catch::Approx(direct.imag()).margin(1e-13));
}

TEST_CASE("theta is nonnegative on a wide grid") {
  for (const char* name : {"bm", "stable-sym-1.5", "stable-asym-1.5", "kou", "bm-drift"}) {
    LevyModel m = parse_model(name);
    for (double l : {-50.0, -3.0, -0.1, 0.0, 1e-6, 0.5, 7.0, 1e3}) {
      INFO(name << " at l=" << l);
      CHECK(theta(m, l) >= 0.0);
    }
  }
}

TEST_CASE("tail growth data") {
  CHECK(tail_power(parse_model("bm")) == 2.0);
  CHECK(tail_coeff(parse_model("bm")) == Catch::Approx(0.5));
  LevyModel st = parse_model("stable-sym-1.5");
  CHECK(tail_power(st) == Catch::Approx(1.5));
  CHECK(tail_coeff(st) == Catch::Approx(testref::stable_sym15_c).epsilon(1e-14));
}

TEST_CASE("inline model specs parse and validate") {
  LevyModel m = parse_model("type=stable,alpha=1.2,c+=0.5,c-=0.5");
  const auto& s = std::get<StrictlyStable>(m);
  CHECK(s.alpha == Catch::Approx(1.2));
  CHECK(stable_scale(s) == Catch::Approx(testref::stable_sym12_c).epsilon(1e-14));

  LevyModel k = parse_model("type=kou,sigma=2,rate=0.5,eta+=1,eta-=1,p+=0.5");
  CHECK(std::get<JumpDiffusion>(k).sigma == 2.0);

  CHECK_THROWS_AS(parse_model("no-such-preset"), Error);
  CHECK_THROWS_AS(parse_model("type=stable,bogus=1"), Error);
  CHECK_THROWS_AS(parse_model("type=bm,sigma=oops"), Error);
}

TEST_CASE("validation rejects out-of-domain parameters with the right code") {
  auto code_of = [](LevyModel m) {
    try {
      validate(m);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;  // means "no throw", fails the test
  };
  CHECK(code_of(StrictlyStable{0.9, 0.5, 0.5}) == ErrorCode::NonIntegrableResolvent);
  CHECK(code_of(StrictlyStable{1.0, 0.5, 0.5}) == ErrorCode::NonIntegrableResolvent);
  CHECK(code_of(StrictlyStable{2.3, 0.5, 0.5}) == ErrorCode::UnsupportedModel);
  CHECK(code_of(StrictlyStable{1.5, -0.1, 0.5}) == ErrorCode::UnsupportedModel);
  CHECK(code_of(JumpDiffusion{0.0, 1.0, 2.0, 3.0, 0.4}) ==
        ErrorCode::NonIntegrableResolvent);
  CHECK(code_of(JumpDiffusion{1.0, 1.0, 2.0, 3.0, 1.4}) == ErrorCode::UnsupportedModel);
  CHECK(code_of(BrownianDiffusion{0.0}) == ErrorCode::UnsupportedModel);
  CHECK(code_of(DriftedBrownian{1.0, 0.0}) == ErrorCode::UnsupportedModel);
  CHECK_NOTHROW(validate(parse_model("kou")));
}
