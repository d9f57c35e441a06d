// Tests for the per-path random streams: reproducibility, substream
// independence, and distributional checks for the hand-written stable
// sampler (against the exact characteristic function).
//
// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "levyzero/rng.hpp"
#include "test_support.hpp"

using namespace levyzero;
using Catch::Matchers::WithinAbs;

TEST_CASE("streams are reproducible and decorrelated") {
    PathRng a(42, 7), b(42, 7), c(42, 8);
    std::vector<double> va, vb, vc;
    for (int i = 0; i < 16; ++i) {
        va.push_back(a.uniform());
        vb.push_back(b.uniform());
        vc.push_back(c.uniform());
    }
    CHECK(va == vb);
    CHECK(va != vc);

    // neighbouring streams should not correlate
    PathRng d(42, 9);
    double corr = 0.0;
    for (int i = 0; i < 4000; ++i) {
        corr += (c.uniform() - 0.5) * (d.uniform() - 0.5);
    }
    CHECK(std::fabs(corr / 4000.0 / (1.0 / 12.0)) < 0.06);
}

TEST_CASE("normal and exponential moments") {
    PathRng rng(123, 0);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0, e1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s1 += z;
        s2 += z * z;
        e1 += rng.exponential(2.0);
    }
    // 4-sigma bands for the fixed seed
    CHECK_THAT(s1 / n, WithinAbs(0.0, 4.0 / std::sqrt(double(n))));
    CHECK_THAT(s2 / n, WithinAbs(1.0, 4.0 * std::sqrt(2.0 / n)));
    CHECK_THAT(e1 / n, WithinAbs(0.5, 4.0 * 0.5 / std::sqrt(double(n))));
}

TEST_CASE("stable sampler matches its characteristic function") {
    // E[cos(t X)] = e^{-|t|^a} cos(skew * tan(pi a/2) * |t|^a sgn t ...)
    // for the standard variate; checked by plain Monte Carlo averages.
    const int n = 400000;

    for (const auto& [alpha, skew] : {std::pair{1.5, 0.0},
                                      {1.5, 0.5},
                                      {1.2, 0.0},
                                      {1.8, -0.5}}) {
        PathRng rng(2024, static_cast<std::uint64_t>(alpha * 100 + skew * 10));
        std::vector<double> xs(n);
        for (auto& x : xs) x = rng.stable_standard(alpha, skew);

        const double T = std::tan(M_PI * alpha / 2.0);
        for (double t : {0.5, 1.0, 2.0}) {
            double mc_cos = 0.0, mc_sin = 0.0;
            for (double x : xs) {
                mc_cos += std::cos(t * x);
                mc_sin += std::sin(t * x);
            }
            mc_cos /= n;
            mc_sin /= n;
            const double ta = std::pow(t, alpha);
            const double expect_cos = std::exp(-ta) * std::cos(skew * T * ta);
            const double expect_sin = std::exp(-ta) * std::sin(skew * T * ta);
            CHECK_THAT(mc_cos, WithinAbs(expect_cos, 6e-3));
            CHECK_THAT(mc_sin, WithinAbs(expect_sin, 6e-3));
        }
    }
}

TEST_CASE("stable sampler rejects bad parameters") {
    PathRng rng(1, 1);
    CHECK_THROWS_MATCHES(rng.stable_standard(1.0, 0.0), Error,
                         ErrorMatcher(ErrorCode::InvalidArgument));
    CHECK_THROWS_MATCHES(rng.stable_standard(2.0, 0.0), Error,
                         ErrorMatcher(ErrorCode::InvalidArgument));
    CHECK_THROWS_MATCHES(rng.stable_standard(1.5, 1.5), Error,
                         ErrorMatcher(ErrorCode::InvalidArgument));
}
