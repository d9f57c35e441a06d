// Tests for the path simulator: determinism, local-time calibration
// against the reflected-Gaussian law, exit probabilities against closed
// forms and the quadrature route, transient total local time, and
// Monte Carlo agreement with the clock conditionals.
//
// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "levyzero/penalization.hpp"
#include "levyzero/potential.hpp"
#include "levyzero/simulate.hpp"
#include "test_support.hpp"

using namespace levyzero;
using Catch::Matchers::WithinAbs;

namespace {

const LevyModel kBm = BrownianDiffusion{1.0};
const LevyModel kDrifted = DriftedBrownian{1.0, 1.0};
const LevyModel kKou = JumpDiffusion{1.0, 1.0, 2.0, 3.0, 0.4};
const LevyModel kStableSym = StrictlyStable{1.5, 0.5, 0.5};

struct MeanVar {
    double mean = 0.0;
    double m2 = 0.0;
    long n = 0;
    void add(double v) {
        ++n;
        const double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    double sem() const { return std::sqrt(m2 / (n - 1.0) / n); }
};

}  // namespace

TEST_CASE("simulation is deterministic per stream") {
    PathSimulator sim(kBm);
    const double times[] = {0.5, 1.0};
    PathRng r1(99, 3), r2(99, 3), r3(99, 4);
    const auto a = sim.states_at(r1, times, nullptr);
    const auto b = sim.states_at(r2, times, nullptr);
    const auto c = sim.states_at(r3, times, nullptr);
    REQUIRE(a.size() == 2);
    CHECK(a[1].x == b[1].x);
    CHECK(a[1].local_zero == b[1].local_zero);
    CHECK(a[1].x != c[1].x);
    CHECK(a[0].t == Catch::Approx(0.5).margin(1e-6));
    CHECK(a[1].t == Catch::Approx(1.0).margin(1e-6));
    CHECK(a[1].local_zero >= a[0].local_zero);
}

TEST_CASE("band local time matches the reflected-Gaussian law") {
    // At time t the local time at zero of standard Brownian motion is
    // distributed as |N(0, t)|: mean sqrt(2t/pi) and
    // E[exp(-L_t)] = exp(t/2) erfc(sqrt(t/2)).
    PathSimulator sim(kBm);
    const double t = 2.0;
    const double times[] = {t};
    MeanVar lmean, laplace;
    const int n = 6000;
    for (int i = 0; i < n; ++i) {
        PathRng rng(2024, static_cast<std::uint64_t>(i));
        const auto states = sim.states_at(rng, times, nullptr);
        lmean.add(states[0].local_zero);
        laplace.add(std::exp(-states[0].local_zero));
    }
    const double mean_exact = std::sqrt(2.0 * t / M_PI);
    const double lap_exact = std::exp(t / 2.0) * std::erfc(std::sqrt(t / 2.0));
    CHECK_THAT(lmean.mean,
               WithinAbs(mean_exact, 4.0 * lmean.sem() + 0.012));
    CHECK_THAT(laplace.mean,
               WithinAbs(lap_exact, 4.0 * laplace.sem() + 0.006));
}

TEST_CASE("exit probabilities match closed forms and quadrature") {
    SECTION("driftless Brownian motion") {
        PathSimulator sim(kBm);
        PotentialTable pot(kBm);
        const double x = 0.5, a = 2.0, b = -1.0;
        int hits_a = 0, censored = 0;
        const int n = 6000;
        for (int i = 0; i < n; ++i) {
            PathRng rng(7, static_cast<std::uint64_t>(i));
            const auto hit = sim.first_hit_of_two(rng, x, a, b, 400.0);
            if (!hit) {
                ++censored;
            } else if (*hit == 0) {
                ++hits_a;
            }
        }
        CHECK(censored == 0);
        const double p_exact = (x - b) / (a - b);
        const double p_mc = static_cast<double>(hits_a) / n;
        const double se = std::sqrt(p_exact * (1.0 - p_exact) / n);
        CHECK_THAT(p_mc, WithinAbs(p_exact, 4.0 * se));
        CHECK_THAT(pot.hit_prob_two(x, a, b), WithinAbs(p_exact, 1e-8));
    }

    SECTION("drifted Brownian motion") {
        PathSimulator sim(kDrifted);
        PotentialTable pot(kDrifted);
        // scale function s(y) = exp(2y) for unit downward drift
        const double x = 0.5, a = 1.0, b = -2.0;
        const double p_exact = (std::exp(2.0 * x) - std::exp(2.0 * b)) /
                               (std::exp(2.0 * a) - std::exp(2.0 * b));
        int hits_a = 0, censored = 0;
        const int n = 4000;
        for (int i = 0; i < n; ++i) {
            PathRng rng(11, static_cast<std::uint64_t>(i));
            const auto hit = sim.first_hit_of_two(rng, x, a, b, 400.0);
            if (!hit) {
                ++censored;
            } else if (*hit == 0) {
                ++hits_a;
            }
        }
        CHECK(censored == 0);
        const double p_mc = static_cast<double>(hits_a) / n;
        const double se = std::sqrt(p_exact * (1.0 - p_exact) / n);
        CHECK_THAT(p_mc, WithinAbs(p_exact, 4.0 * se));
        CHECK_THAT(pot.hit_prob_two(x, a, b), WithinAbs(p_exact, 1e-6));
    }

    SECTION("jump diffusion against the quadrature route") {
        // A jump can overshoot a level without hitting it, so these are
        // genuine point hitting times: a small censored fraction with a
        // polynomial tail is expected.
        PathSimulator sim(kKou);
        PotentialTable pot(kKou);
        const double x = 0.3, a = 1.0, b = -1.0;
        const double p_ref = pot.hit_prob_two(x, a, b);
        int hits_a = 0, censored = 0;
        const int n = 3000;
        for (int i = 0; i < n; ++i) {
            PathRng rng(13, static_cast<std::uint64_t>(i));
            const auto hit = sim.first_hit_of_two(rng, x, a, b, 2000.0);
            if (!hit) {
                ++censored;
            } else if (*hit == 0) {
                ++hits_a;
            }
        }
        CHECK(censored < n / 100);
        const int kept = n - censored;
        const double p_mc = static_cast<double>(hits_a) / kept;
        const double se = std::sqrt(p_ref * (1.0 - p_ref) / kept);
        CHECK_THAT(p_mc, WithinAbs(p_ref, 4.0 * se));
    }

    SECTION("symmetric stable splits evenly") {
        // Stable point hitting has a polynomial-tailed hitting time, so a
        // few paths are censored; symmetry keeps the kept sample unbiased.
        SimOptions opt;
        opt.hit_delta = 1e-3;
        PathSimulator sim(kStableSym, opt);
        int hits_a = 0, censored = 0;
        const int n = 1500;
        for (int i = 0; i < n; ++i) {
            PathRng rng(17, static_cast<std::uint64_t>(i));
            const auto hit = sim.first_hit_of_two(rng, 0.0, 1.0, -1.0, 400.0);
            if (!hit) {
                ++censored;
            } else if (*hit == 0) {
                ++hits_a;
            }
        }
        CHECK(censored < n / 8);
        const int kept = n - censored;
        const double p_mc = static_cast<double>(hits_a) / kept;
        CHECK_THAT(p_mc, WithinAbs(0.5, 4.0 * 0.5 / std::sqrt(kept)));
    }
}

TEST_CASE("local time at the first hit of a level is exponential") {
    // From zero, the local time accrued by the first visit to level a is
    // exponential with mean h(a) + h(-a).
    PathSimulator sim(kBm);
    PotentialTable pot(kBm);
    const double a = 1.0;
    const double mean_exact = pot.h_two_sided(a);  // = 2 for unit BM
    MeanVar acc;
    const int n = 4000;
    int censored = 0;
    for (int i = 0; i < n; ++i) {
        PathRng rng(23, static_cast<std::uint64_t>(i));
        // P(T_a > t) decays like t^{-1/2}: the horizon must be generous
        // to keep the censored fraction (and its selection bias) small.
        const auto l = sim.local_time_at_first_hit(rng, a, 4.0e4);
        if (!l) {
            ++censored;
        } else {
            acc.add(*l);
        }
    }
    CHECK(censored < n / 100);
    CHECK_THAT(acc.mean, WithinAbs(mean_exact, 4.0 * acc.sem() + 0.03));
}

TEST_CASE("transient paths accrue exponential total local time") {
    // Unit downward drift: kappa = 1, so L_infinity ~ Exp(1) from zero.
    PathSimulator sim(kDrifted);
    MeanVar acc;
    const int n = 3000;
    int censored = 0;
    for (int i = 0; i < n; ++i) {
        PathRng rng(29, static_cast<std::uint64_t>(i));
        const auto l = sim.total_local_time(rng, -12.0, 400.0);
        if (!l) {
            ++censored;
        } else {
            acc.add(*l);
        }
    }
    CHECK(censored == 0);
    CHECK_THAT(acc.mean, WithinAbs(1.0, 4.0 * acc.sem() + 0.015));
}

TEST_CASE("exponential clock Doob closure is constant in time") {
    PathSimulator sim(kBm);
    PotentialTable pot(kBm);
    const ClockSpec clock{ClockKind::Exponential, 1.0};
    const auto f = parse_weight("exp:beta=1");
    const MartingaleState start{};
    const double m0 = clock_doob(pot, clock, f, start);
    CHECK_THAT(m0, WithinAbs(1.0 / (1.0 + std::sqrt(2.0)), 1e-12));

    const double grid[] = {0.5, 1.0};
    MeanVar acc[2];
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        PathRng rng(31, static_cast<std::uint64_t>(i));
        const auto states = sim.run_clock_path(rng, clock, grid, 1e9);
        REQUIRE(states.has_value());
        for (int k = 0; k < 2; ++k) {
            acc[k].add(clock_doob(pot, clock, f, (*states)[k]));
        }
    }
    for (int k = 0; k < 2; ++k) {
        CHECK_THAT(acc[k].mean, WithinAbs(m0, 4.0 * acc[k].sem() + 0.006));
    }
}

TEST_CASE("inverse clock ring samples match the conditional mean") {
    PathSimulator sim(kBm);
    PotentialTable pot(kBm);
    const double a = 1.0, u = 0.3;
    const auto f = parse_weight("exp:beta=1");
    const double exact = inv_lt_ring_mean(pot, a, u, f, 0.0);
    MeanVar acc;
    const int n = 2500;
    int censored = 0;
    for (int i = 0; i < n; ++i) {
        PathRng rng(37, static_cast<std::uint64_t>(i));
        const auto ring = sim.run_until_level_depth(rng, a, u, 4.0e4);
        if (!ring) {
            ++censored;
        } else {
            acc.add(weight_value(f, ring->local_zero));
        }
    }
    CHECK(censored < n / 100);
    CHECK_THAT(acc.mean, WithinAbs(exact, 4.0 * acc.sem() + 0.01));
}
