// SPDX-License-Identifier: MIT
//
// Self-verification battery: every closed formula in the library is checked
// against an independent route (quadrature vs closed form, extrapolation vs
// scaling, Monte Carlo vs analytic value).  Deterministic rows compare two
// deterministic routes under an absolute tolerance; statistical rows compare
// a Monte Carlo estimate with an analytic target in units of the estimated
// standard error (pass at 3 sigma, one automatic retry at 4x the paths).
// Censored Monte Carlo rows fail loudly when more than 1% of paths are lost.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "levyzero/penalization.hpp"
#include "levyzero/potential.hpp"
#include "levyzero/simulate.hpp"

namespace levyzero {

// One verification experiment.  Exactly one of the two acceptance rules
// applies: deterministic rows have det_tol > 0 and pass iff
// |estimate - target| <= det_tol; statistical rows have std_error > 0 and
// pass iff sigmas <= 3 and the censoring rate stays below 1%.
struct MCRow {
    std::string name;
    std::string model;
    std::string params;
    double estimate = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double sigmas = 0.0;
    double det_tol = 0.0;
    bool pass = false;
    double censor_rate = 0.0;
    double runtime_s = 0.0;
};

using RowCallback = std::function<void(const MCRow&)>;

// Critical value of sqrt(n) * D for the Kolmogorov-Smirnov statistic at the
// 1% level (asymptotic Kolmogorov distribution).
inline constexpr double kKSCritical1Percent = 1.6276;

inline constexpr double kMaxCensorRate = 0.01;

namespace verify_detail {

struct MeanVar {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double sem() const {
        if (n < 2) return std::numeric_limits<double>::infinity();
        return std::sqrt(m2 / (static_cast<double>(n) *
                               static_cast<double>(n - 1)));
    }
};

inline std::uint64_t name_hash(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Generic adaptive Simpson integration for the scalar densities verified
// here (not performance critical; tolerance is absolute).
inline double simpson_recurse(const std::function<double(double)>& f,
                              double a, double b, double fa, double fm,
                              double fb, double whole, double tol,
                              int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate_simpson(const std::function<double(double)>& f,
                                double a, double b, double tol = 1e-11) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Integral over [0, cut] of a density that is smooth in sqrt(y): the
// substitution y = s^2 removes the square-root cusp at the origin.
inline double integrate_sqrt_smooth(const std::function<double(double)>& f,
                                    double cut, double tol = 1e-11) {
    return integrate_simpson(
        [&f](double s) { return 2.0 * s * f(s * s); }, 0.0, std::sqrt(cut),
        tol);
}

}  // namespace verify_detail

// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double c = cdf(sample[i]);
        d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

class VerificationSuite {
  public:
    explicit VerificationSuite(std::uint64_t seed = 0x5eedf00dULL,
                               RowCallback on_row = {})
        : seed_(seed), on_row_(std::move(on_row)) {}

    // ---- deterministic row -------------------------------------------------
    void det_row(std::vector<MCRow>& rows, std::string name, std::string model,
                 std::string params, double estimate, double target,
                 double tol, double runtime_s = 0.0) const {
        MCRow r;
        r.name = std::move(name);
        r.model = std::move(model);
        r.params = std::move(params);
        r.estimate = estimate;
        r.target = target;
        r.det_tol = tol;
        r.pass = std::fabs(estimate - target) <= tol;
        r.runtime_s = runtime_s;
        push(rows, std::move(r));
    }

    // ---- statistical row with one automatic retry at 4x paths --------------
    struct StatResult {
        double estimate = 0.0;
        double std_error = 0.0;
        double censor_rate = 0.0;
    };
    using StatFn = std::function<StatResult(std::size_t n, std::uint64_t salt)>;

    void stat_row(std::vector<MCRow>& rows, std::string name, std::string model,
                  std::string params, double target, std::size_t n,
                  const StatFn& fn) const {
        verify_detail::Stopwatch sw;
        StatResult res = fn(n, 0);
        bool retried = false;
        if (!stat_pass(res, target)) {
            res = fn(4 * n, 1);
            retried = true;
        }
        MCRow r;
        r.name = std::move(name);
        if (retried) r.name += " (retry x4)";
        r.model = std::move(model);
        r.params = std::move(params) + ", n=" +
                   std::to_string(retried ? 4 * n : n);
        r.estimate = res.estimate;
        r.std_error = res.std_error;
        r.target = target;
        r.sigmas = res.std_error > 0.0
                       ? std::fabs(res.estimate - target) / res.std_error
                       : std::numeric_limits<double>::infinity();
        r.censor_rate = res.censor_rate;
        r.pass = stat_pass(res, target);
        r.runtime_s = sw.seconds();
        push(rows, std::move(r));
    }

    std::uint64_t experiment_seed(std::string_view name) const {
        return derive_stream_seed(seed_, verify_detail::name_hash(name));
    }

    // =======================================================================
    // Check 1: Brownian closed forms vs direct quadrature.
    // =======================================================================
    std::vector<MCRow> check_brownian_closed_forms() const {
        verify_detail::Stopwatch sw;
        std::vector<MCRow> rows;
        const LevyModel bm = BrownianDiffusion{1.0};
        double worst_r = 0.0;
        for (double q : {1e-3, 1e-2, 1e-1, 1.0}) {
            for (double x = -5.0; x <= 5.0 + 1e-9; x += 0.5) {
                const double closed =
                    std::exp(-std::sqrt(2.0 * q) * std::fabs(x)) /
                    std::sqrt(2.0 * q);
                const double got = resolvent_density_quadrature(bm, q, x);
                worst_r = std::max(worst_r, std::fabs(got - closed));
            }
        }
        det_row(rows, "resolvent density: quadrature vs closed, grid max |err|",
                describe(bm), "q in {1e-3,1e-2,1e-1,1}, x in [-5,5]", worst_r,
                0.0, 1e-8);
        double worst_h = 0.0;
        for (double x = -5.0; x <= 5.0 + 1e-9; x += 0.5) {
            if (x == 0.0) continue;
            const double got = renormalized_resolvent_direct(bm, x);
            worst_h = std::max(worst_h, std::fabs(got - std::fabs(x)));
        }
        det_row(rows, "renormalized resolvent: quadrature vs |x|, grid max |err|",
                describe(bm), "x in [-5,5]", worst_h, 0.0, 1e-8);
        det_row(rows, "runtime budget (s)", describe(bm), "budget 5 s",
                sw.seconds(), 0.0, 5.0);
        return rows;
    }

    // =======================================================================
    // Check 2: stable renormalized resolvent, q->0 extrapolation vs scaling
    // closed form.
    // =======================================================================
    std::vector<MCRow> check_stable_extrapolated_h() const {
        verify_detail::Stopwatch sw;
        std::vector<MCRow> rows;
        for (double alpha : {1.2, 1.5, 1.8}) {
            for (double beta : {-0.5, 0.0, 0.5}) {
                const StrictlyStable st{alpha, (1.0 + beta) / 2.0,
                                        (1.0 - beta) / 2.0};
                const LevyModel m = st;
                double worst = 0.0;
                for (double x : {-4.0, -2.5, -1.0, -0.25, 0.25, 1.0, 2.5, 4.0}) {
                    const double closed = renormalized_resolvent_closed(st, x);
                    const auto r = renormalized_resolvent_extrapolated(m, x);
                    worst = std::max(worst,
                                     std::fabs(r.value - closed) / closed);
                }
                det_row(rows, "extrapolated h vs closed, grid max rel err",
                        describe(m), "x in [-4,4]", worst, 0.0, 1e-4);
            }
        }
        det_row(rows, "runtime budget (s)", "stable family", "budget 60 s",
                sw.seconds(), 0.0, 60.0);
        return rows;
    }

    // =======================================================================
    // Check 3: structural properties of h -- subadditivity, the 1/m^2 slope
    // at infinity for finite variance, slope decay for infinite variance.
    // =======================================================================
    std::vector<MCRow> check_h_structure() const {
        std::vector<MCRow> rows;
        const char* names[] = {"bm", "kou", "stable-sym-1.5", "stable-asym-1.5",
                               "bm-drift"};
        for (const char* nm : names) {
            const LevyModel m = parse_model(nm);
            const PotentialTable pot(m);
            PathRng rng(experiment_seed(std::string("subadd-") + nm), 0);
            double worst = 0.0;
            for (int i = 0; i < 1000; ++i) {
                const double x = 16.0 * (rng.uniform() - 0.5);
                const double y = 16.0 * (rng.uniform() - 0.5);
                if (std::fabs(x) < 1e-6 || std::fabs(y) < 1e-6 ||
                    std::fabs(x + y) < 1e-6) {
                    continue;
                }
                worst = std::max(worst, pot.h(x + y) - pot.h(x) - pot.h(y));
            }
            det_row(rows, "subadditivity: max of h(x+y)-h(x)-h(y) over 1000 pairs",
                    describe(m), "x,y uniform in [-8,8]", std::max(worst, 0.0),
                    0.0, 1e-8);
        }
        // Finite-variance slope at infinity: h(x)/|x| -> 1/m^2.
        for (const char* nm : {"bm", "kou"}) {
            const LevyModel m = parse_model(nm);
            const PotentialTable pot(m);
            const double m2 = second_moment(m);
            for (double x : {1000.0, -1000.0}) {
                det_row(rows, "slope h(x)/|x| at |x|=1e3 vs 1/m^2", describe(m),
                        "x=" + verify_detail::fmt(x),
                        pot.h(x) / std::fabs(x), 1.0 / m2, 0.02 / m2);
            }
            for (double y : {1000.0, -1000.0}) {
                const double x = 2.0;
                const double lim = (y > 0.0 ? x : -x) / m2;
                det_row(rows,
                        "difference h(y+x)-h(y) at |y|=1e3 vs +-x/m^2",
                        describe(m),
                        "y=" + verify_detail::fmt(y) + ", x=2",
                        pot.h(y + x) - pot.h(y), lim, 0.02 * std::fabs(lim));
            }
        }
        // Infinite variance: the slope vanishes and scales like |x|^{alpha-2}.
        for (const char* nm : {"stable-sym-1.5", "stable-asym-1.5"}) {
            const LevyModel m = parse_model(nm);
            const PotentialTable pot(m);
            const double s1 = pot.h(1000.0) / 1000.0;
            const double s2 = pot.h(2000.0) / 2000.0;
            det_row(rows, "slope h(x)/x at x=1e3 decays (infinite variance)",
                    describe(m), "x=1000", s1, 0.0, 0.06);
            det_row(rows, "slope ratio s(2e3)/s(1e3) vs 2^{alpha-2}",
                    describe(m), "alpha=1.5", s2 / s1,
                    std::pow(2.0, 1.5 - 2.0), 1e-9);
        }
        return rows;
    }

    // =======================================================================
    // Check 4: two-barrier exit probabilities, Monte Carlo vs the h-formula.
    // =======================================================================
    std::vector<MCRow> check_exit_probabilities() const {
        verify_detail::Stopwatch sw;
        std::vector<MCRow> rows;
        struct ExitCase {
            const char* model;
            double x, a, b;
            std::size_t n;
            double t_max;
        };
        const ExitCase cases[] = {
            {"bm", 0.0, 2.0, -1.0, 100000, 400.0},
            {"bm", 0.5, 2.0, -1.0, 100000, 400.0},
            {"bm", -1.2, -2.0, 1.0, 100000, 400.0},
            {"bm-drift", 0.5, 1.0, -2.0, 100000, 400.0},
            {"bm-drift", -0.5, -2.0, 1.0, 100000, 400.0},
            {"kou", 0.3, 1.0, -1.0, 100000, 2000.0},
            {"kou", -0.6, -1.5, 0.8, 100000, 2000.0},
            {"kou", 0.2, 2.0, -1.0, 100000, 2000.0},
            {"stable-sym-1.5", 0.0, 1.0, -1.0, 50000, 100000.0},
            {"stable-sym-1.5", 0.4, 1.0, -1.0, 50000, 100000.0},
            {"stable-asym-1.5", 0.0, 1.0, -1.0, 50000, 100000.0},
            {"stable-asym-1.5", -0.5, -1.0, 1.5, 50000, 100000.0},
        };
        for (const auto& c : cases) {
            const LevyModel m = parse_model(c.model);
            const PotentialTable pot(m);
            const double target = pot.hit_prob_two(c.x, c.a, c.b);
            SimOptions opt;
            if (std::holds_alternative<StrictlyStable>(m)) {
                opt.dt_min = 1e-7;
                opt.hit_delta = 2e-4;
            }
            const std::string name =
                "exit: P(hit " + verify_detail::fmt(c.a) + " before " +
                verify_detail::fmt(c.b) + ") from x=" + verify_detail::fmt(c.x);
            const std::uint64_t es = experiment_seed(name + c.model);
            stat_row(rows, name, describe(m),
                     "t_max=" + verify_detail::fmt(c.t_max), target, c.n,
                     [&](std::size_t n, std::uint64_t salt) {
                         PathSimulator sim(m, opt);
                         std::size_t hits = 0, kept = 0, cens = 0;
                         for (std::size_t i = 0; i < n; ++i) {
                             PathRng rng(es, i + salt * 40000000ull);
                             const auto r = sim.first_hit_of_two(
                                 rng, c.x, c.a, c.b, c.t_max);
                             if (!r) {
                                 ++cens;
                             } else {
                                 ++kept;
                                 hits += (*r == 0) ? 1 : 0;
                             }
                         }
                         StatResult out;
                         const double k = static_cast<double>(kept);
                         out.estimate = static_cast<double>(hits) / k;
                         out.std_error = std::sqrt(std::max(
                             out.estimate * (1.0 - out.estimate) / k, 1e-12));
                         out.censor_rate =
                             static_cast<double>(cens) / static_cast<double>(n);
                         return out;
                     });
        }
        det_row(rows, "runtime budget (s)", "all exit cases", "budget 600 s",
                sw.seconds(), 0.0, 600.0);
        return rows;
    }

    // =======================================================================
    // Check 5: local time at zero accrued at the first hit of a level is
    // exponential with mean h_two_sided(a) -- mean and KS distance.
    // =======================================================================
    std::vector<MCRow> check_first_hit_local_time() const {
        std::vector<MCRow> rows;
        struct LTCase {
            const char* model;
            double a;
            std::size_t n;
            double t_max;
            SimOptions opt;
        };
        SimOptions bm_opt;
        bm_opt.band_eps = 0.01;
        SimOptions st_opt;
        st_opt.dt_min = 1e-7;
        st_opt.hit_delta = 2e-4;
        st_opt.band_eps = 5e-4;
        const LTCase cases[] = {
            {"bm", 1.0, 50000, 40000.0, bm_opt},
            {"bm", 2.0, 20000, 40000.0, bm_opt},
            {"stable-sym-1.5", 1.0, 10000, 300000.0, st_opt},
        };
        for (const auto& c : cases) {
            const LevyModel m = parse_model(c.model);
            const PotentialTable pot(m);
            const double mean = pot.h_two_sided(c.a);
            const std::string base = "first-hit local time, a=" +
                                     verify_detail::fmt(c.a);
            const std::uint64_t es = experiment_seed(base + c.model);
            std::vector<double> sample;
            double censor = 0.0;
            verify_detail::Stopwatch sw;
            {
                PathSimulator sim(m, c.opt);
                std::size_t cens = 0;
                sample.reserve(c.n);
                for (std::size_t i = 0; i < c.n; ++i) {
                    PathRng rng(es, i);
                    const auto r =
                        sim.local_time_at_first_hit(rng, c.a, c.t_max);
                    if (!r) {
                        ++cens;
                    } else {
                        sample.push_back(*r);
                    }
                }
                censor = static_cast<double>(cens) / static_cast<double>(c.n);
            }
            verify_detail::MeanVar mv;
            for (double l : sample) mv.add(l);
            MCRow mr;
            mr.name = base + ": mean vs h_two_sided";
            mr.model = describe(m);
            mr.params = "n=" + std::to_string(c.n) +
                        ", t_max=" + verify_detail::fmt(c.t_max);
            mr.estimate = mv.mean;
            mr.std_error = mv.sem();
            mr.target = mean;
            mr.sigmas = std::fabs(mv.mean - mean) / mv.sem();
            mr.censor_rate = censor;
            mr.pass = mr.sigmas <= 3.0 && censor <= kMaxCensorRate;
            mr.runtime_s = sw.seconds();
            push(rows, std::move(mr));

            const double d = ks_statistic(sample, [mean](double l) {
                return 1.0 - std::exp(-l / mean);
            });
            const double scaled =
                d * std::sqrt(static_cast<double>(sample.size()));
            det_row(rows, base + ": KS sqrt(n) D vs exponential law",
                    describe(m), "1% critical value", scaled, 0.0,
                    kKSCritical1Percent, sw.seconds());
        }
        return rows;
    }

    // =======================================================================
    // Check 6: the weighted martingale h^gamma(X_t) f(L_t) + tail(L_t) has
    // constant expectation, for all tilts; E[X_t f(L_t)] vanishes from 0.
    // =======================================================================
    std::vector<MCRow> check_martingale_constancy() const {
        std::vector<MCRow> rows;
        const WeightFunction f = ExponentialWeight{1.0};
        const std::vector<double> grid = {0.25, 0.5, 1.0, 2.0};
        struct MCase {
            const char* model;
            std::size_t n;
            SimOptions opt;
        };
        SimOptions bm_opt;
        bm_opt.dt_min = 2e-5;
        bm_opt.band_eps = 0.008;
        SimOptions st_opt;
        st_opt.band_eps = 0.005;
        st_opt.dt_min = 1e-6;
        const MCase cases[] = {
            {"bm", 20000, bm_opt},
            {"stable-sym-1.5", 10000, st_opt},
        };
        for (const auto& c : cases) {
            const LevyModel m = parse_model(c.model);
            const PotentialTable pot(m);
            const bool stable = std::holds_alternative<StrictlyStable>(m);
            const std::uint64_t es =
                experiment_seed(std::string("martingale-") + c.model);
            // One path ensemble reused across every tilt and grid time.
            std::vector<std::vector<PathState>> paths;
            verify_detail::Stopwatch sw;
            {
                PathSimulator sim(m, c.opt);
                paths.reserve(c.n);
                for (std::size_t i = 0; i < c.n; ++i) {
                    PathRng rng(es, i);
                    paths.push_back(sim.states_at(rng, grid, nullptr));
                }
            }
            const double per_row = sw.seconds() / (3.0 * grid.size());
            for (double gamma : {-1.0, 0.0, 1.0}) {
                for (std::size_t ti = 0; ti < grid.size(); ++ti) {
                    verify_detail::MeanVar mv;
                    for (const auto& p : paths) {
                        const MartingaleState s{p[ti].x, p[ti].local_zero,
                                                p[ti].t, true, {}};
                        mv.add(martingale_weight_tilted(pot, gamma, f, s));
                    }
                    MCRow r;
                    r.name = "weighted martingale constancy, gamma=" +
                             verify_detail::fmt(gamma) +
                             ", t=" + verify_detail::fmt(grid[ti]);
                    r.model = describe(m);
                    r.params = "f=exp(1), n=" + std::to_string(c.n);
                    r.estimate = mv.mean;
                    r.std_error = mv.sem();
                    r.target = 1.0;  // started at 0 with normalized weight
                    r.sigmas = std::fabs(mv.mean - 1.0) / mv.sem();
                    r.pass = r.sigmas <= 3.0;
                    r.runtime_s = per_row;
                    push(rows, std::move(r));
                }
            }
            if (stable) {
                // Infinite variance: the tilt family collapses onto h.
                double worst = 0.0;
                for (const auto& p : paths) {
                    const MartingaleState s{p.back().x, p.back().local_zero,
                                            p.back().t, true, {}};
                    worst = std::max(
                        worst,
                        std::fabs(martingale_weight_tilted(pot, 1.0, f, s) -
                                  martingale_weight_tilted(pot, -1.0, f, s)));
                }
                det_row(rows,
                        "tilt family collapses for infinite variance "
                        "(max |M^+1 - M^-1|)",
                        describe(m), "states at t=2", worst, 0.0, 1e-12);
            } else {
                // E[X_t f(L_t)] = 0 started from zero.
                verify_detail::MeanVar mv;
                for (const auto& p : paths) {
                    mv.add(p.back().x * weight_value(f, p.back().local_zero));
                }
                MCRow r;
                r.name = "odd-part martingale: E[X_t f(L_t)] at t=2";
                r.model = describe(m);
                r.params = "f=exp(1), n=" + std::to_string(c.n);
                r.estimate = mv.mean;
                r.std_error = mv.sem();
                r.target = 0.0;
                r.sigmas = std::fabs(mv.mean) / mv.sem();
                r.pass = r.sigmas <= 3.0;
                r.runtime_s = 0.0;
                push(rows, std::move(r));
            }
        }
        return rows;
    }

    // =======================================================================
    // Check 7: each random-clock conditional converges, as the clock
    // recedes, to the tilted weighted martingale it should (ratios over a
    // state grid, deterministic).
    // =======================================================================
    std::vector<MCRow> check_clock_limits() const {
        std::vector<MCRow> rows;
        const LevyModel m = BrownianDiffusion{1.0};
        const PotentialTable pot(m);
        const WeightFunction f = ExponentialWeight{1.0};
        std::vector<MartingaleState> states;
        for (double x : {-2.0, 0.5, 3.0}) {
            for (double l : {0.0, 0.4, 1.1}) {
                states.push_back({x, l, 0.0, true, 0.0});
            }
        }
        const MartingaleState s0{0.0, 0.0, 0.0, true, 0.0};

        const auto limit_ratio_err = [&](const ClockSpec& clock,
                                         double gamma) {
            const double c0 = clock_conditional(pot, clock, f, s0);
            const double l0 = martingale_weight_tilted(pot, gamma, f, s0);
            double worst = 0.0;
            for (const auto& s : states) {
                const double cr = clock_conditional(pot, clock, f, s) / c0;
                const double lr =
                    martingale_weight_tilted(pot, gamma, f, s) / l0;
                worst = std::max(worst, std::fabs(cr - lr) / lr);
            }
            return worst;
        };

        {
            ClockSpec clock;
            clock.kind = ClockKind::Exponential;
            clock.q = 1e-6;
            det_row(rows,
                    "exponential clock q->0 vs gamma=0 martingale "
                    "(max rel ratio err)",
                    describe(m), "q=1e-6, 9 states",
                    limit_ratio_err(clock, 0.0), 0.0, 1e-2);
        }
        {
            ClockSpec clock;
            clock.kind = ClockKind::LevelHit;
            clock.a = 1000.0;
            det_row(rows,
                    "level-hit clock a->inf vs gamma=+1 martingale "
                    "(max rel ratio err)",
                    describe(m), "a=1000, 9 states",
                    limit_ratio_err(clock, clock_limit_tilt(clock)), 0.0,
                    1e-2);
        }
        {
            ClockSpec clock;
            clock.kind = ClockKind::TwoLevel;
            clock.a = 2000.0;
            clock.b = -1000.0;
            const double gamma = clock_limit_tilt(clock);
            det_row(rows,
                    "two-level clock receding vs tilt (N-P)/(P+N) "
                    "(max rel ratio err)",
                    describe(m),
                    "a=2000, b=-1000, gamma=" + verify_detail::fmt(gamma),
                    limit_ratio_err(clock, gamma), 0.0, 1e-2);
        }
        {
            // Exponential weight: the depth dependence factors exactly, so
            // the conditional's state ratios match the limit martingale's to
            // rounding even at finite depth.
            ClockSpec clock;
            clock.kind = ClockKind::InverseLocalTime;
            clock.a = 1000.0;
            clock.u = 10000.0;
            const double c0 = clock_conditional(pot, clock, f, s0);
            double worst = 0.0;
            for (const auto& s : states) {
                const double cr = clock_conditional(pot, clock, f, s) / c0;
                const double lr = inv_lt_limit_exponential(pot, clock.a, 1.0,
                                                           s) /
                                  inv_lt_limit_exponential(pot, clock.a, 1.0,
                                                           s0);
                worst = std::max(worst, std::fabs(cr - lr) / lr);
            }
            det_row(rows,
                    "inverse-local-time clock vs its limit martingale "
                    "(exact factorization, max rel ratio err)",
                    describe(m), "a=1000, u=1e4", worst, 0.0, 1e-9);
        }
        return rows;
    }

    // =======================================================================
    // Check 8: the two-parameter local-time law at the inverse-local-time
    // ring -- masses, Laplace transform, and a Monte Carlo ring mean.
    // =======================================================================
    std::vector<MCRow> check_inverse_local_time_law() const {
        std::vector<MCRow> rows;
        struct AU {
            double A, u;
        };
        for (const AU& c : {AU{2.0, 1.0}, AU{4.0, 2.5}}) {
            const double cut = 30.0 * c.A + 4.0 * c.u;
            const double mass_rho = verify_detail::integrate_sqrt_smooth(
                [&](double y) { return inv_lt_density(c.A, c.u, y).rho; },
                cut);
            det_row(rows, "density mass: integral of rho vs 1-exp(-u/A)",
                    "inverse-local-time law",
                    "A=" + verify_detail::fmt(c.A) +
                        ", u=" + verify_detail::fmt(c.u),
                    mass_rho, 1.0 - std::exp(-c.u / c.A), 1e-8);
            const double mass_tilde = verify_detail::integrate_sqrt_smooth(
                [&](double y) {
                    return inv_lt_density(c.A, c.u, y).rho_tilde;
                },
                cut);
            det_row(rows, "density mass: integral of rho_tilde / A vs 1",
                    "inverse-local-time law",
                    "A=" + verify_detail::fmt(c.A) +
                        ", u=" + verify_detail::fmt(c.u),
                    mass_tilde / c.A, 1.0, 1e-8);
        }
        {
            const double A = 2.0, u = 1.0;
            const double cut = 30.0 * A + 4.0 * u;
            for (double beta : {0.7, 1.0, 2.3}) {
                const double lap =
                    std::exp(-u / A) +
                    verify_detail::integrate_sqrt_smooth(
                        [&](double y) {
                            return std::exp(-beta * y) *
                                   inv_lt_density(A, u, y).rho;
                        },
                        cut);
                det_row(rows,
                        "Laplace transform of ring local time vs "
                        "exp(-u beta/(1+beta A))",
                        "inverse-local-time law",
                        "A=2, u=1, beta=" + verify_detail::fmt(beta), lap,
                        std::exp(-u * beta / (1.0 + beta * A)), 1e-8);
            }
        }
        {
            // Monte Carlo: E_0[f(L at ring)] vs the renewal decomposition.
            const LevyModel m = BrownianDiffusion{1.0};
            const PotentialTable pot(m);
            const WeightFunction f = ExponentialWeight{1.0};
            const double a = 1.0, u = 1.0, t_max = 100000.0;
            const double target = inv_lt_ring_mean(pot, a, u, f, 0.0);
            SimOptions opt;
            opt.dt_min = 2e-5;
            opt.band_eps = 0.01;
            const std::uint64_t es = experiment_seed("invlt-ring-mean");
            stat_row(rows,
                     "ring mean: E[f(local time at zero at clock ring)]",
                     describe(m), "a=1, u=1, t_max=1e5", target, 4000,
                     [&](std::size_t n, std::uint64_t salt) {
                         PathSimulator sim(m, opt);
                         verify_detail::MeanVar mv;
                         std::size_t cens = 0;
                         for (std::size_t i = 0; i < n; ++i) {
                             PathRng rng(es, i + salt * 40000000ull);
                             const auto r = sim.run_until_level_depth(
                                 rng, a, u, t_max);
                             if (!r) {
                                 ++cens;
                             } else {
                                 mv.add(weight_value(f, r->local_zero));
                             }
                         }
                         StatResult out;
                         out.estimate = mv.mean;
                         out.std_error = mv.sem();
                         out.censor_rate =
                             static_cast<double>(cens) / static_cast<double>(n);
                         return out;
                     });
        }
        return rows;
    }

    // =======================================================================
    // Check 9: the normalized penalized mass E[M_t 1{L_t > l}] approaches
    // the terminal tail weight(l+) = exp(-l).
    // =======================================================================
    std::vector<MCRow> check_penalized_tail() const {
        std::vector<MCRow> rows;
        const LevyModel m = BrownianDiffusion{1.0};
        const PotentialTable pot(m);
        const WeightFunction f = ExponentialWeight{1.0};
        const double t = 5000.0;
        const std::size_t n = 2000;
        const std::uint64_t es = experiment_seed("penalized-tail");
        std::vector<MartingaleState> states;
        verify_detail::Stopwatch sw;
        {
            PathSimulator sim(m, SimOptions{});
            const double grid[] = {t};
            states.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                PathRng rng(es, i);
                const auto p = sim.states_at(rng, grid, nullptr);
                states.push_back({p[0].x, p[0].local_zero, p[0].t, true, {}});
            }
        }
        const double per_row = sw.seconds() / 3.0;
        for (double l : {0.25, std::log(2.0), 1.5}) {
            verify_detail::MeanVar mv;
            for (const auto& s : states) {
                const double mart = martingale_weight_tilted(pot, 0.0, f, s);
                mv.add(s.l > l ? mart : 0.0);
            }
            MCRow r;
            r.name = "penalized tail mass E[M_t 1{L_t > l}] vs exp(-l)";
            r.model = describe(m);
            r.params = "t=5000, l=" + verify_detail::fmt(l) +
                       ", n=" + std::to_string(n);
            r.estimate = mv.mean;
            r.std_error = mv.sem();
            r.target = weight_tail(f, l);
            r.sigmas = std::fabs(mv.mean - r.target) / mv.sem();
            r.pass = r.sigmas <= 3.0;
            r.runtime_s = per_row;
            push(rows, std::move(r));
        }
        return rows;
    }

    // =======================================================================
    // Check 10: the transient (drifted) case -- kappa from the resolvent
    // ladder, excursion-rate identities, saturation, escape probabilities,
    // and the total-local-time law.
    // =======================================================================
    std::vector<MCRow> check_transient() const {
        std::vector<MCRow> rows;
        const LevyModel m = DriftedBrownian{1.0, 1.0};
        const PotentialTable pot(m);
        const double kap = pot.drift_kappa();

        {
            // kappa = lim_{q->0} 1 / r_q(0) by Richardson on a q-ladder.
            std::vector<double> v;
            double q = 0.1;
            for (int k = 0; k < 12; ++k, q *= 0.5) {
                v.push_back(1.0 / resolvent_density_quadrature(m, q, 0.0));
            }
            for (double p : {1.0, 2.0}) {
                const double fpow = std::pow(2.0, p);
                std::vector<double> nxt;
                for (std::size_t i = 0; i + 1 < v.size(); ++i) {
                    nxt.push_back(v[i + 1] +
                                  (v[i + 1] - v[i]) / (fpow - 1.0));
                }
                v = std::move(nxt);
            }
            det_row(rows, "kappa from q-ladder of 1/r_q(0)", describe(m),
                    "q0=0.1, 12 levels, Richardson", v.back(), 1.0, 1e-6);
        }
        det_row(rows, "kappa vs closed drift value", describe(m), "",
                kap, 1.0, 1e-12);
        for (double a : {0.7, 2.0}) {
            const auto rates = pot.excursion_rates(a);
            det_row(rows,
                    "excursion rates: finite-return rate vs "
                    "reach-rate * (1 - kappa h(a))",
                    describe(m), "a=" + verify_detail::fmt(a),
                    rates.hit_before_finite_return,
                    rates.hit_before_return * (1.0 - kap * pot.h(a)), 1e-10);
            det_row(rows,
                    "escape factorization: (1-kh(a))(1-kh(-a)) vs "
                    "1-kh_two_sided(a)",
                    describe(m), "a=" + verify_detail::fmt(a),
                    (1.0 - kap * pot.h(a)) * (1.0 - kap * pot.h(-a)),
                    1.0 - kap * pot.h_two_sided(a), 1e-10);
        }
        for (double a : {20.0, -20.0}) {
            det_row(rows, "h_two_sided saturates at 1/kappa", describe(m),
                    "a=" + verify_detail::fmt(a), pot.h_two_sided(a),
                    1.0 / kap, 1e-9);
        }
        det_row(rows, "escape probability kappa h(-1) vs 1-exp(-2)",
                describe(m), "", pot.avoid_zero_prob(-1.0),
                1.0 - std::exp(-2.0), 1e-12);

        const WeightFunction f = ExponentialWeight{1.0};
        {
            // kappa * M_0 = E[f(total local time)], total ~ Exp(kappa).
            const MartingaleState s0{0.0, 0.0, 0.0, true, {}};
            const double target = kap * transient_martingale(pot, f, s0);
            const std::uint64_t es = experiment_seed("transient-total-lt");
            stat_row(rows, "total local time: E[f(L_inf)] vs kappa M_0",
                     describe(m), "escape at -13, t_max=400", target, 5000,
                     [&](std::size_t n, std::uint64_t salt) {
                         PathSimulator sim(m, SimOptions{});
                         verify_detail::MeanVar mv;
                         std::size_t cens = 0;
                         for (std::size_t i = 0; i < n; ++i) {
                             PathRng rng(es, i + salt * 40000000ull);
                             const auto r =
                                 sim.total_local_time(rng, -13.0, 400.0);
                             if (!r) {
                                 ++cens;
                             } else {
                                 mv.add(weight_value(f, *r));
                             }
                         }
                         StatResult out;
                         out.estimate = mv.mean;
                         out.std_error = mv.sem();
                         out.censor_rate =
                             static_cast<double>(cens) / static_cast<double>(n);
                         return out;
                     });
        }
        {
            // Survival: started below, P(never reach zero) = kappa h(-1).
            const double target = pot.avoid_zero_prob(-1.0);
            const std::uint64_t es = experiment_seed("transient-survival");
            stat_row(rows, "survival probability from x=-1", describe(m),
                     "escape proxy at -13, t_max=400", target, 10000,
                     [&](std::size_t n, std::uint64_t salt) {
                         PathSimulator sim(m, SimOptions{});
                         std::size_t esc = 0, kept = 0, cens = 0;
                         for (std::size_t i = 0; i < n; ++i) {
                             PathRng rng(es, i + salt * 40000000ull);
                             const auto r = sim.first_hit_of_two(
                                 rng, -1.0, 0.0, -13.0, 400.0);
                             if (!r) {
                                 ++cens;
                             } else {
                                 ++kept;
                                 esc += (*r == 1) ? 1 : 0;
                             }
                         }
                         StatResult out;
                         const double k = static_cast<double>(kept);
                         out.estimate = static_cast<double>(esc) / k;
                         out.std_error = std::sqrt(std::max(
                             out.estimate * (1.0 - out.estimate) / k, 1e-12));
                         out.censor_rate =
                             static_cast<double>(cens) / static_cast<double>(n);
                         return out;
                     });
        }
        return rows;
    }

    // =======================================================================
    // Extras: stopped tilted h along killed paths (martingale suite).
    // =======================================================================
    std::vector<MCRow> check_killed_invariance() const {
        std::vector<MCRow> rows;
        const LevyModel m = BrownianDiffusion{1.0};
        const PotentialTable pot(m);
        const double x0 = 0.5, t = 1.0;
        SimOptions opt;
        opt.dt_min = 2e-5;
        const std::uint64_t es = experiment_seed("killed-invariance");
        for (double gamma : {0.0, 1.0}) {
            const double target = pot.h_tilted(x0, gamma);
            stat_row(rows,
                     "killed invariance: E[h^gamma(X_t); zero unhit] with "
                     "gamma=" + verify_detail::fmt(gamma),
                     describe(m), "x0=0.5, t=1", target, 20000,
                     [&](std::size_t n, std::uint64_t salt) {
                         PathSimulator sim(m, opt);
                         verify_detail::MeanVar mv;
                         const double targets[1] = {0.0};
                         for (std::size_t i = 0; i < n; ++i) {
                             PathRng rng(es + (gamma > 0.0 ? 1 : 0),
                                         i + salt * 40000000ull);
                             PathState s{};
                             s.x = x0;
                             bool dead = false;
                             while (s.t < t) {
                                 if (sim.step(rng, s, targets, nullptr,
                                              t - s.t) >= 0) {
                                     dead = true;
                                     break;
                                 }
                             }
                             mv.add(dead ? 0.0 : pot.h_tilted(s.x, gamma));
                         }
                         StatResult out;
                         out.estimate = mv.mean;
                         out.std_error = mv.sem();
                         return out;
                     });
        }
        return rows;
    }

    // =======================================================================
    // Extras: the Doob closure of each clock conditional has constant mean
    // (one Monte Carlo comparison per clock kind).
    // =======================================================================
    std::vector<MCRow> check_clock_doob_means() const {
        std::vector<MCRow> rows;
        const LevyModel m = BrownianDiffusion{1.0};
        const PotentialTable pot(m);
        const WeightFunction f = ExponentialWeight{1.0};
        const double grid[] = {0.75};

        struct DoobCase {
            const char* label;
            ClockSpec clock;
            std::size_t n;
        };
        ClockSpec exp_clock;
        exp_clock.kind = ClockKind::Exponential;
        exp_clock.q = 1.0;
        ClockSpec hit_clock;
        hit_clock.kind = ClockKind::LevelHit;
        hit_clock.a = 1.5;
        ClockSpec two_clock;
        two_clock.kind = ClockKind::TwoLevel;
        two_clock.a = 1.0;
        two_clock.b = -1.5;
        ClockSpec ilt_clock;
        ilt_clock.kind = ClockKind::InverseLocalTime;
        ilt_clock.a = 1.0;
        ilt_clock.u = 0.5;
        const DoobCase cases[] = {
            {"exponential clock q=1", exp_clock, 4000},
            {"level-hit clock a=1.5", hit_clock, 4000},
            {"two-level clock (1,-1.5)", two_clock, 4000},
            {"inverse-local-time clock a=1, u=0.5", ilt_clock, 3000},
        };
        SimOptions opt;
        opt.dt_min = 2e-5;
        opt.band_eps = 0.01;
        for (const auto& c : cases) {
            MartingaleState s0{0.0, 0.0, 0.0, true, {}};
            if (c.clock.kind == ClockKind::InverseLocalTime) {
                s0.level_local_time = 0.0;
            }
            const double m0 = clock_doob(pot, c.clock, f, s0);
            const std::uint64_t es =
                experiment_seed(std::string("doob-") + c.label);
            stat_row(rows,
                     std::string("Doob closure mean at t=0.75, ") + c.label,
                     describe(m), "f=exp(1)", m0, c.n,
                     [&](std::size_t n, std::uint64_t salt) {
                         PathSimulator sim(m, opt);
                         verify_detail::MeanVar mv;
                         std::size_t cens = 0;
                         for (std::size_t i = 0; i < n; ++i) {
                             PathRng rng(es, i + salt * 40000000ull);
                             const auto path = sim.run_clock_path(
                                 rng, c.clock, grid, 1e9);
                             if (!path) {
                                 ++cens;
                                 continue;
                             }
                             mv.add(clock_doob(pot, c.clock, f,
                                               path->front()));
                         }
                         StatResult out;
                         out.estimate = mv.mean;
                         out.std_error = mv.sem();
                         out.censor_rate =
                             static_cast<double>(cens) / static_cast<double>(n);
                         return out;
                     });
        }
        return rows;
    }

    // =======================================================================
    // Named checks, suites, and reports
    // =======================================================================
    struct CheckReport {
        int id = 0;
        std::string title;
        std::vector<MCRow> rows;
        bool pass = false;
        double runtime_s = 0.0;
    };

    CheckReport run_check(int id) const {
        verify_detail::Stopwatch sw;
        CheckReport rep;
        rep.id = id;
        switch (id) {
            case 1:
                rep.title = "Brownian closed forms vs quadrature";
                rep.rows = check_brownian_closed_forms();
                break;
            case 2:
                rep.title = "stable renormalized resolvent extrapolation";
                rep.rows = check_stable_extrapolated_h();
                break;
            case 3:
                rep.title = "structure of h: subadditivity and slopes";
                rep.rows = check_h_structure();
                break;
            case 4:
                rep.title = "two-barrier exit probabilities (Monte Carlo)";
                rep.rows = check_exit_probabilities();
                break;
            case 5:
                rep.title = "first-hit local-time law (Monte Carlo)";
                rep.rows = check_first_hit_local_time();
                break;
            case 6:
                rep.title = "weighted martingale constancy (Monte Carlo)";
                rep.rows = check_martingale_constancy();
                break;
            case 7:
                rep.title = "random-clock limit martingales";
                rep.rows = check_clock_limits();
                break;
            case 8:
                rep.title = "inverse-local-time ring law";
                rep.rows = check_inverse_local_time_law();
                break;
            case 9:
                rep.title = "penalized tail normalization (Monte Carlo)";
                rep.rows = check_penalized_tail();
                break;
            case 10:
                rep.title = "transient case: kappa, rates, total local time";
                rep.rows = check_transient();
                break;
            case 11:
                rep.title = "killed-path invariance of tilted h";
                rep.rows = check_killed_invariance();
                break;
            case 12:
                rep.title = "clock Doob closures have constant mean";
                rep.rows = check_clock_doob_means();
                break;
            default:
                throw Error(ErrorCode::InvalidArgument,
                            "unknown check id " + std::to_string(id));
        }
        rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(),
                               [](const MCRow& r) { return r.pass; });
        rep.runtime_s = sw.seconds();
        return rep;
    }

    static std::vector<int> suite_checks(const std::string& suite) {
        if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
        if (suite == "h") return {1, 2, 3};
        if (suite == "hitting") return {4, 5};
        if (suite == "martingale") return {6, 9, 11};
        if (suite == "clocks") return {7, 8, 12};
        if (suite == "transient") return {10};
        throw Error(ErrorCode::InvalidArgument,
                    "unknown suite '" + suite +
                        "' (try all, h, hitting, martingale, clocks, "
                        "transient)");
    }

    std::vector<CheckReport> run_suite(const std::string& suite) const {
        std::vector<CheckReport> out;
        for (int id : suite_checks(suite)) out.push_back(run_check(id));
        return out;
    }

  private:
    static bool stat_pass(const StatResult& r, double target) {
        if (!(r.std_error > 0.0) || !std::isfinite(r.std_error)) return false;
        return std::fabs(r.estimate - target) / r.std_error <= 3.0 &&
               r.censor_rate <= kMaxCensorRate;
    }

    void push(std::vector<MCRow>& rows, MCRow r) const {
        if (on_row_) on_row_(r);
        rows.push_back(std::move(r));
    }

    std::uint64_t seed_;
    RowCallback on_row_;
};

}  // namespace levyzero
