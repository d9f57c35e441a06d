// Penalization of a recurrent Levy path by a weight of its local time at
// zero: closed conditional expectations for four random clocks
// (independent exponential time, first hit of a level, first hit of one
// of two levels, inverse local time at a level), their common martingale
// limits, the h-transform that conditions the path to avoid zero, and
// the transient analogue where total local time is finite.
//
// Conventions.  A "conditional" value at state (x, l, t) is
// C * E[f(L at clock ring) | path currently at x with accrued local time
// l], discounted where the clock demands it, and C is the clock
// normalizer returned by clock_normalizer.  The conditional evolves as a
// supermartingale on its own; adding C * f(L at ring) on the event that
// the clock has already rung (clock_doob) closes it into an exact
// martingale, which is what the Monte Carlo constancy checks verify.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "levyzero/bessel.hpp"
#include "levyzero/errors.hpp"
#include "levyzero/potential.hpp"
#include "levyzero/resolvent.hpp"
#include "levyzero/weights.hpp"

namespace levyzero {

// Snapshot of one path at evaluation time.
struct MartingaleState {
    double x = 0.0;     // current position
    double l = 0.0;     // accrued local time at zero
    double t = 0.0;     // elapsed time
    bool alive = true;  // the relevant stopping event has not occurred
    // Accrued local time at the clock level (inverse-local-time clock
    // family only); empty means "not tracked".
    std::optional<double> level_local_time{};
};

enum class ClockKind {
    Exponential,       // independent exponential time with rate q
    LevelHit,          // first hitting time of level a
    TwoLevel,          // first hitting time of level a or level b
    InverseLocalTime,  // first time local time at level a exceeds u
};

struct ClockSpec {
    ClockKind kind = ClockKind::Exponential;
    double q = 1.0;   // Exponential
    double a = 1.0;   // LevelHit / TwoLevel / InverseLocalTime
    double b = -1.0;  // TwoLevel only
    double u = 1.0;   // InverseLocalTime only
};

inline void validate(const PotentialTable& pot, const ClockSpec& clock) {
    switch (clock.kind) {
        case ClockKind::Exponential:
            if (!(clock.q > 0.0)) {
                throw Error(ErrorCode::InvalidArgument,
                            "exponential clock rate must be positive, got " +
                                std::to_string(clock.q));
            }
            return;
        case ClockKind::LevelHit:
        case ClockKind::TwoLevel:
        case ClockKind::InverseLocalTime:
            if (!pot.recurrent()) {
                throw Error(ErrorCode::InvalidClock,
                            "hitting-time and inverse-local-time clocks "
                            "require a recurrent model; " +
                                describe(pot.model()) +
                                " escapes with positive probability");
            }
            if (clock.a == 0.0) {
                throw Error(ErrorCode::InvalidArgument,
                            "clock level must be nonzero");
            }
            if (clock.kind == ClockKind::TwoLevel) {
                if (clock.b == 0.0) {
                    throw Error(ErrorCode::InvalidArgument,
                                "second clock level must be nonzero");
                }
                if (clock.b == clock.a) {
                    throw Error(ErrorCode::InvalidArgument,
                                "the two clock levels must be distinct");
                }
            }
            if (clock.kind == ClockKind::InverseLocalTime &&
                !(clock.u >= 0.0)) {
                throw Error(ErrorCode::InvalidArgument,
                            "inverse-local-time depth must be nonnegative");
            }
            return;
    }
    throw Error(ErrorCode::InvalidClock, "unknown clock kind");
}

// The constant C with conditional = C * E[f(L at ring) | state]:
// r_q(0) for the exponential clock, the expected local time at zero
// before the ring for the hitting-type clocks.
inline double clock_normalizer(const PotentialTable& pot,
                               const ClockSpec& clock) {
    validate(pot, clock);
    switch (clock.kind) {
        case ClockKind::Exponential:
            return resolvent_density(pot.model(), clock.q, 0.0,
                                     pot.quadrature());
        case ClockKind::LevelHit:
        case ClockKind::InverseLocalTime:
            return pot.h_two_sided(clock.a);
        case ClockKind::TwoLevel:
            return pot.h_pair(clock.a, clock.b);
    }
    throw Error(ErrorCode::InvalidClock, "unknown clock kind");
}

// Tilt parameter of the martingale the clock conditional converges to as
// the clock recedes (q -> 0, |a| -> infinity, or both levels receding).
// For two levels at +P and -N the limit tilt is (N - P) / (P + N): the
// side with the FARTHER barrier is the harder one to ring first, so the
// limit law leans toward the nearer barrier's side.
inline double two_level_limit_tilt(double a, double b) {
    if (a == 0.0 || b == 0.0 || a == b) {
        throw Error(ErrorCode::InvalidArgument,
                    "two-level tilt needs distinct nonzero levels");
    }
    if (a * b < 0.0) {
        const double pos = a > 0.0 ? a : b;
        const double neg = a > 0.0 ? -b : -a;
        return (neg - pos) / (pos + neg);
    }
    return a > 0.0 ? 1.0 : -1.0;  // same-side levels recede together
}

inline double clock_limit_tilt(const ClockSpec& clock) {
    switch (clock.kind) {
        case ClockKind::Exponential:
            return 0.0;
        case ClockKind::LevelHit:
        case ClockKind::InverseLocalTime:
            return clock.a > 0.0 ? 1.0 : -1.0;
        case ClockKind::TwoLevel:
            return two_level_limit_tilt(clock.a, clock.b);
    }
    throw Error(ErrorCode::InvalidClock, "unknown clock kind");
}

// ---------------------------------------------------------------------------
// Inverse-local-time laws.
//
// Started AT the level, local time at zero accrued before local time at
// the level reaches depth u has an atom exp(-u/A) at zero (the path may
// exhaust the clock without ever touching zero) plus the density rho;
// started elsewhere and conditioned on touching zero first, the law has
// density rho_tilde / A.  A is the expected local time at zero before
// the first hit of the level, A = h_two_sided(a).

struct InverseLocalTimeDensity {
    double rho = 0.0;
    double rho_tilde = 0.0;
};

inline InverseLocalTimeDensity inv_lt_density(double A, double u, double y) {
    if (!(A > 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "local-time scale must be positive");
    }
    if (u < 0.0 || y < 0.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "local times must be nonnegative");
    }
    InverseLocalTimeDensity out;
    if (y == 0.0) {
        // continuous limits at the origin
        out.rho = std::exp(-u / A) * u / (A * A);
        out.rho_tilde = std::exp(-u / A);
        return out;
    }
    // Scaled Bessel factors keep every exponent nonpositive:
    // exp(-(u+y)/A) I_nu(2 sqrt(uy)/A) = exp(-(sqrt u - sqrt y)^2 / A) *
    // scaled_I_nu(2 sqrt(uy)/A).
    const double z = 2.0 * std::sqrt(u * y) / A;
    const double d = std::sqrt(u) - std::sqrt(y);
    const double envelope = std::exp(-d * d / A);
    out.rho = envelope * (std::sqrt(u / y) / A) * bessel_i1_scaled(z);
    out.rho_tilde = envelope * bessel_i0_scaled(z);
    return out;
}

namespace detail {

// sum_{m >= start} PoissonPmf(m; mu) * P(Poisson(lam) >= m + offset).
// Both inverse-local-time distribution functions reduce to this shape:
// the law at depth u is a Poisson(u/A) mixture of Gamma(m, scale A)
// variables, and P(Gamma(m, A) <= y) = P(Poisson(y/A) >= m).
inline double poisson_gamma_mixture_cdf(double mu, double lam, int start,
                                        int offset) {
    if (mu > 700.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "inverse-local-time depth too large for the mixture "
                    "series (u/A > 700)");
    }
    double w = std::exp(-mu);   // Poisson(mu) pmf at m = 0
    double p = std::exp(-lam);  // Poisson(lam) pmf at k = 0
    double tail = 1.0;          // P(Poisson(lam) >= k)
    int k = 0;
    double acc = 0.0;
    const int mmax = static_cast<int>(
        std::ceil(mu + 10.0 * std::sqrt(mu + 1.0) + 40.0));
    for (int m = 0; m <= mmax; ++m) {
        while (k < m + offset) {
            tail -= p;
            p *= lam / (k + 1);
            ++k;
            if (tail < 0.0) tail = 0.0;
        }
        if (m >= start) acc += w * tail;
        w *= mu / (m + 1);
    }
    return acc;
}

}  // namespace detail

// F(y) = integral of rho over (0, y]; F(infinity) = 1 - exp(-u/A).
inline double inv_lt_cdf(double A, double u, double y) {
    if (!(A > 0.0) || u < 0.0 || y < 0.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "inv_lt_cdf needs A > 0 and nonnegative local times");
    }
    if (y == 0.0 || u == 0.0) return 0.0;
    const double mu = u / A;
    const double lam = y / A;
    // far beyond the mixture's bulk the density part has full mass
    if (lam >= 2.0 * mu + 500.0) return -std::expm1(-mu);
    return detail::poisson_gamma_mixture_cdf(mu, lam, 1, 0);
}

// G(y) = (1/A) integral of rho_tilde over (0, y]; a proper distribution
// function with G(infinity) = 1.
inline double inv_lt_tilde_cdf(double A, double u, double y) {
    if (!(A > 0.0) || u < 0.0 || y < 0.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "inv_lt_tilde_cdf needs A > 0 and nonnegative local "
                    "times");
    }
    if (y == 0.0) return 0.0;
    const double mu = u / A;
    const double lam = y / A;
    if (lam >= 2.0 * mu + 500.0) return 1.0;
    return detail::poisson_gamma_mixture_cdf(mu, lam, 0, 1);
}

// integral of f(l + y) rho^A_u(y) dy over (0, infinity), closed per
// weight variant (exponential weights via the Laplace transform of rho,
// step weights via the mixture distribution function).
inline double weight_inv_lt_integral(const WeightFunction& f, double l,
                                     double A, double u) {
    return std::visit(
        [&](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, ExponentialWeight>) {
                // f(l + y) = beta e^{-beta l} e^{-beta y}; integrate the
                // Laplace transform of rho at beta.
                const double b = w.beta;
                return b * std::exp(-b * l) *
                       (std::exp(-u * b / (1.0 + b * A)) - std::exp(-u / A));
            } else if constexpr (std::is_same_v<W, IndicatorZeroWeight>) {
                return 0.0;  // l + y > 0 for every y in the integral
            } else {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < w.breakpoints.size(); ++i) {
                    const double lo = std::max(w.breakpoints[i] - l, 0.0);
                    const double hi = std::max(w.breakpoints[i + 1] - l, 0.0);
                    if (hi > lo) {
                        acc += w.values[i] *
                               (inv_lt_cdf(A, u, hi) - inv_lt_cdf(A, u, lo));
                    }
                }
                return acc;
            }
        },
        f);
}

// integral of f(l + y) rho_tilde^A_u(y) dy over (0, infinity).
inline double weight_inv_lt_tilde_integral(const WeightFunction& f, double l,
                                           double A, double u) {
    return std::visit(
        [&](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, ExponentialWeight>) {
                const double b = w.beta;
                return b * std::exp(-b * l) * (A / (1.0 + b * A)) *
                       std::exp(-u * b / (1.0 + b * A));
            } else if constexpr (std::is_same_v<W, IndicatorZeroWeight>) {
                return 0.0;
            } else {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < w.breakpoints.size(); ++i) {
                    const double lo = std::max(w.breakpoints[i] - l, 0.0);
                    const double hi = std::max(w.breakpoints[i + 1] - l, 0.0);
                    if (hi > lo) {
                        acc += w.values[i] * (inv_lt_tilde_cdf(A, u, hi) -
                                              inv_lt_tilde_cdf(A, u, lo));
                    }
                }
                return A * acc;
            }
        },
        f);
}

// E_x[f(local time at zero when local time at level a reaches depth u)].
inline double inv_lt_ring_mean(const PotentialTable& pot, double a, double u,
                               const WeightFunction& f, double x) {
    const ClockSpec clock{ClockKind::InverseLocalTime, 1.0, a, -1.0, u};
    validate(pot, clock);
    const double A = pot.h_two_sided(a);
    const double p_reach = pot.hit_prob_two(x, a, 0.0);
    const double atom = std::exp(-u / A) * weight_value(f, 0.0);
    return p_reach * (atom + weight_inv_lt_integral(f, 0.0, A, u)) +
           ((1.0 - p_reach) / A) * weight_inv_lt_tilde_integral(f, 0.0, A, u);
}

// ---------------------------------------------------------------------------
// Weighted martingales and clock conditionals

// h^gamma(X_t) f(L_t) + tail(L_t) with an explicit tilt; a martingale
// for every |gamma| <= 1 on recurrent models.
inline double martingale_weight_tilted(const PotentialTable& pot,
                                       double gamma, const WeightFunction& f,
                                       const MartingaleState& s) {
    if (!pot.recurrent()) {
        throw Error(ErrorCode::UnsupportedModel,
                    "the tilted weighted martingale requires a recurrent "
                    "model; use transient_martingale for " +
                        describe(pot.model()));
    }
    if (std::abs(gamma) > 1.0 + 1e-15) {
        throw Error(ErrorCode::InvalidArgument,
                    "tilt parameter must lie in [-1, 1], got " +
                        std::to_string(gamma));
    }
    return pot.h_tilted(s.x, gamma) * weight_value(f, s.l) +
           weight_tail(f, s.l);
}

// Same with the table's own tilt.
inline double martingale_weight(const PotentialTable& pot,
                                const WeightFunction& f,
                                const MartingaleState& s) {
    return martingale_weight_tilted(pot, pot.tilt(), f, s);
}

// C * E[f(L at ring) | state] while the clock has not rung; 0 once it
// has (use clock_doob for the closed martingale).  "Alive" means the
// clock's own ring event has not occurred: the exponential time for the
// exponential clock, reaching the level(s) for the hitting clocks,
// exhausting depth u for the inverse-local-time clock.  Hitting zero
// never kills a clock conditional.
//
// All four conditionals are time homogeneous.  For the exponential
// clock that is memorylessness: given the clock is still running, the
// remaining time is a fresh exponential, so the state's age never
// enters.  Averaging the alive indicator analytically instead of
// sampling it multiplies the alive branch by P(e_q > t) = e^{-qt}; that
// factor belongs to that averaged display, not to the conditional given
// a revealed, still-running clock.
inline double clock_conditional(const PotentialTable& pot,
                                const ClockSpec& clock,
                                const WeightFunction& f,
                                const MartingaleState& s) {
    validate(pot, clock);
    if (!s.alive) return 0.0;
    switch (clock.kind) {
        case ClockKind::Exponential: {
            const auto& m = pot.model();
            const auto& opts = pot.quadrature();
            const double r0 = resolvent_density(m, clock.q, 0.0, opts);
            const double hq = resolvent_difference(m, clock.q, s.x, opts);
            const double lap =
                s.x == 0.0
                    ? 1.0
                    : resolvent_density(m, clock.q, -s.x, opts) / r0;
            return hq * weight_value(f, s.l) +
                   lap * weight_exp_tail(f, s.l, 1.0 / r0);
        }
        case ClockKind::LevelHit: {
            const double coeff = std::max(
                pot.h(s.x) + pot.h(-clock.a) - pot.h(s.x - clock.a), 0.0);
            const double survive = pot.hit_prob_two(s.x, 0.0, clock.a);
            const double A = pot.h_two_sided(clock.a);
            return coeff * weight_value(f, s.l) +
                   survive * weight_exp_tail(f, s.l, 1.0 / A);
        }
        case ClockKind::TwoLevel: {
            const double hC = pot.h_pair(clock.a, clock.b);
            const double survive =
                pot.hit_prob_three(s.x, 0.0, clock.a, clock.b);
            return hC * (1.0 - survive) * weight_value(f, s.l) +
                   survive * weight_exp_tail(f, s.l, 1.0 / hC);
        }
        case ClockKind::InverseLocalTime: {
            const double A = pot.h_two_sided(clock.a);
            const double v = clock.u - s.level_local_time.value_or(0.0);
            if (v < 0.0) return 0.0;  // the depth was already exhausted
            const double p_reach = pot.hit_prob_two(s.x, clock.a, 0.0);
            const double atom = std::exp(-v / A) * weight_value(f, s.l);
            const double reach_part =
                atom + weight_inv_lt_integral(f, s.l, A, v);
            const double miss_part =
                weight_inv_lt_tilde_integral(f, s.l, A, v);
            return A * p_reach * reach_part + (1.0 - p_reach) * miss_part;
        }
    }
    throw Error(ErrorCode::InvalidClock, "unknown clock kind");
}

// Closed Doob martingale: the conditional before the ring, frozen at
// normalizer * f(L at ring) afterwards.  A dead state must carry l as
// the local time accrued by the ring.
inline double clock_doob(const PotentialTable& pot, const ClockSpec& clock,
                         const WeightFunction& f, const MartingaleState& s) {
    if (s.alive) return clock_conditional(pot, clock, f, s);
    validate(pot, clock);
    return clock_normalizer(pot, clock) * weight_value(f, s.l);
}

// ---------------------------------------------------------------------------
// Limits of the inverse-local-time clock as the depth grows

// Exponential weight, depth u -> infinity: the limit martingale
//   e^{-beta L_t} e^{beta L^a_t / (1 + beta A)} *
//     { P_{X_t}(T_a < T_0) + P_{X_t}(T_0 < T_a) / (1 + beta A) },
// A = h_two_sided(a).  Requires the state to track local time at the
// level.  No killing: the value is positive for all time.
inline double inv_lt_limit_exponential(const PotentialTable& pot, double a,
                                       double beta,
                                       const MartingaleState& s) {
    const ClockSpec clock{ClockKind::InverseLocalTime, 1.0, a, -1.0, 0.0};
    validate(pot, clock);
    if (!(beta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "exponential weight rate must be positive");
    }
    if (!s.level_local_time) {
        throw Error(ErrorCode::MissingLevelLocalTime,
                    "state does not track local time at the clock level " +
                        std::to_string(a));
    }
    const double A = pot.h_two_sided(a);
    const double p_reach = pot.hit_prob_two(s.x, a, 0.0);
    const double growth = 1.0 + beta * A;
    return std::exp(-beta * s.l) *
           std::exp(beta * (*s.level_local_time) / growth) *
           (p_reach + (1.0 - p_reach) / growth);
}

// Indicator weight (conditioning on zero accrued local time at zero),
// depth u -> infinity:
//   e^{L^a_t / A} P_{X_t}(T_a < T_0) 1{zero not yet hit}.
// Here alive must mean "the path has not touched zero yet".
inline double inv_lt_limit_indicator(const PotentialTable& pot, double a,
                                     const MartingaleState& s) {
    const ClockSpec clock{ClockKind::InverseLocalTime, 1.0, a, -1.0, 0.0};
    validate(pot, clock);
    if (!s.level_local_time) {
        throw Error(ErrorCode::MissingLevelLocalTime,
                    "state does not track local time at the clock level " +
                        std::to_string(a));
    }
    if (!s.alive) return 0.0;
    const double A = pot.h_two_sided(a);
    return std::exp(*s.level_local_time / A) * pot.hit_prob_two(s.x, a, 0.0);
}

// ---------------------------------------------------------------------------
// Conditioning to avoid zero, transient penalization, and the penalized
// local-time law

// Relative weight h^gamma(X_t) / h^gamma(x0) of a path under the
// h-transform that conditions on never touching zero; alive means "zero
// not yet hit".  The starting point must carry positive h^gamma mass;
// starting inside an excursion straddling zero (x0 = 0) needs the
// excursion normalization and is not supported.
inline double avoid_zero_weight(const PotentialTable& pot, double x0,
                                const MartingaleState& s) {
    if (x0 == 0.0) {
        throw Error(ErrorCode::StartingPointNotInH,
                    "conditioning to avoid zero from the excursion start "
                    "x0 = 0 is not supported");
    }
    const double h0 = pot.h_tilted(x0);
    if (!(h0 > 0.0)) {
        throw Error(ErrorCode::StartingPointNotInH,
                    "tilted h vanishes at the starting point x0 = " +
                        std::to_string(x0) +
                        "; the conditioned law is degenerate there");
    }
    if (!s.alive) return 0.0;
    return pot.h_tilted(s.x) / h0;
}

// Transient analogue of the weighted martingale: total local time at
// zero is exponential with rate kappa, so the tail term carries the
// tilt e^{-kappa u} and the escape probability 1 - kappa h(X_t):
//   h(X_t) f(L_t) + (1 - kappa h(X_t)) *
//       integral of e^{-kappa u} f(L_t + u) du.
// kappa * (value at the start) = E[f(total local time)].
inline double transient_martingale(const PotentialTable& pot,
                                   const WeightFunction& f,
                                   const MartingaleState& s) {
    if (pot.recurrent()) {
        throw Error(ErrorCode::NotTransient,
                    "transient penalization requires a transient model; " +
                        describe(pot.model()) + " is recurrent");
    }
    const double k = pot.drift_kappa();
    const double hx = pot.h(s.x);
    const double return_prob = std::max(1.0 - k * hx, 0.0);
    return hx * weight_value(f, s.l) +
           return_prob * weight_exp_tail(f, s.l, k);
}

// Distribution function of the terminal local time at zero under the
// penalized law: the normalized weight is exactly its density.
inline double penalized_local_time_cdf(const WeightFunction& f, double l) {
    require_normalized(f);
    if (l < 0.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "local time must be nonnegative");
    }
    return 1.0 - weight_tail(f, l);
}

}  // namespace levyzero
