// Potential-theoretic scalar functions built on the renormalized zero
// resolvent h: tilted invariant functions, expected local times at first
// hits, hitting probabilities for two and three targets, excursion rates,
// and the transient escape probability.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "levyzero/errors.hpp"
#include "levyzero/models.hpp"
#include "levyzero/resolvent.hpp"

namespace levyzero {

// Excursion rates away from zero associated with reaching a level a.
// In the recurrent case both entries coincide (1/h_B(a)).  In the
// transient case `hit_before_return` counts excursions that reach a
// before any return to zero (a return may never happen), while
// `hit_before_finite_return` additionally requires the excursion to
// return to zero in finite time afterwards.
struct ExcursionRates {
    double hit_before_return = 0.0;
    double hit_before_finite_return = 0.0;
};

// Cached evaluator for h and the rational expressions built from it.
//
// All hitting-probability formulas reuse a small set of h arguments
// heavily, so evaluations are memoized on a 1e-12 grid.  The cache is
// guarded by a shared mutex: concurrent readers are cheap, writers take
// the exclusive lock only to insert.  Semantically this is a pure
// function cache, so the table can be shared across worker threads.
class PotentialTable {
  public:
    explicit PotentialTable(LevyModel model, double gamma = 0.0,
                            QuadratureOptions quad = {})
        : model_(std::move(model)), gamma_(gamma), quad_(quad) {
        validate(model_);
        if (std::abs(gamma) > 1.0 + 1e-15) {
            throw Error(ErrorCode::InvalidArgument,
                        "tilt parameter gamma must lie in [-1, 1], got " +
                            std::to_string(gamma));
        }
        kappa_ = kappa(model_);
        m2_ = second_moment(model_);
        // Closed-form h routes are exact to rounding; the jump-diffusion
        // route goes through the difference quadrature.
        h_tol_ = std::holds_alternative<JumpDiffusion>(model_)
                     ? 5.0 * quad_.abs_tol
                     : 1e-12;
    }

    const LevyModel& model() const { return model_; }
    const QuadratureOptions& quadrature() const { return quad_; }
    double tilt() const { return gamma_; }
    double drift_kappa() const { return kappa_; }
    double second_moment_value() const { return m2_; }
    bool recurrent() const { return kappa_ == 0.0; }
    double h_tolerance() const { return h_tol_; }
    long clamp_count() const { return clamp_count_.load(); }

    // Renormalized zero resolvent, memoized.  Mathematically h >= 0;
    // quadrature noise of magnitude below the evaluation tolerance is
    // floored away so downstream probability formulas stay clean.
    double h(double x) const {
        if (x == 0.0) return 0.0;
        const double key_scale = 1e12;
        if (std::abs(x) < 4.0e6) {
            const std::int64_t key =
                static_cast<std::int64_t>(std::llround(x * key_scale));
            {
                std::shared_lock lock(mutex_);
                auto it = cache_.find(key);
                if (it != cache_.end()) return it->second;
            }
            const double value = compute_h(x);
            {
                std::unique_lock lock(mutex_);
                cache_.emplace(key, value);
            }
            return value;
        }
        return compute_h(x);  // beyond the grid range: evaluate uncached
    }

    // Tilted invariant function h(x) + gamma*x/m^2 (the tilt vanishes
    // when the second moment is infinite).
    double h_tilted(double x) const {
        double value = h(x);
        if (std::isfinite(m2_) && gamma_ != 0.0) value += gamma_ * x / m2_;
        if (value < 0.0) {
            if (value < -64.0 * h_tol_ - 1e-13 * std::abs(x)) {
                throw Error(ErrorCode::QuadratureNoConvergence,
                            "tilted h evaluated significantly negative (" +
                                std::to_string(value) +
                                ") at x=" + std::to_string(x));
            }
            value = 0.0;
        }
        return value;
    }

    // Same tilt with an explicit gamma (used by limit comparisons).
    double h_tilted(double x, double gamma_override) const {
        double value = h(x);
        if (std::isfinite(m2_) && gamma_override != 0.0)
            value += gamma_override * x / m2_;
        return value < 0.0 ? 0.0 : value;
    }

    // Expected local time at zero accumulated before the first hit of a,
    // starting from zero.  Recurrent: h(a) + h(-a).  Transient models pick
    // up the cross term -kappa*h(a)*h(-a) and saturate at 1/kappa.
    double h_two_sided(double a) const {
        require_nonzero(a, "level for the first-hit local-time mean");
        const double ha = h(a);
        const double hma = h(-a);
        return ha + hma - kappa_ * ha * hma;
    }

    // Expected local time at zero accumulated until the first hit of
    // either a or b, starting from zero.  Derived by splitting the
    // excursion rate n(T_{a,b} < T_0) by which level is reached first and
    // solving the resulting two-equation renewal system; in the transient
    // case the local-time clock also freezes when the path escapes without
    // reaching either level, which contributes the additive kappa.
    double h_pair(double a, double b) const {
        require_nonzero(a, "first level of the pair");
        require_nonzero(b, "second level of the pair");
        if (a == b) {
            throw Error(ErrorCode::InvalidArgument,
                        "the two target levels must be distinct, got a=b=" +
                            std::to_string(a));
        }
        const double rate_a = excursion_rates(a).hit_before_return;
        const double rate_b = excursion_rates(b).hit_before_return;
        const double p_b_to_a = hit_prob_two(b, a, 0.0);
        const double p_a_to_b = hit_prob_two(a, b, 0.0);
        const double det = 1.0 - p_b_to_a * p_a_to_b;
        if (det <= 1e-12) {
            throw Error(ErrorCode::DegenerateDenominator,
                        "first-hit splitting system is singular for levels " +
                            std::to_string(a) + ", " + std::to_string(b));
        }
        double rate_a_first = (rate_a - rate_b * p_b_to_a) / det;
        double rate_b_first = (rate_b - rate_a * p_a_to_b) / det;
        // The split rates are nonnegative up to quadrature noise.
        rate_a_first = std::max(rate_a_first, 0.0);
        rate_b_first = std::max(rate_b_first, 0.0);
        const double freeze_rate = kappa_ +
                                   rate_a_first * (1.0 - kappa_ * h(a)) +
                                   rate_b_first * (1.0 - kappa_ * h(b));
        if (freeze_rate <= 0.0) {
            throw Error(ErrorCode::DegenerateDenominator,
                        "total local-time freeze rate vanished for levels " +
                            std::to_string(a) + ", " + std::to_string(b));
        }
        return 1.0 / freeze_rate;
    }

    // Closed rational expression for the same quantity, kept as an
    // independent cross-check route.  It agrees with h_pair for symmetric
    // level pairs (b = -a); for asymmetric pairs the renewal route above
    // is the correct one and this expression deviates, so production code
    // uses h_pair.  See tests for the documented discrepancy.
    double h_pair_formula(double a, double b) const {
        require_nonzero(a, "first level of the pair");
        require_nonzero(b, "second level of the pair");
        const double den = h_two_sided(a - b);
        if (den <= 1e-12) {
            throw Error(ErrorCode::DegenerateDenominator,
                        "levels too close: h_two_sided(a-b) ~ 0 for a-b=" +
                            std::to_string(a - b));
        }
        const double term_a =
            (h(b) + h(-a) - kappa_ * h(-a) * h(b)) * h(a - b);
        const double term_b =
            (h(a) + h(-b) - kappa_ * h(-b) * h(a)) * h(b - a);
        return (term_a + term_b - h(a - b) * h(b - a)) / den;
    }

    // P_x(T_a < T_b): probability that level a is reached strictly before
    // level b.  In transient models the event also requires T_a < infinity,
    // so the two orderings need not sum to one.
    double hit_prob_two(double x, double a, double b) const {
        if (a == b) {
            throw Error(ErrorCode::InvalidArgument,
                        "hit_prob_two requires distinct target levels, got "
                        "a=b=" + std::to_string(a));
        }
        const double den = h_two_sided_raw(a - b);
        if (den <= 1e-12) {
            throw Error(ErrorCode::DegenerateDenominator,
                        "levels too close: h_two_sided(a-b) ~ 0 for a-b=" +
                            std::to_string(a - b));
        }
        const double num = h(b - a) + h(x - b) - h(x - a) -
                           kappa_ * h(x - b) * h(b - a);
        return clamp_probability(num / den, prob_slack(den));
    }

    // P_x(T_a < T_b and T_a < T_c): level a is reached before both b and c.
    // Obtained from the two-target probabilities by conditioning on whether
    // c is reached before a; the same strong-Markov algebra is valid for
    // transient models with defective probabilities.
    double hit_prob_three(double x, double a, double b, double c) const {
        if (a == b || a == c) {
            throw Error(ErrorCode::InvalidArgument,
                        "hit_prob_three requires a distinct from b and c");
        }
        if (b == c) return hit_prob_two(x, a, b);
        const double p_x_ab = hit_prob_two(x, a, b);
        const double p_x_cb = hit_prob_two(x, c, b);
        const double p_c_ab = hit_prob_two(c, a, b);
        const double p_a_cb = hit_prob_two(a, c, b);
        const double den = 1.0 - p_a_cb * p_c_ab;
        if (den <= 1e-12) {
            throw Error(ErrorCode::DegenerateDenominator,
                        "three-target splitting denominator vanished for "
                        "levels " + std::to_string(a) + ", " +
                            std::to_string(b) + ", " + std::to_string(c));
        }
        const double num = p_x_ab - p_x_cb * p_c_ab;
        return clamp_probability(num / den, 4.0 * prob_slack(1.0));
    }

    // Rates, per unit of local time at zero, of excursions reaching a.
    ExcursionRates excursion_rates(double a) const {
        require_nonzero(a, "excursion target level");
        const double hB = h_two_sided(a);
        if (hB <= 1e-12) {
            throw Error(ErrorCode::DegenerateDenominator,
                        "h_two_sided(a) ~ 0 for a=" + std::to_string(a));
        }
        ExcursionRates rates;
        rates.hit_before_return = (1.0 - kappa_ * h(-a)) / hB;
        rates.hit_before_finite_return = 1.0 / hB - kappa_;
        if (rates.hit_before_return < 0.0) rates.hit_before_return = 0.0;
        if (rates.hit_before_finite_return < 0.0)
            rates.hit_before_finite_return = 0.0;
        return rates;
    }

    // P_x(zero is never reached); only meaningful for transient models.
    double avoid_zero_prob(double x) const {
        if (recurrent()) {
            throw Error(ErrorCode::NotTransient,
                        "escape probability requires a transient model; " +
                            describe(model_) + " is recurrent");
        }
        return clamp_probability(kappa_ * h(x), prob_slack(1.0));
    }

    // Additive error budget for a probability whose denominator is
    // h_two_sided(den_arg); used by the CLI display and the clamp slack.
    double prob_error_budget(double den_arg) const {
        const double den = h_two_sided_raw(den_arg);
        if (den <= 1e-12) return std::numeric_limits<double>::infinity();
        return prob_slack(den);
    }

  private:
    double compute_h(double x) const {
        const double value = renormalized_resolvent(model_, x, quad_);
        // Floor tiny negative quadrature noise.
        return value < 0.0 && value > -64.0 * h_tol_ ? 0.0 : value;
    }

    // h_two_sided without the a != 0 precondition (h_two_sided(0) = 0),
    // for internal denominators where the caller distinguishes levels.
    double h_two_sided_raw(double a) const {
        if (a == 0.0) return 0.0;
        const double ha = h(a);
        const double hma = h(-a);
        return ha + hma - kappa_ * ha * hma;
    }

    // Budget for one rational expression: a handful of h evaluations each
    // accurate to h_tol_, divided by the denominator.
    double prob_slack(double den) const {
        return std::max(1e-9, 8.0 * h_tol_ / den);
    }

    double clamp_probability(double p, double slack) const {
        if (p < 0.0 || p > 1.0) {
            if (p < -slack || p > 1.0 + slack) {
                throw Error(ErrorCode::QuadratureNoConvergence,
                            "computed probability " + std::to_string(p) +
                                " lies outside [0,1] beyond the error budget " +
                                std::to_string(slack));
            }
            clamp_count_.fetch_add(1, std::memory_order_relaxed);
            return p < 0.0 ? 0.0 : 1.0;
        }
        return p;
    }

    static void require_nonzero(double a, const char* what) {
        if (a == 0.0) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string(what) + " must be nonzero");
        }
    }

    LevyModel model_;
    double gamma_ = 0.0;
    QuadratureOptions quad_{};
    double kappa_ = 0.0;
    double m2_ = 0.0;
    double h_tol_ = 1e-12;
    mutable std::unordered_map<std::int64_t, double> cache_;
    mutable std::shared_mutex mutex_;
    mutable std::atomic<long> clamp_count_{0};
};

}  // namespace levyzero
