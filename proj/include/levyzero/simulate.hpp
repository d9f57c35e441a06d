// Path simulation with distance-graded time steps, exact diffusion
// bridge-crossing detection, band local-time estimation, and drivers for
// the clock experiments used by the Monte Carlo verification suite.
//
// Hitting conventions: processes with a Gaussian component detect level
// hits through the exact Brownian bridge crossing probability per step
// (jump displacements of the jump diffusion never hit a point); stable
// paths declare a hit when they enter a narrow band around the target,
// which carries a small bias that shrinks with the band width.  Local
// time at a level is estimated by occupation time in a band of
// half-width band_eps divided by the band width.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "levyzero/errors.hpp"
#include "levyzero/models.hpp"
#include "levyzero/penalization.hpp"
#include "levyzero/rng.hpp"

namespace levyzero {

struct SimOptions {
    double dt_min = 1e-4;      // hard floor on the step size
    double dt_max = 0.25;      // hard cap far away from every level
    double zone_scale = 5.0;   // diffusion: sigma sqrt(dt) = distance/scale
    double stable_frac = 0.05; // stable: dt = frac * distance^alpha / c
    double band_eps = 0.02;    // local-time band half-width
    double hit_delta = 1e-4;   // stable point-hit band half-width
};

struct PathState {
    double x = 0.0;
    double t = 0.0;
    double local_zero = 0.0;   // band local time at zero
    double local_level = 0.0;  // band local time at the tracked level
};

class PathSimulator {
  public:
    explicit PathSimulator(LevyModel model, SimOptions opt = {})
        : model_(std::move(model)), opt_(opt) {
        validate(model_);
        if (const auto* bm = std::get_if<BrownianDiffusion>(&model_)) {
            kind_ = Kind::Diffusion;
            sigma_ = bm->sigma;
        } else if (const auto* db = std::get_if<DriftedBrownian>(&model_)) {
            kind_ = Kind::Diffusion;
            sigma_ = db->sigma;
            drift_ = -db->drift;  // Psi = +i v l means the path drifts at -v
        } else if (const auto* jd = std::get_if<JumpDiffusion>(&model_)) {
            kind_ = Kind::JumpDiffusion;
            sigma_ = jd->sigma;
            rate_ = jd->jump_rate;
            eta_plus_ = jd->eta_plus;
            eta_minus_ = jd->eta_minus;
            p_up_ = jd->p_up;
            // compensator keeps the process centred
            drift_ = -rate_ * (p_up_ / eta_plus_ - (1.0 - p_up_) / eta_minus_);
        } else {
            const auto& st = std::get<StrictlyStable>(model_);
            kind_ = Kind::Stable;
            alpha_ = st.alpha;
            scale_c_ = stable_scale(st);
            skew_ = stable_beta(st);
        }
    }

    const LevyModel& model() const { return model_; }
    const SimOptions& options() const { return opt_; }
    bool is_stable() const { return kind_ == Kind::Stable; }

    // Distance-graded step size: fine near the points of interest so
    // hitting and band occupation are resolved, coarse far away.
    double step_dt(double distance) const {
        const double d = std::max(distance, 0.0);
        double dt;
        if (kind_ == Kind::Stable) {
            dt = opt_.stable_frac * std::pow(d, alpha_) / scale_c_;
        } else {
            const double s = d / (opt_.zone_scale * sigma_);
            dt = s * s;
            if (drift_ != 0.0) {
                dt = std::min(dt, 0.5 * d / std::fabs(drift_));
            }
            if (rate_ > 0.0) dt = std::min(dt, 0.1 / rate_);
        }
        return std::clamp(dt, opt_.dt_min, opt_.dt_max);
    }

    // One increment split into its continuous part (linear drift plus
    // Gaussian motion, eligible for bridge interpolation) and its jump
    // part (instantaneous displacement).
    struct Increment {
        double continuous = 0.0;
        double jump = 0.0;
    };

    Increment draw_increment(PathRng& rng, double dt) const {
        Increment inc;
        switch (kind_) {
            case Kind::Diffusion:
                inc.continuous = drift_ * dt +
                                 sigma_ * std::sqrt(dt) * rng.normal();
                break;
            case Kind::JumpDiffusion: {
                inc.continuous = drift_ * dt +
                                 sigma_ * std::sqrt(dt) * rng.normal();
                const unsigned n = rng.poisson(rate_ * dt);
                for (unsigned i = 0; i < n; ++i) {
                    inc.jump += rng.uniform() < p_up_
                                    ? rng.exponential(eta_plus_)
                                    : -rng.exponential(eta_minus_);
                }
                break;
            }
            case Kind::Stable:
                inc.jump = std::pow(scale_c_ * dt, 1.0 / alpha_) *
                           rng.stable_standard(alpha_, skew_);
                break;
        }
        return inc;
    }

    // P(a Brownian bridge from x0 to x1 over dt touches `level`), given
    // both endpoints on the same side of it.
    double bridge_crossing_prob(double x0, double x1, double level,
                                double dt) const {
        const double prod = (x0 - level) * (x1 - level);
        if (prod <= 0.0) return 1.0;
        return std::exp(-2.0 * prod / (sigma_ * sigma_ * dt));
    }

    // Advance one adaptive step.  `targets` (up to two levels) are
    // checked for a first hit; returns the index of the target hit this
    // step, or -1.  Band local time accrues at zero always and at
    // *band_level when given.  `dt_cap` bounds the step (grid times,
    // clock ring times).
    int step(PathRng& rng, PathState& s, std::span<const double> targets,
             const double* band_level, double dt_cap) const {
        double d = std::fabs(s.x);
        for (double a : targets) d = std::min(d, std::fabs(s.x - a));
        if (band_level) d = std::min(d, std::fabs(s.x - *band_level));
        // the floor scales with elapsed time so s.t always advances in
        // floating point even when the cap has shrunk to rounding noise
        const double dt_floor = 1e-10 * (1.0 + s.t);
        const double dt = std::min(step_dt(d), std::max(dt_cap, dt_floor));

        const Increment inc = draw_increment(rng, dt);
        const double xg = s.x + inc.continuous;  // pre-jump position
        const double x1 = xg + inc.jump;

        int hit = -1;
        if (kind_ == Kind::Stable) {
            for (std::size_t i = 0; i < targets.size() && hit < 0; ++i) {
                if (std::fabs(x1 - targets[i]) < opt_.hit_delta) {
                    hit = static_cast<int>(i);
                }
            }
        } else {
            for (std::size_t i = 0; i < targets.size() && hit < 0; ++i) {
                const double p =
                    bridge_crossing_prob(s.x, xg, targets[i], dt);
                if (p >= 1.0 || rng.uniform() < p) hit = static_cast<int>(i);
            }
        }

        s.local_zero += band_occupation(s.x, xg, x1, 0.0, dt);
        if (band_level) {
            s.local_level += band_occupation(s.x, xg, x1, *band_level, dt);
        }
        s.x = x1;
        s.t += dt;
        return hit;
    }

    // --- experiment drivers -------------------------------------------------

    // Index (0 or 1) of whichever level is hit first from x, or nullopt
    // if censored at t_max.
    std::optional<int> first_hit_of_two(PathRng& rng, double x, double a,
                                        double b, double t_max) const {
        PathState s{.x = x};
        const double targets[2] = {a, b};
        while (s.t < t_max) {
            const int hit = step(rng, s, targets, nullptr, t_max - s.t);
            if (hit >= 0) return hit;
        }
        return std::nullopt;
    }

    // Local time at zero accrued when `a` is first hit, started at zero.
    std::optional<double> local_time_at_first_hit(PathRng& rng, double a,
                                                  double t_max) const {
        PathState s{};
        const double targets[1] = {a};
        while (s.t < t_max) {
            const int hit = step(rng, s, targets, nullptr, t_max - s.t);
            if (hit >= 0) return s.local_zero;
        }
        return std::nullopt;
    }

    // Evolve freely (no stopping) and record the state at each requested
    // time (ascending).  A level may be tracked for band local time.
    std::vector<PathState> states_at(PathRng& rng,
                                     std::span<const double> times,
                                     const double* band_level) const {
        std::vector<PathState> out;
        out.reserve(times.size());
        PathState s{};
        for (double target_t : times) {
            while (s.t < target_t) {
                step(rng, s, {}, band_level, target_t - s.t);
            }
            out.push_back(s);
        }
        return out;
    }

    // Run until the band local time at `a` reaches depth u (the inverse
    // local-time clock ring) and return the state at the ring; censored
    // runs return nullopt.
    std::optional<PathState> run_until_level_depth(PathRng& rng, double a,
                                                   double u,
                                                   double t_max) const {
        PathState s{};
        while (s.t < t_max) {
            step(rng, s, {}, &a, t_max - s.t);
            if (s.local_level >= u) return s;
        }
        return std::nullopt;
    }

    // Total local time at zero of a transient path: evolve until the
    // path has escaped beyond `escape_x` on the transient side (return
    // probability negligible), censoring at t_max.
    std::optional<double> total_local_time(PathRng& rng, double escape_x,
                                           double t_max) const {
        PathState s{};
        while (s.t < t_max) {
            step(rng, s, {}, nullptr, t_max - s.t);
            if ((escape_x < 0.0 && s.x <= escape_x) ||
                (escape_x > 0.0 && s.x >= escape_x)) {
                return s.local_zero;
            }
        }
        return std::nullopt;
    }

    // Simulate one path under a clock, emitting the martingale state at
    // each grid time; after the clock rings the state freezes with
    // alive=false and l held at its ring value.  Returns nullopt if the
    // run was censored (inverse-local-time ring not reached by t_max).
    std::optional<std::vector<MartingaleState>> run_clock_path(
        PathRng& rng, const ClockSpec& clock, std::span<const double> grid,
        double t_max) const {
        std::vector<MartingaleState> out;
        out.reserve(grid.size());
        PathState s{};
        bool alive = true;

        double ring_time = std::numeric_limits<double>::infinity();
        if (clock.kind == ClockKind::Exponential) {
            ring_time = rng.exponential(clock.q);
        }
        double targets_buf[2];
        std::span<const double> targets;
        const double* band_level = nullptr;
        switch (clock.kind) {
            case ClockKind::Exponential:
                break;
            case ClockKind::LevelHit:
                targets_buf[0] = clock.a;
                targets = {targets_buf, 1};
                break;
            case ClockKind::TwoLevel:
                targets_buf[0] = clock.a;
                targets_buf[1] = clock.b;
                targets = {targets_buf, 2};
                break;
            case ClockKind::InverseLocalTime:
                band_level = &clock.a;
                break;
        }

        for (double target_t : grid) {
            while (alive && s.t < target_t) {
                if (s.t >= t_max) return std::nullopt;
                const double cap =
                    std::min(target_t, ring_time) - s.t;
                const int hit = step(rng, s, targets, band_level, cap);
                if (clock.kind == ClockKind::Exponential &&
                    s.t >= ring_time) {
                    alive = false;
                } else if (hit >= 0) {
                    alive = false;
                } else if (clock.kind == ClockKind::InverseLocalTime &&
                           s.local_level >= clock.u) {
                    alive = false;
                }
            }
            MartingaleState m{.x = s.x, .l = s.local_zero,
                              .t = std::max(s.t, target_t), .alive = alive};
            if (clock.kind == ClockKind::InverseLocalTime) {
                m.level_local_time = s.local_level;
            }
            out.push_back(m);
        }
        return out;
    }

  private:
    enum class Kind { Diffusion, JumpDiffusion, Stable };

    // Occupation time of the band (level-eps, level+eps) over one step,
    // divided by the band width 2*eps.  The continuous motion from x0 to
    // xg is interpolated linearly; the jump from xg to x1 spends no time
    // in between.
    double band_occupation(double x0, double xg, double x1, double level,
                           double dt) const {
        const double eps = opt_.band_eps;
        double frac;
        if (kind_ == Kind::Stable) {
            // pure-jump path: average the endpoint indicators
            frac = 0.5 * (std::fabs(x0 - level) < eps) +
                   0.5 * (std::fabs(x1 - level) < eps);
        } else {
            const double lo = std::min(x0, xg), hi = std::max(x0, xg);
            const double span = hi - lo;
            if (span < 1e-14) {
                frac = std::fabs(x0 - level) < eps ? 1.0 : 0.0;
            } else {
                const double overlap =
                    std::min(hi, level + eps) - std::max(lo, level - eps);
                frac = std::max(overlap, 0.0) / span;
            }
        }
        return frac * dt / (2.0 * eps);
    }

    LevyModel model_;
    SimOptions opt_;
    Kind kind_ = Kind::Diffusion;
    double sigma_ = 1.0;
    double drift_ = 0.0;
    double rate_ = 0.0;
    double eta_plus_ = 1.0, eta_minus_ = 1.0, p_up_ = 0.5;
    double alpha_ = 1.5, scale_c_ = 1.0, skew_ = 0.0;
};

}  // namespace levyzero
