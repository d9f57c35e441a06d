// Weight functions f applied to accumulated local time, as a closed
// algebra: point values, tails, and exponentially tilted tails are all
// available in closed form per variant, so Monte Carlo noise stays the
// only stochastic error source downstream.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "levyzero/errors.hpp"

namespace levyzero {

// f(u) = beta * exp(-beta u); integrates to one by construction.
struct ExponentialWeight {
    double beta = 1.0;
};

// f(u) = 1{u = 0}: the degenerate weight whose tail vanishes.  Penalizing
// with it conditions the path on zero accumulated local time.
struct IndicatorZeroWeight {};

// Piecewise-constant weight: f(u) = values[i] on
// [breakpoints[i], breakpoints[i+1]), and 0 outside the covered range.
struct StepWeight {
    std::vector<double> breakpoints;
    std::vector<double> values;
};

using WeightFunction =
    std::variant<ExponentialWeight, IndicatorZeroWeight, StepWeight>;

inline void validate(const WeightFunction& f) {
    if (const auto* e = std::get_if<ExponentialWeight>(&f)) {
        if (!(e->beta > 0.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "exponential weight rate must be positive, got " +
                            std::to_string(e->beta));
        }
        return;
    }
    if (const auto* s = std::get_if<StepWeight>(&f)) {
        if (s->breakpoints.size() < 2 ||
            s->values.size() != s->breakpoints.size() - 1) {
            throw Error(ErrorCode::InvalidArgument,
                        "step weight needs n>=2 breakpoints and n-1 values");
        }
        if (s->breakpoints.front() < 0.0) {
            throw Error(ErrorCode::InvalidArgument,
                        "step weight breakpoints must be nonnegative");
        }
        for (std::size_t i = 1; i < s->breakpoints.size(); ++i) {
            if (!(s->breakpoints[i] > s->breakpoints[i - 1])) {
                throw Error(ErrorCode::InvalidArgument,
                            "step weight breakpoints must be strictly "
                            "increasing");
            }
        }
        for (double v : s->values) {
            if (!(v >= 0.0)) {
                throw Error(ErrorCode::InvalidArgument,
                            "step weight values must be nonnegative");
            }
        }
        return;
    }
}

// f(l)
inline double weight_value(const WeightFunction& f, double l) {
    return std::visit(
        [l](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, ExponentialWeight>) {
                return w.beta * std::exp(-w.beta * l);
            } else if constexpr (std::is_same_v<W, IndicatorZeroWeight>) {
                return l == 0.0 ? 1.0 : 0.0;
            } else {
                if (l < w.breakpoints.front() || l >= w.breakpoints.back())
                    return 0.0;
                for (std::size_t i = 0; i + 1 < w.breakpoints.size(); ++i) {
                    if (l < w.breakpoints[i + 1]) return w.values[i];
                }
                return 0.0;
            }
        },
        f);
}

// tail(l) = integral of f over [l, infinity)
inline double weight_tail(const WeightFunction& f, double l) {
    return std::visit(
        [l](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, ExponentialWeight>) {
                return std::exp(-w.beta * l);
            } else if constexpr (std::is_same_v<W, IndicatorZeroWeight>) {
                return 0.0;  // the atom carries no Lebesgue mass
            } else {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < w.breakpoints.size(); ++i) {
                    const double lo = std::max(l, w.breakpoints[i]);
                    const double hi = w.breakpoints[i + 1];
                    if (hi > lo) acc += w.values[i] * (hi - lo);
                }
                return acc;
            }
        },
        f);
}

// integral of e^{-r u} f(l + u) over u in [0, infinity); r >= 0, and
// r = 0 recovers the plain tail.
inline double weight_exp_tail(const WeightFunction& f, double l, double r) {
    if (r < 0.0) {
        throw Error(ErrorCode::InvalidArgument,
                    "exponential tilt rate must be nonnegative, got " +
                        std::to_string(r));
    }
    if (r == 0.0) return weight_tail(f, l);
    return std::visit(
        [l, r](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, ExponentialWeight>) {
                return w.beta * std::exp(-w.beta * l) / (w.beta + r);
            } else if constexpr (std::is_same_v<W, IndicatorZeroWeight>) {
                return 0.0;
            } else {
                // sum_i v_i * (e^{-r(lo-l)} - e^{-r(hi-l)}) / r over the
                // part of each cell at or above l.
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < w.breakpoints.size(); ++i) {
                    const double lo = std::max(l, w.breakpoints[i]);
                    const double hi = w.breakpoints[i + 1];
                    if (hi > lo) {
                        acc += w.values[i] *
                               (std::exp(-r * (lo - l)) -
                                std::exp(-r * (hi - l))) /
                               r;
                    }
                }
                return acc;
            }
        },
        f);
}

// integral of f over [0, infinity)
inline double weight_total(const WeightFunction& f) {
    return weight_tail(f, 0.0);
}

inline bool weight_is_normalized(const WeightFunction& f) {
    return std::abs(weight_total(f) - 1.0) <= 1e-12;
}

inline void require_normalized(const WeightFunction& f) {
    if (!weight_is_normalized(f)) {
        throw Error(ErrorCode::UnnormalizedWeight,
                    "weight must integrate to one, got total mass " +
                        std::to_string(weight_total(f)));
    }
}

inline std::string describe(const WeightFunction& f) {
    return std::visit(
        [](const auto& w) -> std::string {
            using W = std::decay_t<decltype(w)>;
            std::ostringstream os;
            if constexpr (std::is_same_v<W, ExponentialWeight>) {
                os << "exp(beta=" << w.beta << ")";
            } else if constexpr (std::is_same_v<W, IndicatorZeroWeight>) {
                os << "indicator0";
            } else {
                os << "step(" << w.breakpoints.size() - 1 << " cells on ["
                   << w.breakpoints.front() << ", " << w.breakpoints.back()
                   << "))";
            }
            return os.str();
        },
        f);
}

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text,
                                             const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument,
                        "cannot parse " + what + " entry '" + item + "'");
        }
    }
    return out;
}

}  // namespace detail

// Parse a CLI weight spec:
//   "exp" or "exp:beta=2"         exponential weight
//   "indicator0"                  the atom at zero
//   "step:0,1,2:0.75,0.25"        breakpoints then cell values
inline WeightFunction parse_weight(const std::string& spec) {
    WeightFunction out;
    if (spec == "exp") {
        out = ExponentialWeight{1.0};
    } else if (spec.rfind("exp:beta=", 0) == 0) {
        const std::string num = spec.substr(9);
        try {
            std::size_t pos = 0;
            const double beta = std::stod(num, &pos);
            if (pos != num.size()) throw std::invalid_argument(num);
            out = ExponentialWeight{beta};
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument,
                        "cannot parse weight rate in '" + spec + "'");
        }
    } else if (spec == "indicator0") {
        out = IndicatorZeroWeight{};
    } else if (spec.rfind("step:", 0) == 0) {
        const std::string body = spec.substr(5);
        const auto sep = body.find(':');
        if (sep == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument,
                        "step weight spec needs 'step:<breaks>:<values>'");
        }
        StepWeight w;
        w.breakpoints =
            detail::parse_double_list(body.substr(0, sep), "breakpoint");
        w.values = detail::parse_double_list(body.substr(sep + 1), "value");
        out = std::move(w);
    } else {
        throw Error(ErrorCode::InvalidArgument,
                    "unknown weight spec '" + spec +
                        "'; expected exp[:beta=B], indicator0, or "
                        "step:<breaks>:<values>");
    }
    validate(out);
    return out;
}

}  // namespace levyzero
