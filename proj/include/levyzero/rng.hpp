// Per-path random number streams for the Monte Carlo engine.
//
// Each path derives its own engine seed from (global seed, path index)
// through a splitmix64 mixer, so results are reproducible and
// independent of scheduling or path evaluation order.  Generation uses
// the standard library engines and distributions; the one hand-written
// sampler is the alpha-stable increment (Chambers-Mallows-Stuck), which
// has no standard-library counterpart.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "levyzero/errors.hpp"

namespace levyzero {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Decorrelated engine seed for one path substream.
inline std::uint64_t derive_stream_seed(std::uint64_t seed,
                                        std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xd1342543de82ef95ull * (stream + 1));
    splitmix64_next(s);
    return splitmix64_next(s);
}

class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t stream)
        : engine_(derive_stream_seed(seed, stream)) {}

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    double normal() { return normal_(engine_); }

    double exponential(double rate) {
        return std::exponential_distribution<double>(rate)(engine_);
    }

    unsigned poisson(double mean) {
        return std::poisson_distribution<unsigned>(mean)(engine_);
    }

    // Standard strictly alpha-stable variate, alpha in (1, 2), with
    // characteristic function
    //   E[e^{i t X}] = exp(-|t|^alpha (1 - i skew tan(pi alpha/2) sgn t)).
    // An increment of the stable model over dt is then
    //   (c dt)^{1/alpha} * stable_standard(alpha, skew).
    double stable_standard(double alpha, double skew) {
        if (!(alpha > 1.0) || !(alpha < 2.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "stable sampler needs alpha in (1, 2), got " +
                            std::to_string(alpha));
        }
        if (!(skew >= -1.0 && skew <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "stable sampler needs skew in [-1, 1]");
        }
        const double V = M_PI * (uniform() - 0.5);
        double W = exponential(1.0);
        if (W <= 0.0) W = 5e-324;  // guard the log-free power below
        const double inv_alpha = 1.0 / alpha;
        if (skew == 0.0) {
            return std::sin(alpha * V) *
                   std::pow(std::cos(V), -inv_alpha) *
                   std::pow(std::cos((1.0 - alpha) * V) / W,
                            (1.0 - alpha) * inv_alpha);
        }
        const double T = std::tan(M_PI * alpha / 2.0);
        const double B = std::atan(skew * T) * inv_alpha;
        const double S =
            std::pow(1.0 + skew * skew * T * T, 0.5 * inv_alpha);
        return S * std::sin(alpha * (V + B)) *
               std::pow(std::cos(V), -inv_alpha) *
               std::pow(std::cos(V - alpha * (V + B)) / W,
                        (1.0 - alpha) * inv_alpha);
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace levyzero
