// levyzero: potential theory and local-time penalisation for one-dimensional
// Levy processes.  Distributed under the MIT license; see LICENSE.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "models.hpp"
#include "quadrature.hpp"

namespace levyzero {

// Resolvent densities and the renormalized zero resolvent.
//
//   r_q(x) = (1/pi) Int_0^inf [A cos(l x) - B sin(l x)] / (A^2 + B^2) dl,
//   h_q(x) = r_q(0) - r_q(-x)
//          = (1/pi) Int_0^inf [(1 - cos(l x)) A - sin(l x) B] / (A^2 + B^2) dl,
//   h(x)   = lim_{q -> 0+} h_q(x),
// with A = q + theta(l), B = omega(l).  E_x[exp(-q T_0)] = r_q(-x) / r_q(0).
//
// The limit h is computed by a closed form where one exists, by the q = 0
// integral when the variance is finite (the integral converges there), and
// otherwise by extrapolating h_q along q_k = q0 2^{-k}.  The q = 0 integral
// is NOT valid in the infinite-variance case and is refused there.

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_intervals = 4000;
  int max_cells = 64;
};

namespace detail {

// Head cutoff: past head_cut the integrand is firmly in its power-law tail.
inline double head_cut(const LevyModel& m, double q) {
  const double c = tail_coeff(m);
  const double p = tail_power(m);
  return std::max(8.0, std::pow(10.0 * std::max(q, 0.0) / c, 1.0 / p));
}

struct ResolventIntegrand {
  const LevyModel& model;
  double q;

  double A(double l) const { return q + theta(model, l); }
  double B(double l) const { return omega(model, l); }
  // Re and -Im of 1/(q + Psi)
  double re_inv(double l) const {
    const double a = A(l), b = B(l);
    return a / (a * a + b * b);
  }
  // [A cos(l x) - B sin(l x)] / |q + Psi|^2
  double re_shifted(double l, double x) const {
    const double a = A(l), b = B(l);
    return (a * std::cos(l * x) - b * std::sin(l * x)) / (a * a + b * b);
  }
  // [(1 - cos(l x)) A - sin(l x) B] / |q + Psi|^2, with 1 - cos computed as
  // 2 sin^2(x l / 2) to avoid cancellation for small l x.
  double diff_integrand(double l, double x) const {
    const double a = A(l), b = B(l);
    const double s = std::sin(0.5 * l * x);
    return (2.0 * s * s * a - std::sin(l * x) * b) / (a * a + b * b);
  }
  // Oscillating part of the shifted integrand: [A cos(l x) + B sin(l x)] / |D|^2
  // (note the sign: this is what gets SUBTRACTED from the monotone piece in
  // the difference integral, since it equals Re(e^{i l x} / (q + Psi))).
  double osc_part(double l, double x) const {
    const double a = A(l), b = B(l);
    return (a * std::cos(l * x) + b * std::sin(l * x)) / (a * a + b * b);
  }
};

}  // namespace detail

// r_q(x) by numerical quadrature (any model satisfying the integrability
// assumption).  Closed forms below take precedence in resolvent_density().
inline double resolvent_density_quadrature(const LevyModel& m, double q, double x,
                                           const QuadratureOptions& opts = {}) {
  if (!(q > 0.0))
    throw Error(ErrorCode::InvalidArgument, "resolvent density needs q > 0");
  validate(m);
  const detail::ResolventIntegrand in{m, q};
  const double cut = detail::head_cut(m, q);
  const double p = tail_power(m);
  QuadResult head = integrate_adaptive(
      [&in, x](double l) { return in.re_shifted(l, x); }, 0.0, cut,
      opts.abs_tol, 1e-12, opts.max_intervals);
  QuadResult tail;
  if (std::fabs(x) < 1e-12) {
    tail = integrate_power_tail([&in](double l) { return in.re_inv(l); }, cut, p,
                                opts.abs_tol, opts.max_intervals);
  } else {
    tail = integrate_oscillating_tail(
        [&in, x](double l) { return in.re_shifted(l, x); }, cut,
        M_PI / std::fabs(x), opts.abs_tol, opts.max_cells);
  }
  return (head.value + tail.value) / M_PI;
}

// h_q(x) = r_q(0) - r_q(-x) computed as a single integral of the difference
// (no cancellation between two nearly equal resolvent values).  Accepts q = 0
// for finite-variance models, where the difference integral still converges.
inline double resolvent_difference_quadrature(const LevyModel& m, double q, double x,
                                              const QuadratureOptions& opts = {}) {
  validate(m);
  if (q < 0.0) throw Error(ErrorCode::InvalidArgument, "q must be nonnegative");
  if (q == 0.0 && !has_finite_variance(m))
    throw Error(ErrorCode::NonIntegrableResolvent,
                "q = 0 difference integral requires finite variance");
  if (x == 0.0) return 0.0;
  const detail::ResolventIntegrand in{m, q};
  const double cut = detail::head_cut(m, q);
  const double p = tail_power(m);
  QuadResult head = integrate_adaptive(
      [&in, x](double l) { return in.diff_integrand(l, x); }, 0.0, cut,
      opts.abs_tol, 1e-12, opts.max_intervals);
  QuadResult tail_flat =
      integrate_power_tail([&in](double l) { return in.re_inv(l); }, cut, p,
                           opts.abs_tol, opts.max_intervals);
  QuadResult tail_osc = integrate_oscillating_tail(
      [&in, x](double l) { return in.osc_part(l, x); }, cut,
      M_PI / std::fabs(x), opts.abs_tol, opts.max_cells);
  return (head.value + tail_flat.value - tail_osc.value) / M_PI;
}

// ---------------------------------------------------------------------------
// Closed forms

// Brownian motion: r_q(x) = exp(-|x| sqrt(2q)/sigma) / (sigma sqrt(2q)).
inline double resolvent_density_closed(const BrownianDiffusion& m, double q, double x) {
  const double root = std::sqrt(2.0 * q);
  return std::exp(-std::fabs(x) * root / m.sigma) / (m.sigma * root);
}

// Drifted Brownian (Psi = i v l + s^2 l^2 / 2, path drift -v):
// r_q(x) = exp(-v x / s^2 - |x| sqrt(v^2 + 2 q s^2) / s^2) / sqrt(v^2 + 2 q s^2),
// valid for q >= 0.
inline double resolvent_density_closed(const DriftedBrownian& m, double q, double x) {
  const double s2 = m.sigma * m.sigma;
  const double root = std::sqrt(m.drift * m.drift + 2.0 * q * s2);
  return std::exp(-(m.drift * x + std::fabs(x) * root) / s2) / root;
}

// Strictly stable closed form at the origin,
//   r_q(0) = q^{1/alpha - 1} Re[(1 - i beta tan(pi alpha/2))^{-1/alpha}]
//            / (alpha c^{1/alpha} sin(pi/alpha)),
// used as an independent check on the quadrature route.
inline double resolvent_origin_closed(const StrictlyStable& m, double q) {
  const double a = m.alpha;
  const double c = stable_scale(m);
  const std::complex<double> z(1.0, -stable_beta(m) * stable_tan_factor(m));
  const double re = std::real(std::pow(z, -1.0 / a));
  return std::pow(q, 1.0 / a - 1.0) * re /
         (a * std::pow(c, 1.0 / a) * std::sin(M_PI / a));
}

// ---------------------------------------------------------------------------
// Dispatching entry points

inline double resolvent_density(const LevyModel& m, double q, double x,
                                const QuadratureOptions& opts = {}) {
  if (const auto* bm = std::get_if<BrownianDiffusion>(&m)) {
    if (!(q > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolvent density needs q > 0");
    return resolvent_density_closed(*bm, q, x);
  }
  if (const auto* db = std::get_if<DriftedBrownian>(&m)) {
    if (q < 0.0) throw Error(ErrorCode::InvalidArgument, "q must be nonnegative");
    return resolvent_density_closed(*db, q, x);
  }
  return resolvent_density_quadrature(m, q, x, opts);
}

inline double resolvent_difference(const LevyModel& m, double q, double x,
                                   const QuadratureOptions& opts = {}) {
  if (const auto* bm = std::get_if<BrownianDiffusion>(&m)) {
    if (!(q > 0.0)) {
      return std::fabs(x) / (bm->sigma * bm->sigma);  // q = 0 limit
    }
    const double root = std::sqrt(2.0 * q);
    return (1.0 - std::exp(-std::fabs(x) * root / bm->sigma)) / (bm->sigma * root);
  }
  if (const auto* db = std::get_if<DriftedBrownian>(&m)) {
    return resolvent_density_closed(*db, q, 0.0) -
           resolvent_density_closed(*db, q, -x);
  }
  return resolvent_difference_quadrature(m, q, x, opts);
}

// E_x[exp(-q T_0)] = r_q(-x) / r_q(0)
inline double laplace_hitting_time(const LevyModel& m, double q, double x,
                                   const QuadratureOptions& opts = {}) {
  if (!(q > 0.0)) throw Error(ErrorCode::InvalidArgument, "Laplace transform needs q > 0");
  return resolvent_density(m, q, -x, opts) / resolvent_density(m, q, 0.0, opts);
}

// kappa = 1 / r_0(0) for transient models, 0 for recurrent ones.
inline double kappa(const LevyModel& m) {
  if (const auto* db = std::get_if<DriftedBrownian>(&m)) return std::fabs(db->drift);
  return 0.0;
}

// ---------------------------------------------------------------------------
// Renormalized zero resolvent h

// Closed form for the strictly stable case:
// h(x) = (1 - beta sgn x) |x|^{alpha-1} / K,
// K = -2 c Gamma(alpha) cos(pi alpha / 2) (1 + beta^2 tan^2(pi alpha / 2)).
inline double stable_h_constant(const StrictlyStable& m) {
  const double a = m.alpha;
  const double bt = stable_beta(m) * stable_tan_factor(m);
  return -2.0 * stable_scale(m) * std::tgamma(a) * std::cos(M_PI * a / 2.0) *
         (1.0 + bt * bt);
}

inline double renormalized_resolvent_closed(const StrictlyStable& m, double x) {
  if (x == 0.0) return 0.0;
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  return (1.0 - stable_beta(m) * sgn) * std::pow(std::fabs(x), m.alpha - 1.0) /
         stable_h_constant(m);
}

// Finite-variance route: the q = 0 difference integral (valid ONLY there).
inline double renormalized_resolvent_direct(const LevyModel& m, double x,
                                            const QuadratureOptions& opts = {}) {
  if (!has_finite_variance(m))
    throw Error(ErrorCode::NonIntegrableResolvent,
                "direct q = 0 integral is only valid for finite variance");
  return resolvent_difference_quadrature(m, 0.0, x, opts);
}

struct ExtrapolationOptions {
  double q0 = 0.25;
  int max_steps = 20;
  double rel_tol = 1e-6;
};

struct ExtrapolationResult {
  double value = 0.0;
  double err_est = 0.0;
  int steps = 0;
  double order = 0.0;  // estimated decay order of h - h_q in q
};

// Infinite-variance-safe route: evaluate h_q along q_k = q0 2^{-k} and
// accelerate the tail.  For strictly stable models the error h - h_q
// expands in known fractional powers of q -- the skewed part decays like
// q^{2/alpha - 1} and the symmetric part like q^{(3-alpha)/alpha} with
// analytic q, q^2 corrections -- so a sequential Richardson cascade with
// those exponents is exact to leading orders.  Other models get two levels
// of Aitken's delta-squared (geometric error model with unknown ratio).
// Throws if the extrapolants fail to settle within the step budget.
inline ExtrapolationResult renormalized_resolvent_extrapolated(
    const LevyModel& m, double x, const ExtrapolationOptions& eopts = {},
    const QuadratureOptions& qopts = {}) {
  validate(m);
  if (x == 0.0) return {0.0, 0.0, 0, 0.0};
  if (const auto* st = std::get_if<StrictlyStable>(&m)) {
    std::vector<double> ps;
    if (stable_beta(*st) != 0.0) ps.push_back(2.0 / st->alpha - 1.0);
    ps.push_back((3.0 - st->alpha) / st->alpha);
    ps.push_back(1.0);
    ps.push_back(2.0);
    std::vector<double> v;
    ExtrapolationResult res;
    res.order = ps.front();
    double q = eopts.q0;
    for (int k = 0; k <= eopts.max_steps; ++k, q *= 0.5) {
      v.push_back(resolvent_difference(m, q, x, qopts));
      if (v.size() < ps.size() + 2) continue;
      std::vector<double> r = v;
      for (double p : ps) {
        const double f = std::pow(2.0, p);
        std::vector<double> nxt;
        for (std::size_t i = 0; i + 1 < r.size(); ++i)
          nxt.push_back(r[i + 1] + (r[i + 1] - r[i]) / (f - 1.0));
        r = std::move(nxt);
      }
      res.value = r.back();
      res.err_est = std::fabs(r.back() - r[r.size() - 2]);
      res.steps = k + 1;
      if (res.err_est <= eopts.rel_tol * std::max(std::fabs(res.value), 1e-12))
        return res;
    }
    throw Error(ErrorCode::ExtrapolationUnstable,
                "q -> 0 extrapolation did not settle after " +
                    std::to_string(eopts.max_steps + 1) +
                    " steps (last spread " + std::to_string(res.err_est) + ")");
  }
  std::vector<double> v;            // raw h_{q_k}
  std::vector<double> acc1, acc2;   // Aitken levels
  auto aitken = [](const std::vector<double>& s, std::vector<double>& out) {
    out.clear();
    for (std::size_t n = 0; n + 2 < s.size(); ++n) {
      const double d1 = s[n + 1] - s[n];
      const double d2 = s[n + 2] - s[n + 1];
      const double den = d2 - d1;
      if (std::fabs(den) < 1e-300) {
        out.push_back(s[n + 2]);
      } else {
        out.push_back(s[n + 2] - d2 * d2 / den);
      }
    }
  };
  double q = eopts.q0;
  ExtrapolationResult res;
  for (int k = 0; k <= eopts.max_steps; ++k, q *= 0.5) {
    v.push_back(resolvent_difference(m, q, x, qopts));
    if (v.size() < 4) continue;
    aitken(v, acc1);
    aitken(acc1, acc2);
    const std::vector<double>& best = acc2.size() >= 2 ? acc2 : acc1;
    if (best.size() >= 2) {
      const double cur = best.back();
      const double prev = best[best.size() - 2];
      res.value = cur;
      res.err_est = std::fabs(cur - prev);
      res.steps = k + 1;
      const double d_old = v[v.size() - 2] - v[v.size() - 3];
      const double d_new = v[v.size() - 1] - v[v.size() - 2];
      if (d_new != 0.0 && d_old / d_new > 0.0)
        res.order = std::log2(d_old / d_new);
      if (res.err_est <= eopts.rel_tol * std::max(std::fabs(cur), 1e-12))
        return res;
    }
  }
  throw Error(ErrorCode::ExtrapolationUnstable,
              "q -> 0 extrapolation did not settle after " +
                  std::to_string(eopts.max_steps + 1) + " steps (last spread " +
                  std::to_string(res.err_est) + ")");
}

// Production h: closed form where available, direct integral for finite
// variance, extrapolation otherwise.
inline double renormalized_resolvent(const LevyModel& m, double x,
                                     const QuadratureOptions& opts = {}) {
  validate(m);
  if (x == 0.0) return 0.0;
  if (const auto* bm = std::get_if<BrownianDiffusion>(&m))
    return std::fabs(x) / (bm->sigma * bm->sigma);
  if (const auto* st = std::get_if<StrictlyStable>(&m))
    return renormalized_resolvent_closed(*st, x);
  if (const auto* db = std::get_if<DriftedBrownian>(&m)) {
    const double s2 = db->sigma * db->sigma;
    const double v = db->drift;
    return (1.0 - std::exp((v * x - std::fabs(x) * std::fabs(v)) / s2)) /
           std::fabs(v);
  }
  return renormalized_resolvent_direct(m, x, opts);
}

}  // namespace levyzero
