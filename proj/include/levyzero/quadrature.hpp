// levyzero: potential theory and local-time penalisation for one-dimensional
// Levy processes.  Distributed under the MIT license; see LICENSE.
#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "errors.hpp"

namespace levyzero {

// Building blocks for the Fourier integrals behind resolvent densities:
//  * 15-point Gauss-Kronrod rule with embedded error estimate,
//  * globally adaptive bisection on a finite interval,
//  * a power-flattening substitution for monotone tails ~ C lambda^{-p},
//  * half-period cell summation with Euler acceleration for oscillatory
//    tails cos(lambda x + phase) * (algebraically decaying envelope).

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  long evals = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (positive half; QUADPACK dqk15).
inline constexpr double kGK15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kGK15WeightsK[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
inline constexpr double kGK7WeightsG[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

}  // namespace detail

template <typename F>
QuadResult gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * detail::kGK15Nodes[i];
    const double fv = i == 7 ? f(c) : f(c - dx) + f(c + dx);
    resk += detail::kGK15WeightsK[i] * fv;
    if (i % 2 == 1) resg += detail::kGK7WeightsG[i / 2] * fv;
  }
  resk *= h;
  resg *= h;
  return {resk, std::fabs(resk - resg), 15};
}

// Globally adaptive bisection: always split the interval with the largest
// error estimate.  Throws QuadratureNoConvergence if the interval budget is
// exhausted with the error still above tolerance.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                              double rel_tol = 1e-12, int max_intervals = 4000) {
  struct Piece {
    double err, a, b, value;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  QuadResult first = gk15(f, a, b);
  std::priority_queue<Piece> heap;
  heap.push({first.abs_err, a, b, first.value});
  double total = first.value, total_err = first.abs_err;
  long evals = first.evals;
  int intervals = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::fabs(total)) &&
         intervals < max_intervals) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    QuadResult left = gk15(f, worst.a, mid);
    QuadResult right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.abs_err + right.abs_err - worst.err;
    evals += left.evals + right.evals;
    heap.push({left.abs_err, worst.a, mid, left.value});
    heap.push({right.abs_err, mid, worst.b, right.value});
    ++intervals;
  }
  if (total_err > std::max(abs_tol, rel_tol * std::fabs(total)) * 50.0)
    throw Error(ErrorCode::QuadratureNoConvergence,
                "adaptive integration stalled with estimated error " +
                    std::to_string(total_err));
  return {total, total_err, evals};
}

// Integral over [lambda0, inf) of a positive integrand decaying like
// C lambda^{-p}, p > 1.  The substitution lambda = lambda0 u^{-1/(p-1)} maps
// the tail to (0, 1] and flattens an exact power law to a constant, so the
// adaptive rule sees a nearly flat function.
template <typename F>
QuadResult integrate_power_tail(F&& f, double lambda0, double p, double abs_tol,
                                int max_intervals = 2000) {
  if (!(p > 1.0))
    throw Error(ErrorCode::NonIntegrableResolvent,
                "tail decay exponent must exceed 1");
  const double s = 1.0 / (p - 1.0);
  auto flattened = [&f, lambda0, p, s](double u) {
    const double lam = lambda0 * std::pow(u, -s);
    return f(lam) * lambda0 * s * std::pow(u, -p * s);
  };
  return integrate_adaptive(flattened, 0.0, 1.0, abs_tol, 1e-12, max_intervals);
}

// Integral over [lambda0, inf) of an oscillatory integrand whose sign
// alternates between consecutive half-period cells (e.g. cos(lambda x) times
// a slowly varying, algebraically decaying envelope).  Cell integrals are
// accelerated with the Euler transformation of their partial sums.
template <typename F>
QuadResult integrate_oscillating_tail(F&& f, double lambda0, double half_period,
                                      double abs_tol, int max_cells = 64) {
  if (!(half_period > 0.0) || !std::isfinite(half_period))
    throw Error(ErrorCode::QuadratureNoConvergence, "invalid oscillation period");
  std::vector<double> partial;
  partial.reserve(max_cells);
  double sum = 0.0;
  long evals = 0;
  for (int k = 0; k < max_cells; ++k) {
    const double a = lambda0 + k * half_period;
    QuadResult cell = gk15(f, a, a + half_period);
    evals += cell.evals;
    sum += cell.value;
    partial.push_back(sum);
    // Cheap early exit once cells are below target and alternation is tiny.
    if (k >= 8 && std::fabs(cell.value) < 0.01 * abs_tol) break;
  }
  // Euler transformation: repeatedly average adjacent partial sums.
  std::vector<double> row = partial;
  double best = row.back(), prev_best = row.front();
  while (row.size() > 1) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i)
      row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
    prev_best = best;
    best = row[0];
  }
  return {best, std::fabs(best - prev_best), evals};
}

}  // namespace levyzero
