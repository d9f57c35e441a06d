// levyzero: potential theory and local-time penalisation for one-dimensional
// Levy processes.  Distributed under the MIT license; see LICENSE.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <variant>

#include "errors.hpp"

namespace levyzero {

// Convention: E[exp(i l X_t)] = exp(-t Psi(l)) with
//   Psi(l) = theta(l) + i omega(l),
// theta even and nonnegative, omega odd.  A drift parameter v contributes
// +i v l to Psi, so the sample path drifts at -v per unit time.  All models
// here are centred (zero mean) except DriftedBrownian.

struct BrownianDiffusion {
  double sigma = 1.0;
};

// Strictly alpha-stable, alpha in (1, 2), with Levy density
// c_plus x^{-alpha-1} dx on (0, inf) and c_minus |x|^{-alpha-1} dx on
// (-inf, 0).  Psi(l) = c |l|^alpha (1 - i beta tan(pi alpha / 2) sgn l).
struct StrictlyStable {
  double alpha = 1.5;
  double c_plus = 0.5;
  double c_minus = 0.5;
};

// Brownian component plus compensated compound-Poisson jumps with
// double-exponential jump law: upward Exp(eta_plus) with probability p_up,
// downward Exp(eta_minus) otherwise.  The compensator -rate * mean_jump * t
// keeps the process centred.
struct JumpDiffusion {
  double sigma = 1.0;
  double jump_rate = 1.0;
  double eta_plus = 2.0;
  double eta_minus = 3.0;
  double p_up = 0.4;
};

// Brownian motion with drift: Psi(l) = i v l + sigma^2 l^2 / 2; the path
// drifts at -v per unit time, so v > 0 gives a transient process escaping
// to -infinity.
struct DriftedBrownian {
  double sigma = 1.0;
  double drift = 1.0;  // v
};

using LevyModel =
    std::variant<BrownianDiffusion, StrictlyStable, JumpDiffusion, DriftedBrownian>;

// ---------------------------------------------------------------------------
// Parameter validation

inline void validate(const BrownianDiffusion& m) {
  if (!(m.sigma > 0.0) || !std::isfinite(m.sigma))
    throw Error(ErrorCode::UnsupportedModel, "Brownian sigma must be positive");
}

inline void validate(const StrictlyStable& m) {
  if (!std::isfinite(m.alpha) || !std::isfinite(m.c_plus) || !std::isfinite(m.c_minus))
    throw Error(ErrorCode::UnsupportedModel, "stable parameters must be finite");
  if (m.alpha <= 1.0)
    throw Error(ErrorCode::NonIntegrableResolvent,
                "stable index alpha <= 1: 1/(q + Psi) is not integrable");
  if (m.alpha >= 2.0)
    throw Error(ErrorCode::UnsupportedModel, "stable index alpha must lie in (1, 2)");
  if (m.c_plus < 0.0 || m.c_minus < 0.0 || m.c_plus + m.c_minus <= 0.0)
    throw Error(ErrorCode::UnsupportedModel,
                "stable intensities must be nonnegative with positive sum");
}

inline void validate(const JumpDiffusion& m) {
  if (!(m.sigma > 0.0))
    throw Error(ErrorCode::NonIntegrableResolvent,
                "jump-diffusion needs sigma > 0 for an integrable resolvent");
  if (m.jump_rate < 0.0 || !std::isfinite(m.jump_rate))
    throw Error(ErrorCode::UnsupportedModel, "jump rate must be nonnegative");
  if (!(m.eta_plus > 0.0) || !(m.eta_minus > 0.0))
    throw Error(ErrorCode::UnsupportedModel, "jump decay rates must be positive");
  if (m.p_up < 0.0 || m.p_up > 1.0)
    throw Error(ErrorCode::UnsupportedModel, "upward jump probability must be in [0, 1]");
}

inline void validate(const DriftedBrownian& m) {
  if (!(m.sigma > 0.0))
    throw Error(ErrorCode::UnsupportedModel, "drifted Brownian sigma must be positive");
  if (m.drift == 0.0 || !std::isfinite(m.drift))
    throw Error(ErrorCode::UnsupportedModel,
                "drift must be nonzero (use the driftless Brownian model otherwise)");
}

inline void validate(const LevyModel& m) {
  std::visit([](const auto& mm) { validate(mm); }, m);
}

// ---------------------------------------------------------------------------
// Characteristic exponent, split into even/odd parts to avoid cancellation.

inline double stable_tan_factor(const StrictlyStable& m) {
  return std::tan(M_PI * m.alpha / 2.0);  // negative for alpha in (1, 2)
}

inline double stable_beta(const StrictlyStable& m) {
  return (m.c_plus - m.c_minus) / (m.c_plus + m.c_minus);
}

// Scale c with Psi(l) = c |l|^alpha (1 - i beta tan(pi alpha/2) sgn l),
// determined by the jump intensities:
//   c = (c_plus + c_minus) * pi / (2 alpha Gamma(alpha) sin(pi alpha / 2)).
inline double stable_scale(const StrictlyStable& m) {
  const double a = m.alpha;
  return (m.c_plus + m.c_minus) * M_PI /
         (2.0 * a * std::tgamma(a) * std::sin(M_PI * a / 2.0));
}

inline double theta(const BrownianDiffusion& m, double l) {
  return 0.5 * m.sigma * m.sigma * l * l;
}
inline double omega(const BrownianDiffusion&, double) { return 0.0; }

inline double theta(const StrictlyStable& m, double l) {
  return stable_scale(m) * std::pow(std::fabs(l), m.alpha);
}
inline double omega(const StrictlyStable& m, double l) {
  if (l == 0.0) return 0.0;
  const double sgn = l > 0.0 ? 1.0 : -1.0;
  return -stable_scale(m) * stable_beta(m) * stable_tan_factor(m) *
         std::pow(std::fabs(l), m.alpha) * sgn;
}

inline double mean_jump(const JumpDiffusion& m) {
  return m.p_up / m.eta_plus - (1.0 - m.p_up) / m.eta_minus;
}

inline double theta(const JumpDiffusion& m, double l) {
  const double l2 = l * l;
  return 0.5 * m.sigma * m.sigma * l2 +
         m.jump_rate * l2 *
             (m.p_up / (m.eta_plus * m.eta_plus + l2) +
              (1.0 - m.p_up) / (m.eta_minus * m.eta_minus + l2));
}
// Written so the compensator cancellation is exact: omega = O(l^3) near 0.
inline double omega(const JumpDiffusion& m, double l) {
  const double l2 = l * l;
  return m.jump_rate * l * l2 *
         (m.p_up / (m.eta_plus * (m.eta_plus * m.eta_plus + l2)) -
          (1.0 - m.p_up) / (m.eta_minus * (m.eta_minus * m.eta_minus + l2)));
}

inline double theta(const DriftedBrownian& m, double l) {
  return 0.5 * m.sigma * m.sigma * l * l;
}
inline double omega(const DriftedBrownian& m, double l) { return m.drift * l; }

inline double theta(const LevyModel& m, double l) {
  return std::visit([l](const auto& mm) { return theta(mm, l); }, m);
}
inline double omega(const LevyModel& m, double l) {
  return std::visit([l](const auto& mm) { return omega(mm, l); }, m);
}
inline std::complex<double> psi(const LevyModel& m, double l) {
  return {theta(m, l), omega(m, l)};
}

// ---------------------------------------------------------------------------
// Moments and recurrence

inline double second_moment(const BrownianDiffusion& m) { return m.sigma * m.sigma; }
inline double second_moment(const StrictlyStable&) {
  return std::numeric_limits<double>::infinity();
}
inline double second_moment(const JumpDiffusion& m) {
  return m.sigma * m.sigma +
         m.jump_rate * (2.0 * m.p_up / (m.eta_plus * m.eta_plus) +
                        2.0 * (1.0 - m.p_up) / (m.eta_minus * m.eta_minus));
}
inline double second_moment(const DriftedBrownian&) {
  return std::numeric_limits<double>::infinity();  // not centred; unused
}
inline double second_moment(const LevyModel& m) {
  return std::visit([](const auto& mm) { return second_moment(mm); }, m);
}

inline bool has_finite_variance(const LevyModel& m) {
  return std::isfinite(second_moment(m)) && !std::holds_alternative<DriftedBrownian>(m);
}

inline bool is_recurrent(const LevyModel& m) {
  return !std::holds_alternative<DriftedBrownian>(m);
}

// ---------------------------------------------------------------------------
// Tail growth of |Psi|: |Psi(l)| ~ tail_coeff * l^tail_power as l -> inf.
// These drive quadrature truncation and tail-correction formulas.

inline double tail_power(const LevyModel& m) {
  if (const auto* s = std::get_if<StrictlyStable>(&m)) return s->alpha;
  return 2.0;
}

inline double tail_coeff(const LevyModel& m) {
  if (const auto* s = std::get_if<StrictlyStable>(&m)) {
    const double bt = stable_beta(*s) * stable_tan_factor(*s);
    return stable_scale(*s) * std::sqrt(1.0 + bt * bt);
  }
  double sigma = std::visit(
      [](const auto& mm) -> double {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, StrictlyStable>)
          return 0.0;  // unreachable
        else
          return mm.sigma;
      },
      m);
  return 0.5 * sigma * sigma;
}

// ---------------------------------------------------------------------------
// Naming, presets and config parsing

inline std::string model_name(const LevyModel& m) {
  return std::visit(
      [](const auto& mm) -> std::string {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, BrownianDiffusion>) return "brownian";
        else if constexpr (std::is_same_v<T, StrictlyStable>) return "stable";
        else if constexpr (std::is_same_v<T, JumpDiffusion>) return "jump-diffusion";
        else return "brownian-drift";
      },
      m);
}

inline std::string describe(const LevyModel& m) {
  std::ostringstream os;
  os.precision(10);
  std::visit(
      [&os](const auto& mm) {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, BrownianDiffusion>) {
          os << "brownian(sigma=" << mm.sigma << ")";
        } else if constexpr (std::is_same_v<T, StrictlyStable>) {
          os << "stable(alpha=" << mm.alpha << ", c+=" << mm.c_plus
             << ", c-=" << mm.c_minus << ")";
        } else if constexpr (std::is_same_v<T, JumpDiffusion>) {
          os << "jump-diffusion(sigma=" << mm.sigma << ", rate=" << mm.jump_rate
             << ", eta+=" << mm.eta_plus << ", eta-=" << mm.eta_minus
             << ", p+=" << mm.p_up << ")";
        } else {
          os << "brownian-drift(sigma=" << mm.sigma << ", v=" << mm.drift << ")";
        }
      },
      m);
  return os.str();
}

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot parse numeric value '" + value + "' for key '" + key + "'");
  }
}

// Splits "k1=v1,k2=v2" (commas and/or whitespace) into a map.
inline std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    std::istringstream ws(token);
    std::string item;
    while (ws >> item) {
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::InvalidArgument,
                    "expected key=value, got '" + item + "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  return kv;
}

}  // namespace detail

// Accepts either a preset name (bm, stable-sym-1.5, stable-asym-1.5, kou,
// bm-drift) or an inline spec "type=stable,alpha=1.4,c+=0.5,c-=0.5".
inline LevyModel parse_model(const std::string& spec) {
  if (spec.find('=') == std::string::npos) {
    if (spec == "bm") return BrownianDiffusion{1.0};
    if (spec == "stable-sym-1.5") return StrictlyStable{1.5, 0.5, 0.5};
    if (spec == "stable-asym-1.5") return StrictlyStable{1.5, 0.75, 0.25};
    if (spec == "kou") return JumpDiffusion{1.0, 1.0, 2.0, 3.0, 0.4};
    if (spec == "bm-drift") return DriftedBrownian{1.0, 1.0};
    throw Error(ErrorCode::InvalidArgument,
                "unknown model preset '" + spec +
                    "' (try bm, stable-sym-1.5, stable-asym-1.5, kou, bm-drift)");
  }

  auto kv = detail::parse_kv(spec);
  auto take = [&kv](const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    double v = detail::parse_double(key, it->second);
    kv.erase(it);
    return v;
  };
  auto type_it = kv.find("type");
  if (type_it == kv.end())
    throw Error(ErrorCode::InvalidArgument, "inline model spec needs type=...");
  const std::string type = type_it->second;
  kv.erase(type_it);

  LevyModel model;
  if (type == "bm" || type == "brownian") {
    model = BrownianDiffusion{take("sigma", 1.0)};
  } else if (type == "stable") {
    model = StrictlyStable{take("alpha", 1.5), take("c+", 0.5), take("c-", 0.5)};
  } else if (type == "kou" || type == "jump-diffusion") {
    model = JumpDiffusion{take("sigma", 1.0), take("rate", 1.0), take("eta+", 2.0),
                          take("eta-", 3.0), take("p+", 0.4)};
  } else if (type == "bm-drift" || type == "brownian-drift") {
    model = DriftedBrownian{take("sigma", 1.0), take("v", 1.0)};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown model type '" + type + "'");
  }
  if (!kv.empty())
    throw Error(ErrorCode::InvalidArgument,
                "unknown model parameter '" + kv.begin()->first + "'");
  validate(model);
  return model;
}

}  // namespace levyzero
