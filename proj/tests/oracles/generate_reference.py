#!/usr/bin/env python3
"""Generate frozen reference values for the C++ test suite.

Everything here is computed with mpmath at 40 significant digits, using
algorithms that are deliberately different from the C++ implementation
(mpmath's adaptive tanh-sinh quadrature and quadosc instead of
Gauss-Kronrod + oscillation-cell acceleration; direct power series for
Bessel functions at all arguments).  The output header is committed; rerun
this script only when adding new reference points.

Usage:  python3 generate_reference.py > ../reference_values.hpp
"""

import sys
from mpmath import mp, mpf, mpc, pi, sin, cos, tan, exp, gamma, sqrt, besseli

mp.dps = 40

OUT = []


def emit(name, value, comment=""):
    v = mp.nstr(mpf(value), 20, strip_zeros=False)
    if "e" not in v and "." not in v:
        v += ".0"
    OUT.append((name, v, comment))


# ---------------------------------------------------------------------------
# Modified Bessel functions I0, I1 (plain and e^{-z}-scaled)
# ---------------------------------------------------------------------------

bessel_z = ["1e-8", "0.1", "1.0", "5.0", "14.9", "15.1", "50.0",
            "199.0", "201.0", "500.0", "700.0"]
for zs in bessel_z:
    z = mpf(zs)
    tag = zs.replace(".", "p").replace("-", "m")
    emit(f"i0_scaled_{tag}", exp(-z) * besseli(0, z))
    emit(f"i1_scaled_{tag}", exp(-z) * besseli(1, z))
for zs in ["0.1", "1.0", "5.0", "15.1", "50.0"]:
    z = mpf(zs)
    tag = zs.replace(".", "p")
    emit(f"i0_plain_{tag}", besseli(0, z))
    emit(f"i1_plain_{tag}", besseli(1, z))


# ---------------------------------------------------------------------------
# Characteristic exponents
# ---------------------------------------------------------------------------

def make_stable(alpha, cp, cm):
    """Psi(l) = c l^alpha (1 - i beta tan(pi alpha/2)), l > 0."""
    alpha = mpf(alpha)
    cp, cm = mpf(cp), mpf(cm)
    c = (cp + cm) * pi / (2 * alpha * gamma(alpha) * sin(pi * alpha / 2))
    beta = (cp - cm) / (cp + cm)
    T = tan(pi * alpha / 2)

    def psi(l):
        return c * l**alpha * (1 - 1j * beta * T)

    return psi, c, beta, alpha


def make_kou(sigma, rate, etap, etam, p):
    """Mean-zero jump diffusion: Gaussian part + two-sided exponential jumps."""
    sigma, rate, etap, etam, p = map(mpf, (sigma, rate, etap, etam, p))
    muj = p / etap - (1 - p) / etam

    def psi(l):
        phi = p * etap / (etap - 1j * l) + (1 - p) * etam / (etam + 1j * l)
        return sigma**2 * l**2 / 2 + rate * (1 - phi + 1j * l * muj)

    m2 = sigma**2 + rate * (2 * p / etap**2 + 2 * (1 - p) / etam**2)
    return psi, m2


def r_q(psi, q, x, split=30):
    """(1/pi) Int_0^inf Re( e^{-i l x} / (q + Psi(l)) ) dl."""
    q, x = mpf(q), mpf(x)

    def re_part(l):
        return (mpc(cos(-l * x), sin(-l * x)) / (q + psi(l))).real

    head = mp.quad(re_part, [0, split])
    if x == 0:
        tail = mp.quad(re_part, [split, mp.inf])
    else:
        tail = mp.quadosc(re_part, [split, mp.inf], period=2 * pi / abs(x))
    return (head + tail) / pi


def h_q(psi, q, x, split=30):
    """(1/pi) Int_0^inf Re( (1 - e^{i l x}) / (q + Psi(l)) ) dl.  q = 0 allowed
    when the model has finite variance (integrand extends continuously to 0)."""
    q, x = mpf(q), mpf(x)

    def re_part(l):
        if l == 0:
            return mpf(0)
        num = 1 - mpc(cos(l * x), sin(l * x))
        return (num / (q + psi(l))).real

    head = mp.quad(re_part, [mpf("1e-12"), split])

    def re_const(l):
        return (1 / (q + psi(l))).real

    def re_osc(l):
        return (mpc(cos(l * x), sin(l * x)) / (q + psi(l))).real

    tail_const = mp.quad(re_const, [split, mp.inf])
    if x == 0:
        tail_osc = mp.quad(re_osc, [split, mp.inf])
    else:
        tail_osc = mp.quadosc(re_osc, [split, mp.inf], period=2 * pi / abs(x))
    return (head + tail_const - tail_osc) / pi


# ---------------------------------------------------------------------------
# Symmetric stable alpha = 1.5, c+ = c- = 1/2
# ---------------------------------------------------------------------------

psi_s, c_s, beta_s, alpha_s = make_stable("1.5", "0.5", "0.5")
emit("stable_sym15_c", c_s, "Levy-Khintchine scale for alpha=1.5, c+=c-=1/2")

# closed-form r_q(0): q^{1/a-1} Re[(1-i b tan)^{-1/a}] / (a c^{1/a} sin(pi/a))
def rq0_closed(alpha, c, beta):
    T = tan(pi * alpha / 2)
    return (mpc(1, -beta * T) ** (-1 / alpha)).real / (alpha * c**(1 / alpha) * sin(pi / alpha))

rq0_num = r_q(psi_s, 1, 0)
rq0_cf = rq0_closed(alpha_s, c_s, 0)
assert abs(rq0_num - rq0_cf) < mpf("1e-18"), (rq0_num, rq0_cf)
emit("stable_sym15_rq0_q1", rq0_cf, "r_1(0)")
emit("stable_sym15_rq0_q025", rq0_cf * mpf("0.25") ** (1 / alpha_s - 1), "r_{1/4}(0)")
emit("stable_sym15_rq_q025_x1", r_q(psi_s, "0.25", 1), "r_{1/4}(1)")
emit("stable_sym15_hq_q025_x1", h_q(psi_s, "0.25", 1), "h_{1/4}(1)")
emit("stable_sym15_hq_q025_x2p5", h_q(psi_s, "0.25", "2.5"), "h_{1/4}(5/2)")
# Far field: the difference-integral route loses accuracy for |x| >> 1, so
# compute h_q(25) = r_q(0) - r_q(-25) from two separate integrals (symmetric
# model, so r_q(-25) = r_q(25) via quadosc with the exact oscillation period).
_r25 = mp.quadosc(lambda l: cos(25 * l) / (mpf("0.25") + psi_s(l).real), [0, mp.inf],
               period=2 * pi / 25) / pi
emit("stable_sym15_hq_q025_x25",
     rq0_cf * mpf("0.25") ** (1 / alpha_s - 1) - _r25, "h_{1/4}(25)")
emit("stable_sym15_hq_q1em3_x1", h_q(psi_s, "0.001", 1), "h_{0.001}(1)")

K_s = -2 * c_s * gamma(alpha_s) * cos(pi * alpha_s / 2)
emit("stable_sym15_K", K_s, "normalisation K(alpha); h(x) = |x|^{a-1}/K")

# ---------------------------------------------------------------------------
# Asymmetric stable alpha = 1.5, c+ = 3/4, c- = 1/4  (beta = 1/2)
# ---------------------------------------------------------------------------

psi_a, c_a, beta_a, alpha_a = make_stable("1.5", "0.75", "0.25")
emit("stable_asym15_c", c_a)
T_a = tan(pi * alpha_a / 2)
K_a = -2 * c_a * gamma(alpha_a) * cos(pi * alpha_a / 2) * (1 + beta_a**2 * T_a**2)
emit("stable_asym15_K", K_a, "h(x) = (1 - beta sgn x)|x|^{a-1}/K")
emit("stable_asym15_rq0_q1", rq0_closed(alpha_a, c_a, beta_a))
rq0_asym_num = r_q(psi_a, 1, 0)
assert abs(rq0_asym_num - rq0_closed(alpha_a, c_a, beta_a)) < mpf("1e-18")
emit("stable_asym15_hq_q025_x1", h_q(psi_a, "0.25", 1))
emit("stable_asym15_hq_q025_xm1", h_q(psi_a, "0.25", -1))

# ---------------------------------------------------------------------------
# Symmetric stable alpha = 1.2 (fatter quadrature tails)
# ---------------------------------------------------------------------------

psi_12, c_12, _, alpha_12 = make_stable("1.2", "0.5", "0.5")
emit("stable_sym12_c", c_12)
emit("stable_sym12_rq0_q1", rq0_closed(alpha_12, c_12, 0))
emit("stable_sym12_hq_q025_x1", h_q(psi_12, "0.25", 1, split=60))

# ---------------------------------------------------------------------------
# Jump diffusion (two-sided exponential jumps), sigma=1, rate=1,
# eta+ = 2, eta- = 3, p = 0.4  (zero jump mean, asymmetric shape)
# ---------------------------------------------------------------------------

psi_k, m2_k = make_kou(1, 1, 2, 3, "0.4")
emit("kou_m2", m2_k, "P[X_1^2]")
emit("kou_rq0_q05", r_q(psi_k, "0.5", 0), "r_{1/2}(0)")
emit("kou_hq_q05_x1", h_q(psi_k, "0.5", 1))
emit("kou_h_x05", h_q(psi_k, 0, "0.5"), "h(1/2) via direct q=0 integral")
emit("kou_h_x2", h_q(psi_k, 0, 2), "h(2)")
emit("kou_h_xm2", h_q(psi_k, 0, -2), "h(-2)")

# ---------------------------------------------------------------------------
# Inverse-local-time laws: distribution functions of the Bessel densities
#   rho(y)       = e^{-(u+y)/A} (sqrt(u/y)/A) I1(2 sqrt(uy)/A)
#   rho_tilde(y) = e^{-(u+y)/A} I0(2 sqrt(uy)/A)
# integrated directly with tanh-sinh quadrature (the C++ side evaluates
# them through a Poisson mixture of Gamma distribution functions, a
# completely different algorithm).
# ---------------------------------------------------------------------------


def inv_lt_cdfs(A, u, y):
    A, u, y = mpf(A), mpf(u), mpf(y)

    def rho(yy):
        return exp(-(u + yy) / A) * sqrt(u / yy) / A * besseli(1, 2 * sqrt(u * yy) / A)

    def rho_t(yy):
        return exp(-(u + yy) / A) * besseli(0, 2 * sqrt(u * yy) / A)

    return mp.quad(rho, [0, y]), mp.quad(rho_t, [0, y]) / A


_F, _G = inv_lt_cdfs(2, "1.5", "2.3")
emit("invlt_cdf_A2_u1p5_y2p3", _F, "int_0^2.3 rho for A=2, u=3/2")
emit("invlt_tilde_cdf_A2_u1p5_y2p3", _G, "(1/A) int_0^2.3 rho_tilde")
_F2, _G2 = inv_lt_cdfs("0.5", "0.2", "0.9")
emit("invlt_cdf_A0p5_u0p2_y0p9", _F2)
emit("invlt_tilde_cdf_A0p5_u0p2_y0p9", _G2)

# ---------------------------------------------------------------------------
# Emit header
# ---------------------------------------------------------------------------

print("// Frozen reference values, generated by tests/oracles/generate_reference.py")
print("// (mpmath, 40 digits).  Do not edit by hand; regenerate instead.")
print("#pragma once")
print()
print("namespace levyzero::testref {")
print()
for name, value, comment in OUT:
    c = ("  // " + comment) if comment else ""
    print(f"inline constexpr double {name} = {value};{c}")
print()
print("}  // namespace levyzero::testref")

sys.stderr.write(f"emitted {len(OUT)} values\n")
