"""Closed-form ABER analysis for the D-DF system with weighted selection combining.

All expressions are in N0-normalized units.  The derived constants
u_i = 1 + gbar_i, v_i = 1 + 2*gbar_i and phi = gbar2/gbar1 are carried in
an immutable ClosedFormContext shared by every evaluator.

Exponential-integral products exp(a)*E1(z) are evaluated as
exp(a - z) * (exp(z)*E1(z)); for every term appearing here a - z <= 0, so
the closed forms stay finite at arbitrarily high SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ClosedFormContext",
    "pdf_xi0",
    "cdf_xi0",
    "cdf_abs_xi0",
    "pdf_xiw",
    "cdf_xiw",
    "cdf_abs_xiw",
    "aber_wsc1",
    "aber_wsc2",
    "aber_asymptotic_wsc2",
    "exp_integral_e1",
    "exp_integral_e1_scaled",
    "optimize_beta",
    "diversity_order_estimate",
]

_EULER_GAMMA = 0.5772156649015328606


@dataclass(frozen=True)
class ClosedFormContext:
    """Average SNRs and the derived constants used throughout the analysis."""

    gbar0: float
    gbar1: float
    gbar2: float

    def __post_init__(self):
        for g in (self.gbar0, self.gbar1, self.gbar2):
            if not math.isfinite(g) or g < 0:
                raise ValueError(f"average SNRs must be finite and >= 0, got {g}")

    @property
    def u0(self) -> float:
        return 1.0 + self.gbar0

    @property
    def u1(self) -> float:
        return 1.0 + self.gbar1

    @property
    def u2(self) -> float:
        return 1.0 + self.gbar2

    @property
    def v0(self) -> float:
        return 1.0 + 2.0 * self.gbar0

    @property
    def v1(self) -> float:
        return 1.0 + 2.0 * self.gbar1

    @property
    def v2(self) -> float:
        return 1.0 + 2.0 * self.gbar2

    @property
    def phi(self) -> float:
        if self.gbar1 <= 0:
            raise ValueError("phi requires gbar1 > 0")
        return self.gbar2 / self.gbar1

    @classmethod
    def from_db(cls, p0_over_n0_db: float, sigma_sq=(1.0, 1.0, 1.0)) -> "ClosedFormContext":
        p0 = 10.0 ** (p0_over_n0_db / 10.0)
        return cls(p0 * sigma_sq[0], p0 * sigma_sq[1], p0 * sigma_sq[2])


# ---------------------------------------------------------------------------
# Decision-variable distributions
# ---------------------------------------------------------------------------

def pdf_xi0(x, ctx: ClosedFormContext):
    """Density of the direct-link decision variable averaged over fading."""
    x = np.asarray(x, dtype=float)
    u0, v0 = ctx.u0, ctx.v0
    out = np.where(x <= 0, np.exp(2.0 * np.minimum(x, 0.0)), np.exp(-2.0 * np.maximum(x, 0.0) / v0)) / u0
    return out if out.ndim else float(out)


def cdf_xi0(x, ctx: ClosedFormContext):
    x = np.asarray(x, dtype=float)
    u0, v0 = ctx.u0, ctx.v0
    neg = np.exp(2.0 * np.minimum(x, 0.0)) / (2.0 * u0)
    pos = 1.0 - v0 * np.exp(-2.0 * np.maximum(x, 0.0) / v0) / (2.0 * u0)
    out = np.where(x <= 0, neg, pos)
    return out if out.ndim else float(out)


def cdf_abs_xi0(x, ctx: ClosedFormContext):
    """CDF of |xi0|; defined for x >= 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("cdf_abs_xi0 requires x >= 0")
    u0, v0 = ctx.u0, ctx.v0
    out = 1.0 - np.exp(-2.0 * x) / (2.0 * u0) - v0 * np.exp(-2.0 * x / v0) / (2.0 * u0)
    return out if out.ndim else float(out)


def _psi(gamma1: float) -> float:
    return 2.0 - math.exp(-gamma1)


def pdf_xiw(x, beta: float, gamma1: float, ctx: ClosedFormContext):
    """Density of the weighted relay decision variable, a two-sided Gaussian
    mixture reflecting the instantaneous relay error probability exp(-gamma1)/2."""
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    x = np.asarray(x, dtype=float)
    u2, v2 = ctx.u2, ctx.v2
    psi = _psi(gamma1)
    xn = np.minimum(x, 0.0)
    xp = np.maximum(x, 0.0)
    neg = np.exp(2.0 * xn / (v2 * beta) - gamma1) + psi * np.exp(2.0 * xn / beta)
    pos = np.exp(-2.0 * xp / beta - gamma1) + psi * np.exp(-2.0 * xp / (v2 * beta))
    out = np.where(x <= 0, neg, pos) / (2.0 * u2 * beta)
    return out if out.ndim else float(out)


def cdf_xiw(x, beta: float, gamma1: float, ctx: ClosedFormContext):
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    x = np.asarray(x, dtype=float)
    u2, v2 = ctx.u2, ctx.v2
    psi = _psi(gamma1)
    xn = np.minimum(x, 0.0)
    xp = np.maximum(x, 0.0)
    neg = (psi * np.exp(2.0 * xn / beta) + v2 * np.exp(2.0 * xn / (v2 * beta) - gamma1)) / (4.0 * u2)
    pos = 1.0 - (np.exp(-2.0 * xp / beta - gamma1) + v2 * psi * np.exp(-2.0 * xp / (v2 * beta))) / (4.0 * u2)
    out = np.where(x <= 0, neg, pos)
    return out if out.ndim else float(out)


def cdf_abs_xiw(x, beta: float, ctx: ClosedFormContext):
    """CDF of |xi_w|; independent of the instantaneous relay SNR."""
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("cdf_abs_xiw requires x >= 0")
    u2, v2 = ctx.u2, ctx.v2
    out = 1.0 - (np.exp(-2.0 * x / beta) + v2 * np.exp(-2.0 * x / (v2 * beta))) / (2.0 * u2)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Exponential integral
# ---------------------------------------------------------------------------

def _e1_continued_fraction(x: float) -> float:
    """Modified Lentz evaluation of exp(x)*E1(x), valid for x > 1."""
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 200):
        a = -i * i
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    return h


def _e1_series(x: float) -> float:
    """Power series for E1(x), x in (0, 1]."""
    total = -_EULER_GAMMA - math.log(x)
    term = 1.0
    for n in range(1, 60):
        term *= -x / n
        contrib = -term / n
        total += contrib
        if abs(contrib) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def exp_integral_e1(x: float) -> float:
    """E1(x) = integral_x^inf exp(-t)/t dt for x > 0."""
    if not x > 0:
        raise ValueError(f"exp_integral_e1 requires x > 0, got {x}")
    if x <= 1.0:
        return _e1_series(x)
    return math.exp(-x) * _e1_continued_fraction(x)


def exp_integral_e1_scaled(x: float) -> float:
    """exp(x) * E1(x), finite for arbitrarily large x."""
    if not x > 0:
        raise ValueError(f"exp_integral_e1_scaled requires x > 0, got {x}")
    if x <= 1.0:
        return math.exp(x) * _e1_series(x)
    return _e1_continued_fraction(x)


def _exp_e1(a_minus_z: float, z: float) -> float:
    """exp(a) * E1(z) evaluated via exp(a - z) * (exp(z) E1(z)); needs a <= z."""
    return math.exp(a_minus_z) * exp_integral_e1_scaled(z)


# ---------------------------------------------------------------------------
# WSC1 closed form
# ---------------------------------------------------------------------------

def _wsc1_pe1(beta: float, ctx: ClosedFormContext) -> float:
    u0, u2, v2 = ctx.u0, ctx.u2, ctx.v2
    return (u2 + v2 * beta) / (2.0 * u0 * u2 * (1.0 + beta) * (1.0 + v2 * beta))


def _i1(beta: float, ctx: ClosedFormContext) -> float:
    u0, u2, v0, v2 = ctx.u0, ctx.u2, ctx.v0, ctx.v2
    return -(1.0 - u2) * (
        2.0 * u2 * v0 ** 2
        - u0 * (1.0 - 2.0 * u2 - 4.0 * u2 ** 2) * v0 * beta
        + 4.0 * u0 ** 2 * u2 * v2 * beta ** 2
        + u0 * v2 ** 2 * beta ** 3
    )


def _i2(beta: float, ctx: ClosedFormContext) -> float:
    u0, u1, u2, v0, v2 = ctx.u0, ctx.u1, ctx.u2, ctx.v0, ctx.v2
    return u1 * (
        v2 * beta ** 2 * (1.0 - 2.0 * u2 - u0 * (2.0 - 2.0 * u0 - 4.0 * u2 - v2 * beta))
        + v0 ** 2
        - u0 * (1.0 - 4.0 * u2) * v0 * beta
    )


def _wsc1_pe2(beta: float, ctx: ClosedFormContext) -> float:
    u0, u1, u2, v0, v2 = ctx.u0, ctx.u1, ctx.u2, ctx.v0, ctx.v2
    denom = 2.0 * u0 * u1 * u2 * (1.0 + beta) * (v0 + beta) * (1.0 + v2 * beta) * (v0 + v2 * beta)
    return beta * (_i1(beta, ctx) + _i2(beta, ctx)) / denom


def aber_wsc1(beta: float, ctx: ClosedFormContext) -> float:
    """Closed-form average BER of WSC with a fixed weight factor.

    beta = 1 gives the conventional SC scheme.
    """
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError(f"beta must be finite and > 0, got {beta}")
    return _wsc1_pe1(beta, ctx) + _wsc1_pe2(beta, ctx)


# ---------------------------------------------------------------------------
# WSC2 closed form
# ---------------------------------------------------------------------------

def _wsc2_l1(ctx: ClosedFormContext) -> float:
    u0, u2, v2, phi = ctx.u0, ctx.u2, ctx.v2, ctx.phi
    # Every exp(a)*E1(z) below has a - z <= 0.
    bracket = (
        _exp_e1(0.0, phi)
        - _exp_e1(-phi, 2.0 * phi)
        + _exp_e1(0.0, phi / v2)
        - _exp_e1(-phi, 2.0 * u2 * phi / v2)
    )
    return phi / (4.0 * u0 * u2) * bracket


def _wsc2_l2(ctx: ClosedFormContext) -> float:
    u0, u2, phi = ctx.u0, ctx.u2, ctx.phi
    return (3.0 * u2 - 1.0) / (8.0 * u0 * u2 ** 2) * math.exp(-phi)


def _wsc2_xi(x1: float, x2: float, x3: float, x4: float, x5: float, ctx: ClosedFormContext) -> float:
    """The Xi term of the WSC2 analysis with the exp(-(1+u1)phi) prefactor of
    the enclosing expression already folded in; returns exp(-(1+u1)phi) * Xi / u1."""
    u0, u1, v0, phi = ctx.u0, ctx.u1, ctx.v0, ctx.phi
    g2 = ctx.gbar2
    a = (x2 - 1.0 - u1) * phi            # net prefactor exponent
    a2 = a + 2.0 * ctx.gbar0 * phi * x4  # prefactor of the v0^2 group
    bracket = (
        _exp_e1(a - 2.0 * phi * x3, 2.0 * phi * x3)
        - _exp_e1(a - phi * x4, phi * x4)
        - v0 ** 2 * (
            _exp_e1(a2 - v0 * phi * x4, v0 * phi * x4)
            - _exp_e1(a2 - 2.0 * u0 * phi * x5, 2.0 * u0 * phi * x5)
        )
    )
    return g2 * x1 * bracket


def _wsc2_k1(ctx: ClosedFormContext) -> float:
    u0, u1, u2, v2, phi = ctx.u0, ctx.u1, ctx.u2, ctx.v2, ctx.phi
    g1, g2 = ctx.gbar1, ctx.gbar2

    # Elementary part, with exponents combined so every one is <= 0:
    # exp(gbar2 - (1+u1)phi + phi) = exp(-phi), exp(u1 phi - u1 phi) = 1.
    elementary = (
        1.0 + g1 + g2
        - g2 * math.exp(-u1 * phi)
        - u1 * math.exp(-phi)
    ) / (2.0 * u1 * u2)

    xi_sum = (
        _wsc2_xi(1.0, (2.0 * (1.0 + u1) * u2 - 1.0) / v2, u1 * u2 / v2, u1 / v2,
                 u1 * (u0 + u2 - 1.0) / (u0 * v2), ctx)
        + _wsc2_xi(2.0, 2.0 + u1, 1.0, 1.0, 1.0, ctx)
        + _wsc2_xi(-1.0, 1.0 + 2.0 * u1, u1, u1, u1, ctx)
    )
    return elementary + xi_sum / (8.0 * u0 * g1 * u2)


def _wsc2_k2(ctx: ClosedFormContext) -> float:
    u0, u1, u2, phi = ctx.u0, ctx.u1, ctx.u2, ctx.phi
    w = 1.0 - u0 - u2
    # The e and e**u2 factors of the printed J1/J2 are folded into the
    # exp(-1 - u1*phi) prefactor: exponents -u1*phi and u2-1-u1*phi = -phi.
    j1_core = (1.0 - u2) * (u2 + u0 * (1.0 - 7.0 * u2 - u0 * (1.0 - 4.0 * u2 - 8.0 * u2 ** 2)))
    j2_core = 2.0 * (3.0 * u0 - 1.0) * u1 * w * u2
    num = j1_core * math.exp(-u1 * phi) + j2_core * math.exp(-phi)
    return num / (16.0 * u0 ** 2 * u1 * w * u2 ** 2)


def aber_wsc2(ctx: ClosedFormContext) -> float:
    """Closed-form average BER of WSC with the adaptive weight min(1, gamma1/gbar2)."""
    if ctx.gbar1 <= 0:
        raise ValueError("aber_wsc2 requires gbar1 > 0 (phi undefined otherwise)")
    if ctx.gbar2 <= 0:
        raise ValueError("aber_wsc2 requires gbar2 > 0")
    return _wsc2_l1(ctx) + _wsc2_l2(ctx) + _wsc2_k1(ctx) + _wsc2_k2(ctx)


# ---------------------------------------------------------------------------
# Asymptotics, diversity, weight optimization
# ---------------------------------------------------------------------------

def aber_asymptotic_wsc2(p0: float) -> float:
    """High-SNR approximation of the WSC2 ABER for the symmetric unit-variance
    channel, evaluated with the published fitted coefficients."""
    if not p0 > 0:
        raise ValueError(f"p0 must be > 0, got {p0}")
    lp = math.log(p0)
    num = (
        0.03
        - 0.09 * p0
        + p0 ** 2 * (-0.16 - 0.03 * lp)
        + p0 ** 3 * (1.75 + 0.06 * lp)
        + p0 ** 4 * (4.53 + 0.47 * lp)
        + p0 ** 5 * (3.84 + 0.63 * lp)
        + p0 ** 6 * (1.11 + 0.25 * lp)
    )
    den = p0 ** 4 + p0 ** 5 + p0 ** 6 + p0 ** 7 + p0 ** 8
    return num / den


def optimize_beta(ctx: ClosedFormContext, lo: float = 1e-4, hi: float = 4.0) -> tuple[float, float]:
    """Minimize the WSC1 ABER over the weight factor.

    A 200-point log-grid scan brackets the minimum (guarding against
    non-unimodality), then golden-section search refines it to 1e-6.
    """
    grid = np.logspace(np.log10(lo), np.log10(hi), 200)
    vals = np.array([aber_wsc1(b, ctx) for b in grid])
    k = int(np.argmin(vals))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, len(grid) - 1)]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = aber_wsc1(c, ctx)
    fd = aber_wsc1(d, ctx)
    while b - a > 1e-6:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = aber_wsc1(c, ctx)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = aber_wsc1(d, ctx)
    beta_opt = 0.5 * (a + b)
    return beta_opt, aber_wsc1(beta_opt, ctx)


def diversity_order_estimate(points) -> float:
    """Least-squares slope of -log10(BER) against P0/N0(dB)/10."""
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    x = np.array([p[0] for p in pts], dtype=float) / 10.0
    y = np.array([p[1] for p in pts], dtype=float)
    if np.any(y <= 0):
        raise ValueError("BER values must be > 0")
    if np.any(np.diff(x) <= 0):
        raise ValueError("p0_db values must be strictly increasing")
    slope = np.polyfit(x, -np.log10(y), 1)[0]
    return float(slope)
