"""Numerical oracles that check the closed forms by an independent route.

Nothing here imports the closed-form expressions being checked: densities
are rebuilt from their definitions and integrated with adaptive quadrature,
and the DSSC-B chain is iterated from its transition rule.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .fading import LinkParams

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
TAIL_SIGMAS = 12.0


def _quad(func, lo, hi, points=None):
    val, _ = integrate.quad(func, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=500, points=points)
    return val


def _rayleigh_pdf(x, omega):
    return 2.0 * x / omega * math.exp(-x * x / omega)


def _min_rayleigh_pdf(x, sr: LinkParams, rd: LinkParams):
    # f_SR(x) P(RD > x) + f_RD(x) P(SR > x)
    return _rayleigh_pdf(x, sr.omega) * math.exp(-x * x / rd.omega) + _rayleigh_pdf(x, rd.omega) * math.exp(
        -x * x / sr.omega
    )


def min_envelope_normalisation(sr: LinkParams, rd: LinkParams) -> float:
    """Integral of the min-envelope density over [0, 12 sqrt(Omega_i)]."""
    omega_i = sr.omega * rd.omega / (sr.omega + rd.omega)
    return _quad(lambda x: _min_rayleigh_pdf(x, sr, rd), 0.0, TAIL_SIGMAS * math.sqrt(omega_i))


def f_z_at_zero_quad(omega1: float, omega2: float) -> float:
    """Integral over [0, inf) of the product of two Rayleigh densities."""
    hi = TAIL_SIGMAS * math.sqrt(min(omega1, omega2))
    peak = math.sqrt(omega1 * omega2 / (omega1 + omega2))
    return _quad(lambda x: _rayleigh_pdf(x, omega1) * _rayleigh_pdf(x, omega2), 0.0, hi, points=[peak])


def _hop_derivative_components(sr: LinkParams, rd: LinkParams):
    """(weight, std) of the two Gaussians whose mixture is d/dt min(a_SR, a_RD)."""
    p_sr_min = _quad(lambda x: _rayleigh_pdf(x, sr.omega) * math.exp(-x * x / rd.omega), 0.0, math.inf)
    return (
        (p_sr_min, math.pi * sr.doppler_hz * math.sqrt(sr.omega)),
        (1.0 - p_sr_min, math.pi * rd.doppler_hz * math.sqrt(rd.omega)),
    )


def _gauss(x, std):
    return math.exp(-0.5 * (x / std) ** 2) / (math.sqrt(2.0 * math.pi) * std)


def zdot_pdf_convolution(x: float, relay1, relay2) -> float:
    """Density of d/dt (a_1 - a_2) at ``x`` by numerical convolution."""
    c1 = _hop_derivative_components(*relay1)
    c2 = _hop_derivative_components(*relay2)
    total = 0.0
    # integrate each component pair over the window where its product lives,
    # so narrow components are not lost inside a wide integration range
    for w1, s1 in c1:
        for w2, s2 in c2:
            var = s1 * s1 + s2 * s2
            centre = -x * s2 * s2 / var
            half = TAIL_SIGMAS * s1 * s2 / math.sqrt(var)
            total += w1 * w2 * _quad(lambda y: _gauss(y + x, s1) * _gauss(y, s2), centre - half, centre + half)
    return total


def velocity_integral_quad(zdot_pdf, span: float, scales=()) -> float:
    """Integral of ``x * zdot_pdf(x)`` over [0, span].

    ``scales`` (standard deviations of mixture components, if known) add
    breakpoints so quadrature resolves components much narrower than ``span``.
    """
    points = sorted({k * s for s in scales for k in (1.0, 3.0, 6.0) if 0.0 < k * s < span}) or None
    return _quad(lambda x: x * float(zdot_pdf(x)), 0.0, span, points=points)


def pdf_total_mass(pdf, lo: float, hi: float) -> float:
    return _quad(lambda x: float(pdf(x)), lo, hi, points=[0.0] if lo < 0.0 < hi else None)


def f_z_at_zero_iid_L_quad(l: int, omega: float) -> float:
    """(L-1) times the integral of f_a^2 F_a^(L-2) for Rayleigh(omega)."""

    def integrand(x):
        f = _rayleigh_pdf(x, omega)
        return f * f * (-math.expm1(-x * x / omega)) ** (l - 2)

    return (l - 1) * _quad(integrand, 0.0, TAIL_SIGMAS * math.sqrt(omega))


# --- DSSC-B Markov chain ------------------------------------------------------


def dssc_transition_matrix(q1: float, q2: float, u1: float | None = None, u2: float | None = None) -> np.ndarray:
    """Row-stochastic 6x6 transition matrix of DSSC-B with i.i.d. per-period samples.

    ``q_i`` is the probability that relay ``i``'s sample falls below the
    threshold; ``u_i`` is its complement, worth passing when ``q_i`` is so
    close to 1 that ``1 - q_i`` loses digits. State order: relay 1 (down-crossing, below, above), then the
    same for relay 2. A down-crossing hands over to the other relay, whose
    previous-period sample is still available to the rule.
    """
    u1 = 1.0 - q1 if u1 is None else u1
    u2 = 1.0 - q2 if u2 is None else u2
    p = np.zeros((6, 6))
    for base, other, q, u, qo, uo in ((0, 3, q1, u1, q2, u2), (3, 0, q2, u2, q1, u1)):
        down, below, above = base, base + 1, base + 2
        # down-crossing: switch; the other relay's (previous, current) pair decides its state
        p[down, other] = uo * qo
        p[down, other + 1] = qo * qo
        p[down, other + 2] = uo
        # below without a preceding above sample: no switch possible
        p[below, below] = q
        p[below, above] = u
        # above: next sample below is a down-crossing
        p[above, down] = q
        p[above, above] = u
    return p


def stationary_by_power_iteration(p: np.ndarray, tol: float = 1e-14, max_squarings: int = 64) -> np.ndarray:
    """Stationary row vector of ``p`` by repeated squaring of the lazy chain.

    Rows are renormalised after every squaring; otherwise rounding drift in
    the row sums compounds geometrically.
    """
    m = 0.5 * (p + np.eye(p.shape[0]))
    for _ in range(max_squarings):
        nxt = m @ m
        nxt /= nxt.sum(axis=1, keepdims=True)
        if np.max(np.abs(nxt - m)) < tol:
            m = nxt
            break
        m = nxt
    pi = m.mean(axis=0)
    return pi / pi.sum()
