"""Closed-form switching rates, activation times and stationary laws.

Notation used throughout: for relay ``i`` the virtual end-to-end envelope is
``a_i = min(a_SRi, a_RiD)``, which is Rayleigh with average square
``Omega_i = Omega_SR * Omega_RD / (Omega_SR + Omega_RD)``. Thresholds ``T``
are SNR values; only ``x = T / gamma`` enters any formula, and the matching
envelope level is ``sqrt(x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, UnsupportedTopologyError
from .fading import LinkParams

SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT_PI = math.sqrt(math.pi)

#: Largest relay count for which the alternating binomial sum is evaluated.
MAX_IID_RELAYS = 30


@dataclass(frozen=True)
class RelayTopology:
    """Per-relay (S->Ri, Ri->D) hops plus the common unfaded SNR gamma."""

    relays: tuple
    gamma: float = 1.0

    def __post_init__(self):
        relays = tuple((sr, rd) for sr, rd in self.relays)
        object.__setattr__(self, "relays", relays)
        if len(relays) < 2:
            raise ConfigurationError(f"need at least two relays, got {len(relays)}")
        for k, pair in enumerate(relays, start=1):
            for hop in pair:
                if not isinstance(hop, LinkParams):
                    raise ConfigurationError(f"relay {k}: hops must be LinkParams, got {type(hop).__name__}")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ConfigurationError(f"gamma must be positive, got {self.gamma!r}")

    @classmethod
    def iid(cls, num_relays: int, omega: float = 1.0, doppler_hz: float = 10.0, gamma: float = 1.0):
        hop = LinkParams(omega, doppler_hz)
        return cls(tuple((hop, hop) for _ in range(num_relays)), gamma)

    @classmethod
    def symmetric_pair(cls, sr: LinkParams, rd: LinkParams, gamma: float = 1.0):
        """Two statistically identical relays (the figure setups)."""
        return cls(((sr, rd), (sr, rd)), gamma)

    @property
    def num_relays(self) -> int:
        return len(self.relays)

    @property
    def hops(self) -> list:
        """Hops in simulation order: sr1, rd1, sr2, rd2, ..."""
        return [hop for pair in self.relays for hop in pair]

    @property
    def max_doppler_hz(self) -> float:
        return max(h.doppler_hz for h in self.hops)

    def min_equivalent(self, i: int) -> "MinEquivalentParams":
        sr, rd = self.relays[i - 1]
        return omega_min(sr, rd)

    def is_iid(self) -> bool:
        first = self.relays[0][0]
        return all(h == first for h in self.hops)


@dataclass(frozen=True)
class MinEquivalentParams:
    omega_i: float

    def __post_init__(self):
        if not (math.isfinite(self.omega_i) and self.omega_i > 0):
            raise DomainError(f"omega_i must be positive, got {self.omega_i!r}")


@dataclass(frozen=True)
class SwitchThreshold:
    """DSSC-B SNR threshold T (linear)."""

    t: float

    def __post_init__(self):
        if not (self.t >= 0 and math.isfinite(self.t)):
            raise DomainError(f"threshold must be a finite non-negative number, got {self.t!r}")

    def envelope(self, gamma: float) -> float:
        return math.sqrt(self.t / gamma)


@dataclass(frozen=True)
class DsscStationary:
    """Stationary law of the six-state DSSC-B chain.

    States 1-3 have relay 1 active (down-crossing, below threshold, above
    threshold); states 4-6 mirror them for relay 2.
    """

    pi: tuple
    rho1: float
    rho2: float
    q1: float
    q2: float


def _threshold_value(threshold) -> float:
    t = threshold.t if isinstance(threshold, SwitchThreshold) else float(threshold)
    if not t >= 0 or not math.isfinite(t):
        raise DomainError(f"threshold must be a finite non-negative number, got {t!r}")
    return t


def _require_pair(topology: RelayTopology) -> None:
    if topology.num_relays != 2:
        raise UnsupportedTopologyError(f"formula is defined for two relays, topology has {topology.num_relays}")


# --- min-equivalent envelope --------------------------------------------------


def omega_min(sr: LinkParams, rd: LinkParams) -> MinEquivalentParams:
    return MinEquivalentParams(sr.omega * rd.omega / (sr.omega + rd.omega))


def _nonnegative(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("envelope argument must be non-negative")
    return x


def min_equiv_cdf(x, sr: LinkParams, rd: LinkParams):
    x = _nonnegative(x)
    rate = (sr.omega + rd.omega) / (sr.omega * rd.omega)
    return -np.expm1(-rate * x * x)


def min_equiv_pdf(x, sr: LinkParams, rd: LinkParams):
    x = _nonnegative(x)
    rate = (sr.omega + rd.omega) / (sr.omega * rd.omega)
    return 2.0 * x * rate * np.exp(-rate * x * x)


def min_equiv_derivative_pdf(x, sr: LinkParams, rd: LinkParams):
    """Density of d/dt min(a_SR, a_RD): Gaussian mixture weighted by which hop is weaker."""
    x = np.asarray(x, dtype=float)
    var_sr = (math.pi * sr.doppler_hz) ** 2 * sr.omega
    var_rd = (math.pi * rd.doppler_hz) ** 2 * rd.omega
    p_sr_min = rd.omega / (sr.omega + rd.omega)
    p_rd_min = sr.omega / (sr.omega + rd.omega)
    return p_sr_min * np.exp(-x * x / (2 * var_sr)) / math.sqrt(2 * math.pi * var_sr) + p_rd_min * np.exp(
        -x * x / (2 * var_rd)
    ) / math.sqrt(2 * math.pi * var_rd)


# --- opportunistic relaying ---------------------------------------------------


def f_z_at_zero(p1: MinEquivalentParams, p2: MinEquivalentParams) -> float:
    """Density of a_1 - a_2 at the origin."""
    o1, o2 = p1.omega_i, p2.omega_i
    return SQRT_PI * math.sqrt(o1 * o2) / (o1 + o2) ** 1.5


def _hop_terms(topology: RelayTopology):
    (sr1, rd1), (sr2, rd2) = topology.relays
    return (
        sr1.omega,
        rd1.omega,
        sr2.omega,
        rd2.omega,
        sr1.omega * sr1.doppler_hz**2,
        rd1.omega * rd1.doppler_hz**2,
        sr2.omega * sr2.doppler_hz**2,
        rd2.omega * rd2.doppler_hz**2,
    )


def zdot_pdf(x, topology: RelayTopology):
    """Density of the time derivative of a_1 - a_2 (two relays)."""
    _require_pair(topology)
    w_sr1, w_rd1, w_sr2, w_rd2, g_sr1, g_rd1, g_sr2, g_rd2 = _hop_terms(topology)
    x = np.asarray(x, dtype=float)
    pairs = (
        (w_sr1 * w_sr2, g_rd1 + g_rd2),
        (w_rd1 * w_sr2, g_sr1 + g_rd2),
        (w_rd2 * w_sr1, g_sr2 + g_rd1),
        (w_rd1 * w_rd2, g_sr1 + g_sr2),
    )
    acc = np.zeros_like(x)
    for weight, g in pairs:
        acc = acc + weight * np.exp(-x * x / (2 * math.pi**2 * g)) / math.sqrt(g)
    return acc / (math.sqrt(2) * math.pi**1.5 * (w_sr1 + w_rd1) * (w_sr2 + w_rd2))


def velocity_integral(topology: RelayTopology) -> float:
    """Closed form of the positive half-moment of the Z-derivative density."""
    _require_pair(topology)
    w_sr1, w_rd1, w_sr2, w_rd2, g_sr1, g_rd1, g_sr2, g_rd2 = _hop_terms(topology)
    bracket = (
        w_sr1 * w_sr2 * math.sqrt(g_rd1 + g_rd2)
        + w_rd1 * w_sr2 * math.sqrt(g_sr1 + g_rd2)
        + w_rd2 * w_sr1 * math.sqrt(g_sr2 + g_rd1)
        + w_rd1 * w_rd2 * math.sqrt(g_sr1 + g_sr2)
    )
    return SQRT_PI * bracket / (math.sqrt(2) * (w_sr1 + w_rd1) * (w_sr2 + w_rd2))


def or_switch_rate_inid_2(topology: RelayTopology, method: str = "closed") -> float:
    """OR switching rate for two relays with independent, non-identical hops.

    ``method="closed"`` evaluates the single expanded expression;
    ``method="composed"`` multiplies ``2 * f_Z(0)`` by the velocity integral.
    """
    _require_pair(topology)
    if method == "composed":
        return 2.0 * f_z_at_zero(topology.min_equivalent(1), topology.min_equivalent(2)) * velocity_integral(topology)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    w_sr1, w_rd1, w_sr2, w_rd2, g_sr1, g_rd1, g_sr2, g_rd2 = _hop_terms(topology)
    o1 = topology.min_equivalent(1).omega_i
    o2 = topology.min_equivalent(2).omega_i
    den = (o1 + o2) ** 1.5 * (w_sr1 + w_rd1) * (w_sr2 + w_rd2)
    pref = math.pi * math.sqrt(2 * o1 * o2)
    first = w_sr1 * w_sr2 * math.sqrt(g_rd1 + g_rd2) + w_rd1 * w_sr2 * math.sqrt(g_sr1 + g_rd2)
    second = w_rd2 * w_sr1 * math.sqrt(g_sr2 + g_rd1) + w_rd1 * w_rd2 * math.sqrt(g_sr1 + g_sr2)
    return pref * first / den + pref * second / den


def or_switch_rate_iid_2(f_sr1: float, f_r1d: float, f_sr2: float, f_r2d: float) -> float:
    """Two-relay OR rate with i.i.d. hop gains; independent of Omega."""
    for f in (f_sr1, f_r1d, f_sr2, f_r2d):
        if not f > 0:
            raise DomainError(f"Doppler frequencies must be positive, got {f!r}")
    total = (
        math.hypot(f_sr1, f_sr2) + math.hypot(f_sr1, f_r2d) + math.hypot(f_r1d, f_sr2) + math.hypot(f_r1d, f_r2d)
    )
    return math.pi * total / (4.0 * math.sqrt(2.0))


def _check_relay_count(l: int) -> int:
    if int(l) != l or l < 2:
        raise DomainError(f"relay count must be an integer >= 2, got {l!r}")
    if l > MAX_IID_RELAYS:
        raise DomainError(f"alternating binomial sum is ill-conditioned beyond L={MAX_IID_RELAYS}")
    return int(l)


def _binomial_sum(l: int) -> float:
    return math.fsum((-1) ** k * math.comb(l - 2, k) * (k + 2) ** -1.5 for k in range(l - 1))


def or_switch_rate_iid_L(l: int, f: float) -> float:
    """OR rate for L i.i.d. relays, all hops at Doppler ``f``."""
    l = _check_relay_count(l)
    if not f > 0:
        raise DomainError(f"Doppler frequency must be positive, got {f!r}")
    return math.sqrt(2.0) * l * (l - 1) * math.pi * f * _binomial_sum(l)


def f_z_at_zero_iid_L(l: int, omega: float) -> float:
    """Density at zero of a_i minus the best of the other L-1 virtual envelopes.

    ``omega`` is the average square of one virtual (min-equivalent) envelope.
    """
    l = _check_relay_count(l)
    total = math.fsum((-1) ** k * math.comb(l - 2, k) * (omega / (k + 2)) ** 1.5 for k in range(l - 1))
    return (l - 1) * SQRT_PI * total / omega**2


def zdot_pdf_iid_L(x, f: float, omega: float):
    """Z-derivative density for L i.i.d. relays (Gaussian, std 2 pi F sqrt(omega))."""
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x / (8 * math.pi**2 * f * f * omega)) / ((2 * math.pi) ** 1.5 * f * math.sqrt(omega))


def steady_state_or(p1: MinEquivalentParams, p2: MinEquivalentParams) -> tuple:
    total = p1.omega_i + p2.omega_i
    return p1.omega_i / total, p2.omega_i / total


def or_activation_time_inid_2(topology: RelayTopology) -> tuple:
    rate = or_switch_rate_inid_2(topology)
    rho = steady_state_or(topology.min_equivalent(1), topology.min_equivalent(2))
    return 2.0 * rho[0] / rate, 2.0 * rho[1] / rate


def or_activation_time_iid_L(l: int, f: float) -> float:
    return 1.0 / or_switch_rate_iid_L(l, f)


def or_switch_rate(topology: RelayTopology) -> float:
    """Dispatch to the OR formula that covers ``topology``."""
    if topology.num_relays == 2:
        return or_switch_rate_inid_2(topology)
    if topology.is_iid():
        return or_switch_rate_iid_L(topology.num_relays, topology.relays[0][0].doppler_hz)
    raise UnsupportedTopologyError("closed-form OR rate for L > 2 requires i.i.d. hops with a common Doppler")


def or_occupancy(topology: RelayTopology) -> tuple:
    if topology.num_relays == 2:
        return steady_state_or(topology.min_equivalent(1), topology.min_equivalent(2))
    if topology.is_iid():
        return tuple([1.0 / topology.num_relays] * topology.num_relays)
    raise UnsupportedTopologyError("closed-form OR occupancy for L > 2 requires i.i.d. hops")


# --- DSSC-B -------------------------------------------------------------------


def _crossing_prefactor(sr: LinkParams, rd: LinkParams, x: float) -> float:
    return SQRT_2PI * (math.sqrt(x / sr.omega) * sr.doppler_hz + math.sqrt(x / rd.omega) * rd.doppler_hz)


def dssc_crossing_rate(i: int, topology: RelayTopology, threshold) -> float:
    """Down-crossing rate (Hz) of relay ``i``'s min envelope through sqrt(T/gamma)."""
    t = _threshold_value(threshold)
    sr, rd = topology.relays[i - 1]
    x = t / topology.gamma
    rate = (sr.omega + rd.omega) / (sr.omega * rd.omega)
    return _crossing_prefactor(sr, rd, x) * math.exp(-rate * x)


def dssc_stationary(topology: RelayTopology, threshold) -> DsscStationary:
    """Stationary probabilities of the six-state DSSC-B chain.

    The chain assumes independent per-period samples, with
    ``q_i = P(a_i^2 < T / gamma) = 1 - exp(-T / (gamma Omega_i))``. At ``T = 0``
    no switch can ever happen; the returned law is the ``T -> 0+`` limit,
    ``rho_i = Omega_i / (Omega_1 + Omega_2)``.
    """
    _require_pair(topology)
    t = _threshold_value(threshold)
    o1 = topology.min_equivalent(1).omega_i
    o2 = topology.min_equivalent(2).omega_i
    x = t / topology.gamma
    if x == 0.0:
        r1 = o1 / (o1 + o2)
        return DsscStationary((0.0, 0.0, r1, 0.0, 0.0, 1.0 - r1), r1, 1.0 - r1, 0.0, 0.0)
    q1 = -math.expm1(-x / o1)
    q2 = -math.expm1(-x / o2)
    u1 = math.exp(-x / o1)
    u2 = math.exp(-x / o2)
    # a = q1 (1 - q1), b = q2 (1 - q2); scaled by exp(-m) to survive underflow
    la = -x / o1 + math.log(q1)
    lb = -x / o2 + math.log(q2)
    m = max(la, lb)
    a_s = math.exp(la - m)
    b_s = math.exp(lb - m)
    a = math.exp(la)
    b = math.exp(lb)
    den = a_s + b_s - 2.0 * a_s * b
    pi = (
        a_s * b / den,
        q1**3 * b_s / den,
        (1.0 - a) * u1 * b_s / den,
        a_s * b / den,
        q2**3 * a_s / den,
        (1.0 - b) * u2 * a_s / den,
    )
    rho1 = (1.0 - a) * b_s / den
    rho2 = (1.0 - b) * a_s / den
    return DsscStationary(pi, rho1, rho2, q1, q2)


def dssc_switch_rate(topology: RelayTopology, threshold, method: str = "expanded") -> float:
    """Two-relay DSSC-B switching rate (Hz).

    ``method="expanded"`` evaluates the single closed expression, multiplied
    through by exp(-x/Omega_1 - x/Omega_2) so no term can overflow;
    ``method="composed"`` sums ``rho_i * N_i`` from the stationary law and the
    per-relay crossing rates.
    """
    _require_pair(topology)
    t = _threshold_value(threshold)
    if method == "composed":
        st = dssc_stationary(topology, t)
        return st.rho1 * dssc_crossing_rate(1, topology, t) + st.rho2 * dssc_crossing_rate(2, topology, t)
    if method != "expanded":
        raise ValueError(f"unknown method {method!r}")
    x = t / topology.gamma
    if x == 0.0:
        return 0.0
    (sr1, rd1), (sr2, rd2) = topology.relays
    o1 = topology.min_equivalent(1).omega_i
    o2 = topology.min_equivalent(2).omega_i
    s1 = _crossing_prefactor(sr1, rd1, x)
    s2 = _crossing_prefactor(sr2, rd2, x)
    u1 = math.exp(-x / o1)
    u2 = math.exp(-x / o2)
    v1 = -math.expm1(-x / o1)
    v2 = -math.expm1(-x / o2)
    num = u1 * u1 * v2 * s1 + u2 * u2 * v1 * s2 + v1 * v2 * (s1 + s2)
    # v1/u2 + v2/u1 - 2 v1 v2, with the reciprocals allowed to overflow to inf
    with np.errstate(over="ignore"):
        den = v1 * np.exp(x / o2) + v2 * np.exp(x / o1) - 2.0 * v1 * v2
    if not np.isfinite(den):
        return 0.0
    return float(num / den)


def dssc_activation_time(i: int, topology: RelayTopology, threshold) -> float:
    """Mean activation time (s) of relay ``i``; ``math.inf`` when no switch ever occurs."""
    rate = dssc_switch_rate(topology, threshold)
    if rate <= 0.0:
        return math.inf
    st = dssc_stationary(topology, threshold)
    rho = st.rho1 if i == 1 else st.rho2
    return 2.0 * rho / rate


def golden_section_max(func, lo: float, hi: float, xtol: float = 1e-9, max_iter: int = 500) -> float:
    """Maximiser of a unimodal ``func`` on ``[lo, hi]``; ``xtol`` is relative to the bracket midpoint."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = func(c), func(d)
    for _ in range(max_iter):
        if hi - lo <= xtol * abs(0.5 * (lo + hi)):
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = func(d)
    return 0.5 * (lo + hi)


def default_threshold_bounds(topology: RelayTopology) -> tuple:
    omegas = [topology.min_equivalent(i).omega_i for i in range(1, topology.num_relays + 1)]
    return topology.gamma * min(omegas) * 1e-4, topology.gamma * max(omegas) * 1e2


def worst_case_threshold(
    topology: RelayTopology,
    bounds: Sequence[float] | None = None,
    grid_points: int = 256,
    xtol: float = 1e-9,
) -> SwitchThreshold:
    """Threshold that maximises the DSSC-B switching rate.

    A log-spaced grid over ``bounds`` brackets the peak, then golden-section
    search refines it to relative argument tolerance ``xtol``.
    """
    _require_pair(topology)
    lo, hi = default_threshold_bounds(topology) if bounds is None else (float(bounds[0]), float(bounds[1]))
    if not (0 < lo < hi) or not math.isfinite(hi):
        raise DomainError(f"threshold bounds must satisfy 0 < lo < hi, got ({lo!r}, {hi!r})")
    grid = np.geomspace(lo, hi, grid_points)
    values = np.array([dssc_switch_rate(topology, t) for t in grid])
    k = int(np.argmax(values))
    left = grid[max(k - 1, 0)]
    right = grid[min(k + 1, grid_points - 1)]
    best = golden_section_max(lambda t: dssc_switch_rate(topology, t), left, right, xtol=xtol)
    return SwitchThreshold(float(best))
