import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relayswitch import closedform as cf
from relayswitch import oracles
from relayswitch.closedform import RelayTopology, SwitchThreshold
from relayswitch.errors import ConfigurationError, DomainError, UnsupportedTopologyError
from relayswitch.fading import LinkParams

omegas = st.floats(0.01, 100.0)
dopplers = st.floats(0.5, 200.0)
hops = st.builds(LinkParams, omegas, dopplers)
pairs = st.builds(lambda a, b, c, d, g: RelayTopology(((a, b), (c, d)), g), hops, hops, hops, hops, st.floats(0.1, 10.0))


def iid(f=10.0, omega=1.0, gamma=1.0):
    return RelayTopology.iid(2, omega, f, gamma)


def test_topology_invariants():
    with pytest.raises(ConfigurationError):
        RelayTopology(((LinkParams(1, 1), LinkParams(1, 1)),))
    with pytest.raises(ConfigurationError):
        RelayTopology.iid(2, gamma=0.0)
    top = iid()
    assert top.num_relays == 2 and top.is_iid() and len(top.hops) == 4


def test_omega_min_examples():
    assert cf.omega_min(LinkParams(2, 1), LinkParams(2, 1)).omega_i == pytest.approx(1.0)
    assert cf.omega_min(LinkParams(1, 1), LinkParams(1e12, 1)).omega_i == pytest.approx(1.0)
    assert cf.omega_min(LinkParams(1, 1), LinkParams(3, 1)).omega_i == pytest.approx(0.75)


@given(hops, hops)
def test_omega_min_below_both(sr, rd):
    w = cf.omega_min(sr, rd).omega_i
    assert 0 < w < min(sr.omega, rd.omega)


def test_min_equiv_cdf_pdf():
    sr, rd = LinkParams(2.0, 1.0), LinkParams(2.0, 1.0)
    assert cf.min_equiv_cdf(0.0, sr, rd) == 0.0
    assert cf.min_equiv_cdf(1.0, sr, rd) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert cf.min_equiv_cdf(1.0, sr, rd) == pytest.approx(0.63212, abs=1e-5)
    with pytest.raises(DomainError):
        cf.min_equiv_cdf(-1.0, sr, rd)
    with pytest.raises(DomainError):
        cf.min_equiv_pdf(-0.1, sr, rd)


@settings(max_examples=20, deadline=None)
@given(hops, hops)
def test_min_equiv_pdf_normalised(sr, rd):
    from scipy import integrate

    w = cf.omega_min(sr, rd).omega_i
    total, _ = integrate.quad(lambda x: cf.min_equiv_pdf(x, sr, rd), 0, 12 * math.sqrt(w), epsabs=1e-13)
    assert total == pytest.approx(1.0, abs=1e-9)
    # the oracle rebuilds the density from the two Rayleigh hops
    assert oracles.min_envelope_normalisation(sr, rd) == pytest.approx(1.0, abs=1e-9)


def test_f_z_at_zero_examples():
    one = cf.MinEquivalentParams(1.0)
    four = cf.MinEquivalentParams(4.0)
    assert cf.f_z_at_zero(one, one) == pytest.approx(math.sqrt(math.pi) / 2**1.5, rel=1e-12)
    assert cf.f_z_at_zero(one, one) == pytest.approx(0.62666, abs=1e-5)
    assert cf.f_z_at_zero(four, four) == pytest.approx(0.31333, abs=1e-5)
    a, b = cf.MinEquivalentParams(0.3), cf.MinEquivalentParams(7.0)
    assert cf.f_z_at_zero(a, b) == cf.f_z_at_zero(b, a)


@settings(max_examples=25, deadline=None)
@given(omegas, omegas)
def test_f_z_at_zero_matches_quadrature(o1, o2):
    closed = cf.f_z_at_zero(cf.MinEquivalentParams(o1), cf.MinEquivalentParams(o2))
    assert oracles.f_z_at_zero_quad(o1, o2) == pytest.approx(closed, rel=1e-9)


def test_zdot_pdf_symmetric_and_normalised():
    top = iid()
    for x in (0.1, 1.0, 5.0):
        assert cf.zdot_pdf(x, top) == pytest.approx(cf.zdot_pdf(-x, top), rel=1e-14)
    span = 12 * 2 * math.pi * 10 * 1.0
    assert oracles.pdf_total_mass(lambda x: cf.zdot_pdf(x, top), -span, span) == pytest.approx(1.0, abs=1e-9)


def test_zdot_pdf_collapses_to_single_gaussian():
    top = RelayTopology.iid(2, 2.0, 10.0)
    omega_i = top.min_equivalent(1).omega_i
    xs = np.linspace(-300, 300, 13)
    np.testing.assert_allclose(cf.zdot_pdf(xs, top), cf.zdot_pdf_iid_L(xs, 10.0, omega_i), rtol=1e-12)


@settings(max_examples=15, deadline=None)
@given(pairs)
def test_zdot_pdf_matches_convolution(top):
    scale = max(math.pi * h.doppler_hz * math.sqrt(h.omega) for h in top.hops)
    for x in (0.0, 0.7 * scale):
        conv = oracles.zdot_pdf_convolution(x, top.relays[0], top.relays[1])
        assert float(cf.zdot_pdf(x, top)) == pytest.approx(conv, rel=1e-8, abs=1e-14 / scale)


@settings(max_examples=25, deadline=None)
@given(pairs)
def test_velocity_integral_matches_quadrature(top):
    scale = max(math.pi * h.doppler_hz * math.sqrt(h.omega) for h in top.hops)
    stds = [math.pi * h.doppler_hz * math.sqrt(h.omega) for h in top.hops]
    quad = oracles.velocity_integral_quad(lambda x: cf.zdot_pdf(x, top), 12 * math.sqrt(2) * scale, stds)
    assert quad == pytest.approx(cf.velocity_integral(top), rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(pairs)
def test_or_closed_vs_composed(top):
    assert cf.or_switch_rate_inid_2(top, "closed") == pytest.approx(cf.or_switch_rate_inid_2(top, "composed"), rel=1e-9)


def test_or_inid_examples():
    assert cf.or_switch_rate_inid_2(iid()) == pytest.approx(math.pi * 10, rel=1e-12)
    a, b = LinkParams(1.0, 5.0), LinkParams(3.0, 17.0)
    c, d = LinkParams(0.2, 9.0), LinkParams(2.0, 30.0)
    fwd = RelayTopology(((a, b), (c, d)))
    rev = RelayTopology(((c, d), (a, b)))
    assert cf.or_switch_rate_inid_2(fwd) == pytest.approx(cf.or_switch_rate_inid_2(rev), rel=1e-13)
    with pytest.raises(UnsupportedTopologyError):
        cf.or_switch_rate_inid_2(RelayTopology.iid(3))
    with pytest.raises(ValueError):
        cf.or_switch_rate_inid_2(fwd, "bogus")


def test_or_iid_2():
    assert cf.or_switch_rate_iid_2(10, 10, 10, 10) == pytest.approx(math.pi * 10, rel=1e-12)
    expected = math.pi * (math.sqrt(500) + math.sqrt(1300) + math.sqrt(1700) + math.sqrt(2500)) / (4 * math.sqrt(2))
    assert cf.or_switch_rate_iid_2(10, 30, 20, 40) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(83.11, abs=0.005)
    with pytest.raises(DomainError):
        cf.or_switch_rate_iid_2(10, 0, 10, 10)


@given(st.floats(0.1, 50), dopplers, dopplers, dopplers, dopplers)
def test_or_iid_2_is_equal_omega_specialisation(omega, f1, f2, f3, f4):
    top = RelayTopology(((LinkParams(omega, f1), LinkParams(omega, f2)), (LinkParams(omega, f3), LinkParams(omega, f4))))
    assert cf.or_switch_rate_inid_2(top) == pytest.approx(cf.or_switch_rate_iid_2(f1, f2, f3, f4), rel=1e-9)


def test_or_iid_L():
    assert cf.or_switch_rate_iid_L(2, 10) == pytest.approx(math.pi * 10, rel=1e-12)
    l3 = 6 * math.sqrt(2) * math.pi * 10 * (0.5**1.5 - (1 / 3) ** 1.5)
    assert cf.or_switch_rate_iid_L(3, 10) == pytest.approx(l3, rel=1e-12)
    assert l3 == pytest.approx(42.95, abs=0.005)
    rates = [cf.or_switch_rate_iid_L(l, 10) for l in range(2, 12)]
    assert all(b > a for a, b in zip(rates, rates[1:]))
    with pytest.raises(DomainError):
        cf.or_switch_rate_iid_L(1, 10)
    with pytest.raises(DomainError):
        cf.or_switch_rate_iid_L(31, 10)


@pytest.mark.parametrize("l", range(2, 9))
def test_f_z_at_zero_iid_L_matches_quadrature(l):
    assert cf.f_z_at_zero_iid_L(l, 0.7) == pytest.approx(oracles.f_z_at_zero_iid_L_quad(l, 0.7), rel=1e-9)


def test_or_activation_times():
    at = cf.or_activation_time_inid_2(iid())
    assert at[0] == pytest.approx(1 / (math.pi * 10), rel=1e-12)
    assert at[0] == pytest.approx(0.031831, abs=1e-6)
    top = RelayTopology(((LinkParams(3, 10), LinkParams(3, 10)), (LinkParams(1, 10), LinkParams(1, 10))))
    a1, a2 = cf.or_activation_time_inid_2(top)
    assert a1 == pytest.approx(3 * a2, rel=1e-12)
    assert a1 + a2 == pytest.approx(2 / cf.or_switch_rate_inid_2(top), rel=1e-9)
    assert cf.or_activation_time_iid_L(3, 10) == pytest.approx(0.02328, abs=1e-5)
    assert cf.or_activation_time_iid_L(4, 7) * cf.or_switch_rate_iid_L(4, 7) == pytest.approx(1.0, rel=1e-15)


def test_steady_state_or():
    p = cf.MinEquivalentParams
    assert cf.steady_state_or(p(2.0), p(2.0)) == (0.5, 0.5)
    assert cf.steady_state_or(p(3.0), p(1.0)) == pytest.approx((0.75, 0.25))


def test_argmax_level_invariance():
    a, b = LinkParams(1.0, 5.0), LinkParams(3.0, 17.0)
    c, d = LinkParams(0.2, 9.0), LinkParams(2.0, 30.0)
    scaled = [LinkParams(7.5 * h.omega, h.doppler_hz) for h in (a, b, c, d)]
    top = RelayTopology(((a, b), (c, d)))
    top2 = RelayTopology(((scaled[0], scaled[1]), (scaled[2], scaled[3])))
    assert cf.or_occupancy(top) == pytest.approx(cf.or_occupancy(top2), rel=1e-13)
    assert cf.or_switch_rate_iid_2(5, 17, 9, 30) == cf.or_switch_rate_iid_2(5, 17, 9, 30)


def test_dssc_crossing_rate():
    assert cf.dssc_crossing_rate(1, iid(), 1.0) == pytest.approx(math.sqrt(2 * math.pi) * 20 * math.exp(-2), rel=1e-13)
    assert cf.dssc_crossing_rate(1, iid(), 1.0) == pytest.approx(6.785, abs=5e-4)
    assert cf.dssc_crossing_rate(1, iid(), 0.0) == 0.0
    assert cf.dssc_crossing_rate(2, iid(gamma=2.0), 1.0) == pytest.approx(cf.dssc_crossing_rate(2, iid(), 0.5), rel=1e-14)
    assert cf.dssc_crossing_rate(1, iid(), 1e4) == 0.0
    with pytest.raises(DomainError):
        cf.dssc_crossing_rate(1, iid(), -1.0)


def test_dssc_crossing_rate_unimodal():
    grid = np.geomspace(1e-4, 30, 2000)
    vals = np.array([cf.dssc_crossing_rate(1, iid(), t) for t in grid])
    peak = int(np.argmax(vals))
    assert 0 < peak < grid.size - 1
    assert np.all(np.diff(vals[: peak + 1]) > 0)
    assert np.all(np.diff(vals[peak:]) < 0)


def test_dssc_stationary_symmetric():
    s = cf.dssc_stationary(iid(), 0.4)
    assert s.rho1 == pytest.approx(0.5, abs=1e-15)
    assert s.rho2 == pytest.approx(0.5, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(pairs, st.floats(1e-4, 1e3))
def test_dssc_stationary_invariants(top, t):
    s = cf.dssc_stationary(top, t)
    assert math.fsum(s.pi) == pytest.approx(1.0, abs=1e-12)
    assert all(0.0 <= p <= 1.0 for p in s.pi)
    assert s.rho1 == pytest.approx(sum(s.pi[:3]), abs=1e-12)
    assert s.rho2 == pytest.approx(sum(s.pi[3:]), abs=1e-12)
    assert s.rho1 + s.rho2 == pytest.approx(1.0, abs=1e-12)


def _closed_rho1(o1, o2, x):
    # two-relay DSSC-B activation probability in terms of F_{a_i^2}(x);
    # g_i = 1 - F_i taken directly so q close to 1 keeps its digits
    g1, g2 = math.exp(-x / o1), math.exp(-x / o2)
    f1, f2 = -math.expm1(-x / o1), -math.expm1(-x / o2)
    num = f2 * g2 * (1 - f1 * g1)
    den = f1 * g1 + f2 * g2 - 2 * f1 * g1 * f2 * g2
    return num / den


@settings(max_examples=50, deadline=None)
@given(pairs, st.floats(1e-3, 50.0))
def test_dssc_rho_matches_closed_form(top, t):
    s = cf.dssc_stationary(top, t)
    o1, o2 = top.min_equivalent(1).omega_i, top.min_equivalent(2).omega_i
    x = t / top.gamma
    if x / max(o1, o2) > 30:  # both q_i -> 1; the naive expression is 0/0 there
        return
    assert s.rho1 == pytest.approx(_closed_rho1(o1, o2, x), rel=1e-9, abs=1e-12)


def test_dssc_stationary_power_iteration_q03_q06():
    o1 = -1.0 / math.log(0.7)
    o2 = -1.0 / math.log(0.4)
    top = RelayTopology(((LinkParams(2 * o1, 10), LinkParams(2 * o1, 10)), (LinkParams(2 * o2, 10), LinkParams(2 * o2, 10))))
    s = cf.dssc_stationary(top, 1.0)
    assert (s.q1, s.q2) == pytest.approx((0.3, 0.6), rel=1e-12)
    pi = oracles.stationary_by_power_iteration(oracles.dssc_transition_matrix(0.3, 0.6))
    np.testing.assert_allclose(s.pi, pi, atol=1e-9)
    assert s.rho1 == pytest.approx(pi[:3].sum(), abs=1e-9)


@given(st.floats(1e-3, 0.999), st.floats(1e-3, 0.999))
def test_transition_matrix_is_stochastic(q1, q2):
    p = oracles.dssc_transition_matrix(q1, q2)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-14)
    assert np.all(p >= 0)


def test_dssc_degenerate_thresholds():
    top = RelayTopology(((LinkParams(1, 10), LinkParams(1, 10)), (LinkParams(0.3, 10), LinkParams(0.3, 10))))
    s0 = cf.dssc_stationary(top, 0.0)
    assert math.fsum(s0.pi) == pytest.approx(1.0, abs=1e-15)
    # continuous in T at 0+
    s_small = cf.dssc_stationary(top, 1e-12)
    assert s0.rho1 == pytest.approx(s_small.rho1, rel=1e-6)
    assert cf.dssc_switch_rate(top, 0.0) == 0.0
    assert cf.dssc_switch_rate(top, 0.0, "composed") == 0.0
    big = cf.dssc_stationary(top, 5e3)
    assert all(math.isfinite(p) for p in big.pi)
    assert math.fsum(big.pi) == pytest.approx(1.0, abs=1e-12)
    assert cf.dssc_switch_rate(top, 5e3) == 0.0


@settings(max_examples=200, deadline=None)
@given(pairs, st.floats(1e-4, 1e3))
def test_dssc_expanded_vs_composed(top, t):
    e = cf.dssc_switch_rate(top, t, "expanded")
    c = cf.dssc_switch_rate(top, t, "composed")
    assert e == pytest.approx(c, rel=1e-9, abs=1e-300)


def test_dssc_symmetric_collapse_and_activation():
    top = iid()
    assert cf.dssc_switch_rate(top, 0.7) == pytest.approx(cf.dssc_crossing_rate(1, top, 0.7), rel=1e-12)
    at = cf.dssc_activation_time(1, top, 0.7)
    assert at == pytest.approx(1 / cf.dssc_crossing_rate(1, top, 0.7), rel=1e-12)
    assert cf.dssc_activation_time(1, top, 0.0) == math.inf


@settings(max_examples=50, deadline=None)
@given(pairs, st.floats(1e-3, 30.0))
def test_dssc_activation_sum(top, t):
    rate = cf.dssc_switch_rate(top, t)
    if rate <= 1e-200:
        return
    total = cf.dssc_activation_time(1, top, t) + cf.dssc_activation_time(2, top, t)
    assert total == pytest.approx(2 / rate, rel=1e-9)


def test_worst_case_threshold_symmetric():
    top = iid()
    t_star = cf.worst_case_threshold(top).t
    assert t_star == pytest.approx(0.25, rel=1e-6)
    h = 1e-4 * t_star
    deriv = (cf.dssc_switch_rate(top, t_star + h) - cf.dssc_switch_rate(top, t_star - h)) / (2 * h)
    assert abs(deriv) < 1e-6 * cf.dssc_switch_rate(top, t_star) / t_star


def test_worst_case_threshold_grid_oracle_and_gamma_scaling():
    top = RelayTopology(((LinkParams(10, 20), LinkParams(1, 10)), (LinkParams(10, 20), LinkParams(1, 10))))
    bounds = cf.default_threshold_bounds(top)
    t_star = cf.worst_case_threshold(top, bounds)
    best = cf.dssc_switch_rate(top, t_star)
    grid = np.geomspace(*bounds, 1000)
    assert all(best >= cf.dssc_switch_rate(top, t) for t in grid)
    scaled = RelayTopology(top.relays, gamma=3.0)
    assert cf.worst_case_threshold(scaled).t == pytest.approx(3.0 * t_star.t, rel=1e-6)


def test_worst_case_threshold_bad_bounds():
    with pytest.raises(DomainError):
        cf.worst_case_threshold(iid(), (1.0, 0.5))
    with pytest.raises(DomainError):
        cf.worst_case_threshold(iid(), (0.0, 0.5))


def test_switch_threshold():
    assert SwitchThreshold(4.0).envelope(1.0) == 2.0
    with pytest.raises(DomainError):
        SwitchThreshold(-1.0)


def test_fig5_dssc_below_or():
    for db in (10, -10):
        sr = LinkParams(10 ** (db / 10), 20.0)
        top = RelayTopology.symmetric_pair(sr, LinkParams(1.0, 10.0))
        or_rate = cf.or_switch_rate(top)
        for t in np.geomspace(1e-3, 10, 20):
            assert cf.dssc_switch_rate(top, t) < or_rate
