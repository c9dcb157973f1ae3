import numpy as np
import pytest
from hypothesis import given, strategies as st

from qzak.errors import HypothesisError, QuadratureError
from qzak.estimates.quadrature import (
    DELTA,
    TauKernel,
    bracket,
    integrate_line,
    positive_part,
    tau_exponent,
    tau_kernel,
    weighted_tau_integral,
)

# two-center integrals from 50-digit mpmath quadrature split at both centers
ORACLE_J = [
    (0.3, 0.6, 10.0, 1.44144444936048),
    (0.45, 0.45, 100.0, 0.379768997163888),
    (0.3, 0.6, 1000.0, 0.139040421481287),
]


def test_bracket_and_positive_part():
    assert bracket(-2.5) == 3.5
    assert positive_part(0.3) == 0.3
    assert positive_part(-0.3) == 0.0
    assert positive_part(0.0) == DELTA


@pytest.mark.parametrize("am,ap,want", [(0.3, 0.6, 0.6), (0.45, 0.45, 0.8), (0.3, 0.5, 0.6 - DELTA)])
def test_tau_exponent(am, ap, want):
    assert tau_exponent(am, ap) == pytest.approx(want)


@pytest.mark.parametrize("am,ap,d,want", ORACLE_J)
def test_two_center_oracle(am, ap, d, want):
    value, ratio = weighted_tau_integral(am, ap, 0.0, d)
    assert value == pytest.approx(want, rel=1e-10)
    assert ratio == pytest.approx(want * (1 + d) ** tau_exponent(am, ap), rel=1e-10)


def test_coincident_centres_closed_form():
    # integral of <x>^{-1.2} over the line is 2/0.2
    assert weighted_tau_integral(0.3, 0.3, 4.0, 4.0)[0] == pytest.approx(10.0, rel=1e-12)


@pytest.mark.parametrize("am,ap", [(0.5, 0.3), (-0.1, 0.7), (0.2, 0.25)])
def test_pair_hypotheses(am, ap):
    with pytest.raises(HypothesisError):
        weighted_tau_integral(am, ap, 0, 1)


@given(st.floats(0, 1e4), st.floats(0, 1e4))
def test_two_center_depends_on_distance_only(s1, s2):
    a = weighted_tau_integral(0.3, 0.6, s1, s2)[0]
    b = weighted_tau_integral(0.3, 0.6, 0.0, abs(s1 - s2))[0]
    assert a == pytest.approx(b, rel=1e-12)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_two_center_decreasing_in_distance(d1, d2):
    lo, hi = sorted((d1, d2))
    assert weighted_tau_integral(0.45, 0.45, 0, hi)[0] <= weighted_tau_integral(0.45, 0.45, 0, lo)[0] * (1 + 1e-10)


@given(st.floats(0.3, 0.49), st.floats(0.0, 0.1), st.floats(0, 1e3))
def test_two_center_decreasing_in_exponents(a, bump, d):
    base = weighted_tau_integral(a, a, 0, d)[0]
    assert weighted_tau_integral(a, a + bump, 0, d)[0] <= base * (1 + 1e-10)


def test_tabulated_kernel_matches_direct():
    K = TauKernel(0.3, 0.6, d_max=1e8, n_nodes=400)
    for d in (0.0, 0.7, 13.0, 2.5e3, 7.7e6):
        assert K(d) == pytest.approx(weighted_tau_integral(0.3, 0.6, 0, d)[0], rel=1e-6)
    assert K(-13.0) == pytest.approx(K(13.0))
    assert np.asarray(K(np.array([1.0, 2.0]))).shape == (2,)


def test_kernel_tail_exponent():
    assert tau_kernel(0.3, 0.6).decay_exponent == pytest.approx(0.6, abs=1e-3)
    assert tau_kernel(0.45, 0.45).decay_exponent == pytest.approx(0.8, abs=1e-3)
    assert tau_kernel(0.3, 0.6) is tau_kernel(0.3, 0.6)


def test_integrate_line_algebraic():
    f = lambda x: bracket(x) ** -2.0
    assert integrate_line(f, [0.0]) == pytest.approx(2.0, rel=1e-8)
    assert integrate_line(f, [], 0.0, np.inf) == pytest.approx(1.0, rel=1e-8)
    assert integrate_line(f, [0.5], 0.0, 3.0) == pytest.approx(0.75, rel=1e-10)


@pytest.mark.parametrize("width", [1.0, 1e-6, 1e-20])
def test_integrate_line_narrow_peak(width):
    f = lambda x: 1.0 / (1.0 + (x / width) ** 2)
    assert integrate_line(f, [0.0]) == pytest.approx(np.pi * width, rel=1e-7)


def test_integrate_line_offset_peak():
    c, w = 1e6, 1e-3
    f = lambda x: 1.0 / (1.0 + ((x - c) / w) ** 2)
    assert integrate_line(f, [c]) == pytest.approx(np.pi * w, rel=1e-7)


def test_integrate_line_endpoint_singularity():
    f = lambda x: np.abs(x) ** -0.5
    assert integrate_line(f, [], 0.0, 1.0) == pytest.approx(2.0, rel=1e-6)


def test_integrate_line_rejects_slow_tail():
    with pytest.raises(QuadratureError, match="not integrable"):
        integrate_line(lambda x: bracket(x) ** -1.0, [0.0])


def _far_limit(am, ap):
    """Limit of J(d) d^alpha for a_- = a_+ = a < 1/2, from the scaling x = d t."""
    from scipy.special import beta

    p = 2 * am
    return beta(1 - p, 1 - p) + 2 * beta(1 - p, 2 * p - 1)


@pytest.mark.parametrize("am,ap,limit", [
    # a_+ > 1/2: the far bracket integrates to 10 while the near one gives d^{-0.6}
    (0.3, 0.6, 10.0),
    (0.45, 0.45, None),
])
def test_ratio_bounded_and_saturating(am, ap, limit):
    limit = limit or _far_limit(am, ap)
    d = np.geomspace(1.0, 1e16, 9)
    r = np.array([weighted_tau_integral(am, ap, 0.0, x)[1] for x in d])
    assert np.all(np.diff(r) > 0) and np.all(r < limit)
    assert r[-1] == pytest.approx(limit, rel=0.03)
    # the deficit shrinks like a power of d, so the limit is approached but slowly
    deficit = np.log(limit - r[-3:])
    rate = np.diff(deficit) / np.diff(np.log(d[-3:]))
    assert np.all(rate < -0.05)
    # the log-log slope tends to zero, it is only large on short ranges
    assert np.log(r[-1] / r[-2]) / np.log(d[-1] / d[-2]) < 0.005
