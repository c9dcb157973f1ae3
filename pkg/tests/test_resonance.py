import numpy as np
import pytest
from hypothesis import given, strategies as st

from qzak.estimates.integrals import cubic_root
from qzak.estimates.resonance import (
    check_resonance_identity,
    key_observation_bounds,
    resonance_at_offset,
    resonance_cubic,
    resonance_direct,
)
from qzak.spectral import phi_eps

finite = dict(allow_nan=False, allow_infinity=False)


@given(st.floats(-1e4, 1e4, **finite), st.floats(-100, 100, **finite), st.floats(-100, 100, **finite), st.floats(0, 1))
def test_cubic_equals_direct(tau, xi, eta, eps):
    scale = abs(tau) + phi_eps(eta + xi / 2, eps) + phi_eps(eta - xi / 2, eps)
    diff = abs(resonance_cubic(tau, xi, eta, eps) - resonance_direct(tau, xi, eta, eps))
    assert diff <= 1e-12 * max(scale, 1.0)


def test_cubic_hand_value():
    # tau + (2 xi + eps^2 xi^3) eta + 4 eps^2 xi eta^3 at (1, 2, 3, 0.5): 1 + 6*3 + 2*27
    assert resonance_cubic(1.0, 2.0, 3.0, 0.5) == 73.0
    assert resonance_direct(1.0, 2.0, 3.0, 0.5) == pytest.approx(73.0, rel=1e-15)


def test_identity_check_large_sample():
    res = check_resonance_identity(100_000, np.random.default_rng(7))
    assert res.n_points == 100_000
    assert res.max_rel_error <= 1e-9


@given(st.floats(-1e6, 1e6, **finite), st.floats(1, 1e3), st.floats(0.1, 1), st.floats(-10, 10, **finite))
def test_offset_form_matches_cubic(tau, xi, eps, u):
    R = cubic_root(tau, xi, eps)
    assert abs(resonance_cubic(tau, xi, R, eps)) <= 1e-9 * max(abs(tau), (2 * xi + eps**2 * xi**3) * abs(R), 1)
    direct = resonance_cubic(tau, xi, R + u, eps)
    scale = abs(tau) + (2 * xi + eps**2 * xi**3) * abs(R + u) + 4 * eps**2 * xi * abs(R + u) ** 3
    assert abs(resonance_at_offset(u, R, xi, eps) - direct) <= 1e-9 * max(scale, 1.0)


def test_offset_form_resolves_below_ulp_of_root():
    xi, eps = 1e4, 1.0
    tau = -phi_eps(xi, eps)
    R = cubic_root(tau, xi, eps)
    assert R == xi / 2
    u = 1e-12
    slope = (2 * xi + xi**3) + 12 * xi * R * R
    assert resonance_at_offset(u, R, xi, eps) == pytest.approx(u * slope, rel=1e-12)


@given(st.floats(-1e3, 1e3, **finite), st.floats(-1e3, 1e3, **finite), st.floats(-3, 3))
def test_key_observation(eta, xi, k):
    lo, mid, hi = key_observation_bounds(eta, xi, k)
    assert lo * (1 - 1e-12) <= mid <= hi * (1 + 1e-12)
