import numpy as np
import pytest
from hypothesis import given, strategies as st

from qzak.errors import HypothesisError
from qzak.estimates.kernels import (
    KERNELS,
    EstimateConfig,
    ScanGrid,
    kernel_sup_scan,
    kernel_value,
    loglog_slope,
)
from qzak.estimates.geometry import sqrt_phi
from qzak.spectral import phi_eps

# nested scipy.integrate.quad over (tau1, xi1) with no tabulation, theta = 0.05
ORACLE_KERNEL = [
    ("C1", (0.3, 0.1), -50.0, 4.0, 1.4749657227),
    ("C2", (0.3, 0.1), -50.0, 4.0, 0.5404166829),
    ("C3", (-0.5, -0.6), -40.0, 3.0, 2.0792457611),
]


def test_exponents_from_theta():
    cfg = EstimateConfig(theta=0.1)
    assert cfg.b == cfg.b1 == pytest.approx(0.55)
    assert cfg.b_prime == pytest.approx(-0.4)
    assert cfg.c == cfg.c1 == pytest.approx(0.4)
    assert cfg.tau_pair("C2") == (cfg.b1, cfg.b1)
    assert cfg.tau_pair("c1") == (0.4, 0.55)


@pytest.mark.parametrize("which", KERNELS)
def test_bound_exponent_in_range(which):
    B1, B2, B = EstimateConfig().bound_exponents(which)
    assert B == pytest.approx(B1)  # B2 > 1/2, so nothing is lost
    EstimateConfig().check(which)


@pytest.mark.parametrize("kw", [{"theta": 0.0}, {"theta": 0.5}, {"eps": 0.0}, {"eps": 2.0}])
def test_config_validation(kw):
    with pytest.raises(HypothesisError):
        EstimateConfig(**kw)


def test_c2_exponent_outside_range():
    # theta close to 1/2 pushes -b' toward 0, below the admissible range for C2
    with pytest.raises(HypothesisError, match="C2|B1"):
        EstimateConfig(theta=0.45).check("C2")


def test_unknown_kernel():
    with pytest.raises(ValueError):
        kernel_value("C4", 0.0, 1.0, EstimateConfig())


@pytest.mark.parametrize("which,kl,tau,xi,want", ORACLE_KERNEL)
def test_kernel_oracle(which, kl, tau, xi, want):
    cfg = EstimateConfig(k=kl[0], l=kl[1])
    val, _ = kernel_value(which, tau, xi, cfg)
    assert val == pytest.approx(want, rel=1e-7)


def test_prefactors():
    cfg = EstimateConfig(k=0.3, l=0.1)
    tau, xi = -50.0, 4.0
    near = 1 + min(abs(tau + sqrt_phi(xi, 1.0)), abs(tau - sqrt_phi(xi, 1.0)))
    assert kernel_value("C1", tau, xi, cfg)[1] == pytest.approx(5.0**-0.1 * near**-cfg.b)
    assert kernel_value("C2", tau, xi, cfg)[1] == pytest.approx(5.0**0.1 * near**-cfg.c)
    assert kernel_value("C3", tau, xi, cfg)[1] == pytest.approx(5.0**-0.3 * (1 + abs(tau + phi_eps(xi, 1.0))) ** -cfg.b1)


def test_loglog_slope():
    x = np.geomspace(1, 1e3, 9)
    assert loglog_slope(x, 3 * x**0.7) == pytest.approx(0.7)
    assert np.isnan(loglog_slope(x, np.zeros_like(x)))


def test_scan_grid():
    g = ScanGrid(n_tau=3, n_xi=2)
    taus = g.taus(2.0, 1.0)
    assert np.all(np.diff(taus) > 0) and np.allclose(taus, -taus[::-1])
    for v in (np.sqrt(20.0), 20.0, 40.0):
        assert np.any(np.isclose(taus, v, rtol=1e-14)) and np.any(np.isclose(taus, -v, rtol=1e-14))
    assert len(ScanGrid(n_tau=3, n_xi=2, case_points=False).taus(2.0, 1.0)) == 6
    with pytest.raises(ValueError):
        ScanGrid(tau_min=0.0)
    with pytest.raises(ValueError):
        ScanGrid(n_xi=1)


def test_small_scan():
    grid = ScanGrid(tau_max=1e3, n_tau=4, xi_max=30.0, n_xi=3)
    res = kernel_sup_scan("c1", EstimateConfig(), grid)
    assert res.which == "C1"
    assert res.product.size == res.tau.size == 3 * 2 * (4 + 3)
    np.testing.assert_allclose(res.product, res.kernel_value * res.prefactor)
    assert res.supremum == pytest.approx(np.max(res.product))
    assert res.supremum == pytest.approx(np.max(res.sup_by_xi))
    assert not res.failures and np.isfinite(res.slope)
    s = res.summary()
    assert s["n_points"] == res.product.size and s["argmax"]["xi"] == res.argmax[1]


@given(st.floats(-1e4, 1e4), st.floats(1, 1e3))
def test_c1_symmetric_at_zero_regularity(tau, xi):
    # at k = 0 the inner integral depends only on |tau| since eta -> -eta flips the resonance
    cfg = EstimateConfig()
    a, _ = kernel_value("C1", tau, xi, cfg)
    b, _ = kernel_value("C1", -tau, xi, cfg)
    assert a == pytest.approx(b, rel=1e-5)


# one point per inequality of the region, violating that inequality alone
# within its branch, and the kernel that detects it
CLAUSE_PROBES = [
    ("-3/2 < k-l", (0.0, 2.0), "C3"),
    ("k-l < 3/2", (0.0, -2.0), "C1"),
    ("2k-l > -3/2", (-0.5, 1.0), "C3"),
    ("k+l > -3/2", (-0.3, -1.5), "C1"),
    ("-3/4 < k", (-1.0, -0.3), "C2"),
]


@pytest.mark.parametrize("clause, kl, which", CLAUSE_PROBES, ids=[c for c, _, _ in CLAUSE_PROBES])
def test_each_region_clause_has_a_growing_kernel(clause, kl, which):
    from qzak.estimates.region import region_membership

    inside, flags = region_membership(*kl)
    assert not inside
    assert not dict(flags)[next(n for n, _ in flags if n.endswith(clause))]
    res = kernel_sup_scan(which, EstimateConfig(k=kl[0], l=kl[1]), ScanGrid(n_tau=12, n_xi=10))
    assert res.slope >= 0.2


def test_divergent_inner_integral_scans_as_infinite():
    res = kernel_sup_scan("C3", EstimateConfig(k=0.0, l=2.0), ScanGrid(n_tau=4, n_xi=3))
    assert np.isposinf(res.supremum) and np.isposinf(res.slope)
    assert res.failures == []
