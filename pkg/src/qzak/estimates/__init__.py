"""Numerical checks of the frequency-space estimates."""
from .geometry import ResonanceGeometry, stationary_points
from .integrals import around_xi_integral, eta_integral_bound
from .kernels import EstimateConfig, ScanGrid, ScanResult, kernel_sup_scan, kernel_value, loglog_slope
from .quadrature import weighted_tau_integral
from .region import region_membership, region_polyline
from .resonance import check_resonance_identity, key_observation_bounds, resonance_cubic, resonance_direct

__all__ = [
    "ResonanceGeometry",
    "stationary_points",
    "around_xi_integral",
    "eta_integral_bound",
    "EstimateConfig",
    "ScanGrid",
    "ScanResult",
    "kernel_sup_scan",
    "kernel_value",
    "loglog_slope",
    "weighted_tau_integral",
    "region_membership",
    "region_polyline",
    "check_resonance_identity",
    "key_observation_bounds",
    "resonance_cubic",
    "resonance_direct",
]
