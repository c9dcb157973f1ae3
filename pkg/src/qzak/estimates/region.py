"""The (k, l) region where the estimates are claimed, and its boundary."""
from __future__ import annotations

import numpy as np

__all__ = ["region_membership", "region_polyline", "CORNER"]

CORNER = (-0.75, -0.75)


def region_membership(k: float, l: float) -> tuple[bool, list[tuple[str, bool]]]:
    """Inside test plus the truth value of every inequality, grouped by branch.

    The region is the union of {-3/2 < k - l < 3/2, k >= 0} and
    {2k - l > -3/2, k + l > -3/2, -3/4 < k < 0}.
    """
    first = [
        ("-3/2 < k-l", -1.5 < k - l),
        ("k-l < 3/2", k - l < 1.5),
        ("k >= 0", k >= 0),
    ]
    second = [
        ("2k-l > -3/2", 2 * k - l > -1.5),
        ("k+l > -3/2", k + l > -1.5),
        ("-3/4 < k", -0.75 < k),
        ("k < 0", k < 0),
    ]
    inside = all(v for _, v in first) or all(v for _, v in second)
    return inside, [("A1: " + n, v) for n, v in first] + [("A2: " + n, v) for n, v in second]


def region_polyline(k_max: float = 3.0) -> np.ndarray:
    """Boundary of the region as an open polyline of (k, l) vertices, counter-clockwise."""
    return np.array(
        [
            (k_max, k_max + 1.5),
            (0.0, 1.5),
            (-0.75, 0.0),
            CORNER,
            (0.0, -1.5),
            (k_max, k_max - 1.5),
        ]
    )
