"""Shared helpers for the test suite."""
from __future__ import annotations

import random

from slagext.series import TaylorPoly, poly_from


def random_flat_potential(rng: random.Random, cap: int, scale: float = 0.2) -> TaylorPoly:
    """Random admissible potential: vanishing value, slope, and curvature at
    0 (the normalized-arc convention), damped enough that arctan/tan
    compositions stay tame."""
    coeffs = [0.0, 0.0, 0.0]
    damp = 1.0
    for _ in range(3, cap + 1):
        damp *= scale
        coeffs.append(rng.uniform(-1.0, 1.0) * damp)
    return poly_from(coeffs, cap)
