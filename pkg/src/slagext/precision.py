"""Scalar precision contexts.

Series and chart evaluation are written generically over a small scalar
interface so the same code runs in float64 or in mpmath arbitrary precision.
Double precision is the default; the high-order residual-decay and overlap
comparisons need signals far below 1e-16 and use an mpmath context.

A context converts external representations (ints, floats, decimal strings)
into its scalar type and supplies the few transcendental functions the
geometry needs. Complex scalars are built with ``make_complex`` and follow
the native ``.real`` / ``.imag`` / ``.conjugate()`` protocol, which float,
complex, mpf and mpc all share.

The CLI picks its context from the SLAG_PRECISION environment variable:
``float64`` (default) or ``mp<digits>``, e.g. ``mp50``.
"""
from __future__ import annotations

import math
import os
from typing import Any, Union

import mpmath

Scalar = Any
CScalar = Any


class FloatContext:
    """IEEE double scalars backed by the math module."""

    name = "float64"
    eps = 2.220446049250313e-16

    def real(self, x: Union[int, float, str]) -> float:
        return float(x)

    def make_complex(self, re, im) -> complex:
        return complex(re, im)

    def to_float(self, x) -> float:
        return float(x)

    def encode(self, x) -> str:
        # repr of a float is the shortest round-trip decimal string
        return repr(float(x))

    def pi(self) -> float:
        return math.pi

    def sqrt(self, x):
        return math.sqrt(x)

    def sin(self, x):
        return math.sin(x)

    def cos(self, x):
        return math.cos(x)

    def tan(self, x):
        return math.tan(x)

    def atan(self, x):
        return math.atan(x)

    def atan2(self, y, x):
        return math.atan2(y, x)

    def exp_i(self, theta) -> complex:
        return complex(math.cos(theta), math.sin(theta))

    def c_abs(self, z) -> float:
        return abs(z)

    def c_sqrt(self, z) -> complex:
        import cmath

        return cmath.sqrt(z)


class MPContext:
    """mpmath scalars at a fixed working precision.

    Constructing a context sets the global mpmath precision; mpmath
    arithmetic always runs at the precision active at call time, so keep a
    single mp context alive per computation.
    """

    def __init__(self, dps: int):
        if dps < 16:
            raise ValueError("mp context needs at least 16 digits")
        self.dps = int(dps)
        self.name = f"mp{self.dps}"
        mpmath.mp.dps = self.dps
        self.eps = float(mpmath.mpf(10) ** (1 - self.dps))

    def real(self, x) -> mpmath.mpf:
        mpmath.mp.dps = self.dps
        if isinstance(x, str):
            return mpmath.mpf(x)
        return mpmath.mpf(x)

    def make_complex(self, re, im) -> mpmath.mpc:
        return mpmath.mpc(re, im)

    def to_float(self, x) -> float:
        return float(x)

    def encode(self, x) -> str:
        mpmath.mp.dps = self.dps
        return mpmath.nstr(mpmath.mpf(x), self.dps, strip_zeros=False)

    def pi(self):
        mpmath.mp.dps = self.dps
        return +mpmath.pi

    def sqrt(self, x):
        return mpmath.sqrt(x)

    def sin(self, x):
        return mpmath.sin(x)

    def cos(self, x):
        return mpmath.cos(x)

    def tan(self, x):
        return mpmath.tan(x)

    def atan(self, x):
        return mpmath.atan(x)

    def atan2(self, y, x):
        return mpmath.atan2(y, x)

    def exp_i(self, theta) -> mpmath.mpc:
        return mpmath.mpc(mpmath.cos(theta), mpmath.sin(theta))

    def c_abs(self, z):
        return abs(z)

    def c_sqrt(self, z):
        return mpmath.sqrt(z)


Context = Union[FloatContext, MPContext]

FLOAT64 = FloatContext()


def mp_context(dps: int = 50) -> MPContext:
    return MPContext(dps)


def context_named(spec: str) -> Context:
    """Context for a precision name: ``float64`` or ``mp<digits>``."""
    spec = spec.strip().lower()
    if spec == "float64":
        return FLOAT64
    if spec.startswith("mp"):
        try:
            digits = int(spec[2:])
        except ValueError:
            raise ValueError(f"bad precision name: {spec!r}") from None
        return MPContext(digits)
    raise ValueError(f"bad precision name: {spec!r}")


def from_env(default: Context = FLOAT64) -> Context:
    """Context selected by SLAG_PRECISION (``float64`` or ``mp<digits>``)."""
    spec = os.environ.get("SLAG_PRECISION", "").strip()
    if not spec:
        return default
    return context_named(spec)
