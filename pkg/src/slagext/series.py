"""Truncated Taylor series algebra.

Everything downstream works with polynomials truncated at a fixed degree cap
D: a ``TaylorPoly`` stores coefficients c0..cD of sum c_j t^j. Operations
never invent degrees: products truncate at the common cap, differentiation
lowers the cap by one, antidifferentiation raises it. Mixing caps is a shape
error so that degree bookkeeping mistakes fail loudly instead of silently
zero-padding.

Two composite structures are built on top:

* ``ComplexSeries``: a pair (re, im) of equal-cap polynomials, with
  truncated complex multiplication and integer powers by repeated squaring.
* ``EvenSeries``: a series in sigma^2 whose coefficients are ComplexSeries
  in t. The extension recursion and the PDE expansion live entirely in this
  graded form; odd sigma-powers never appear by construction.

``SigmaExpansion`` is the public container for an extension
phi(t, sigma) = sum_k f_k(t) sigma^(2k) / (2k)!; the stored terms are the
bare f_k, the factorials are applied at evaluation time.

Coefficients are plain Python scalars (float or mpmath.mpf); all routines
are dtype-generic and exact over whichever field the inputs carry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    CompositionDomainError,
    SeriesShapeError,
    SingularDivisionError,
)


@dataclass(frozen=True)
class TaylorPoly:
    """Coefficients c0..cD of a degree-capped Taylor polynomial."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise SeriesShapeError("a TaylorPoly needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def cap(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "TaylorPoly") -> "TaylorPoly":
        return poly_add(self, other)

    def __sub__(self, other: "TaylorPoly") -> "TaylorPoly":
        return poly_add(self, poly_neg(other))

    def __neg__(self) -> "TaylorPoly":
        return poly_neg(self)

    def __mul__(self, other):
        if isinstance(other, TaylorPoly):
            return poly_mul(self, other)
        return poly_scale(self, other)

    def __rmul__(self, other):
        return poly_scale(self, other)

    def __call__(self, t):
        return poly_eval(self, t)


def poly_from(coeffs: Sequence, cap: int | None = None) -> TaylorPoly:
    cs = list(coeffs)
    if cap is not None:
        if cap + 1 < len(cs):
            cs = cs[: cap + 1]
        else:
            zero = _zero_like(cs[0]) if cs else 0.0
            cs = cs + [zero] * (cap + 1 - len(cs))
    return TaylorPoly(tuple(cs))


def poly_zero(cap: int, like=0.0) -> TaylorPoly:
    z = _zero_like(like)
    return TaylorPoly(tuple(z for _ in range(cap + 1)))


def poly_one(cap: int, like=1.0) -> TaylorPoly:
    z = _zero_like(like)
    return TaylorPoly((like * 1,) + tuple(z for _ in range(cap)))


def _zero_like(x):
    return x * 0


def _check_same_cap(a: TaylorPoly, b: TaylorPoly, what: str):
    if a.cap != b.cap:
        raise SeriesShapeError(
            f"{what}: degree caps differ ({a.cap} vs {b.cap})"
        )


def poly_add(a: TaylorPoly, b: TaylorPoly) -> TaylorPoly:
    _check_same_cap(a, b, "poly_add")
    return TaylorPoly(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def poly_neg(a: TaylorPoly) -> TaylorPoly:
    return TaylorPoly(tuple(-x for x in a.coeffs))


def poly_scale(a: TaylorPoly, s) -> TaylorPoly:
    return TaylorPoly(tuple(x * s for x in a.coeffs))


def poly_mul(a: TaylorPoly, b: TaylorPoly) -> TaylorPoly:
    """Cauchy product truncated at the common cap."""
    _check_same_cap(a, b, "poly_mul")
    ca, cb = a.coeffs, b.coeffs
    n = len(ca)
    out = []
    for d in range(n):
        acc = ca[0] * cb[d]
        for j in range(1, d + 1):
            acc = acc + ca[j] * cb[d - j]
        out.append(acc)
    return TaylorPoly(tuple(out))


def poly_truncate(a: TaylorPoly, cap: int) -> TaylorPoly:
    if cap > a.cap:
        raise SeriesShapeError(
            f"poly_truncate: cap {cap} above stored cap {a.cap}"
        )
    return TaylorPoly(a.coeffs[: cap + 1])


def poly_pad(a: TaylorPoly, cap: int) -> TaylorPoly:
    """Extend with exact zeros. Only valid when a is an exact polynomial,
    not a truncation of a longer series."""
    if cap < a.cap:
        raise SeriesShapeError(f"poly_pad: cap {cap} below stored cap {a.cap}")
    z = _zero_like(a.coeffs[0])
    return TaylorPoly(a.coeffs + tuple(z for _ in range(cap - a.cap)))


def poly_derivative(a: TaylorPoly) -> TaylorPoly:
    """d/dt; the cap drops by one (a constant differentiates to cap-0 zero)."""
    if a.cap == 0:
        return TaylorPoly((_zero_like(a.coeffs[0]),))
    return TaylorPoly(tuple(j * a.coeffs[j] for j in range(1, len(a.coeffs))))


def poly_antiderivative(a: TaylorPoly) -> TaylorPoly:
    """Antiderivative with zero constant term; the cap rises by one."""
    z = _zero_like(a.coeffs[0])
    out = [z]
    for j, c in enumerate(a.coeffs):
        out.append(c / (j + 1))
    return TaylorPoly(tuple(out))


def poly_eval(a: TaylorPoly, t):
    acc = a.coeffs[-1]
    for c in reversed(a.coeffs[:-1]):
        acc = acc * t + c
    return acc


def poly_reciprocal(a: TaylorPoly) -> TaylorPoly:
    """Series inverse 1/a. Requires a(0) != 0."""
    a0 = a.coeffs[0]
    if a0 == 0:
        raise SingularDivisionError("poly_reciprocal: constant term is zero")
    inv0 = 1 / a0
    out = [inv0]
    for d in range(1, len(a.coeffs)):
        acc = _zero_like(a0)
        for j in range(1, d + 1):
            acc = acc + a.coeffs[j] * out[d - j]
        out.append(-inv0 * acc)
    return TaylorPoly(tuple(out))


def poly_compose(outer: TaylorPoly, inner: TaylorPoly) -> TaylorPoly:
    """outer(inner(t)) truncated at the common cap; inner(0) must be 0."""
    _check_same_cap(outer, inner, "poly_compose")
    if inner.coeffs[0] != 0:
        raise CompositionDomainError(
            "poly_compose: inner series has nonzero constant term"
        )
    cap = outer.cap
    acc = poly_zero(cap, like=outer.coeffs[0])
    for c in reversed(outer.coeffs):
        acc = poly_mul(acc, inner)
        acc = poly_add(acc, _const_poly(c, cap))
    return acc


def _const_poly(c, cap: int) -> TaylorPoly:
    z = _zero_like(c)
    return TaylorPoly((c,) + tuple(z for _ in range(cap)))


def poly_reversion(a: TaylorPoly) -> TaylorPoly:
    """Compositional inverse: q with a(q(h)) = h + O(h^(D+1)).

    Requires a(0) = 0 and a'(0) != 0. Newton lifting with cap doubling: if
    a(q) = id mod h^(m+1) then q - (a(q) - id)/a'(q) holds mod h^(2m+1).
    """
    if a.coeffs[0] != 0:
        raise CompositionDomainError(
            "poly_reversion: series has nonzero constant term"
        )
    a1 = a.coeffs[1] if a.cap >= 1 else _zero_like(a.coeffs[0])
    if a1 == 0:
        raise SingularDivisionError("poly_reversion: vanishing linear term")
    cap = a.cap
    z = _zero_like(a.coeffs[0])
    one = _one_like(a1)
    q = TaylorPoly((z, 1 / a1))
    while q.cap < cap:
        m = min(2 * q.cap, cap)
        qm = TaylorPoly(q.coeffs + tuple(z for _ in range(m - q.cap)))
        am = poly_truncate(a, m)
        ident = TaylorPoly((z, one) + tuple(z for _ in range(m - 1)))
        r = poly_compose(am, qm) - ident
        # a' is known one degree short; the padded top coefficient only
        # touches orders beyond the lift and is harmless
        dm = poly_compose(poly_pad(poly_derivative(am), m), qm)
        q = qm - poly_mul(r, poly_reciprocal(dm))
    return q


def poly_shift(a: TaylorPoly, h) -> TaylorPoly:
    """Coefficients of a(h + t) at the same cap (exact Taylor shift)."""
    n = len(a.coeffs)
    out = list(a.coeffs)
    # repeated synthetic division by (t - h) accumulates the shifted
    # coefficients without forming binomials
    for j in range(n - 1):
        for k in range(n - 2, j - 1, -1):
            out[k] = out[k] + out[k + 1] * h
    return TaylorPoly(tuple(out))


def analytic_compose(name: str, inner: TaylorPoly) -> TaylorPoly:
    """Compose a fixed analytic function with a series, inner(0) = 0.

    Supported: ``arctan`` and ``tan``. Coefficients are propagated through
    the defining ODE, so no transcendental evaluations are involved and the
    result is exact over the coefficient field.
    """
    if inner.coeffs[0] != 0:
        raise CompositionDomainError(
            f"analytic_compose({name!r}): inner series has nonzero constant term"
        )
    if name == "arctan":
        return _arctan_series(inner)
    if name == "tan":
        return _tan_series(inner)
    raise ValueError(f"analytic_compose: unknown function {name!r}")


def _arctan_series(a: TaylorPoly) -> TaylorPoly:
    # y = arctan(a):  y' = a' / (1 + a^2), y(0) = 0
    cap = a.cap
    if cap == 0:
        return poly_zero(0, like=a.coeffs[0])
    da = poly_derivative(a)
    one = poly_one(cap, like=_one_like(a.coeffs[0]))
    denom = poly_add(one, poly_mul(a, a))
    integrand = poly_mul(da, poly_truncate(poly_reciprocal(denom), cap - 1))
    return poly_antiderivative(integrand)


def _tan_series(a: TaylorPoly) -> TaylorPoly:
    # y = tan(a):  y' = a' (1 + y^2), y(0) = 0; filled order by order
    cap = a.cap
    z = _zero_like(a.coeffs[0])
    if cap == 0:
        return poly_zero(0, like=a.coeffs[0])
    da = a.coeffs  # use j*a_j directly below
    y = [z] * (cap + 1)
    for d in range(1, cap + 1):
        # [a'(1 + y^2)]_{d-1} depends on y_0..y_{d-1} only
        acc = d * da[d] if d < len(da) else z
        # a' coefficients: a'_m = (m+1) a_{m+1}
        ysq_needed = d - 1
        if ysq_needed >= 1:
            for m in range(0, d - 1):
                ap = (m + 1) * da[m + 1]
                if ap == 0:
                    continue
                # [y^2]_{d-1-m}
                target = d - 1 - m
                s = z
                for j in range(0, target + 1):
                    s = s + y[j] * y[target - j]
                acc = acc + ap * s
        y[d] = acc / d
    return TaylorPoly(tuple(y))


def _one_like(x):
    return x * 0 + 1


# ---------------------------------------------------------------------------
# complex series


@dataclass(frozen=True)
class ComplexSeries:
    """Equal-cap (re, im) pair representing a complex-valued series."""

    re: TaylorPoly
    im: TaylorPoly

    def __post_init__(self):
        _check_same_cap(self.re, self.im, "ComplexSeries")

    @property
    def cap(self) -> int:
        return self.re.cap


def cs_from_real(re: TaylorPoly, im: TaylorPoly | None = None) -> ComplexSeries:
    if im is None:
        im = poly_zero(re.cap, like=re.coeffs[0])
    return ComplexSeries(re, im)


def cs_add(a: ComplexSeries, b: ComplexSeries) -> ComplexSeries:
    return ComplexSeries(poly_add(a.re, b.re), poly_add(a.im, b.im))


def cs_mul(a: ComplexSeries, b: ComplexSeries) -> ComplexSeries:
    re = poly_add(poly_mul(a.re, b.re), poly_neg(poly_mul(a.im, b.im)))
    im = poly_add(poly_mul(a.re, b.im), poly_mul(a.im, b.re))
    return ComplexSeries(re, im)


def cs_scale(a: ComplexSeries, s) -> ComplexSeries:
    return ComplexSeries(poly_scale(a.re, s), poly_scale(a.im, s))


def cs_truncate(a: ComplexSeries, cap: int) -> ComplexSeries:
    return ComplexSeries(poly_truncate(a.re, cap), poly_truncate(a.im, cap))


def complex_int_pow(base: ComplexSeries, k: int) -> ComplexSeries:
    """base**k by repeated squaring, truncated at the base cap. k >= 0."""
    if k < 0:
        raise ValueError("complex_int_pow: negative exponent")
    one = _one_like(base.re.coeffs[0])
    acc = cs_from_real(poly_one(base.cap, like=one))
    sq = base
    while k:
        if k & 1:
            acc = cs_mul(acc, sq)
        k >>= 1
        if k:
            sq = cs_mul(sq, sq)
    return acc


# ---------------------------------------------------------------------------
# even sigma-power series with ComplexSeries coefficients


@dataclass(frozen=True)
class EvenSeries:
    """sum_j slots[j] * sigma^(2j), each slot a ComplexSeries in t."""

    slots: tuple

    def __post_init__(self):
        if len(self.slots) == 0:
            raise SeriesShapeError("EvenSeries needs at least one slot")
        cap = self.slots[0].cap
        for s in self.slots:
            if s.cap != cap:
                raise SeriesShapeError("EvenSeries: slot caps differ")
        object.__setattr__(self, "slots", tuple(self.slots))

    @property
    def nslots(self) -> int:
        return len(self.slots)

    @property
    def cap(self) -> int:
        return self.slots[0].cap


def even_from_slots(slots: Sequence[ComplexSeries]) -> EvenSeries:
    return EvenSeries(tuple(slots))


def even_add(a: EvenSeries, b: EvenSeries) -> EvenSeries:
    if a.nslots != b.nslots:
        raise SeriesShapeError("even_add: slot counts differ")
    return EvenSeries(tuple(cs_add(x, y) for x, y in zip(a.slots, b.slots)))


def even_mul(a: EvenSeries, b: EvenSeries) -> EvenSeries:
    """Convolution in sigma^2, truncated at min(slot counts)."""
    n = min(a.nslots, b.nslots)
    cap = a.cap
    if cap != b.cap:
        raise SeriesShapeError("even_mul: slot caps differ")
    zero = cs_from_real(poly_zero(cap, like=a.slots[0].re.coeffs[0]))
    out = []
    for d in range(n):
        acc = zero
        for j in range(d + 1):
            acc = cs_add(acc, cs_mul(a.slots[j], b.slots[d - j]))
        out.append(acc)
    return EvenSeries(tuple(out))


def even_int_pow(a: EvenSeries, k: int) -> EvenSeries:
    if k < 0:
        raise ValueError("even_int_pow: negative exponent")
    one = _one_like(a.slots[0].re.coeffs[0])
    unit = cs_from_real(poly_one(a.cap, like=one))
    zero = cs_from_real(poly_zero(a.cap, like=a.slots[0].re.coeffs[0]))
    acc = EvenSeries(tuple([unit] + [zero] * (a.nslots - 1)))
    sq = a
    while k:
        if k & 1:
            acc = even_mul(acc, sq)
        k >>= 1
        if k:
            sq = even_mul(sq, sq)
    return acc


def even_shift(a: EvenSeries) -> EvenSeries:
    """Multiply by sigma^2: prepend a zero slot, keep the slot count."""
    zero = cs_from_real(poly_zero(a.cap, like=a.slots[0].re.coeffs[0]))
    return EvenSeries((zero,) + a.slots[:-1])


# ---------------------------------------------------------------------------
# sigma expansions and jet evaluation


@dataclass(frozen=True)
class SigmaExpansion:
    """phi(t, sigma) = sum_{k=0}^{K} f_k(t) sigma^(2k) / (2k)!.

    terms[k] stores the bare f_k, all at one common degree cap. The
    base-point conditions f0(0) = f0'(0) = f0''(0) = 0 and f1(0) = 0 are the
    normalized-arc convention and are enforced exactly.
    """

    n: int
    terms: tuple

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("SigmaExpansion: n must be >= 2")
        if len(self.terms) == 0:
            raise SeriesShapeError("SigmaExpansion: needs at least f0")
        cap = self.terms[0].cap
        for f in self.terms:
            if f.cap != cap:
                raise SeriesShapeError("SigmaExpansion: term caps differ")
        f0 = self.terms[0]
        bad = [c for c in f0.coeffs[: min(3, cap + 1)] if c != 0]
        if bad:
            raise ValueError(
                "SigmaExpansion: f0 must vanish to second order at t=0"
            )
        if len(self.terms) > 1 and self.terms[1].coeffs[0] != 0:
            raise ValueError("SigmaExpansion: f1(0) must vanish")
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def K(self) -> int:
        return len(self.terms) - 1

    @property
    def cap(self) -> int:
        return self.terms[0].cap


@dataclass(frozen=True)
class PhiJet:
    """Value and the second-order partials of phi at one (t, sigma)."""

    phi: object
    phi_t: object
    phi_sigma: object
    phi_tt: object
    phi_sigmat: object
    phi_sigmasigma: object
    phi_sigma_over_sigma: object


class SigmaJetEvaluator:
    """Precomputed derivative coefficients for repeated jet evaluation."""

    def __init__(self, exp: SigmaExpansion):
        self.exp = exp
        self._f = list(exp.terms)
        self._fp = [poly_derivative(f) for f in self._f]
        self._fpp = [poly_derivative(fp) for fp in self._fp]
        self._fact = [math.factorial(2 * k) for k in range(len(self._f))]
        self._fact_odd = [math.factorial(2 * k + 1) for k in range(len(self._f))]

    def jet(self, t, sigma) -> PhiJet:
        f = [poly_eval(p, t) for p in self._f]
        fp = [poly_eval(p, t) for p in self._fp]
        fpp = [poly_eval(p, t) for p in self._fpp]
        s2 = sigma * sigma
        z = t * 0
        phi = z
        phi_t = z
        phi_tt = z
        phi_s = z
        phi_st = z
        phi_ss = z
        q = z  # phi_sigma / sigma, regular at sigma = 0
        # Horner in s2, highest k first
        K = len(f) - 1
        for k in range(K, -1, -1):
            phi = phi * s2 + f[k] / self._fact[k]
            phi_t = phi_t * s2 + fp[k] / self._fact[k]
            phi_tt = phi_tt * s2 + fpp[k] / self._fact[k]
            if k >= 1:
                q = q * s2 + f[k] / self._fact_odd[k - 1]
                phi_ss = phi_ss * s2 + f[k] / self._fact[k - 1]
                phi_st = phi_st * s2 + fp[k] / self._fact_odd[k - 1]
        phi = phi
        phi_s = q * sigma
        phi_st = phi_st * sigma
        return PhiJet(
            phi=phi,
            phi_t=phi_t,
            phi_sigma=phi_s,
            phi_tt=phi_tt,
            phi_sigmat=phi_st,
            phi_sigmasigma=phi_ss,
            phi_sigma_over_sigma=q,
        )


def sigma_eval_with_partials(exp: SigmaExpansion, t, sigma) -> PhiJet:
    """phi and its partials at (t, sigma); exact at sigma = 0.

    The odd-looking (2k-1)! bookkeeping: d/dsigma sigma^(2k)/(2k)! =
    sigma^(2k-1)/(2k-1)!, so phi_sigma/sigma and phi_sigmat pick up the odd
    factorials while phi_sigmasigma uses (2k-2)!.
    """
    return SigmaJetEvaluator(exp).jet(t, sigma)
