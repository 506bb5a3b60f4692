"""Series extension engine.

Given a normalized arc potential f0, the extension of the arc to an
SO(n)-invariant special Lagrangian graph is the even series
phi(t, sigma) = sum f_k(t) sigma^(2k)/(2k)! determined order by order:

* f1 = -tan(arctan(f0'') / n) kills the sigma^0 coefficient of the PDE;
* R = (1 + i f1)^n (1 + i f0'') is then real, R(0) = 1, and the sigma^(2k)
  coefficient of the regularized PDE is affine in f_{k+1} with slope
  R/(1+f1^2) * (2k+n)/(2k+1)!, so each f_{k+1} is solved by evaluating the
  coefficient with f_{k+1} = 0 and dividing.

Each recursion step consumes two t-degrees (it differentiates f_k twice),
so a degree-D potential supports K <= D/2 sigma-orders; the engine tracks
the descending caps and returns all terms re-truncated to the common cap
D - 2K.

The same graded expansion evaluated with all known terms gives the PDE
residual; the singular second-order normal form behind the recursion is
checked numerically in ``gt_hypotheses_check``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .arcs import ArcSpec, Frame, existence_gate, normalize_at, tangent_angles
from .errors import (
    CoverageError,
    DegreeExhaustionError,
    GateObstructionError,
    NormalizationError,
    SeriesShapeError,
)
from .precision import FLOAT64, Context
from .series import (
    ComplexSeries,
    EvenSeries,
    SigmaExpansion,
    SigmaJetEvaluator,
    TaylorPoly,
    analytic_compose,
    complex_int_pow,
    even_add,
    even_int_pow,
    even_mul,
    even_shift,
    poly_add,
    poly_derivative,
    poly_eval,
    poly_mul,
    poly_neg,
    poly_one,
    poly_reciprocal,
    poly_truncate,
    poly_zero,
    sigma_eval_with_partials,
)


def _scale_ratio(p: TaylorPoly, num: int, den: int) -> TaylorPoly:
    return TaylorPoly(tuple(c * num / den for c in p.coeffs))


def _max_abs(p: TaylorPoly) -> float:
    return max(abs(float(c)) for c in p.coeffs)


def _require_flat_base(f0: TaylorPoly) -> TaylorPoly:
    """Check f0(0) = f0'(0) = f0''(0) = 0 and clear rounding residue."""
    if f0.cap < 2:
        raise DegreeExhaustionError("f0 needs degree cap >= 2")
    scale = max(1.0, _max_abs(f0))
    head = f0.coeffs[:3]
    if any(abs(float(c)) > 1e-10 * scale for c in head):
        raise NormalizationError(
            "f0 must vanish to second order at t = 0 (normalize the arc first)"
        )
    z = f0.coeffs[0] * 0
    return TaylorPoly((z, z, z) + f0.coeffs[3:])


def compute_f1(f0: TaylorPoly, n: int) -> TaylorPoly:
    """First correction term: f1 = -tan(arctan(f0'') / n), cap D - 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    f0 = _require_flat_base(f0)
    f0pp = poly_derivative(poly_derivative(f0))
    alpha = analytic_compose("arctan", f0pp)
    alpha_over_n = TaylorPoly(tuple(c / n for c in alpha.coeffs))
    return poly_neg(analytic_compose("tan", alpha_over_n))


def compute_R(f0: TaylorPoly, n: int, f1: Optional[TaylorPoly] = None,
              im_tol: float = 1e-13) -> TaylorPoly:
    """R = (1 + i f1)^n (1 + i f0''), which is real once f1 solves the
    sigma^0 equation. The imaginary part is asserted below im_tol and
    dropped; R(0) = 1."""
    f0 = _require_flat_base(f0)
    if f1 is None:
        f1 = compute_f1(f0, n)
    f0pp = poly_derivative(poly_derivative(f0))
    cap = min(f1.cap, f0pp.cap)
    one = poly_one(cap, like=_one_scalar(f0))
    base = ComplexSeries(one, poly_truncate(f1, cap))
    last = ComplexSeries(one, poly_truncate(f0pp, cap))
    prod = _cs_mul(complex_int_pow(base, n), last)
    # rounding noise in the cancellation tracks the size of f1's own
    # coefficients, not just the surviving real part
    scale = max(1.0, _max_abs(prod.re), _max_abs(f1))
    if _max_abs(prod.im) > im_tol * scale:
        raise NormalizationError(
            "imaginary part of (1+i f1)^n (1+i f0'') did not cancel; "
            "f1 does not solve the base equation"
        )
    return prod.re


def _cs_mul(a: ComplexSeries, b: ComplexSeries) -> ComplexSeries:
    from .series import cs_mul

    return cs_mul(a, b)


def _one_scalar(p: TaylorPoly):
    return p.coeffs[0] * 0 + 1


def regular_pde_even_series(terms: Sequence[TaylorPoly], n: int, slots: int,
                            cap: int) -> EvenSeries:
    """The regularized PDE left side as an even sigma-series.

    Returns (1 + i q)^(n-1) * ((1 + i phi_tt)(1 + i phi_ss) + phi_st^2)
    with q = phi_sigma/sigma, built from the bare terms f_0..f_J (missing
    terms are treated as zero). All slot polynomials live at ``cap``;
    the f_j supplied must have caps >= cap + 2 for every differentiated
    term actually used.
    """
    if slots < 1:
        raise ValueError("slots must be >= 1")
    zero_scalar = terms[0].coeffs[0] * 0
    one_scalar = zero_scalar + 1
    zp = poly_zero(cap, like=zero_scalar)
    op = poly_one(cap, like=one_scalar)

    def bare(k: int) -> Optional[TaylorPoly]:
        if k < len(terms):
            return terms[k]
        return None

    def trunc(p: TaylorPoly) -> TaylorPoly:
        if p.cap < cap:
            raise SeriesShapeError(
                "term cap too small for the requested slot cap"
            )
        return poly_truncate(p, cap)

    q_slots, b_slots, t_slots, o_slots = [], [], [], []
    for j in range(slots):
        fj1 = bare(j + 1)
        fj = bare(j)
        f_odd = math.factorial(2 * j + 1)
        f_even = math.factorial(2 * j)
        q_slots.append(
            zp if fj1 is None else _scale_ratio(trunc(fj1), 1, f_odd)
        )
        b_slots.append(
            zp if fj1 is None else _scale_ratio(trunc(fj1), 1, f_even)
        )
        if fj is None:
            t_slots.append(zp)
        else:
            if fj.cap < cap + 2:
                raise SeriesShapeError(
                    "term cap too small to differentiate twice at this slot cap"
                )
            d2 = poly_derivative(poly_derivative(fj))
            t_slots.append(_scale_ratio(trunc(d2), 1, f_even))
        if fj1 is None:
            o_slots.append(zp)
        else:
            if fj1.cap < cap + 1:
                raise SeriesShapeError(
                    "term cap too small to differentiate at this slot cap"
                )
            o_slots.append(
                _scale_ratio(trunc(poly_derivative(fj1)), 1, f_odd)
            )

    def real_even(slot_list) -> EvenSeries:
        return EvenSeries(tuple(ComplexSeries(s, zp) for s in slot_list))

    def one_plus_i(slot_list) -> EvenSeries:
        out = [ComplexSeries(op, slot_list[0])]
        out += [ComplexSeries(zp, s) for s in slot_list[1:]]
        return EvenSeries(tuple(out))

    w = one_plus_i(q_slots)          # 1 + i q
    pt = one_plus_i(t_slots)         # 1 + i phi_tt
    pb = one_plus_i(b_slots)         # 1 + i phi_ss
    o = real_even(o_slots)           # phi_st / sigma (odd part factor)
    inner = even_add(even_mul(pt, pb), even_shift(even_mul(o, o)))
    return even_mul(even_int_pow(w, n - 1), inner)


def extend_series(f0: TaylorPoly, n: int, K: int) -> SigmaExpansion:
    """Solve for f_1..f_K; returns the expansion at the common cap D - 2K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    f0 = _require_flat_base(f0)
    D = f0.cap
    if D < 2 * K:
        raise DegreeExhaustionError(
            f"degree cap {D} supports at most K = {D // 2}; requested {K}"
        )
    f1 = compute_f1(f0, n)
    r = compute_R(f0, n, f1=f1)
    one = poly_one(f1.cap, like=_one_scalar(f0))
    one_plus_f1sq = poly_add(one, poly_mul(f1, f1))
    pref = poly_mul(one_plus_f1sq, poly_reciprocal(r))  # (1+f1^2)/R
    terms = [f0, f1]
    for k in range(1, K):
        cap_k = D - 2 * (k + 1)
        ev = regular_pde_even_series(terms, n, slots=k + 1, cap=cap_k)
        e_k = ev.slots[k].im
        step = poly_mul(e_k, poly_truncate(pref, cap_k))
        f_next = poly_neg(
            _scale_ratio(step, math.factorial(2 * k + 1), 2 * k + n)
        )
        terms.append(f_next)
    cap_out = D - 2 * K
    uniform = tuple(poly_truncate(f, cap_out) for f in terms)
    return SigmaExpansion(n=n, terms=uniform)


def linearity_probe(f0: TaylorPoly, n: int, k: int, delta: float = 1e-3) -> float:
    """Max coefficient deviation of the affine law for the sigma^(2k)
    coefficient: perturbing f_{k+1} by a constant delta must shift the
    coefficient by exactly delta * R/(1+f1^2) * (2k+n)/(2k+1)!."""
    if k < 1:
        raise ValueError("k must be >= 1")
    f0 = _require_flat_base(f0)
    D = f0.cap
    if D < 2 * (k + 1):
        raise DegreeExhaustionError("degree cap too small for this k")
    cap_k = D - 2 * (k + 1)
    terms = _terms_at_native_caps(f0, n, k)
    f1 = terms[1]
    r = compute_R(f0, n, f1=f1)
    dconst = _const(delta, D, like=f0.coeffs[0])
    base = regular_pde_even_series(terms, n, k + 1, cap_k)
    bumped = regular_pde_even_series(terms + [dconst], n, k + 1, cap_k)
    diff = poly_add(bumped.slots[k].im, poly_neg(base.slots[k].im))
    one = poly_one(f1.cap, like=_one_scalar(f0))
    slope = poly_mul(
        poly_truncate(r, cap_k),
        poly_reciprocal(
            poly_truncate(poly_add(one, poly_mul(f1, f1)), cap_k)
        ),
    )
    predicted = _scale_ratio(
        slope, 2 * k + n, math.factorial(2 * k + 1)
    )
    predicted = TaylorPoly(tuple(c * delta for c in predicted.coeffs))
    dev = poly_add(diff, poly_neg(predicted))
    return _max_abs(dev)


def _terms_at_native_caps(f0: TaylorPoly, n: int, K: int) -> list:
    """f_0..f_K with f_j at its native cap D - 2j (recomputed)."""
    D = f0.cap
    f1 = compute_f1(f0, n)
    r = compute_R(f0, n, f1=f1)
    one = poly_one(f1.cap, like=_one_scalar(f0))
    pref = poly_mul(poly_add(one, poly_mul(f1, f1)), poly_reciprocal(r))
    terms = [f0, f1]
    for k in range(1, K):
        cap_k = D - 2 * (k + 1)
        ev = regular_pde_even_series(terms, n, slots=k + 1, cap=cap_k)
        step = poly_mul(ev.slots[k].im, poly_truncate(pref, cap_k))
        terms.append(
            poly_neg(_scale_ratio(step, math.factorial(2 * k + 1), 2 * k + n))
        )
    return terms


def _const(c, cap, like):
    z = like * 0
    return TaylorPoly((z + c,) + tuple(z for _ in range(cap)))


# ---------------------------------------------------------------------------
# residual sampling


@dataclass(frozen=True)
class ResidualReport:
    max_pde: Optional[float]
    max_omega: Optional[float]
    max_upsilon: Optional[float]
    max_momentum: Optional[float]
    samples: int
    grid: str


def pde_lhs_value(exp: SigmaExpansion, t, sigma, evaluator=None):
    """Pointwise singular PDE left side
    Im[(sigma + i phi_sigma)^(n-1)((1+i phi_tt)(1+i phi_ss) + phi_st^2)]."""
    jet = (evaluator or SigmaJetEvaluator(exp)).jet(t, sigma)
    one = (t * 0) + 1
    a = _c(sigma, jet.phi_sigma)
    b = _c(one, jet.phi_tt)
    c = _c(one, jet.phi_sigmasigma)
    st = jet.phi_sigmat
    val = (a ** (exp.n - 1)) * (b * c + st * st)
    return val.imag


def _c(re, im):
    # complex() would silently round mpf scalars through float
    if isinstance(re, (int, float)) and isinstance(im, (int, float)):
        return complex(re, im)
    import mpmath

    return mpmath.mpc(re, im)


def pde_residual(exp: SigmaExpansion, t_values, sigma_values) -> ResidualReport:
    """Max |PDE left side| over the tensor grid of the given values."""
    ev = SigmaJetEvaluator(exp)
    worst = 0.0
    count = 0
    for t in t_values:
        for s in sigma_values:
            val = abs(float(pde_lhs_value(exp, t, s, evaluator=ev)))
            worst = max(worst, val)
            count += 1
    grid = (
        f"t[{float(min(t_values)):.4g},{float(max(t_values)):.4g}]x"
        f"sigma[{float(min(sigma_values)):.4g},{float(max(sigma_values)):.4g}]"
    )
    return ResidualReport(
        max_pde=worst, max_omega=None, max_upsilon=None, max_momentum=None,
        samples=count, grid=grid,
    )


# ---------------------------------------------------------------------------
# singular normal form check


def gt_g_value(n: int, sigma, z, f0pp, f1, f1p, f1pp):
    """The six-variable normal form G evaluated pointwise (float).

    z = (z00, z01, z10, z02, z11, z20), the placeholders for
    (u, u_t, sigma u_s, u_tt, sigma u_st, sigma^2 u_ss).
    """
    z00, z01, z10, z02, z11, z20 = z
    lead = (1 + 1j * (f1 + 2 * z00 + z10)) ** (n - 1)
    quad = sigma * sigma * (f1p + 2 * z01 + z11) ** 2
    fac_t = 1 + 1j * (f0pp + 0.5 * (f1pp + z02) * sigma * sigma)
    fac_s = 1 + 1j * (f1 + 2 * z00 + 4 * z10 + z20)
    return (lead * (quad + fac_t * fac_s)).imag


@dataclass(frozen=True)
class GTReport:
    n: int
    cond1_max: float
    cond2_max: float
    partials: tuple
    expected: tuple
    cond4_min: float
    passed: bool


def gt_hypotheses_check(f0: TaylorPoly, n: int, t_span: float = 0.2,
                        t_points: int = 21,
                        steps: Sequence[float] = (1e-4, 1e-5, 1e-6),
                        k_max: int = 1000, tol_id: float = 1e-9,
                        tol_partial: float = 1e-7) -> GTReport:
    """Numerical check of the singular normal form hypotheses.

    (1) G(t, 0) = 0 along the arc; (2) the partials in the first-order
    sigma-placeholders vanish at sigma = 0; (3) the partials in
    (z20, z10, z00) at the base point are (1, n+3, 2n); (4) the indicial
    polynomial k^2 + (n+3)k + 2n has no positive integer roots.
    Derivatives are centered differences over the step sweep, Richardson-
    extrapolated across consecutive steps.
    """
    f0 = _require_flat_base(f0)
    if f0.cap < 6:
        raise DegreeExhaustionError("gt check needs f0 cap >= 6")
    f1 = compute_f1(f0, n)
    f0pp = poly_derivative(poly_derivative(f0))
    f1p = poly_derivative(f1)
    f1pp = poly_derivative(f1p)

    def coeffs_at(t: float):
        return (
            float(poly_eval(f0pp, t)),
            float(poly_eval(f1, t)),
            float(poly_eval(f1p, t)),
            float(poly_eval(f1pp, t)),
        )

    t_grid = [
        -t_span + 2 * t_span * j / (t_points - 1) for j in range(t_points)
    ]
    zeros = (0.0,) * 6
    cond1 = 0.0
    cond2 = 0.0
    for t in t_grid:
        c0, c1, c1p, c1pp = coeffs_at(t)
        cond1 = max(cond1, abs(gt_g_value(n, 0.0, zeros, c0, c1, c1p, c1pp)))
        for var in (1, 4, 3):  # z01, z11, z02
            cond2 = max(
                cond2,
                abs(_fd_partial(n, 0.0, var, c0, c1, c1p, c1pp, steps)),
            )
    c0, c1, c1p, c1pp = coeffs_at(0.0)
    partials = tuple(
        _fd_partial(n, 0.0, var, c0, c1, c1p, c1pp, steps)
        for var in (5, 2, 0)  # z20, z10, z00
    )
    expected = (1.0, float(n + 3), float(2 * n))
    cond4_min = min(
        k * k + (n + 3) * k + 2 * n for k in range(1, k_max + 1)
    )
    ok = (
        cond1 <= tol_id
        and cond2 <= tol_id
        and all(
            abs(p - e) <= tol_partial for p, e in zip(partials, expected)
        )
        and cond4_min > 0
    )
    return GTReport(
        n=n, cond1_max=cond1, cond2_max=cond2, partials=partials,
        expected=expected, cond4_min=float(cond4_min), passed=ok,
    )


def _fd_partial(n, sigma, var, f0pp, f1, f1p, f1pp, steps):
    def g_at(h):
        z = [0.0] * 6
        z[var] = h
        return gt_g_value(n, sigma, tuple(z), f0pp, f1, f1p, f1pp)

    ests = [(g_at(h) - g_at(-h)) / (2 * h) for h in steps]
    best = ests[0]
    for j in range(1, len(ests)):
        ratio = (steps[j - 1] / steps[j]) ** 2
        best = (ratio * ests[j] - ests[j - 1]) / (ratio - 1)
    return best


# ---------------------------------------------------------------------------
# radius estimate and charts


@dataclass(frozen=True)
class RadiusEstimate:
    C: float
    M: float
    rho_sigma: float
    fit_quality: float


def estimate_radius(exp: SigmaExpansion, t_radius: float = 0.15) -> RadiusEstimate:
    """Least-squares growth fit of the computed terms.

    The amplitude proxy for f_k is the l1 coefficient norm weighted by
    t_radius**j, an upper envelope of |f_k| on |t| <= t_radius.  This is
    insensitive to f_k(0) vanishing (odd arcs) and to rounding dust in
    individual coefficients.  Fits log(amp) against k for the envelope
    |f_k| <= C/M^k and log(amp/(2k)!) for the sigma-radius of the
    factorial-normalized series.  An identically zero tail yields the
    infinite-radius marker.
    """
    import numpy as np

    ks, amps = [], []
    for k in range(1, exp.K + 1):
        a = 0.0
        w = 1.0
        for c in exp.terms[k].coeffs:
            a += abs(float(c)) * w
            w *= t_radius
        if a > 0.0:
            ks.append(float(k))
            amps.append(a)
    if len(ks) < 2:
        return RadiusEstimate(
            C=0.0, M=math.inf, rho_sigma=math.inf, fit_quality=1.0
        )
    ks_arr = np.asarray(ks)
    log_env = np.log(np.asarray(amps))
    log_norm = np.asarray(
        [
            math.log(a) - math.lgamma(2 * k + 1)
            for k, a in zip(ks_arr, amps)
        ]
    )
    slope_env, _ = np.polyfit(ks_arr, log_env, 1)
    slope_nrm, icept_nrm = np.polyfit(ks_arr, log_norm, 1)
    fitted = slope_nrm * ks_arr + icept_nrm
    ss_res = float(np.sum((log_norm - fitted) ** 2))
    ss_tot = float(np.sum((log_norm - log_norm.mean()) ** 2))
    quality = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    m_env = math.exp(-slope_env)
    c_env = max(
        a * m_env**k for k, a in zip(ks_arr, amps)
    )
    rho = math.exp(-slope_nrm / 2.0)
    return RadiusEstimate(
        C=float(c_env), M=float(m_env), rho_sigma=float(rho),
        fit_quality=float(quality),
    )


@dataclass(frozen=True)
class Chart:
    """One extension chart: branch and frame back into ambient coordinates,
    plus the solved expansion and its growth estimate."""

    n: int
    branch: int
    frame: Frame
    phi: SigmaExpansion
    radius: Optional[RadiusEstimate] = None
    center_param: Optional[float] = None

    def __post_init__(self):
        if not 0 <= self.branch < self.n:
            raise ValueError("branch must lie in [0, n)")
        if self.phi.n != self.n:
            raise ValueError("chart n and expansion n disagree")

    @property
    def K(self) -> int:
        return self.phi.K

    @property
    def D(self) -> int:
        """Degree budget the chart was built from (terms end at cap D - 2K)."""
        return self.phi.cap + 2 * self.phi.K


def extend_arc(arc: ArcSpec, s0, n: int, K: int, D: int, branch: int = 0,
               ctx: Context = FLOAT64, with_radius: bool = True) -> Chart:
    """Normalize the arc at s0 and extend: the single-chart pipeline."""
    na = normalize_at(arc, s0, n, cap=D, ctx=ctx)
    exp = extend_series(na.f0, n, K)
    radius = estimate_radius(exp) if with_radius else None
    return Chart(
        n=n, branch=branch, frame=na.frame, phi=exp, radius=radius,
        center_param=float(ctx.to_float(s0)),
    )


def build_atlas(arc: ArcSpec, n: int, K: int, D: int, spacing, branch: int = 0,
                ctx: Context = FLOAT64, t_halfwidth=None,
                gate_samples: int = 512) -> list:
    """Charts centered along the arc with branch continuity.

    Closed arcs must pass the existence gate. The effective branch of each
    chart follows the unwrapped tangent angle so that neighbouring charts
    extend each other rather than jumping to a different sheet; each full
    turn of the tangent shifts the branch index by 2 mod n.
    """
    spacing = float(spacing)
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    if arc.closed:
        gate = existence_gate(arc, n, samples=gate_samples)
        if not gate.ok:
            raise GateObstructionError(
                f"closed arc obstruction: branch shift {gate.shift} mod {n}"
            )
        period = float(arc.period)
        count = max(1, math.ceil(period / spacing - 1e-9))
        eff = period / count
        centers = [j * eff for j in range(count)]
    else:
        lo, hi = float(arc.domain[0]), float(arc.domain[1])
        count = max(1, math.ceil((hi - lo) / spacing - 1e-9))
        eff = (hi - lo) / count
        centers = [lo + (j + 0.5) * eff for j in range(count)]
    halfwidth = 0.75 * eff if t_halfwidth is None else float(t_halfwidth)
    if halfwidth < 0.5 * eff:
        raise CoverageError(
            f"chart halfwidth {halfwidth:.4g} below half the spacing "
            f"{eff:.4g}; atlas would leave gaps"
        )
    # dense unwrap grid through the centers
    refine = 16
    if len(centers) == 1:
        dense = [centers[0]]
    else:
        m = refine * (len(centers) - 1) + 1
        step = (centers[-1] - centers[0]) / (m - 1)
        dense = [centers[0] + step * j for j in range(m)]
    betas = tangent_angles(arc, dense)
    charts = []
    for j, s in enumerate(centers):
        beta = betas[j * refine]
        chi_unwrapped = -beta
        chi_principal = chi_unwrapped % (2 * math.pi)
        wraps = round((chi_unwrapped - chi_principal) / (2 * math.pi))
        j_eff = (branch + 2 * wraps) % n
        charts.append(
            extend_arc(
                arc, ctx.real(s), n, K, D, branch=j_eff, ctx=ctx,
            )
        )
    return charts


def chart_cast(chart: Chart, ctx: Context) -> Chart:
    """Re-express a chart's numbers in another precision context."""
    def cast_poly(p: TaylorPoly) -> TaylorPoly:
        return TaylorPoly(tuple(ctx.real(float(c)) for c in p.coeffs))

    terms = tuple(cast_poly(f) for f in chart.phi.terms)
    frame = Frame(
        a=ctx.make_complex(float(chart.frame.a.real),
                           float(chart.frame.a.imag)),
        theta=ctx.real(float(chart.frame.theta)),
    )
    return Chart(
        n=chart.n, branch=chart.branch, frame=frame,
        phi=SigmaExpansion(n=chart.n, terms=terms), radius=chart.radius,
        center_param=chart.center_param,
    )


class ReducedChartMap:
    """Evaluation of the chart surface in reduced coordinates (w, zeta),
    with the analytic Jacobian. Ambient distance between same-direction
    points equals the reduced distance, which is what the overlap
    measurement needs."""

    def __init__(self, chart: Chart, ctx: Context = FLOAT64):
        self.chart = chart
        self.ctx = ctx
        self.ev = SigmaJetEvaluator(chart.phi)
        n = chart.n
        theta = chart.frame.theta
        self.w_phase = ctx.exp_i(-n * theta)
        pi = ctx.pi()
        self.z_phase = ctx.exp_i(theta + chart.branch * pi / n)
        self.a = chart.frame.a

    def point(self, t, sigma):
        jet = self.ev.jet(t, sigma)
        w_g = self.ctx.make_complex(t, jet.phi_t)
        z_g = self.ctx.make_complex(sigma, jet.phi_sigma)
        return self.w_phase * (w_g - self.a), self.z_phase * z_g

    def point_and_jacobian(self, t, sigma):
        jet = self.ev.jet(t, sigma)
        one = (t * 0) + 1
        w_g = self.ctx.make_complex(t, jet.phi_t)
        z_g = self.ctx.make_complex(sigma, jet.phi_sigma)
        w = self.w_phase * (w_g - self.a)
        z = self.z_phase * z_g
        dw_dt = self.w_phase * self.ctx.make_complex(one, jet.phi_tt)
        dw_ds = self.w_phase * self.ctx.make_complex(t * 0, jet.phi_sigmat)
        dz_dt = self.z_phase * self.ctx.make_complex(t * 0, jet.phi_sigmat)
        dz_ds = self.z_phase * self.ctx.make_complex(one, jet.phi_sigmasigma)
        return (w, z), (dw_dt, dw_ds, dz_dt, dz_ds)


def overlap_agreement(c1: Chart, c2: Chart, sigma_max, samples: int = 24,
                      t_halfwidth=None, t_halfwidth_other=None,
                      ctx: Context = FLOAT64, gn_iterations: int = 30) -> float:
    """Sup over sampled points of chart 1 of the distance to chart 2.

    Sample points on chart 1 are projected onto chart 2 by Gauss-Newton in
    reduced coordinates (the direction vector drops out of the distance for
    SO(n)-orbit surfaces). Points whose projection leaves chart 2's window
    are not in the overlap and are skipped; if no sample projects into
    chart 2 the domains are disjoint, which is an error.
    """
    sigma_max = ctx.real(sigma_max)
    w1 = ctx.real(t_halfwidth if t_halfwidth is not None
                  else 4 * float(sigma_max))
    w2 = ctx.real(t_halfwidth_other if t_halfwidth_other is not None
                  else 4 * float(sigma_max))
    nt = max(2, int(round(math.sqrt(samples))))
    ns = max(2, int(math.ceil(samples / nt)))
    map1 = ReducedChartMap(c1, ctx)
    map2 = ReducedChartMap(c2, ctx)
    # coarse seeding runs in float precision
    f1map = ReducedChartMap(chart_cast(c1, FLOAT64), FLOAT64)
    f2map = ReducedChartMap(chart_cast(c2, FLOAT64), FLOAT64)
    seed_t = [
        -float(w2) + 2 * float(w2) * j / 20 for j in range(21)
    ]
    seed_s = [
        -float(sigma_max) + 2 * float(sigma_max) * j / 10 for j in range(11)
    ]
    worst = None
    hit = 0
    for it in range(nt):
        for js in range(ns):
            t1 = -w1 + 2 * w1 * it / (nt - 1)
            s1 = -sigma_max + 2 * sigma_max * js / (ns - 1)
            p1 = map1.point(t1, s1)
            p1f = f1map.point(float(t1), float(s1))
            seed = min(
                ((tt, ss) for tt in seed_t for ss in seed_s),
                key=lambda ts: _dist2_f(f2map.point(ts[0], ts[1]), p1f),
            )
            t2, s2 = ctx.real(seed[0]), ctx.real(seed[1])
            t2, s2, dist = _gauss_newton_project(
                map2, p1, t2, s2, ctx, gn_iterations
            )
            if float(abs(t2)) > 1.05 * float(w2) or (
                float(abs(s2)) > 1.2 * float(sigma_max)
            ):
                continue
            hit += 1
            d = float(dist)
            if worst is None or d > worst:
                worst = d
    if hit == 0:
        raise CoverageError("charts have disjoint domains; no overlap")
    return worst


def _dist2_f(p, q):
    return abs(p[0] - q[0]) ** 2 + abs(p[1] - q[1]) ** 2


def _gauss_newton_project(cmap: ReducedChartMap, target, t, s, ctx,
                          iterations: int):
    tiny = ctx.real(ctx.eps) * 100
    for _ in range(iterations):
        (w, z), (dw_dt, dw_ds, dz_dt, dz_ds) = cmap.point_and_jacobian(t, s)
        rw = w - target[0]
        rz = z - target[1]
        a11 = (abs(dw_dt) ** 2 + abs(dz_dt) ** 2)
        a22 = (abs(dw_ds) ** 2 + abs(dz_ds) ** 2)
        a12 = (dw_dt.conjugate() * dw_ds + dz_dt.conjugate() * dz_ds).real
        b1 = -(dw_dt.conjugate() * rw + dz_dt.conjugate() * rz).real
        b2 = -(dw_ds.conjugate() * rw + dz_ds.conjugate() * rz).real
        det = a11 * a22 - a12 * a12
        if not float(abs(det)) > 0:
            break
        dt = (b1 * a22 - b2 * a12) / det
        ds = (b2 * a11 - b1 * a12) / det
        t = t + dt
        s = s + ds
        if float(abs(dt)) + float(abs(ds)) < float(tiny):
            break
    w, z = cmap.point(t, s)
    dist = ctx.sqrt(abs(w - target[0]) ** 2 + abs(z - target[1]) ** 2)
    return t, s, dist
