"""Tests of the extension recursion, its oracles, and chart assembly."""
from __future__ import annotations

import math
import random

import numpy as np
import pytest

from conftest import random_flat_potential
from slagext.arcs import existence_gate, graph_arc, unit_circle_arc
from slagext.engine import (
    Chart,
    build_atlas,
    compute_R,
    compute_f1,
    estimate_radius,
    extend_arc,
    extend_series,
    gt_hypotheses_check,
    linearity_probe,
    overlap_agreement,
    pde_lhs_value,
    pde_residual,
    regular_pde_even_series,
)
from slagext.errors import DegreeExhaustionError, GateObstructionError
from slagext.precision import mp_context
from slagext.series import (
    ComplexSeries,
    complex_int_pow,
    cs_mul,
    poly_derivative,
    poly_eval,
    poly_from,
    poly_one,
)

PARABOLA_F0 = poly_from([0.0, 0.0, 0.0, 1.0 / 6.0], 18)

# f1 for f0 = t^3/6, n = 2 is -tan(arctan(t)/2) = -(sqrt(1+t^2)-1)/t
F1_PARABOLA = [0.0, -0.5, 0.0, 0.125, 0.0, -0.0625, 0.0, 5.0 / 128.0, 0.0,
               -7.0 / 256.0]

# brute-force symbolic expansion of the graph equation to sigma^2
# (scripts/derive_f2_oracle.py), coefficients of f2 for f0 = t^3/6, n = 2
F2_PARABOLA = [0.0, -0.375, 0.0, 0.9375, 0.0, -1.6171875, 0.0, 2.37890625,
               0.0, -3.2021484375, 0.0, 4.07373046875, 0.0,
               -4.984588623046875]
F2_VALUES = {
    0.05: -0.018633316018807607759,
    0.1: -0.036578437146278731713,
    0.2: -0.067988609967767888205,
}


def test_f1_definition_matches_implicit_equation():
    rng = random.Random(71)
    for n in range(2, 7):
        f0 = random_flat_potential(rng, 20)
        f1 = compute_f1(f0, n)
        cap = f1.cap
        f0pp = poly_from(list(poly_derivative(poly_derivative(f0)).coeffs), cap)
        # Im((1+i f1)^n (1+i f0'')) must vanish coefficientwise
        lhs = cs_mul(complex_int_pow(ComplexSeries(poly_one(cap), f1), n),
                     ComplexSeries(poly_one(cap), f0pp))
        assert max(abs(c) for c in lhs.im.coeffs) <= 1e-13


def test_f1_parabola_frozen_coefficients():
    f1 = compute_f1(PARABOLA_F0, 2)
    for got, want in zip(f1.coeffs, F1_PARABOLA):
        assert abs(got - want) < 1e-15


def test_R_closed_form_parabola():
    # For f0'' = t, n = 2: R = 2(1+t^2)/(1+sqrt(1+t^2))
    R = compute_R(poly_from([0.0, 0.0, 0.0, 1.0 / 6.0], 40), 2)
    for t in (0.0, 0.1, 0.3, 0.45):
        closed = 2.0 * (1.0 + t * t) / (1.0 + math.sqrt(1.0 + t * t))
        assert abs(poly_eval(R, t) - closed) < 1e-14
    assert abs(poly_eval(R, 0.3) - 1.0665202104722216) < 1e-15
    # low-order coefficients of the closed form
    for got, want in zip(R.coeffs[:6], [1.0, 0.0, 0.75, 0.0, -0.125, 0.0]):
        assert abs(got - want) < 1e-15


def test_f2_matches_symbolic_oracle():
    exp = extend_series(PARABOLA_F0, n=2, K=2)
    f2 = exp.terms[2]
    for got, want in zip(f2.coeffs, F2_PARABOLA):
        assert abs(got - want) <= 1e-12
    # pointwise values need a deeper tail than the frozen coefficient list
    deep = extend_series(poly_from([0.0, 0.0, 0.0, 1.0 / 6.0], 36), n=2, K=2)
    for t, want in F2_VALUES.items():
        assert abs(poly_eval(deep.terms[2], t) - want) < 1e-12


def test_solved_slots_vanish():
    rng = random.Random(5)
    for n in (2, 3, 5):
        f0 = random_flat_potential(rng, 18)
        exp = extend_series(f0, n=n, K=4)
        ev = regular_pde_even_series(exp.terms, n, slots=exp.K, cap=exp.cap - 2)
        for k in range(exp.K):
            worst = max(abs(c) for c in ev.slots[k].im.coeffs)
            assert worst <= 1e-13


def test_flat_potential_stays_flat():
    f0 = poly_from([0.0], 12)
    exp = extend_series(f0, n=4, K=5)
    for term in exp.terms:
        assert all(c == 0.0 for c in term.coeffs)
    assert pde_lhs_value(exp, 0.2, 0.3) == 0.0


def test_linearity_of_order_k_equation():
    rng = random.Random(19)
    for n in (2, 3, 5):
        f0 = random_flat_potential(rng, 20)
        for k in range(1, 6):
            assert linearity_probe(f0, n, k) <= 1e-11


def test_degree_budget_guard():
    with pytest.raises(DegreeExhaustionError):
        extend_series(PARABOLA_F0, n=2, K=10)


def test_residual_decay_rate_float():
    arc = graph_arc(["0", "0", "0.5"])
    ts = [(-0.15 + 0.3 * i / 10) for i in range(11)]
    smaxes = [0.025, 0.05, 0.1]
    for K in (3, 4):
        ch = extend_arc(arc, 0.0, n=2, K=K, D=2 * K + 16, with_radius=False)
        worsts = []
        for sm in smaxes:
            sig = [sm * j / 8 for j in range(1, 9)]
            worsts.append(pde_residual(ch.phi, ts, sig).max_pde)
        slope = np.polyfit(np.log(smaxes), np.log(worsts), 1)[0]
        assert slope >= 2 * K - 1
        # the measured law carries the sigma^{n-1} prefactor as well
        assert slope == pytest.approx(2 * K + 1, abs=0.3)


def test_normal_form_hypotheses_small_n():
    for n in (2, 3, 5):
        rep = gt_hypotheses_check(PARABOLA_F0, n)
        assert rep.cond1_max <= 1e-9
        assert rep.cond2_max <= 1e-9
        for got, want in zip(rep.partials, rep.expected):
            assert abs(got - want) <= 1e-7
        assert rep.expected == (1.0, n + 3.0, 2.0 * n)
        assert rep.cond4_min > 0
        # k^2 + (n+3)k + 2n is minimized at k = 1
        assert rep.cond4_min == 1 + (n + 3) + 2 * n
        assert rep.passed


def test_radius_estimates():
    circle = extend_arc(unit_circle_arc(), 0.0, n=2, K=10, D=40)
    est = circle.radius
    assert 1.0 <= est.rho_sigma <= 3.0
    assert est.fit_quality >= 0.9
    assert 0.0 < est.C and 0.0 < est.M < math.inf

    flat = extend_arc(graph_arc(["0"]), 0.0, n=3, K=6, D=20)
    assert flat.radius.rho_sigma == math.inf
    assert flat.radius.M == math.inf
    assert flat.radius.C == 0.0

    # residual is far smaller well inside the estimated radius than near it
    ts = [(-0.1 + 0.2 * i / 8) for i in range(9)]
    res = {}
    for frac in (0.5, 0.9):
        s = frac * est.rho_sigma
        res[frac] = pde_residual(circle.phi, ts,
                                 [s * j / 6 for j in range(1, 7)]).max_pde
    assert res[0.5] < 1e-4 < res[0.9]


def test_extend_arc_chart_contents():
    arc = unit_circle_arc()
    ch = extend_arc(arc, 0.3, n=3, K=4, D=16, branch=2)
    assert isinstance(ch, Chart)
    assert ch.n == 3 and ch.branch == 2
    assert ch.K == 4 and ch.D == 16
    assert ch.center_param == 0.3
    # base-point independence of the circle potential
    other = extend_arc(arc, 1.1, n=3, K=4, D=16, branch=2)
    for a, b in zip(ch.phi.terms, other.phi.terms):
        for x, y in zip(a.coeffs, b.coeffs):
            assert abs(x - y) < 1e-10


def test_atlas_construction_and_gate():
    arc = unit_circle_arc()
    charts = build_atlas(arc, n=2, K=4, D=16, spacing=2 * math.pi / 12)
    assert len(charts) == 12
    assert len({c.branch for c in charts}) == 1
    with pytest.raises(GateObstructionError):
        build_atlas(arc, n=3, K=4, D=16, spacing=2 * math.pi / 12)
    # open arcs are never gated
    parab = graph_arc(["0", "0", "0.5"])
    assert existence_gate(parab, 3).ok
    charts = build_atlas(parab, n=3, K=4, D=16, spacing=0.5)
    assert len(charts) >= 4


def test_overlap_identical_and_adjacent():
    arc = unit_circle_arc()
    spacing = 2 * math.pi / 12
    w = 0.75 * spacing
    c1 = extend_arc(arc, 0.0, n=2, K=10, D=40, with_radius=False)
    assert overlap_agreement(c1, c1, 0.05, samples=9) == 0.0
    c2 = extend_arc(arc, spacing, n=2, K=10, D=40, with_radius=False)
    v10 = overlap_agreement(c1, c2, 0.05, samples=24, t_halfwidth=w,
                            t_halfwidth_other=w)
    assert 0.0 < v10 <= 1e-9


def test_overlap_distinct_branches_separated():
    arc = unit_circle_arc()
    c0 = extend_arc(arc, 0.0, n=2, K=6, D=24, branch=0)
    c1 = extend_arc(arc, 0.0, n=2, K=6, D=24, branch=1)
    v = overlap_agreement(c0, c1, 0.05, samples=16)
    assert v >= 0.01


def test_residual_report_shape():
    ch = extend_arc(graph_arc(["0", "0", "0.5"]), 0.0, n=2, K=3, D=12,
                    with_radius=False)
    rep = pde_residual(ch.phi, [0.0, 0.1], [0.01, 0.02])
    assert rep.samples == 4
    assert rep.max_pde > 0.0
    assert "sigma[" in rep.grid


def test_extension_in_high_precision_matches_float():
    ctx = mp_context(30)
    f0 = poly_from([ctx.real("0"), ctx.real("0"), ctx.real("0"),
                    ctx.real("1") / 6], 18)
    exp = extend_series(f0, n=2, K=2)
    for got, want in zip(exp.terms[2].coeffs, F2_PARABOLA):
        assert abs(float(got) - want) < 1e-14
