"""Closed-form ground truths used to validate the pipeline end to end.

The rotation-cone family, the invariant-plane family, and the unit-circle
locus all have exact descriptions, so residuals against them measure real
error rather than self-consistency.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .ambient import (
    AmbientPoint,
    _sphere_from_angles,
    chart_point,
    plane_P,
    plane_parametrization,
    planes_same,
    planes_through_line,
    slag_residual,
    sphere_points,
)
from .arcs import ArcSpec, existence_gate
from .engine import Chart, ReducedChartMap, extend_arc, pde_residual
from .errors import GateObstructionError
from .series import SigmaJetEvaluator


@dataclass(frozen=True)
class OracleResult:
    name: str
    max_residual: float
    samples: int
    tolerance: float
    passed: bool
    details: Optional[dict] = None


def _result(name: str, max_residual: float, samples: int, tolerance: float,
            extra_ok: bool = True, details: Optional[dict] = None) -> OracleResult:
    return OracleResult(
        name=name,
        max_residual=float(max_residual),
        samples=samples,
        tolerance=float(tolerance),
        passed=bool(max_residual <= tolerance) and extra_ok,
        details=details,
    )


def _vdc(index: int, base: int) -> float:
    x, denom = 0.0, 1.0
    while index:
        index, rem = divmod(index, base)
        denom *= base
        x += rem / denom
    return x


# ---------------------------------------------------------------------------
# rotation-invariant cones in C^m


def harvey_lawson_sample(m: int, c: float, count: int = 200, h: float = 1e-5,
                         tolerance: float = 1e-9) -> OracleResult:
    """Residuals of the cone family {zeta u : Im(zeta^m) = c} in C^m.

    c = 0 gives the union of m flat sheets (rays at angles k pi/m); for
    c != 0 the radius solves in closed form per angular sector where
    sin(m theta) carries the sign of c, r = (c/sin(m theta))^(1/m).
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    c = float(c)
    sectors = []
    if c == 0.0:
        sectors = [("ray", k * math.pi / m) for k in range(m)]
    else:
        for k in range(2 * m):
            lo = k * math.pi / m
            mid = lo + 0.5 * math.pi / m
            if math.copysign(1.0, math.sin(m * mid)) == math.copysign(1.0, c):
                sectors.append(("arc", lo))
    per = max(1, count // len(sectors))
    worst = 0.0
    used = 0
    idx = 1
    for kind, base_angle in sectors:
        for _ in range(per):
            frac = 0.15 + 0.7 * _vdc(idx, 2)
            angles = [0.3 + (math.pi - 0.6) * _vdc(idx, p)
                      for p in (3, 5, 7, 11, 13)[: m - 1]]
            idx += 1

            if kind == "ray":
                def param(ps):
                    r = float(ps[0])
                    u = _sphere_from_angles([float(a) for a in ps[1:]])
                    zeta = r * cmath.exp(1j * base_angle)
                    return AmbientPoint(tuple(zeta * x for x in u))

                at = [0.5 + frac] + angles
            else:
                def param(ps):
                    th = float(ps[0])
                    u = _sphere_from_angles([float(a) for a in ps[1:]])
                    r = (c / math.sin(m * th)) ** (1.0 / m)
                    zeta = r * cmath.exp(1j * th)
                    return AmbientPoint(tuple(zeta * x for x in u))

                at = [base_angle + (0.12 + 0.76 * frac) * math.pi / m] + angles
            rec = slag_residual(param, at, h=h)
            worst = max(worst, rec.omega_res, rec.upsilon_res)
            used += 1
    return _result(
        f"rotation-cone m={m} c={c:g}", worst, used, tolerance,
        details={"sectors": len(sectors)},
    )


# ---------------------------------------------------------------------------
# the unit-circle locus


def unit_circle_residual(n: int, chart: Chart, sigma_max: float,
                         t_halfwidth: float = 0.15, samples: int = 500,
                         tolerance: float = 1e-8) -> OracleResult:
    """Check chart points against the exact invariant locus of the unit
    circle: F1 = |zeta|^2 - n(|z|^2 - 1) and F2 = Re(z zeta^n) both vanish.

    zeta is recovered from the ambient point through the sphere direction
    used to produce it, so the test exercises the full chart_point path.
    """
    if chart.n != n:
        raise ValueError("chart was built for a different n")
    m = ReducedChartMap(chart)
    for t in np.linspace(-t_halfwidth, t_halfwidth, 7):
        w, _ = m.point(float(t), 0.0)
        if abs(abs(complex(w)) - 1.0) > 1e-6:
            raise ValueError("chart is not based on the unit circle")

    dirs = sphere_points(n, 8)
    nt = max(2, int(math.sqrt(samples / 2)))
    ns = max(2, (samples + nt - 1) // nt)
    worst = 0.0
    used = 0
    for i in range(nt):
        t = -t_halfwidth + 2 * t_halfwidth * i / (nt - 1)
        for j in range(ns):
            s = -sigma_max + 2 * sigma_max * j / (ns - 1)
            u = dirs[(i * ns + j) % len(dirs)]
            p = chart_point(chart, t, s, u)
            z0 = p.z[0]
            kmax = max(range(n), key=lambda k: abs(u[k]))
            zeta = p.z[1 + kmax] / u[kmax]
            f1 = sum(abs(zk) ** 2 for zk in p.z[1:]) - n * (abs(z0) ** 2 - 1.0)
            f2 = (z0 * zeta ** n).real
            worst = max(worst, abs(f1), abs(f2))
            used += 1
    return _result(f"unit-circle locus n={n}", worst, used, tolerance)


# ---------------------------------------------------------------------------
# invariant planes


def plane_oracle(n: int, trials: int = 20, tolerance: float = 1e-12,
                 seed: int = 0) -> OracleResult:
    """Random invariant planes are calibrated flat sheets, and a random
    line in the fixed axis lies in exactly n of them with pairwise
    disjoint rotating-space projections."""
    rng = random.Random(seed)
    worst = 0.0
    counts_ok = True
    line_counts = []
    for _ in range(trials):
        psi = rng.uniform(0.0, math.pi)
        rec = slag_residual(plane_parametrization(plane_P(psi, n)),
                            [0.0] * (n + 1), h=1e-5)
        worst = max(worst, rec.omega_res, rec.upsilon_res)

        beta = rng.uniform(0.0, math.pi)
        fam = planes_through_line(beta, n)
        v = np.array([math.cos(beta), math.sin(beta)] + [0.0] * (2 * n))
        for pl in fam:
            worst = max(worst, float(np.max(np.abs(pl.projector() @ v - v))))
        for i in range(n):
            for j in range(i + 1, n):
                if planes_same(fam[i], fam[j], tol=1e-9):
                    counts_ok = False
                qi = fam[i].projector()[2:, 2:]
                qj = fam[j].projector()[2:, 2:]
                if float(np.linalg.norm(qi @ qj, ord=2)) >= 1.0 - 1e-9:
                    counts_ok = False
        # independent count: local minima of the containment defect
        grid = np.linspace(0.0, math.pi, 721)[:-1]
        defect = np.array([
            float(np.max(np.abs(plane_P(float(psi_), n).projector() @ v - v)))
            for psi_ in grid
        ])
        found = 0
        for k in range(len(grid)):
            a = defect[k - 1]
            b = defect[k]
            cc = defect[(k + 1) % len(grid)]
            if b <= a and b < cc and b < 0.05:
                found += 1
        line_counts.append(found)
        if found != n:
            counts_ok = False
    return _result(
        f"invariant planes n={n}", worst, trials, tolerance,
        extra_ok=counts_ok, details={"line_plane_counts": line_counts},
    )


# ---------------------------------------------------------------------------
# branch separation


def branch_separation(arc: ArcSpec, n: int, K: int, D: Optional[int] = None,
                      s0: Optional[float] = None, sigma_lo: float = 0.01,
                      sigma_hi: float = 0.05, sigma_steps: int = 5,
                      t_halfwidth: float = 0.1, t_points: int = 9,
                      tolerance: float = 1e-13) -> OracleResult:
    """All branch pairs separate linearly in sigma and coincide on the arc.

    For each pair j < k the minimum distance between branch point sets at
    fixed sigma is fitted to c * sigma through the origin; every fitted c
    must be positive. The reported residual is the worst coincidence
    defect at sigma = 0.
    """
    gate = existence_gate(arc, n)
    if not gate.ok:
        raise GateObstructionError(
            f"branch field is obstructed (shift {gate.shift})"
        )
    if D is None:
        D = max(4 * K, 12)
    if s0 is None:
        lo, hi = arc.domain
        s0 = 0.5 * (lo + hi)
    charts = [extend_arc(arc, s0, n=n, K=K, D=D, branch=j, with_radius=False)
              for j in range(n)]
    u = sphere_points(n, 1)[0]
    ts = np.linspace(-t_halfwidth, t_halfwidth, t_points)
    sigmas = np.linspace(sigma_lo, sigma_hi, sigma_steps)

    def cloud(chart, s):
        return [np.array(chart_point(chart, float(t), float(s), u).z)
                for t in ts]

    slopes = {}
    coincide = 0.0
    used = 0
    for j in range(n):
        for k in range(j + 1, n):
            dvals = []
            for s in sigmas:
                cj = cloud(charts[j], s)
                ck = cloud(charts[k], s)
                dmin = min(float(np.linalg.norm(a - b))
                           for a in cj for b in ck)
                dvals.append(dmin)
                used += len(cj) * len(ck)
            num = float(np.dot(dvals, sigmas))
            den = float(np.dot(sigmas, sigmas))
            slopes[f"{j}-{k}"] = num / den
            cj0 = cloud(charts[j], 0.0)
            ck0 = cloud(charts[k], 0.0)
            coincide = max(coincide, max(
                float(np.linalg.norm(a - b)) for a, b in zip(cj0, ck0)
            ))
    all_positive = all(v > 0.0 for v in slopes.values())
    return _result(
        f"branch separation n={n}", coincide, used, tolerance,
        extra_ok=all_positive, details={"fitted_slopes": slopes},
    )


# ---------------------------------------------------------------------------
# combined chart report


def chart_residual_report(chart: Chart, sigma_max: float,
                          t_halfwidth: float = 0.1, nt: int = 9, ns: int = 7,
                          h: float = 1e-5) -> dict:
    """PDE, symplectic, volume, and momentum residuals of one chart over a
    (t, sigma) grid, as a plain dict ready for serialization."""
    from .ambient import chart_parametrization, momentum_so_n

    ts = [(-t_halfwidth + 2 * t_halfwidth * i / (nt - 1)) for i in range(nt)]
    sig = [sigma_max * (j + 1) / ns for j in range(ns)]
    pde = pde_residual(chart.phi, ts, sig)
    param = chart_parametrization(chart)
    n = chart.n
    angles0 = [0.7] * (n - 1)
    omega = upsilon = momentum = 0.0
    for t in ts[:: max(1, nt // 4)]:
        for s in sig[:: max(1, ns // 3)]:
            rec = slag_residual(param, [t, s] + angles0, h=h)
            omega = max(omega, rec.omega_res)
            upsilon = max(upsilon, rec.upsilon_res)
    for t in ts:
        for s in sig:
            for u in sphere_points(n, 6):
                p = chart_point(chart, t, s, u)
                momentum = max(momentum, float(np.max(np.abs(momentum_so_n(p)))))
    return {
        "n": chart.n,
        "K": chart.K,
        "D": chart.D,
        "branch": chart.branch,
        "sigma_max": sigma_max,
        "grid": pde.grid,
        "max_pde": pde.max_pde,
        "max_omega": omega,
        "max_upsilon": upsilon,
        "max_momentum": momentum,
        "pde_samples": pde.samples,
    }
