"""Ambient-space geometry: the cone parametrization, group actions,
invariant planes, the momentum map, and numeric calibration residuals.

Ambient coordinates are (z_0, ..., z_n) in C^(n+1), with z_0 the
distinguished axis fixed by the SO(n) action on the last n coordinates.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .engine import Chart, ReducedChartMap
from .errors import RankError, SingularLocusError


@dataclass(frozen=True)
class AmbientPoint:
    z: tuple

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(complex(c) for c in self.z))

    @property
    def dim(self) -> int:
        """n, the number of rotating coordinates."""
        return len(self.z) - 1


def _unit_check(u: Sequence[float]) -> Tuple[float, ...]:
    uu = tuple(float(x) for x in u)
    r = math.sqrt(sum(x * x for x in uu))
    if abs(r - 1.0) > 1e-12:
        raise ValueError("u must be a unit vector (|u| within 1e-12 of 1)")
    return uu


def phi_map(w: complex, zeta: complex, u: Sequence[float]) -> AmbientPoint:
    """(w, zeta, u) -> (w, zeta u_1, ..., zeta u_n); 2-to-1 under
    (zeta, u) -> (-zeta, -u)."""
    uu = _unit_check(u)
    w = complex(w)
    zeta = complex(zeta)
    return AmbientPoint((w,) + tuple(zeta * x for x in uu))


def chart_point(chart: Chart, t: float, sigma: float,
                u: Sequence[float]) -> AmbientPoint:
    """Ambient point of the chart surface at (t, sigma, u): graph lift,
    branch twist, then the inverse of the normalizing motion."""
    m = ReducedChartMap(chart)
    w, zeta = m.point(t, sigma)
    return phi_map(complex(w), complex(zeta), u)


def lambda_star(p: AmbientPoint, j: int, n: int) -> AmbientPoint:
    """Twist the rotating coordinates by e^(i j pi / n).

    j is reduced mod 2n first, so j and j + 2n give identical output.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    jj = j % (2 * n)
    if jj == 0:
        return p
    if jj == n:
        phase = complex(-1.0)
    else:
        phase = cmath.exp(1j * math.pi * jj / n)
    return AmbientPoint((p.z[0],) + tuple(phase * c for c in p.z[1:]))


def group_motion(p: AmbientPoint, a: complex, theta: float,
                 n: int) -> AmbientPoint:
    """(z_0, z_k) -> (e^(i n theta) z_0 + a, e^(-i theta) z_k).

    These motions commute with the SO(n) action and act on the fixed
    axis as the Euclidean isometry z_0 -> e^(i n theta) z_0 + a.
    """
    w_phase = cmath.exp(1j * n * theta)
    z_phase = cmath.exp(-1j * theta)
    return AmbientPoint((w_phase * p.z[0] + complex(a),)
                        + tuple(z_phase * c for c in p.z[1:]))


def momentum_so_n(p: AmbientPoint) -> np.ndarray:
    """Antisymmetric n x n matrix (x_i y_j - y_i x_j) over the rotating
    coordinates; vanishes exactly on rank-one configurations zeta*u."""
    x = np.array([c.real for c in p.z[1:]])
    y = np.array([c.imag for c in p.z[1:]])
    return np.outer(x, y) - np.outer(y, x)


# ---------------------------------------------------------------------------
# calibration residuals


@dataclass(frozen=True)
class SlagResidual:
    omega_res: float
    upsilon_res: float
    phase: float


def _tangent_frame(param: Callable[[Sequence[float]], AmbientPoint],
                   at: Sequence[float], h: float,
                   richardson: bool) -> np.ndarray:
    at = [float(s) for s in at]
    dim = len(at)
    cols = []
    for i in range(dim):
        def diff(step):
            hi = list(at)
            lo = list(at)
            hi[i] += step
            lo[i] -= step
            zp = param(hi).z
            zm = param(lo).z
            return np.array([(a - b) / (2 * step) for a, b in zip(zp, zm)],
                            dtype=complex)

        v = diff(h)
        if richardson:
            v = (4.0 * diff(h / 2) - v) / 3.0
        cols.append(v)
    return np.column_stack(cols)


def slag_residual(param: Callable[[Sequence[float]], AmbientPoint],
                  at: Sequence[float], h: float = 1e-5,
                  richardson: bool = False) -> SlagResidual:
    """Symplectic and volume-form residuals of a parametrized sheet.

    Builds tangent vectors v_0..v_m by centered differences, then

        omega_res   = max_{i<j} |Im <v_i, v_j>|  (Hermitian pairing)
        upsilon_res = |Im det [v_0 ... v_m]|
        phase       = Re det / |det|

    A genuinely calibrated sheet has both residuals 0 and phase +-1.
    The parameter count must match the ambient dimension n+1, so the
    frame matrix is square.
    """
    m = _tangent_frame(param, at, h, richardson)
    rows, cols = m.shape
    if rows != cols:
        raise RankError(
            f"need {rows} parameters for a frame in C^{rows}, got {cols}"
        )
    norms = [float(np.linalg.norm(m[:, i])) for i in range(cols)]
    scale = 1.0
    for v in norms:
        scale *= v
    det = complex(np.linalg.det(m))
    if scale == 0.0 or abs(det) < 1e-12 * scale:
        raise RankError("degenerate tangent frame (det ~ 0)")
    worst = 0.0
    for i in range(cols):
        for j in range(i + 1, cols):
            pair = complex(np.vdot(m[:, i], m[:, j]))
            worst = max(worst, abs(pair.imag))
    return SlagResidual(
        omega_res=worst,
        upsilon_res=abs(det.imag),
        phase=det.real / abs(det),
    )


def chart_parametrization(chart: Chart) -> Callable[[Sequence[float]], AmbientPoint]:
    """Map (t, sigma, angles...) -> ambient chart point, with the sphere
    factor in hyperspherical angles so the parameter space is flat."""
    n = chart.n
    m = ReducedChartMap(chart)

    def run(params: Sequence[float]) -> AmbientPoint:
        t, sigma = float(params[0]), float(params[1])
        angles = [float(a) for a in params[2:]]
        if len(angles) != n - 1:
            raise ValueError("expected n-1 sphere angles")
        u = _sphere_from_angles(angles)
        w, zeta = m.point(t, sigma)
        return AmbientPoint((complex(w),)
                            + tuple(complex(zeta) * x for x in u))

    return run


def _sphere_from_angles(angles: Sequence[float]) -> Tuple[float, ...]:
    """Hyperspherical parametrization of S^(n-1); empty angles give (1,)."""
    u = [1.0]
    for a in angles:
        c, s = math.cos(a), math.sin(a)
        u = [x * c for x in u] + [s]
    return tuple(u)


# ---------------------------------------------------------------------------
# invariant planes


@dataclass(frozen=True)
class PlaneP:
    """The special Lagrangian plane with axis phase e^(-i n psi) and
    rotating phase e^(i psi); psi is kept mod pi."""

    psi: float
    n: int
    basis: tuple

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the plane inside R^(2n+2)."""
        cols = []
        for b in self.basis:
            cols.append([x for c in b for x in (c.real, c.imag)])
        B = np.array(cols).T
        return B @ B.T


def plane_P(psi: float, n: int) -> PlaneP:
    if n < 2:
        raise ValueError("n must be >= 2")
    psi = float(psi) % math.pi
    a0 = cmath.exp(-1j * n * psi)
    ak = cmath.exp(1j * psi)
    basis = []
    basis.append((a0,) + (0j,) * n)
    for k in range(1, n + 1):
        v = [0j] * (n + 1)
        v[k] = ak
        basis.append(tuple(v))
    return PlaneP(psi=psi, n=n, basis=tuple(basis))


def plane_parametrization(plane: PlaneP) -> Callable[[Sequence[float]], AmbientPoint]:
    def run(params: Sequence[float]) -> AmbientPoint:
        z = [0j] * (plane.n + 1)
        for s, b in zip(params, plane.basis):
            for k in range(plane.n + 1):
                z[k] += float(s) * b[k]
        return AmbientPoint(tuple(z))

    return run


def planes_through_line(beta: float, n: int) -> list:
    """The n invariant planes whose axis contains the line e^(i beta) R.

    Axis phases solve -n psi = beta mod pi, so psi = (-beta + k pi)/n.
    """
    return [plane_P((-float(beta) + k * math.pi) / n, n) for k in range(n)]


def planes_same(p1: PlaneP, p2: PlaneP, tol: float = 1e-12) -> bool:
    if p1.n != p2.n:
        return False
    return bool(np.max(np.abs(p1.projector() - p2.projector())) <= tol)


def chart_tangent_plane(chart: Chart) -> PlaneP:
    """Tangent plane of the chart sheet along the arc at its center."""
    return plane_P(chart.frame.theta + chart.branch * math.pi / chart.n,
                   chart.n)


# ---------------------------------------------------------------------------
# the J0 layer on M0 = C^2 minus {zeta = 0}


def _covector(cw: complex, cwbar: complex, cz: complex,
              czbar: complex) -> np.ndarray:
    """Assemble a complex covector on R^4 = (x_w, y_w, x_z, y_z) from
    coefficients of dw, dwbar, dzeta, dzetabar."""
    return np.array([
        cw + cwbar,
        1j * cw - 1j * cwbar,
        cz + czbar,
        1j * cz - 1j * czbar,
    ], dtype=complex)


def j0_coframe(w: complex, zeta: complex, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """The defining coframe:

        omega_1 = dw    + i zetabar^(n-1) dzetabar / |zeta|^(n-1)
        omega_2 = dwbar + i zeta^(n-1)    dzeta    / |zeta|^(n-1)

    Undefined on the line zeta = 0; the structure does not extend
    continuously across it.
    """
    zeta = complex(zeta)
    if zeta == 0:
        raise SingularLocusError("coframe undefined on the line zeta = 0")
    c = (zeta.conjugate() ** (n - 1)) / (abs(zeta) ** (n - 1))
    omega1 = _covector(1.0, 0.0, 0.0, 1j * c)
    omega2 = _covector(0.0, 1.0, 1j * c.conjugate(), 0.0)
    return omega1, omega2


def eta_coframe(w: complex, zeta: complex, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """The motion-invariant (1,0)-forms:

        eta_1 = |zeta|^(n-1)/zetabar^n dw    + i dzetabar/zetabar
        eta_2 = |zeta|^(n-1)/zeta^n    dwbar + i dzeta/zeta
    """
    zeta = complex(zeta)
    if zeta == 0:
        raise SingularLocusError("coframe undefined on the line zeta = 0")
    q = (abs(zeta) ** (n - 1)) / (zeta.conjugate() ** n)
    eta1 = _covector(q, 0.0, 0.0, 1j / zeta.conjugate())
    eta2 = _covector(0.0, q.conjugate(), 1j / zeta, 0.0)
    return eta1, eta2


def linear_map_jacobian(bw: complex, bz: complex) -> np.ndarray:
    """Real 4x4 Jacobian of (w, zeta) -> (bw w + const, bz zeta)."""
    J = np.zeros((4, 4))
    J[0, 0], J[0, 1] = bw.real, -bw.imag
    J[1, 0], J[1, 1] = bw.imag, bw.real
    J[2, 2], J[2, 3] = bz.real, -bz.imag
    J[3, 2], J[3, 3] = bz.imag, bz.real
    return J


def pullback(covector: np.ndarray, jacobian: np.ndarray) -> np.ndarray:
    return covector @ jacobian


def motion_F_factors(b: complex, n: int) -> Tuple[complex, complex]:
    """Linear factors (on w and on zeta) of the homogeneity motion F_{a,b}."""
    b = complex(b)
    if b == 0:
        raise ValueError("b must be nonzero")
    return (b.conjugate() ** n) / (abs(b) ** (n - 1)), b


def apply_motion_F(a: complex, b: complex, n: int, w: complex,
                   zeta: complex) -> Tuple[complex, complex]:
    fw, fz = motion_F_factors(b, n)
    return fw * complex(w) + complex(a), fz * complex(zeta)


def twist_C(w: complex, zeta: complex, n: int) -> Tuple[complex, complex]:
    """C(w, zeta) = (w, e^(i pi/n) zeta); J0-antilinear."""
    return complex(w), cmath.exp(1j * math.pi / n) * complex(zeta)


# ---------------------------------------------------------------------------
# deterministic sphere sampling


def _small_primes(count: int) -> list:
    primes = []
    cand = 2
    while len(primes) < count:
        if all(cand % p for p in primes):
            primes.append(cand)
        cand += 1
    return primes


def _van_der_corput(index: int, base: int) -> float:
    x, denom = 0.0, 1.0
    while index:
        index, rem = divmod(index, base)
        denom *= base
        x += rem / denom
    return x


def sphere_points(n: int, count: int) -> list:
    """Deterministic sample of S^(n-1): the 2n signed axes first, then a
    low-discrepancy Gaussian construction normalized to the sphere."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = []
    for k in range(n):
        for sgn in (1.0, -1.0):
            e = [0.0] * n
            e[k] = sgn
            pts.append(tuple(e))
    primes = _small_primes(n)
    nd = NormalDist()
    idx = 1
    while len(pts) < count:
        g = [nd.inv_cdf(min(max(_van_der_corput(idx, p), 1e-12), 1 - 1e-12))
             for p in primes]
        r = math.sqrt(sum(x * x for x in g))
        if r > 1e-9:
            pts.append(tuple(x / r for x in g))
        idx += 1
    return pts[:count]
