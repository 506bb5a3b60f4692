"""Chart serialization, run configuration, and mesh export.

All numeric payloads in JSON documents are base-10 decimal strings, so
documents are reproducible across platforms and reload to the exact same
binary values. Files are written atomically (temp file + rename).
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .ambient import chart_point, sphere_points
from .engine import Chart, RadiusEstimate, ReducedChartMap
from .errors import SchemaError
from .precision import FLOAT64, Context, context_named
from .series import SigmaExpansion, TaylorPoly, poly_from

SCHEMA_NAME = "slag-chart"
SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    """Settings shared by the CLI subcommands."""

    n: int = 2
    K: int = 4
    D: Optional[int] = None
    sigma_max: float = 0.1
    branch: Optional[int] = None
    spacing: float = 0.2
    seed: int = 0
    out: Optional[str] = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.D is None:
            self.D = 2 * self.K + 8
        if self.D < 2 * self.K:
            raise ValueError("D must be >= 2K to feed the recursion")
        if self.sigma_max <= 0:
            raise ValueError("sigma_max must be positive")

    def echo(self) -> dict:
        return {
            "n": self.n, "K": self.K, "D": self.D,
            "sigma_max": encode_real(self.sigma_max),
            "branch": self.branch,
            "spacing": encode_real(self.spacing),
            "seed": self.seed,
        }


def encode_real(x) -> str:
    """Shortest decimal string that reloads to the exact same value."""
    if isinstance(x, (int, float)):
        return repr(float(x))
    import mpmath

    if isinstance(x, mpmath.mpf):
        digits = int(mpmath.mp.prec * 0.30103) + 3
        return mpmath.nstr(x, digits)
    return repr(float(x))


def _decode_real(s, ctx: Context):
    if not isinstance(s, (str, int, float)):
        raise SchemaError(f"expected a decimal string, got {type(s).__name__}")
    return ctx.real(s)


def serialize_chart(chart: Chart) -> dict:
    prec = "float64"
    if not isinstance(chart.phi.terms[0].coeffs[0], float):
        import mpmath

        prec = f"mp{mpmath.mp.dps}"
    doc = {
        "schema": SCHEMA_NAME,
        "version": SCHEMA_VERSION,
        "precision": prec,
        "n": chart.n,
        "branch": chart.branch,
        "K": chart.K,
        "D": chart.D,
        "frame": {
            "a_re": encode_real(chart.frame.a.real),
            "a_im": encode_real(chart.frame.a.imag),
            "theta": encode_real(chart.frame.theta),
        },
        "terms": [[encode_real(c) for c in f.coeffs] for f in chart.phi.terms],
    }
    if chart.center_param is not None:
        doc["center_param"] = encode_real(chart.center_param)
    if chart.radius is not None:
        doc["radius"] = {
            "C": encode_real(chart.radius.C),
            "M": encode_real(chart.radius.M),
            "rho": encode_real(chart.radius.rho_sigma),
            "fit": encode_real(chart.radius.fit_quality),
        }
    else:
        doc["radius"] = None
    return doc


def deserialize_chart(doc: dict) -> Chart:
    from .arcs import Frame

    if not isinstance(doc, dict):
        raise SchemaError("chart document must be a JSON object")
    if doc.get("schema") != SCHEMA_NAME:
        raise SchemaError(f"not a chart document: schema={doc.get('schema')!r}")
    if doc.get("version") != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported chart schema version {doc.get('version')!r}")
    for key in ("n", "branch", "K", "D", "frame", "terms"):
        if key not in doc:
            raise SchemaError(f"chart document is missing {key!r}")
    try:
        ctx = context_named(doc.get("precision", "float64"))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    n, K, D = int(doc["n"]), int(doc["K"]), int(doc["D"])
    cap = D - 2 * K
    if cap < 0:
        raise SchemaError("chart document has D < 2K")
    raw_terms = doc["terms"]
    if len(raw_terms) != K + 1:
        raise SchemaError("chart document terms do not match K")
    terms = []
    for row in raw_terms:
        if len(row) != cap + 1:
            raise SchemaError("chart document term length does not match D-2K")
        terms.append(poly_from([_decode_real(c, ctx) for c in row], cap=cap))
    fr = doc["frame"]
    for key in ("a_re", "a_im", "theta"):
        if key not in fr:
            raise SchemaError(f"chart frame is missing {key!r}")
    frame = Frame(
        a=ctx.make_complex(_decode_real(fr["a_re"], ctx),
                           _decode_real(fr["a_im"], ctx)),
        theta=_decode_real(fr["theta"], ctx),
    )
    radius = None
    if doc.get("radius") is not None:
        rd = doc["radius"]
        radius = RadiusEstimate(
            C=float(_decode_real(rd["C"], FLOAT64)),
            M=float(_decode_real(rd["M"], FLOAT64)),
            rho_sigma=float(_decode_real(rd["rho"], FLOAT64)),
            fit_quality=float(_decode_real(rd["fit"], FLOAT64)),
        )
    center = doc.get("center_param")
    return Chart(
        n=n, branch=int(doc["branch"]), frame=frame,
        phi=SigmaExpansion(n=n, terms=tuple(terms)), radius=radius,
        center_param=None if center is None else float(
            _decode_real(center, FLOAT64)),
    )


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    partial file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, doc) -> None:
    atomic_write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_json(path: str):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON in {path}: {exc}") from None


def dump_chart(chart: Chart, path: str) -> None:
    write_json(path, serialize_chart(chart))


def load_chart(path: str) -> Chart:
    return deserialize_chart(read_json(path))


def _grid(lo: float, hi: float, count: int) -> list:
    if count < 2:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + j * step for j in range(count)]


def reduced_mesh_text(charts: Sequence[Chart], resolution: int,
                      sigma_max: float, t_halfwidth: Optional[float] = None,
                      ctx: Context = FLOAT64) -> str:
    """OBJ quad mesh of the reduced surfaces (t, sigma) -> (w, zeta).

    Vertex records carry four values: Re w, Im w, Re zeta, with Im zeta as
    the optional fourth component. One (resolution x resolution) grid per
    chart, faces local to their chart.
    """
    if resolution < 2:
        raise ValueError("mesh resolution must be >= 2")
    w = float(t_halfwidth if t_halfwidth is not None else 2 * sigma_max)
    lines = ["# reduced chart mesh: Re w, Im w, Re zeta / Im zeta"]
    faces = []
    base = 1
    for chart in charts:
        rm = ReducedChartMap(chart, ctx=ctx)
        for t in _grid(-w, w, resolution):
            for s in _grid(0.0, float(sigma_max), resolution):
                wv, zv = rm.point(ctx.real(t), ctx.real(s))
                lines.append(
                    "v "
                    f"{float(wv.real):.17g} {float(wv.imag):.17g} "
                    f"{float(zv.real):.17g} {float(zv.imag):.17g}"
                )
        for i in range(resolution - 1):
            for j in range(resolution - 1):
                v00 = base + i * resolution + j
                v01 = v00 + 1
                v10 = v00 + resolution
                v11 = v10 + 1
                faces.append(f"f {v00} {v10} {v11} {v01}")
        base += resolution * resolution
    return "\n".join(lines + faces) + "\n"


def embedded_cloud_rows(charts: Sequence[Chart], resolution: int,
                        sigma_max: float,
                        t_halfwidth: Optional[float] = None,
                        directions: int = 6) -> list:
    """Point cloud of ambient chart points over a (t, sigma, u) grid.

    Rows are the 2n+2 real coordinates of each point, header included.
    """
    if not charts:
        raise ValueError("no charts to export")
    n = charts[0].n
    if any(c.n != n for c in charts):
        raise ValueError("charts mix different n")
    w = float(t_halfwidth if t_halfwidth is not None else 2 * sigma_max)
    header = []
    for k in range(n + 1):
        header += [f"x{k}", f"y{k}"]
    rows = [header]
    dirs = sphere_points(n, directions)
    for chart in charts:
        for t in _grid(-w, w, resolution):
            for s in _grid(0.0, float(sigma_max), resolution):
                for u in dirs:
                    p = chart_point(chart, t, s, u)
                    row = []
                    for z in p.z:
                        row += [f"{z.real:.17g}", f"{z.imag:.17g}"]
                    rows.append(row)
    return rows


def export_mesh(charts: Sequence[Chart], mode: str, resolution: int,
                sigma_max: float, path: str,
                t_halfwidth: Optional[float] = None,
                directions: int = 6) -> str:
    """Write the mesh/point-cloud file for the charts; returns the path."""
    if mode == "reduced":
        atomic_write_text(path, reduced_mesh_text(
            charts, resolution, sigma_max, t_halfwidth=t_halfwidth))
        return path
    if mode == "embedded":
        rows = embedded_cloud_rows(charts, resolution, sigma_max,
                                   t_halfwidth=t_halfwidth,
                                   directions=directions)
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        atomic_write_text(path, buf.getvalue())
        return path
    raise ValueError(f"unknown mesh mode {mode!r}")
