"""Grid files, patch bundles, OBJ meshes and reports.

All exact numbers are written as "p/q" strings. Numbers read from JSON keep
their decimal place value ("0.1" is 1/10, not the nearest double).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from . import __version__
from .algebra import BivariatePolynomial, BivariateRationalFunction, RationalVec3Field
from .dualspace import RationalPNPatch, rational_unit_vector
from .errors import InputError, ParseError, StillNearPoleError
from .patchwork import EPS_POLE, HermiteGrid

Matrix3 = Tuple[Tuple[Fraction, Fraction, Fraction], ...]

#: accuracy of the rational rotation used by auto_rotate
ROTATION_TOL = 1e-12


# numbers and polynomials ------------------------------------------------------

def parse_number(x, where: str = "") -> Fraction:
    if isinstance(x, bool) or x is None:
        raise ParseError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        # only reached for floats that did not come through the JSON reader
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: cannot parse {x!r} as a rational") from exc
    raise ParseError(f"{where}: expected a number, got {type(x).__name__}")


def fmt(q) -> str:
    return str(Fraction(q))


def _loads(text: str, what: str):
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: invalid JSON ({exc})") from exc


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def poly_to_json(p: BivariatePolynomial) -> list:
    return [[i, j, fmt(c)] for (i, j), c in sorted(p.items())]


def poly_from_json(terms, where: str = "") -> BivariatePolynomial:
    try:
        return BivariatePolynomial({(int(i), int(j)): parse_number(c, where) for i, j, c in terms})
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: malformed polynomial") from exc


def rf_to_json(f: BivariateRationalFunction) -> dict:
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def rf_from_json(d, where: str = "") -> BivariateRationalFunction:
    try:
        num, den = poly_from_json(d["num"], where), poly_from_json(d["den"], where)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{where}: expected num/den") from exc
    if den.is_zero():
        raise ParseError(f"{where}: zero denominator")
    return BivariateRationalFunction(num, den)


def field_to_json(F: RationalVec3Field) -> list:
    return [rf_to_json(c) for c in F]


def field_from_json(d, where: str = "") -> RationalVec3Field:
    if not isinstance(d, list) or len(d) != 3:
        raise ParseError(f"{where}: expected three components")
    return RationalVec3Field(rf_from_json(c, f"{where}[{k}]") for k, c in enumerate(d))


# grids ------------------------------------------------------------------------

@dataclass
class GridFile:
    rows: int
    cols: int
    points: List[List[Tuple[Fraction, ...]]]
    normals: List[List[Tuple[Fraction, ...]]]
    tangent_scales: Optional[List[List[Tuple[Fraction, Fraction]]]] = None
    rotation: Optional[Matrix3] = None

    @classmethod
    def from_dict(cls, d: dict) -> "GridFile":
        if not isinstance(d, dict):
            raise ParseError("grid file must hold a JSON object")
        try:
            rows, cols = int(d["rows"]), int(d["cols"])
            raw_points, raw_normals = d["points"], d["normals"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"grid file lacks rows/cols/points/normals ({exc})") from exc

        def arr(raw, name, width):
            if len(raw) != rows or any(len(r) != cols for r in raw):
                raise ParseError(f"{name} must be a {rows} x {cols} array")
            out = []
            for i, row in enumerate(raw):
                out_row = []
                for j, item in enumerate(row):
                    if not isinstance(item, list) or len(item) != width:
                        raise ParseError(f"{name}[{i}][{j}] must have {width} entries")
                    out_row.append(tuple(parse_number(c, f"{name}[{i}][{j}]") for c in item))
                out.append(out_row)
            return out

        points = arr(raw_points, "points", 3)
        normals = arr(raw_normals, "normals", 3)
        scales = None
        if d.get("tangent_scales") is not None:
            scales = arr(d["tangent_scales"], "tangent_scales", 2)
        rotation = None
        if d.get("rotation") is not None:
            R = d["rotation"]
            if not isinstance(R, list) or len(R) != 3 or any(len(r) != 3 for r in R):
                raise ParseError("rotation must be a 3 x 3 array")
            rotation = tuple(tuple(parse_number(c, "rotation") for c in r) for r in R)
            check_orthogonal(rotation)
        return cls(rows, cols, points, normals, scales, rotation)

    def to_dict(self) -> dict:
        d = {
            "rows": self.rows,
            "cols": self.cols,
            "points": [[[fmt(c) for c in p] for p in row] for row in self.points],
            "normals": [[[fmt(c) for c in n] for n in row] for row in self.normals],
        }
        if self.tangent_scales is not None:
            d["tangent_scales"] = [[[fmt(s) for s in p] for p in row] for row in self.tangent_scales]
        if self.rotation is not None:
            d["rotation"] = [[fmt(c) for c in r] for r in self.rotation]
        return d

    def to_grid(self) -> HermiteGrid:
        points, normals = self.points, self.normals
        if self.rotation is not None:
            points = [[apply(self.rotation, p) for p in row] for row in points]
            normals = [[apply(self.rotation, n) for n in row] for row in normals]
        return HermiteGrid(points, normals, self.tangent_scales)

    @classmethod
    def from_grid(cls, grid: HermiteGrid) -> "GridFile":
        rows, cols = grid.shape
        return cls(rows, cols, grid.points, grid.normals, grid.tangent_scales)


def check_orthogonal(R) -> None:
    for a in range(3):
        for b in range(3):
            s = sum(R[k][a] * R[k][b] for k in range(3))
            if s != (1 if a == b else 0):
                raise ParseError("rotation is not exactly orthogonal")


def apply(R, p) -> Tuple[Fraction, Fraction, Fraction]:
    return tuple(sum(R[r][k] * p[k] for k in range(3)) for r in range(3))


def grid_digest(grid: HermiteGrid) -> str:
    text = json.dumps(GridFile.from_grid(grid).to_dict(), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()


def read_grid_file(path) -> GridFile:
    return GridFile.from_dict(_loads(_read(path), str(path)))


def load_grid(path, eps_pole: float = EPS_POLE, check_pole: bool = True) -> HermiteGrid:
    """Parse a grid file, apply its rotation and check the pole condition."""
    grid = read_grid_file(path).to_grid()
    if check_pole:
        grid.check_pole(eps_pole)
    return grid


def save_grid(grid: HermiteGrid, path) -> None:
    Path(path).write_text(_dumps(GridFile.from_grid(grid).to_dict()))


def _householder(w) -> Matrix3:
    ww = sum(c * c for c in w)
    return tuple(
        tuple(Fraction(int(r == c)) - 2 * w[r] * w[c] / ww for c in range(3)) for r in range(3)
    )


def _matmul(A, B) -> Matrix3:
    return tuple(tuple(sum(A[r][k] * B[k][c] for k in range(3)) for c in range(3)) for r in range(3))


def rotation_to_south(a) -> Matrix3:
    """Exact proper rotation taking the rational unit vector a to (0, 0, -1).

    Product of two reflections: one swapping a and the target, one fixing
    the target, so the result is orthogonal with determinant +1.
    """
    b = (Fraction(0), Fraction(0), Fraction(-1))
    I = tuple(tuple(Fraction(int(r == c)) for c in range(3)) for r in range(3))
    if tuple(a) == b:
        return I
    H1 = _householder(tuple(x - y for x, y in zip(a, b)))
    H2 = _householder((Fraction(1), Fraction(0), Fraction(0)))
    return _matmul(H2, H1)


def auto_rotate(grid: HermiteGrid, eps_pole: float = EPS_POLE,
                tol: float = ROTATION_TOL) -> Tuple[HermiteGrid, Matrix3]:
    """Rotate so the mean unit normal points to (0, 0, -1), far from the pole."""
    mean = [0.0, 0.0, 0.0]
    for row in grid.normals:
        for n in row:
            f = [float(c) for c in n]
            r = math.sqrt(sum(c * c for c in f))
            mean = [m + c / r for m, c in zip(mean, f)]
    size = math.sqrt(sum(c * c for c in mean))
    if size < 1e-9 * sum(map(len, grid.normals)):
        raise StillNearPoleError("normals average to zero; no rotation keeps them off the pole")
    a = rational_unit_vector([Fraction(c / size) for c in mean], tol=tol)
    R = rotation_to_south(a)
    rotated = HermiteGrid(
        [[apply(R, p) for p in row] for row in grid.points],
        [[apply(R, n) for n in row] for row in grid.normals],
        grid.tangent_scales,
    )
    bad = rotated.pole_violations(eps_pole)
    if bad:
        raise StillNearPoleError(f"normals at {bad} stay within {eps_pole:g} rad of the pole after rotation")
    return rotated, R


def load_scales(path) -> List[List[Tuple[Fraction, Fraction]]]:
    d = _loads(_read(path), str(path))
    raw = d.get("tangent_scales") if isinstance(d, dict) else d
    if not isinstance(raw, list):
        raise ParseError(f"{path}: expected a tangent_scales array")
    try:
        return [[(parse_number(a, "scale"), parse_number(b, "scale")) for a, b in row] for row in raw]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed tangent_scales") from exc


def scales_to_json(scales) -> list:
    return [[[fmt(a), fmt(b)] for a, b in row] for row in scales]


# bundles ----------------------------------------------------------------------

@dataclass
class BundleEntry:
    cell: Tuple[int, int]
    patch: RationalPNPatch
    coons: Optional[tuple] = None  # 4 x 4 x 3 power-basis tensor

    def to_dict(self) -> dict:
        p = self.patch
        return {
            "cell": list(self.cell),
            "label": p.label,
            "coons": None if self.coons is None else [[[fmt(c) for c in v] for v in row] for row in self.coons],
            "source": None if p.source is None else [poly_to_json(c) for c in p.source],
            "n_field": field_to_json(p.n_field),
            "h_field": rf_to_json(p.h_field),
            "x_field": field_to_json(p.x_field),
            "meta": {k: str(v) for k, v in sorted(p.meta.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BundleEntry":
        try:
            cell = tuple(int(c) for c in d["cell"])
            where = f"patch {cell}"
            source = None
            if d.get("source") is not None:
                source = tuple(poly_from_json(c, where) for c in d["source"])
            coons = None
            if d.get("coons") is not None:
                coons = tuple(
                    tuple(tuple(parse_number(c, where) for c in v) for v in row) for row in d["coons"]
                )
            patch = RationalPNPatch(
                field_from_json(d["n_field"], f"{where} n_field"),
                rf_from_json(d["h_field"], f"{where} h_field"),
                field_from_json(d["x_field"], f"{where} x_field"),
                source=source,
                label=d.get("label", ""),
                meta=dict(d.get("meta", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed bundle entry ({exc!r})") from exc
        return cls(cell, patch, coons)


@dataclass
class PatchBundle:
    entries: List[BundleEntry]
    provenance: Dict[str, object] = field(default_factory=dict)

    @property
    def patches(self) -> List[RationalPNPatch]:
        return [e.patch for e in self.entries]

    @property
    def cells(self) -> List[Tuple[int, int]]:
        return [e.cell for e in self.entries]

    def by_cell(self) -> Dict[Tuple[int, int], RationalPNPatch]:
        return {e.cell: e.patch for e in self.entries}

    def to_dict(self) -> dict:
        return {
            "format": "pnpatch-bundle",
            "provenance": self.provenance,
            "patches": [e.to_dict() for e in sorted(self.entries, key=lambda e: e.cell)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PatchBundle":
        if not isinstance(d, dict) or d.get("format") != "pnpatch-bundle":
            raise ParseError("not a patch bundle")
        entries = [BundleEntry.from_dict(e) for e in d.get("patches", [])]
        return cls(entries, dict(d.get("provenance", {})))


def make_provenance(grid: HermiteGrid, rotation=None, **extra) -> dict:
    rows, cols = grid.shape
    prov = {
        "grid_sha256": grid_digest(grid),
        "scales": scales_to_json([[grid.scales(i, j) for j in range(cols)] for i in range(rows)]),
        "rotation": None if rotation is None else [[fmt(c) for c in r] for r in rotation],
        "version": __version__,
    }
    prov.update(extra)
    return prov


def export_bundle(bundle: PatchBundle, path) -> None:
    try:
        Path(path).write_text(_dumps(bundle.to_dict()))
    except OSError as exc:
        raise InputError(f"cannot write bundle {path}: {exc}") from exc


def load_bundle(path) -> PatchBundle:
    return PatchBundle.from_dict(_loads(_read(path), str(path)))


# meshes and reports -----------------------------------------------------------

def _f(x: float) -> str:
    return repr(float(x) + 0.0)  # no "-0.0"


def obj_text(meshes) -> str:
    """OBJ text with v, vn and f v//vn records; one ``o`` group per mesh."""
    if not isinstance(meshes, (list, tuple)):
        meshes = [meshes]
    lines = []
    base = 0
    for k, m in enumerate(meshes):
        lines.append(f"o {m.label or f'mesh{k}'}")
        for v in m.vertices:
            lines.append("v " + " ".join(_f(c) for c in v))
        for n in m.normals:
            lines.append("vn " + " ".join(_f(c) for c in n))
        for tri in m.faces:
            lines.append("f " + " ".join(f"{base + t + 1}//{base + t + 1}" for t in tri))
        base += len(m.vertices)
    return "\n".join(lines) + "\n"


def export_obj(meshes, path) -> None:
    try:
        Path(path).write_text(obj_text(meshes))
    except OSError as exc:
        raise InputError(f"cannot write mesh {path}: {exc}") from exc


def _plain(x):
    if hasattr(x, "as_dict"):
        return _plain(x.as_dict())
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def export_report(reports, path) -> None:
    try:
        Path(path).write_text(_dumps(_plain(reports)))
    except OSError as exc:
        raise InputError(f"cannot write report {path}: {exc}") from exc


def parse_poly_expr(text: str) -> BivariatePolynomial:
    """Polynomial in u, v from an expression such as "1 - u**2 - v**2"."""
    import sympy

    u, v = sympy.symbols("u v")
    try:
        expr = sympy.sympify(text, locals={"u": u, "v": v})
        poly = sympy.Poly(sympy.expand(expr), u, v)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise ParseError(f"cannot read {text!r} as a polynomial in u, v") from exc
    coeffs = {}
    for (i, j), c in poly.terms():
        if not c.is_Rational:
            raise ParseError(f"coefficient {c} of {text!r} is not rational")
        coeffs[(int(i), int(j))] = Fraction(int(c.p), int(c.q))
    return BivariatePolynomial(coeffs)


def load_field(path) -> Tuple[BivariatePolynomial, BivariatePolynomial, BivariatePolynomial]:
    """Polynomial 3-field from {"N": [c1, c2, c3]}; each c is an expression
    string or a list of [i, j, coefficient] terms."""
    d = _loads(_read(path), str(path))
    comps = d.get("N") if isinstance(d, dict) else d
    if not isinstance(comps, list) or len(comps) != 3:
        raise ParseError(f"{path}: expected three components under 'N'")
    out = []
    for k, c in enumerate(comps):
        if isinstance(c, str):
            out.append(parse_poly_expr(c))
        elif isinstance(c, list):
            out.append(poly_from_json(c, f"N[{k}]"))
        else:
            out.append(BivariatePolynomial.constant(parse_number(c, f"N[{k}]")))
    return tuple(out)
