"""Polynomial surfaces with a prescribed Pythagorean normal field.

Given a polynomial field N with |N| = sigma polynomial, a polynomial surface
x has normals parallel to N iff x_u = P and x_v = Q with P . N = Q . N = 0.
Those two conditions together with the integrability condition
dP/dv = dQ/du are linear in the coefficients of P and Q, so every solution
comes from the kernel of one exact matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import ZERO, BivariatePolynomial, RationalVec3Field, matvec, nullspace
from .dualspace import RationalPNPatch, exact_sqrt
from .errors import EmptySolutionError, NotPythagoreanError

Poly = BivariatePolynomial
PolyVec = Tuple[Poly, Poly, Poly]
Monomial = Tuple[int, int]

_BLOCKS = ("p1", "p2", "p3", "q1", "q2", "q3")


def _vec(N) -> PolyVec:
    out = []
    for c in N:
        out.append(c if isinstance(c, BivariatePolynomial) else BivariatePolynomial.constant(c))
    if len(out) != 3:
        raise ValueError("expected three components")
    return tuple(out)


def _pdot(a, b) -> Poly:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _pcross(a, b) -> PolyVec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def monomials(deg: int) -> List[Monomial]:
    """Exponent pairs of total degree <= deg, by degree, then falling u-power."""
    return [(i, d - i) for d in range(deg + 1) for i in range(d, -1, -1)]


def _grlex(m: Monomial):
    return (m[0] + m[1], m[0])


def _leading(p: Poly) -> Tuple[Monomial, Fraction]:
    m = max(p.coeffs, key=_grlex)
    return m, p.coeffs[m]


def poly_sqrt(s: Poly) -> Optional[Poly]:
    """Exact polynomial square root with positive leading coefficient, or None.

    Works term by term: if r is a correct leading part of the root, the
    leading term of s - r^2 is 2 lt(r) times the next term.
    """
    if s.is_zero():
        return ZERO
    (a, b), c = _leading(s)
    rc = exact_sqrt(c)
    if a % 2 or b % 2 or rc is None:
        return None
    lead_m = (a // 2, b // 2)
    r = Poly({lead_m: rc})
    two_lead = 2 * rc
    limit = len(monomials(sum(lead_m)))
    for _ in range(limit):
        rest = s - r * r
        if rest.is_zero():
            return r
        (i, j), c = _leading(rest)
        ti, tj = i - lead_m[0], j - lead_m[1]
        if ti < 0 or tj < 0 or _grlex((ti, tj)) >= _grlex(lead_m):
            return None
        r = r + Poly({(ti, tj): c / two_lead})
    return r if (s - r * r).is_zero() else None


@dataclass(frozen=True)
class PythagoreanNormalField:
    N: PolyVec
    sigma: Poly

    @property
    def k(self) -> int:
        return max(c.total_degree for c in self.N if not c.is_zero())

    def unit_field(self) -> RationalVec3Field:
        return RationalVec3Field.from_polynomials(self.N, self.sigma)


def check_pythagorean(N) -> PythagoreanNormalField:
    """Return N with its polynomial length, or raise NotPythagoreanError."""
    N = _vec(N)
    if all(c.is_zero() for c in N):
        raise ValueError("N must not vanish identically")
    s = _pdot(N, N)
    r = poly_sqrt(s)
    if r is None:
        # the witness is the non-square |N|^2 itself
        raise NotPythagoreanError("|N|^2 is not the square of a polynomial", residual=s)
    return PythagoreanNormalField(N, r)


@dataclass
class PNSystem:
    """Coefficient matrix of P . N = 0, Q . N = 0, dP/dv - dQ/du = 0.

    Column c holds the coefficient ``columns[c] = (block, (i, j))`` of u^i v^j
    in the component named by block (p1..p3 for P, q1..q3 for Q).
    """

    k: int
    ell: int
    matrix: List[List[Fraction]]
    columns: List[Tuple[str, Monomial]]
    rows: List[Tuple[str, Monomial]]
    normal_field: PythagoreanNormalField

    @property
    def rowcount(self) -> int:
        return len(self.rows)

    @property
    def colcount(self) -> int:
        return len(self.columns)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rowcount, self.colcount

    def unpack(self, vec: Sequence) -> Tuple[PolyVec, PolyVec]:
        comps: Dict[str, dict] = {b: {} for b in _BLOCKS}
        for (b, m), c in zip(self.columns, vec):
            if c:
                comps[b][m] = Fraction(c)
        P = tuple(Poly(comps[b]) for b in _BLOCKS[:3])
        Q = tuple(Poly(comps[b]) for b in _BLOCKS[3:])
        return P, Q

    def pack(self, P, Q) -> List[Fraction]:
        polys = dict(zip(_BLOCKS, list(_vec(P)) + list(_vec(Q))))
        used = {b: set(p.coeffs) for b, p in polys.items()}
        allowed = set(monomials(self.ell))
        for b, ms in used.items():
            if not ms <= allowed:
                raise ValueError(f"{b} exceeds degree {self.ell}")
        return [polys[b].coeff(*m) for b, m in self.columns]

    def residual(self, vec: Sequence) -> List[Fraction]:
        return matvec(self.matrix, vec)


def expected_shape(k: int, ell: int) -> Tuple[int, int]:
    return 2 * comb(k + ell + 2, 2) + 3 * comb(ell + 1, 2), 6 * comb(ell + 2, 2)


def build_system(N, ell: int) -> PNSystem:
    pf = N if isinstance(N, PythagoreanNormalField) else check_pythagorean(N)
    if ell < 1:
        raise ValueError("ell must be at least 1")
    k = pf.k
    cols = [(b, m) for b in _BLOCKS for m in monomials(ell)]
    col_index = {c: n for n, c in enumerate(cols)}
    row_mons = monomials(k + ell)
    int_mons = monomials(ell - 1)
    rows = [("P.N", m) for m in row_mons] + [("Q.N", m) for m in row_mons]
    rows += [(f"int{s + 1}", m) for s in range(3) for m in int_mons]
    row_index = {r: n for n, r in enumerate(rows)}
    M = [[Fraction(0)] * len(cols) for _ in rows]
    for half, blocks in (("P.N", _BLOCKS[:3]), ("Q.N", _BLOCKS[3:])):
        for s, b in enumerate(blocks):
            for (a1, a2), c in pf.N[s].items():
                for m in monomials(ell):
                    r = row_index[(half, (m[0] + a1, m[1] + a2))]
                    M[r][col_index[(b, m)]] += c
    for s in range(3):
        p, q = _BLOCKS[s], _BLOCKS[s + 3]
        for (i, j) in monomials(ell):
            # d/dv of p u^i v^j lands on u^i v^(j-1); d/du of q on u^(i-1) v^j
            if j:
                M[row_index[(f"int{s + 1}", (i, j - 1))]][col_index[(p, (i, j))]] += j
            if i:
                M[row_index[(f"int{s + 1}", (i - 1, j))]][col_index[(q, (i, j))]] -= i
    return PNSystem(k, ell, M, cols, rows, pf)


def integrate(P: PolyVec, Q: PolyVec) -> PolyVec:
    """x = int_0^u P du + int_0^v Q(0, v) dv (the constant fixed at u = 0)."""
    out = []
    for p, q in zip(P, Q):
        out.append(p.integrate("u") + q.restrict(u=0).integrate("v"))
    return tuple(out)


@dataclass
class PolynomialPNSurface:
    x: PolyVec
    P: PolyVec
    Q: PolyVec
    f: Poly
    normal_field: PythagoreanNormalField

    def integrability_residual(self) -> PolyVec:
        return tuple(p.diff("v") - q.diff("u") for p, q in zip(self.P, self.Q))

    def verify(self) -> bool:
        xu = tuple(c.diff("u") for c in self.x)
        xv = tuple(c.diff("v") for c in self.x)
        if xu != self.P or xv != self.Q:
            return False
        cr = _pcross(xu, xv)
        return all((c - self.f * n).is_zero() for c, n in zip(cr, self.normal_field.N))

    def to_patch(self, label: str = "") -> RationalPNPatch:
        n = self.normal_field.unit_field()
        x = RationalVec3Field.from_polynomials(self.x)
        return RationalPNPatch(n, n.dot(x), x, label=label)


@dataclass
class PNSolveReport:
    system: PNSystem
    nullspace_dim: int
    surfaces: List[PolynomialPNSurface]
    degenerate: int
    combined: bool = False  # True if a surface came from a sum of two basis pairs
    basis: List[List[Fraction]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "k": self.system.k,
            "ell": self.system.ell,
            "rows": self.system.rowcount,
            "cols": self.system.colcount,
            "nullspace_dim": self.nullspace_dim,
            "surfaces": len(self.surfaces),
            "degenerate_basis_pairs": self.degenerate,
            "combined": self.combined,
        }


def surface_from_pair(pf: PythagoreanNormalField, P: PolyVec, Q: PolyVec) -> Optional[PolynomialPNSurface]:
    """Integrate one kernel pair; None if cross(P, Q) vanishes or f is not polynomial."""
    cr = _pcross(P, Q)
    if all(c.is_zero() for c in cr):
        return None
    f = _pdot(cr, pf.N).exact_divide(pf.sigma * pf.sigma)
    if f is None:
        return None
    surf = PolynomialPNSurface(integrate(P, Q), P, Q, f, pf)
    if not surf.verify():
        return None
    return surf


def pn_solutions(N, ell: int) -> PNSolveReport:
    """Kernel of the system, integrated pair by pair.

    Kernel basis pairs with cross(P, Q) = 0 are counted as degenerate. If all
    basis pairs are degenerate, sums of two basis pairs are tried, since the
    cross product is not linear in the pair.
    """
    system = build_system(N, ell)
    pf = system.normal_field
    basis = nullspace(system.matrix, system.colcount)
    surfaces, degenerate = [], 0
    for vec in basis:
        s = surface_from_pair(pf, *system.unpack(vec))
        if s is None:
            degenerate += 1
        else:
            surfaces.append(s)
    combined = False
    if not surfaces:
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                vec = [x + y for x, y in zip(basis[a], basis[b])]
                s = surface_from_pair(pf, *system.unpack(vec))
                if s is not None:
                    surfaces.append(s)
                    combined = True
                    break
            if combined:
                break
    return PNSolveReport(system, len(basis), surfaces, degenerate, combined, basis)


def solve_pn(N, ell: int) -> List[PolynomialPNSurface]:
    report = pn_solutions(N, ell)
    if not report.surfaces:
        raise EmptySolutionError(
            f"no pair with cross(P, Q) != 0 for ell={ell} (kernel dimension {report.nullspace_dim})"
        )
    return report.surfaces
