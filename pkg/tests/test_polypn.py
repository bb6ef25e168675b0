from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pnpatch.algebra import U, V, BivariatePolynomial, rank, vanishes_identically
from pnpatch.analysis import pn_verify
from pnpatch.errors import EmptySolutionError, NotPythagoreanError
from pnpatch.polypn import (
    build_system,
    check_pythagorean,
    expected_shape,
    integrate,
    monomials,
    pn_solutions,
    poly_sqrt,
    solve_pn,
)

ENNEPER_N = (-2 * U, 2 * V, 1 - U * U - V * V)
# x_u and x_v of x = (u - u^3/3 + u v^2, v - v^3/3 + u^2 v, u^2 - v^2)
ENNEPER_P = (1 - U * U + V * V, 2 * U * V, 2 * U)
ENNEPER_Q = (2 * U * V, 1 - V * V + U * U, -2 * V)


def quaternion_field(a, b, c, d):
    """(2(ac + bd), 2(bc - ad), a^2 + b^2 - c^2 - d^2) has length a^2+b^2+c^2+d^2."""
    return (2 * (a * c + b * d), 2 * (b * c - a * d), a * a + b * b - c * c - d * d)


def test_monomial_order():
    assert monomials(2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert len(monomials(5)) == comb(7, 2)


small = st.fractions(min_value=-4, max_value=4, max_denominator=5)
polys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=4).map(
    BivariatePolynomial
)


@given(polys)
def test_sqrt_of_square(p):
    r = poly_sqrt(p * p)
    assert r is not None and r * r == p * p
    assert r == p or r == -p


def test_sqrt_rejects_non_squares():
    assert poly_sqrt(U * U + 1) is None
    assert poly_sqrt(2 * U * U) is None
    assert poly_sqrt(U) is None
    assert poly_sqrt(BivariatePolynomial.constant(Fraction(9, 4))) == Fraction(3, 2)


def test_pythagorean_check():
    pf = check_pythagorean(ENNEPER_N)
    assert pf.sigma == 1 + U * U + V * V and pf.k == 2
    with pytest.raises(NotPythagoreanError) as exc:
        check_pythagorean((U, V, 1))
    assert exc.value.residual == U * U + V * V + 1
    with pytest.raises(ValueError):
        check_pythagorean((0, 0, 0))


@pytest.mark.parametrize("k, ell", [(2, 1), (2, 2), (4, 2), (1, 3), (3, 1)])
def test_expected_shape_formula(k, ell):
    rows, cols = expected_shape(k, ell)
    # rows: P.N and Q.N up to degree k + ell, three integrability
    # components up to degree ell - 1; cols: six blocks of degree ell
    n = lambda d: (d + 1) * (d + 2) // 2  # noqa: E731
    assert rows == 2 * n(k + ell) + 3 * n(ell - 1)
    assert cols == 6 * n(ell)


coef = st.integers(-3, 3)
linear = st.tuples(coef, coef, coef).map(lambda c: c[0] * U + c[1] * V + c[2])


@settings(max_examples=25, deadline=None)
@given(linear, linear, linear, linear, st.integers(1, 3))
def test_system_shape_property(a, b, c, d, ell):
    N = quaternion_field(a, b, c, d)
    if all(x.is_zero() for x in N):
        return
    pf = check_pythagorean(N)
    system = build_system(pf, ell)
    assert system.shape == expected_shape(pf.k, ell)
    assert pf.sigma == a * a + b * b + c * c + d * d


def test_enneper_system():
    system = build_system(ENNEPER_N, 2)
    assert system.shape == (39, 36)
    vec = system.pack(ENNEPER_P, ENNEPER_Q)
    assert all(r == 0 for r in system.residual(vec))
    assert system.unpack(vec) == (ENNEPER_P, ENNEPER_Q)
    x = integrate(ENNEPER_P, ENNEPER_Q)
    assert x == (U - U**3 / 3 + U * V * V, V - V**3 / 3 + U * U * V, U * U - V * V)


def test_enneper_in_kernel_span():
    rep = pn_solutions(ENNEPER_N, 2)
    vec = rep.system.pack(ENNEPER_P, ENNEPER_Q)
    assert rank(rep.basis + [vec]) == rep.nullspace_dim == 3
    assert len(rep.surfaces) == 3 and rep.degenerate == 0
    for s in rep.surfaces:
        assert all(r.is_zero() for r in s.integrability_residual())
        assert s.verify()


def test_kernel_surfaces_against_sympy():
    u, v = sympy.symbols("u v")
    Nsym = sympy.Matrix([-2 * u, 2 * v, 1 - u**2 - v**2])
    for s in solve_pn(ENNEPER_N, 2):
        X = sympy.Matrix([sum(sympy.Rational(c.numerator, c.denominator) * u**i * v**j
                              for (i, j), c in comp.items()) for comp in s.x])
        n = X.diff(u).cross(X.diff(v))
        assert sympy.expand(n.cross(Nsym)) == sympy.zeros(3, 1)


def test_kernel_surfaces_are_pn():
    for n, s in enumerate(solve_pn(ENNEPER_N, 2)):
        assert pn_verify(s.to_patch(f"s{n}")).ok


def test_empty_solution():
    N = quaternion_field(U + 2 * V + 1, 3 * U - V + 2, U + V - 1, 2 * U + 5 * V + 3)
    rep = pn_solutions(N, 1)
    assert rep.system.shape == (23, 18) and rep.nullspace_dim == 0
    with pytest.raises(EmptySolutionError):
        solve_pn(N, 1)


def test_degenerate_basis_pairs_combined():
    # constant normal: every kernel pair is a pair of horizontal vectors
    rep = pn_solutions((0, 0, 1), 1)
    assert rep.degenerate == rep.nullspace_dim > 0
    assert rep.combined and len(rep.surfaces) == 1
    s = rep.surfaces[0]
    assert s.verify() and s.x[2].is_zero()


def test_cross_identity_for_kernel_pair():
    """cross(x_u, x_v) = sigma * N for the Enneper pair, by exact identity testing."""
    x = integrate(ENNEPER_P, ENNEPER_Q)
    leaves = {f"x{k}u": x[k].diff("u") for k in range(3)}
    leaves.update({f"x{k}v": x[k].diff("v") for k in range(3)})
    leaves.update({f"N{k}": ENNEPER_N[k] for k in range(3)})
    leaves["sigma"] = 1 + U * U + V * V
    for k in range(3):
        a, b = (k + 1) % 3, (k + 2) % 3
        check = vanishes_identically(
            lambda L, a=a, b=b, k=k: L[f"x{a}u"] * L[f"x{b}v"] - L[f"x{b}u"] * L[f"x{a}v"]
            - L["sigma"] * L[f"N{k}"],
            leaves,
        )
        assert check.holds
