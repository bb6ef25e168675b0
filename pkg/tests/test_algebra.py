from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pnpatch.algebra import (
    U,
    V,
    BivariatePolynomial,
    BivariateRationalFunction,
    RationalVec3Field,
    det3,
    matvec,
    nullspace,
    rank,
    rational_identity,
    solve3,
    vanishes_identically,
)
from pnpatch.algebra.gcd import poly_gcd
from pnpatch.errors import PoleError, SingularError

su, sv = sympy.symbols("u v")

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), small, max_size=6
).map(BivariatePolynomial)


def to_sympy(p):
    return sum((sympy.Rational(c.numerator, c.denominator) * su**i * sv**j for (i, j), c in p.items()),
               sympy.Integer(0))


def from_sympy(e):
    P = sympy.Poly(sympy.expand(e), su, sv)
    return BivariatePolynomial({(int(i), int(j)): Fraction(int(c.p), int(c.q)) for (i, j), c in P.terms()})


def test_no_zero_coefficients_stored():
    p = BivariatePolynomial({(0, 0): 1, (1, 0): 0})
    assert p.coeffs == {(0, 0): 1}
    assert (U - U).is_zero()
    assert (U - U).bidegree is None
    assert (U * V * V + 1).bidegree == (1, 2)


def test_exact_fraction_normalization():
    x = Fraction(6, -4)
    assert (x.numerator, x.denominator) == (-3, 2)


@given(polys, polys)
def test_product_matches_sympy(p, q):
    assert p * q == from_sympy(to_sympy(p) * to_sympy(q))
    assert p + q == from_sympy(to_sympy(p) + to_sympy(q))


@given(polys)
def test_integrate_then_diff(p):
    assert p.integrate("u").diff("u") == p
    assert p.integrate("v").diff("v") == p
    assert p.integrate("u").restrict(u=0).is_zero()


@given(polys, small, small)
def test_evaluate_matches_sympy(p, a, b):
    expected = to_sympy(p).subs({su: sympy.Rational(a.numerator, a.denominator),
                                 sv: sympy.Rational(b.numerator, b.denominator)})
    assert p.evaluate(a, b) == Fraction(int(expected.p), int(expected.q))


@given(polys, polys)
def test_exact_divide(p, q):
    if q.is_zero():
        return
    assert (p * q).exact_divide(q) == p


def test_exact_divide_fails_when_not_divisible():
    assert (U * U + 1).exact_divide(U + 1) is None


def test_rational_function_pole():
    f = BivariateRationalFunction(U, U - V)
    assert f.evaluate(2, 1) == 2
    with pytest.raises(PoleError):
        f.evaluate(1, 1)


def test_rational_function_arithmetic_and_quotient_rule():
    f = BivariateRationalFunction(U * V, 1 + U * U)
    g = BivariateRationalFunction(V, 1 + U * U)
    assert (f + g).den == 1 + U * U  # shared denominator kept
    df = f.diff("u")
    a, b = Fraction(1, 3), Fraction(-2, 5)
    expected = sympy.diff(su * sv / (1 + su**2), su).subs({su: sympy.Rational(1, 3), sv: sympy.Rational(-2, 5)})
    assert df.evaluate(a, b) == Fraction(int(expected.p), int(expected.q))
    assert (f / g).equals(BivariateRationalFunction(U, 1))


def test_reduced_uses_gcd():
    f = BivariateRationalFunction((U + 1) * (V - 2), (U + 1) * (U + V))
    r = f.reduced()
    assert r.equals(f)
    assert r.den.total_degree == 1


def test_poly_gcd():
    a = (U + 2 * V) * (U * U - V)
    b = (U + 2 * V) * (V + 3)
    g = poly_gcd(a, b)
    assert g.exact_divide(U + 2 * V) is not None and g.total_degree == 1


def test_vec3_field_cross_and_dot():
    a = RationalVec3Field.from_polynomials((U, V, 1))
    b = RationalVec3Field.from_polynomials((V, -U, 0))
    c = a.cross(b)
    assert c.dot(a).num.is_zero() and c.dot(b).num.is_zero()
    nums, den = RationalVec3Field.from_polynomials((U, V, 1), 1 + U).common_denominator()
    assert den == 1 + U and list(nums) == [U, V, BivariatePolynomial.constant(1)]


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=60)
@given(matrices)
def test_nullspace_properties(M):
    cols = len(M[0])
    basis = nullspace(M)
    assert len(basis) + rank(M) == cols
    assert rank(M) == sympy.Matrix(M).rank()
    for vec in basis:
        assert all(x == 0 for x in matvec(M, vec))


def test_solve3_and_singular():
    M = [[2, 1, 0], [0, 3, 1], [1, 0, 4]]
    b = [1, 2, 3]
    x = solve3(M, b)
    assert matvec(M, x) == [1, 2, 3]
    assert det3(M) == sympy.Matrix(M).det()
    with pytest.raises(SingularError):
        solve3([[1, 2, 3], [2, 4, 6], [0, 0, 1]], b)


def test_identity_holds_and_witness():
    leaves = {"a": U + V, "b": U * V}
    ok = vanishes_identically(lambda L: L["a"] * L["a"] - L["a"] ** 2, leaves)
    assert ok.holds and ok.witness is None
    bad = vanishes_identically(lambda L: L["a"] * L["a"] - 4 * L["b"], leaves)
    # (u - v)^2: the witness must be a node off the diagonal
    assert not bad.holds
    w = bad.witness
    assert w[0] != w[1] and bad.residual == (w[0] - w[1]) ** 2


@given(polys, polys)
def test_identity_test_is_complete(p, q):
    """Nonzero products are always detected; the grid is large enough."""
    check = vanishes_identically(lambda L: L["p"] * L["q"], {"p": p, "q": q})
    assert check.holds == (p.is_zero() or q.is_zero())
    if not check.holds:
        assert (p * q).evaluate(*check.witness) == check.residual


def test_rational_identity():
    a = BivariateRationalFunction(U * U - V * V, U + V)
    b = BivariateRationalFunction(U - V, 1)
    assert rational_identity(a, b).holds
    assert not rational_identity(a, BivariateRationalFunction(U, 1)).holds
