from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pnpatch.algebra import U, V
from pnpatch.errors import (
    CornerMismatchError,
    InputError,
    NorthPoleError,
    PoleProximityError,
    ZeroNormalError,
)
from pnpatch.patchwork import (
    HermiteGrid,
    build_isotropic_net,
    coons,
    difference_vectors,
    ferguson,
    hermite_basis,
    project,
)
from pnpatch.dualspace import IsotropicPlane

q = st.fractions(min_value=-10, max_value=10, max_denominator=20)
vec = st.tuples(q, q, q)


def flat_grid(rows=2, cols=2):
    pts = [[(i, j, 0) for j in range(cols)] for i in range(rows)]
    nrm = [[(0, 0, -1)] * cols for _ in range(rows)]
    return HermiteGrid(pts, nrm)


def test_grid_validation():
    with pytest.raises(InputError):
        HermiteGrid([[(0, 0, 0)]], [[(0, 0, -1)]])
    with pytest.raises(InputError):
        HermiteGrid([[(0, 0, 0), (1, 0, 0)], [(0, 1, 0)]], [[(0, 0, -1)] * 2, [(0, 0, -1)]])
    with pytest.raises(ZeroNormalError):
        HermiteGrid([[(0, 0, 0), (1, 0, 0)]] * 2, [[(0, 0, 0), (0, 0, -1)]] * 2)
    g = flat_grid()
    with pytest.raises(InputError):
        g.with_scales([[(1, 1), (1, -1)], [(1, 1), (1, 1)]])
    assert g.scales(0, 0) == (1, 1)


def test_pole_check():
    g = HermiteGrid([[(0, 0, 0), (1, 0, 0)]] * 2, [[(0, 0, 1), (0, 0, -1)], [(0, 0, -1), (1, 0, 10**9)]])
    assert g.pole_violations() == [(0, 0), (1, 1)]
    with pytest.raises(PoleProximityError) as exc:
        g.check_pole()
    assert "--auto-rotate" in str(exc.value)


def test_north_pole_reports_index():
    g = HermiteGrid([[(0, 0, 0), (1, 0, 0)]] * 2, [[(0, 0, -1), (0, 0, -1)], [(0, 0, -1), (0, 0, 1)]])
    with pytest.raises(NorthPoleError) as exc:
        build_isotropic_net(g)
    assert exc.value.index == (1, 1)


@given(vec, vec, vec, vec)
def test_ferguson_hermite_data(a0, t0, a1, t1):
    c = ferguson(a0, t0, a1, t1)
    assert c(0) == a0 and c(1) == a1
    assert c.derivative(0) == t0 and c.derivative(1) == t1
    t = Fraction(2, 7)
    assert c(t) == tuple(sum(ck[k] * t**p for p, ck in enumerate(c.coefficients)) for k in range(3))


def test_hermite_basis_partition():
    for t in (Fraction(0), Fraction(1, 3), Fraction(1)):
        h0, h1, _, _ = hermite_basis(t)
        assert h0 + h1 == 1


def test_difference_vectors_rule():
    pts = [[(Fraction(i * i), Fraction(j), Fraction(0)) for j in range(3)] for i in range(3)]
    du, dv = difference_vectors(pts, 1, 0)
    assert du == (4, 0, 0)  # central: a[2] - a[0]
    assert dv == (0, 2, 0)  # doubled forward difference
    du, _ = difference_vectors(pts, 2, 2)
    assert du == (6, 0, 0)  # doubled backward: 2 (4 - 1)


@given(vec, vec.filter(any))
def test_projection_lies_in_plane(w, m):
    tau = IsotropicPlane(m, (0, 0, 0))
    p = project(w, tau)
    assert tau.contains_direction(p)
    # idempotent
    assert project(p, tau) == p


def _bilinear_curves(a00, a10, a01, a11):
    sub = lambda a, b: tuple(x - y for x, y in zip(a, b))  # noqa: E731
    c0 = ferguson(a00, sub(a10, a00), a10, sub(a10, a00))
    c1 = ferguson(a01, sub(a11, a01), a11, sub(a11, a01))
    d0 = ferguson(a00, sub(a01, a00), a01, sub(a01, a00))
    d1 = ferguson(a10, sub(a11, a10), a11, sub(a11, a10))
    return c0, c1, d0, d1


def _bilinear(a00, a10, a01, a11, k):
    return (a00[k] * (1 - U) * (1 - V) + a10[k] * U * (1 - V)
            + a01[k] * (1 - U) * V + a11[k] * U * V)


@given(vec, vec, vec)
def test_coons_affine_precision(a00, a10, a01):
    # zero twist: a11 completes the parallelogram
    a11 = tuple(b + c - a for a, b, c in zip(a00, a10, a01))
    patch = coons(*_bilinear_curves(a00, a10, a01, a11))
    polys = patch.polynomials()
    for k in range(3):
        assert polys[k] == _bilinear(a00, a10, a01, a11, k)


_F1U = 3 * U * U - 2 * U * U * U
_F1V = 3 * V * V - 2 * V * V * V


@given(vec, vec, vec, vec)
def test_coons_twisted_bilinear_deviation(a00, a10, a01, a11):
    """Hermite blending does not reproduce the twist term u v: the remainder
    is -e (u - F1(u)) (v - F1(v)) with e the twist vector."""
    patch = coons(*_bilinear_curves(a00, a10, a01, a11))
    polys = patch.polynomials()
    for k in range(3):
        e = a00[k] - a10[k] - a01[k] + a11[k]
        expected = _bilinear(a00, a10, a01, a11, k) - e * (U - _F1U) * (V - _F1V)
        assert polys[k] == expected


@given(vec, vec, vec, vec, vec, vec, vec, vec)
def test_coons_boundary_reproduction(a00, a10, a01, a11, t1, t2, t3, t4):
    c0 = ferguson(a00, t1, a10, t2)
    c1 = ferguson(a01, t3, a11, t4)
    d0 = ferguson(a00, t2, a01, t1)
    d1 = ferguson(a10, t4, a11, t3)
    patch = coons(c0, c1, d0, d1)
    y = patch.polynomials()
    for k in range(3):
        assert y[k].restrict(v=0) == c0.polynomials("u")[k]
        assert y[k].restrict(v=1) == c1.polynomials("u")[k]
        assert y[k].restrict(u=0) == d0.polynomials("v")[k]
        assert y[k].restrict(u=1) == d1.polynomials("v")[k]


def test_coons_corner_mismatch():
    c0, c1, d0, d1 = _bilinear_curves((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0))
    d1 = ferguson((1, 0, 1), (0, 1, 0), (1, 1, 0), (0, 1, 0))
    with pytest.raises(CornerMismatchError):
        coons(c0, c1, d0, d1)


def test_network_structure(network5):
    network, patches = network5
    assert network.ferguson_count == 12
    assert network.cells == [(0, 0), (0, 1), (1, 0), (1, 1)]
    # neighbours share the very same boundary curve objects
    P = network.patches
    assert P[(0, 0)].c1 is P[(0, 1)].c0
    assert P[(0, 0)].d1 is P[(1, 0)].d0
    assert len(network.shared_curves()) == 4


def test_network_corner_interpolation_in_isotropic_space(network5):
    network, _ = network5
    a = network.net.points
    for (i, j), patch in network.patches.items():
        for (du, dv), val in patch.corners.items():
            assert val == tuple(a[i + du][j + dv])
            assert patch(du, dv) == tuple(a[i + du][j + dv])


def test_network_tangents_in_tau(network5):
    network, _ = network5
    net = network.net
    rows, cols = net.shape
    for i in range(rows):
        for j in range(cols):
            assert net.planes[i][j].contains_direction(net.tu[i][j])
            assert net.planes[i][j].contains_direction(net.tv[i][j])


def test_first_isotropic_point(network5):
    # p = 0 with n = (0, 0, -1): plane z = 0, i.e. (0, 0, -1, 0) -> (0, 0, 0)
    network, _ = network5
    assert tuple(network.net.points[0][0]) == (0, 0, 0)
    # p = (0, -11/72, -1/12), n = (0, 4, -3)/5: h = -11/90 + 1/20 = -13/180,
    # x3 = -3/5 so the isotropic point is (0, 4/5, -13/180) / (8/5)
    assert tuple(network.net.points[0][1]) == (0, Fraction(1, 2), Fraction(-13, 288))


def test_source_polynomials_are_bicubic(network5):
    network, _ = network5
    for patch in network.patches.values():
        for p in patch.polynomials():
            bd = p.bidegree
            assert bd is None or (bd[0] <= 3 and bd[1] <= 3)
