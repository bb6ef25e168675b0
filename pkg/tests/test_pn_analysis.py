import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from oracles import fd_detM, sphere_source, support_on_sphere
from pnpatch import xi_patch
from pnpatch.algebra import U, V, RationalVec3Field
from pnpatch.analysis import (
    curvature_analysis,
    g1_check,
    network_edges,
    objective,
    offset,
    optimize_scales,
    pn_verify,
    ridge_detect,
    tessellate,
)
from pnpatch.analysis.curvature import curvature_from_samples
from pnpatch.analysis.sampling import sample_isotropic, sample_patch
from pnpatch.dualspace import RationalPNPatch
from pnpatch.errors import NonAdjacentError

R = Fraction(3, 2)
PTS = [(Fraction(0), Fraction(0)), (Fraction(1, 3), Fraction(2, 5)), (Fraction(-3, 4), Fraction(1, 7))]


@pytest.fixture(scope="module")
def sphere():
    return xi_patch(sphere_source(R), label="sphere")


def test_pn_verify_sphere(sphere):
    cert = pn_verify(sphere)
    assert cert.ok and cert.unit_normal and cert.witness is None


def test_pn_verify_reports_witness(sphere):
    bent = sphere.x_field + RationalVec3Field.from_polynomials((U * U * V, 0, 0))
    bad = RationalPNPatch(sphere.n_field, sphere.h_field, bent, label="bent")
    cert = pn_verify(bad)
    assert not cert.ok and cert.verdict == "failed"
    assert cert.witness is not None and cert.residual != 0


def test_pn_verify_rejects_non_unit_normal(sphere):
    doubled = RationalPNPatch(sphere.n_field.scale(2), sphere.h_field, sphere.x_field)
    cert = pn_verify(doubled)
    assert not cert.ok and not cert.unit_normal


def test_network_edges():
    cells = [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert set(network_edges(cells)) == {
        ((0, 0), (0, 1), "v1"), ((0, 0), (1, 0), "u1"),
        ((0, 1), (1, 1), "u1"), ((1, 0), (1, 1), "v1"),
    }


def test_g1_exact_on_network(network5):
    _, patches = network5
    rep = g1_check(patches[(0, 0)], patches[(0, 1)], "v1", samples=11)
    assert rep.passed and rep.exact_positions and rep.exact_normals
    with pytest.raises(NonAdjacentError):
        g1_check(patches[(0, 0)], patches[(1, 1)], "v1")
    with pytest.raises(ValueError):
        g1_check(patches[(0, 0)], patches[(0, 1)], "w1")


def test_offset_of_sphere_is_sphere(sphere):
    d = Fraction(1, 4)
    for side, rr in (("+", R + d), ("-", R - d)):
        off = offset(sphere, d, side)
        for u, v in PTS:
            x = off.point(u, v)
            assert sum(c * c for c in x) == rr * rr
            assert off.support(u, v) == rr


def test_offset_distance_exact(network5):
    _, patches = network5
    p = patches[(1, 0)]
    d = Fraction(1, 10)
    off = offset(p, d, "-")
    for u, v in PTS[:2] + [(Fraction(1), Fraction(1, 2))]:
        diff = [a - b for a, b in zip(off.point(u, v), p.point(u, v))]
        assert sum(c * c for c in diff) == d * d
        assert tuple(-c / d for c in diff) == p.normal(u, v)
    assert offset(p, 0) is p
    with pytest.raises(ValueError):
        offset(p, d, "sideways")


def test_sphere_curvature(sphere):
    grid = curvature_analysis(sphere, 9)
    assert np.allclose(grid.detM, float(R) ** 2)
    assert np.allclose(grid.gaussK, 1 / float(R) ** 2)
    assert np.allclose(grid.eig, float(R))
    assert ridge_detect(grid).ok


def test_ratio_formula_matches_fd_oracle():
    p = U * U * V - U * V * V / 2 + U**3 / 3
    y = sphere_source(R, Fraction(1, 10), p)
    h = support_on_sphere(y[2])
    rng = np.random.default_rng(7)
    for u, v in rng.uniform(-1, 1, (20, 2)):
        ratio = curvature_from_samples(sample_isotropic(y, [u], [v])).detM[0, 0]
        ref = fd_detM(h, u, v)
        assert abs(ratio - ref) <= 1e-6 * abs(ref)


def test_objective_matches_quadrature(sphere):
    # K^2 dA on the sphere: r^-4 |n_u x n_v| = r^-4 * 4 / (1 + u^2 + v^2)^2
    ref, _ = integrate.dblquad(lambda v, u: 4 / (1 + u * u + v * v) ** 2, 0, 1, 0, 1)
    ref /= float(R) ** 4
    val = objective([sphere], resolution=200)
    assert val.finite
    assert abs(val.value - ref) < 1e-5 * ref


def test_routes_agree(network5):
    _, patches = network5
    nodes = np.linspace(0.05, 0.95, 5)
    a = sample_patch(patches[(0, 1)], nodes, nodes, "isotropic")
    b = sample_patch(patches[(0, 1)], nodes, nodes, "fields")
    for name in ("x", "xu", "xv", "n", "nu", "nv", "h"):
        assert np.allclose(getattr(a, name), getattr(b, name), rtol=1e-9, atol=1e-12), name


def test_ridges_at_unit_scales(network5):
    _, patches = network5
    flagged = [ridge_detect(curvature_analysis(p, 17)) for p in patches.values()]
    assert any(rep.verdict == "ridge detected" for rep in flagged)


def test_tessellate_counts(sphere):
    mesh = tessellate(sphere, 4)
    assert mesh.vertices.shape == (25, 3) and mesh.normals.shape == (25, 3)
    assert len(mesh.faces) == 32 and not mesh.skipped
    assert np.allclose(np.linalg.norm(mesh.normals, axis=1), 1)
    assert np.allclose(np.linalg.norm(mesh.vertices, axis=1), float(R))
    with pytest.raises(ValueError):
        tessellate(sphere, 0)


def test_optimize_never_worse(grid5):
    from conftest import uniform_scales

    grid = uniform_scales(grid5, Fraction(3, 2))
    res = optimize_scales(grid, budget=15, resolution=8)
    assert res.evaluations <= 15
    assert res.objective_after <= res.objective_before
    assert res.objective_after == min(res.history)
    assert all(Fraction(1, 4) <= s <= 2 for row in res.scales for pair in row for s in pair)
    with pytest.raises(ValueError):
        optimize_scales(grid, bounds=(0, 1))
