"""Independent reference computations shared by the test modules."""

import math

import numpy as np

from pnpatch.algebra import U, V


def sphere_source(r, eps=0, p=None):
    """Isotropic source of a sphere of radius r, optionally perturbed by eps * p."""
    y3 = r * (1 + U * U + V * V) / 2
    if eps:
        y3 = y3 + eps * p
    return (U, V, y3)


def support_on_sphere(y3):
    """h as a function on S^2: with (u, v) the stereographic chart, h = y3 (1 - m3)."""
    def h(m):
        a, b = m[0] / (1 - m[2]), m[1] / (1 - m[2])
        return y3.evaluate_float(a, b) * (1 - m[2])
    return h


def _exp(m, w):
    t = np.linalg.norm(w)
    return m if t == 0 else math.cos(t) * m + math.sin(t) * w / t


def fd_detM(h, u, v, step=1e-3):
    """det(Hess h + h I) by central differences along geodesics through m(u, v).

    Normal coordinates via the exponential map have vanishing Christoffel
    symbols at m, so plain second differences give the covariant Hessian.
    One Richardson step removes the leading O(step^2) error.
    """
    D = 1 + u * u + v * v
    m = np.array([2 * u, 2 * v, u * u + v * v - 1]) / D
    e1 = np.cross(m, [1.0, 0.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(m, e1)

    def f(a, b):
        return h(_exp(m, a * e1 + b * e2))

    def hess(s):
        h0 = f(0, 0)
        h11 = (f(s, 0) - 2 * h0 + f(-s, 0)) / s**2
        h22 = (f(0, s) - 2 * h0 + f(0, -s)) / s**2
        h12 = (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4 * s * s)
        return np.array([[h11, h12], [h12, h22]])

    Hs = (4 * hess(step / 2) - hess(step)) / 3
    return float(np.linalg.det(Hs + h(m) * np.eye(2)))
