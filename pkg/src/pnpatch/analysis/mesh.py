"""Triangle meshes sampled from PN patches."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..dualspace import RationalPNPatch
from .sampling import sample_patch


@dataclass
class TriangleMesh:
    vertices: np.ndarray  # (V, 3)
    normals: np.ndarray  # (V, 3)
    faces: List[Tuple[int, int, int]]
    skipped: List[Tuple[float, float]] = field(default_factory=list)
    label: str = ""


def tessellate(patch: RationalPNPatch, res: int = 16, route: str = "auto") -> TriangleMesh:
    """Sample a (res+1) x (res+1) grid and split every cell into two triangles.

    Vertex normals are the patch's own unit normals. Samples at poles of the
    rational point field are dropped together with their triangles and
    listed in ``skipped``.
    """
    if res < 1:
        raise ValueError("res must be positive")
    nodes = np.linspace(0.0, 1.0, res + 1)
    s = sample_patch(patch, nodes, nodes, route)
    ok = np.all(np.isfinite(s.x), axis=-1) & np.all(np.isfinite(s.n), axis=-1)
    index = -np.ones(ok.shape, dtype=int)
    verts, norms, skipped = [], [], []
    for a in range(res + 1):
        for b in range(res + 1):
            if ok[a, b]:
                index[a, b] = len(verts)
                verts.append(s.x[a, b])
                n = s.n[a, b]
                norms.append(n / np.linalg.norm(n))
            else:
                skipped.append((float(nodes[a]), float(nodes[b])))
    faces = []
    for a in range(res):
        for b in range(res):
            i00, i10, i01, i11 = index[a, b], index[a + 1, b], index[a, b + 1], index[a + 1, b + 1]
            for tri in ((i00, i10, i11), (i00, i11, i01)):
                if min(tri) >= 0:
                    faces.append(tuple(int(t) for t in tri))
    return TriangleMesh(
        np.array(verts).reshape(-1, 3), np.array(norms).reshape(-1, 3), faces, skipped, patch.label
    )
