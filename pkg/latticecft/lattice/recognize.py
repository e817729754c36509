from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import pdist

from latticecft.lattice.core import AmbientVector, Lattice, SplitSpace, build_lattice
from latticecft.lattice.smith import hermite_row_basis
from latticecft.scalars import ScalarBackend

logger = logging.getLogger(__name__)

# minimal gap must be at least diameter / GAP_RATIO for the sample to count as discrete
GAP_RATIO = 64
MAX_DENOMINATOR = 64


def _float_matrix(backend: ScalarBackend, vectors: Sequence[AmbientVector]) -> np.ndarray:
    rows = [[backend.to_float(x) for x in v[0]] + [backend.to_float(x) for x in v[1]] for v in vectors]
    return np.asarray(rows, dtype=np.float64)


def _unique(backend: ScalarBackend, vectors: Sequence[AmbientVector]) -> list[AmbientVector]:
    seen: set = set()
    out: list[AmbientVector] = []
    for v in vectors:
        key = tuple(backend.key(x) for x in v[0] + v[1])
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


def looks_discrete(backend: ScalarBackend, vectors: Sequence[AmbientVector], *, tolerance: float) -> tuple[bool, float, float]:
    """Sample-scale heuristic: (discrete?, minimal gap, diameter)."""
    pts = _float_matrix(backend, _unique(backend, vectors))
    if len(pts) < 2:
        return True, 0.0, 0.0
    d = pdist(pts)
    diameter = float(d.max())
    nonzero = d[d > tolerance]
    gap = float(nonzero.min()) if nonzero.size else 0.0
    return gap >= diameter / GAP_RATIO, gap, diameter


def _lcm_denominator(values: Sequence[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


def _generators_exact(space: SplitSpace, backend: ScalarBackend, vectors: Sequence[AmbientVector]) -> Optional[list[AmbientVector]]:
    width = 2 if backend.kind == "quadratic" else 1
    rational_rows: list[list[Fraction]] = []
    for v in vectors:
        row: list[Fraction] = []
        for x in v[0] + v[1]:
            a, b = backend.rational_components(x)
            row.extend((a, b)[:width])
        rational_rows.append(row)
    scale = _lcm_denominator([x for row in rational_rows for x in row])
    int_rows = [[int(x * scale) for x in row] for row in rational_rows]
    basis = hermite_row_basis(int_rows)

    real_rank = int(np.linalg.matrix_rank(_float_matrix(backend, vectors))) if vectors else 0
    if len(basis) > real_rank:
        # more Z-independent directions than real ones: the group is dense somewhere
        logger.info("sample spans a Z-module of rank %d inside a real span of rank %d", len(basis), real_rank)
        return None

    gens: list[AmbientVector] = []
    for row in basis:
        comps = [Fraction(x, scale) for x in row]
        values = []
        for k in range(space.dim):
            a = comps[k * width]
            b = comps[k * width + 1] if width == 2 else Fraction(0)
            values.append(backend.from_components(a, b))
        gens.append((tuple(values[: space.d_plus]), tuple(values[space.d_plus :])))
    return gens


def _generators_float(
    space: SplitSpace, backend: ScalarBackend, vectors: Sequence[AmbientVector], *, tolerance: float
) -> Optional[list[AmbientVector]]:
    pts = _float_matrix(backend, vectors)
    norms = np.linalg.norm(pts, axis=1)
    order = np.argsort(norms, kind="stable")
    frame: list[np.ndarray] = []
    for idx in order:
        if norms[idx] <= tolerance:
            continue
        candidate = np.vstack(frame + [pts[idx]])
        if np.linalg.matrix_rank(candidate, tol=tolerance * max(1.0, float(norms.max()))) == len(frame) + 1:
            frame.append(pts[idx])
    if not frame:
        return []
    basis = np.vstack(frame)
    coords, *_ = np.linalg.lstsq(basis.T, pts.T, rcond=None)
    coords = coords.T
    residual = float(np.max(np.abs(coords @ basis - pts)))
    if residual > tolerance * max(1.0, float(norms.max())) * 1e3:
        return None

    rational = [[Fraction(float(c)).limit_denominator(MAX_DENOMINATOR) for c in row] for row in coords]
    for row, frow in zip(rational, coords):
        if any(abs(float(r) - float(f)) > 1e-6 for r, f in zip(row, frow)):
            return None
    scale = _lcm_denominator([x for row in rational for x in row])
    int_rows = [[int(x * scale) for x in row] for row in rational]
    hermite = hermite_row_basis(int_rows)
    gens: list[AmbientVector] = []
    for row in hermite:
        vec = (np.asarray(row, dtype=np.float64) / scale) @ basis
        values = [backend.convert(float(x)) for x in vec]
        gens.append((tuple(values[: space.d_plus]), tuple(values[space.d_plus :])))
    return gens


def recognize_lattice(
    space: SplitSpace,
    vectors: Sequence[AmbientVector],
    *,
    backend: ScalarBackend,
    tolerance: Optional[float] = None,
) -> Optional[Lattice]:
    """Generators whose integer span reproduces the sample, or None if it looks non-discrete.

    The returned lattice is not checked for integrality or evenness.
    """
    tol = float(tolerance if tolerance is not None else backend.tolerance)
    discrete, gap, diameter = looks_discrete(backend, vectors, tolerance=tol)
    if not discrete:
        logger.info("minimal gap %.3g below diameter/%d = %.3g", gap, GAP_RATIO, diameter / GAP_RATIO)
        return None

    nonzero = [v for v in vectors if not all(backend.is_zero(x) for x in v[0] + v[1])]
    if not nonzero:
        return build_lattice(space, [], backend=backend, validate=False)

    if backend.is_exact:
        gens = _generators_exact(space, backend, nonzero)
    else:
        gens = _generators_float(space, backend, nonzero, tolerance=tol)
    if gens is None:
        return None
    return build_lattice(space, gens, backend=backend, validate=False)
