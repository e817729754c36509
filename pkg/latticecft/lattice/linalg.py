from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
import sympy

from latticecft.scalars import Scalar, ScalarBackend


def leading_minors_positive(backend: ScalarBackend, gram: Sequence[Sequence[Scalar]]) -> bool:
    n = len(gram)
    if n == 0:
        return True
    if not backend.is_exact:
        g = np.array([[backend.to_float(x) for x in row] for row in gram], dtype=np.float64)
        scale = max(1.0, float(np.max(np.abs(g))))
        for k in range(1, n + 1):
            if float(np.linalg.det(g[:k, :k])) <= float(backend.tolerance) * scale**k:
                return False
        return True
    m = sympy.Matrix([[backend.to_sympy(x) for x in row] for row in gram])
    for k in range(1, n + 1):
        minor = sympy.simplify(m[:k, :k].det())
        if not minor.is_positive:
            return False
    return True


def solve_square(
    backend: ScalarBackend,
    matrix: Sequence[Sequence[Scalar]],
    rhs: Sequence[Scalar],
) -> Optional[list[Scalar]]:
    """Solve matrix * x = rhs; None when the matrix is singular."""
    n = len(matrix)
    if n == 0:
        return []
    if not backend.is_exact:
        a = np.array([[backend.to_float(x) for x in row] for row in matrix], dtype=np.float64)
        b = np.array([backend.to_float(x) for x in rhs], dtype=np.float64)
        try:
            x = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            return None
        return [backend.convert(float(v)) for v in x]
    a = sympy.Matrix([[backend.to_sympy(x) for x in row] for row in matrix])
    if sympy.simplify(a.det()) == 0:
        return None
    b = sympy.Matrix([backend.to_sympy(x) for x in rhs])
    sol = a.LUsolve(b)
    return [backend.from_sympy(sympy.simplify(v)) for v in sol]
