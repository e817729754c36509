from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(int(a[i][k]) * int(b[k][j]) for k in range(len(b))) for j in range(cols)] for i in range(len(a))]


@dataclass(frozen=True)
class SmithForm:
    """left * matrix * right == diagonal, with left and right unimodular."""

    diagonal: tuple[tuple[int, ...], ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        n = min(len(self.diagonal), len(self.diagonal[0]) if self.diagonal else 0)
        return tuple(int(self.diagonal[i][i]) for i in range(n))


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithForm:
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    left = identity(m)
    right = identity(n)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, k: int) -> None:
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(dst: int, src: int, k: int) -> None:
        for row in a:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            # divisibility of the remaining block by the pivot
            bad_row = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p != 0),
                None,
            )
            if bad_row is None:
                break
            add_row(t, bad_row, 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]

    return SmithForm(
        diagonal=tuple(tuple(r) for r in a),
        left=tuple(tuple(r) for r in left),
        right=tuple(tuple(r) for r in right),
    )


def hermite_row_basis(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Row echelon basis of the integer row span (zero rows dropped)."""
    a = [[int(x) for x in r] for r in rows if any(int(x) for x in r)]
    if not a:
        return []
    ncols = len(a[0])
    pivot_row = 0
    for col in range(ncols):
        if pivot_row >= len(a):
            break
        for i in range(pivot_row + 1, len(a)):
            b = a[i][col]
            if b == 0:
                continue
            top = a[pivot_row][col]
            x, y, g = igcdex(top, b)
            x, y, g = int(x), int(y), int(g)
            u, v = b // g, top // g
            r1 = [x * p + y * q for p, q in zip(a[pivot_row], a[i])]
            r2 = [-u * p + v * q for p, q in zip(a[pivot_row], a[i])]
            a[pivot_row], a[i] = r1, r2
        lead = a[pivot_row][col]
        if lead == 0:
            continue
        if lead < 0:
            a[pivot_row] = [-x for x in a[pivot_row]]
            lead = -lead
        for i in range(pivot_row):
            k = a[i][col] // lead
            if k:
                a[i] = [p - k * q for p, q in zip(a[i], a[pivot_row])]
        pivot_row += 1
    return [r for r in a[:pivot_row] if any(r)]
