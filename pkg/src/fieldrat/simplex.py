"""Dense tableau simplex for max c.x subject to A x <= b, x >= 0, with b >= 0.

Works over any ordered field the entries belong to: Fraction and QuadSurd give
exact pivots, floats use a small tolerance.  Bland's rule picks the entering
and leaving variables, so the method cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class SimplexResult:
    status: str  # "optimal" or "unbounded"
    x: list | None
    value: object | None
    slacks: list | None
    pivots: int


def simplex_max(c, A, b, tol: float | None = None, max_pivots: int = 10_000) -> SimplexResult:
    """Maximize ``c.x`` over ``A x <= b``, ``x >= 0``; requires every ``b_i >= 0``.

    ``tol`` is the zero threshold for floating point input; leave it None for
    exact arithmetic.
    """
    m, n = len(A), len(c)
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent dimensions")
    zero = b[0] * 0 if m else c[0] * 0
    if any(bi < zero for bi in b):
        raise ValueError("right-hand side must be nonnegative (slack basis must be feasible)")

    def positive(v):
        return v > tol if tol is not None else v > zero

    # columns 0..n-1 are x, n..n+m-1 are slacks
    T = [list(A[i]) + [zero + (1 if j == i else 0) for j in range(m)] + [b[i]] for i in range(m)]
    obj = [-ci for ci in c] + [zero] * m + [zero]
    basis = [n + i for i in range(m)]
    pivots = 0
    while True:
        entering = next((j for j in range(n + m) if positive(-obj[j])), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = T[i][entering]
            if positive(a):
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return SimplexResult("unbounded", None, None, None, pivots)
        r = best[1]
        piv = T[r][entering]
        T[r] = [v / piv for v in T[r]]
        for i in range(m):
            if i != r and T[i][entering] != zero:
                f = T[i][entering]
                T[i] = [u - f * v for u, v in zip(T[i], T[r])]
        f = obj[entering]
        obj = [u - f * v for u, v in zip(obj, T[r])]
        basis[r] = entering
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex exceeded pivot limit")
    values = [zero] * (n + m)
    for i, j in enumerate(basis):
        values[j] = T[i][-1]
    return SimplexResult("optimal", values[:n], obj[-1], values[n:], pivots)
