"""Exact dense linear algebra over the rationals.

Gaussian elimination with full transform tracking, so that infeasible
systems yield a Farkas certificate (a row combination lam with lam.A = 0
but lam.b != 0) that re-checks independently.
"""

from __future__ import annotations

from fractions import Fraction

from .semantics import RATIONAL, ExactMatrix, ConsistencyError


def _require_rational(m: ExactMatrix) -> None:
    if m.semiring is not RATIONAL:
        raise ConsistencyError("exact linear algebra needs the rational semiring")


def rref_with_transform(m: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix, list[int]]:
    """Reduced row echelon form R with transform T (T.m == R) and pivot columns."""
    _require_rational(m)
    rows, cols = m.rows, m.cols
    a = [list(m.row_list(r)) for r in range(rows)]
    t = [[Fraction(1) if i == j else Fraction(0) for j in range(rows)] for i in range(rows)]
    pivots: list[int] = []
    pr = 0
    for pc in range(cols):
        pivot_row = None
        for r in range(pr, rows):
            if a[r][pc] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        a[pr], a[pivot_row] = a[pivot_row], a[pr]
        t[pr], t[pivot_row] = t[pivot_row], t[pr]
        pv = a[pr][pc]
        if pv != 1:
            a[pr] = [x / pv for x in a[pr]]
            t[pr] = [x / pv for x in t[pr]]
        for r in range(rows):
            if r == pr:
                continue
            f = a[r][pc]
            if f == 0:
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[pr])]
            t[r] = [x - f * y for x, y in zip(t[r], t[pr])]
        pivots.append(pc)
        pr += 1
        if pr == rows:
            break
    return (
        ExactMatrix.from_rows(a) if rows else ExactMatrix.zeros(0, cols),
        ExactMatrix.from_rows(t) if rows else ExactMatrix.zeros(0, 0),
        pivots,
    )


def rank(m: ExactMatrix) -> int:
    _, _, pivots = rref_with_transform(m)
    return len(pivots)


def solve(a: ExactMatrix, b: ExactMatrix) -> tuple[ExactMatrix | None, ExactMatrix | None]:
    """Solve a.x = b for a column vector b.

    Returns (x, None) with the particular solution (free variables zero), or
    (None, lam) with a row vector certificate: lam.a = 0 and lam.b != 0.
    """
    _require_rational(a)
    _require_rational(b)
    if b.cols != 1 or b.rows != a.rows:
        raise ConsistencyError("solve needs a column rhs matching a's rows")
    r, t, pivots = rref_with_transform(a)
    tb = t.mul(b)
    nr = len(pivots)
    for row in range(nr, a.rows):
        if tb.data[row] != 0:
            lam = ExactMatrix.row(t.row_list(row))
            return None, lam
    x = [Fraction(0)] * a.cols
    for i, pc in enumerate(pivots):
        # r row i is e_pc plus free-column entries; free vars are zero
        x[pc] = tb.data[i]
    return ExactMatrix.column(x), None


def nullspace(a: ExactMatrix) -> list[ExactMatrix]:
    """Basis of the right nullspace as column vectors."""
    r, _, pivots = rref_with_transform(a)
    pivot_set = set(pivots)
    free = [c for c in range(a.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * a.cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i, fc]
        basis.append(ExactMatrix.column(v))
    return basis


def inverse(m: ExactMatrix) -> ExactMatrix | None:
    """Exact inverse of a square matrix, or None if singular."""
    _require_rational(m)
    if m.rows != m.cols:
        return None
    r, t, pivots = rref_with_transform(m)
    if len(pivots) != m.rows:
        return None
    return t


def is_invertible(m: ExactMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def hstack_columns(cols: list[ExactMatrix]) -> ExactMatrix:
    """Assemble column vectors into a matrix."""
    if not cols:
        raise ConsistencyError("hstack of nothing")
    rows = cols[0].rows
    data = []
    for r in range(rows):
        for c in cols:
            if c.cols != 1 or c.rows != rows:
                raise ConsistencyError("hstack needs equal-height column vectors")
            data.append(c.data[r])
    return ExactMatrix(rows, len(cols), data)


def vstack_rows(rows_: list[ExactMatrix]) -> ExactMatrix:
    """Assemble row vectors into a matrix."""
    if not rows_:
        raise ConsistencyError("vstack of nothing")
    cols = rows_[0].cols
    data = []
    for r in rows_:
        if r.rows != 1 or r.cols != cols:
            raise ConsistencyError("vstack needs equal-width row vectors")
        data.extend(r.data)
    return ExactMatrix(len(rows_), cols, data)


def affine_membership(point: ExactMatrix, span: list[ExactMatrix]) -> tuple[ExactMatrix | None, ExactMatrix | None]:
    """Is `point` in the affine hull of `span` (column vectors)?

    Returns (coefficients, None) with affine coefficients over span (summing
    to one), or (None, certificate) where certificate is a Farkas row for the
    system [differences | point - s0].
    """
    if not span:
        raise ConsistencyError("empty affine span")
    s0 = span[0]
    rhs = point.sub(s0)
    if len(span) == 1:
        if rhs.is_zero():
            return ExactMatrix.column([Fraction(1)]), None
        # any nonzero coordinate of rhs certifies infeasibility of 0.x = rhs
        idx = next(i for i, v in enumerate(rhs.data) if v != 0)
        lam = [Fraction(0)] * rhs.rows
        lam[idx] = Fraction(1)
        return None, ExactMatrix.row(lam)
    diffs = hstack_columns([s.sub(s0) for s in span[1:]])
    x, cert = solve(diffs, rhs)
    if x is None:
        return None, cert
    coeffs = [Fraction(1) - sum(x.data)] + list(x.data)
    return ExactMatrix.column(coeffs), None
