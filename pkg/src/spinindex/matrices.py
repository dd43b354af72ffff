"""Small exact matrix helpers over tower elements.

Matrices are tuples of row tuples.  Entries may be TowerElements, ComplexValues
or any other ring elements supporting + and *; zero entries are skipped.
"""
from __future__ import annotations

from typing import Sequence

from .numfield import QQ, TowerElement, TowerSpec, certify_sign

Matrix = tuple
Vector = tuple


def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else not x


def identity(n: int, spec: TowerSpec = QQ) -> Matrix:
    one, zero = spec.one(), spec.zero()
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def as_matrix(rows, spec: TowerSpec | None = None) -> Matrix:
    """Coerce nested sequences of rationals/elements into a tower matrix."""
    rows = [list(r) for r in rows]
    if spec is None:
        spec = QQ
        for r in rows:
            for x in r:
                if isinstance(x, TowerElement):
                    from .numfield import merge_specs
                    spec = merge_specs(spec, x.spec)
    return tuple(tuple(spec(x) for x in r) for r in rows)


def as_vector(xs, spec: TowerSpec | None = None) -> Vector:
    return as_matrix([xs], spec)[0]


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    bnz = [[(k, x) for k, x in enumerate(col) if not _is_zero(x)] for col in bt]
    out = []
    for row in a:
        rnz = {k: x for k, x in enumerate(row) if not _is_zero(x)}
        new_row = []
        for j, col in enumerate(bnz):
            acc = None
            for k, y in col:
                x = rnz.get(k)
                if x is not None:
                    t = x * y
                    acc = t if acc is None else acc + t
            if acc is None:
                acc = _zero_like(row[0], bt[j][0])
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def _zero_like(*samples):
    for s in samples:
        if isinstance(s, TowerElement):
            return s.spec.zero()
        if hasattr(s, "re"):
            return s * 0
    return samples[0] * 0


def mat_vec(a: Matrix, v: Vector) -> Vector:
    vnz = [(k, x) for k, x in enumerate(v) if not _is_zero(x)]
    out = []
    for row in a:
        acc = None
        for k, x in vnz:
            y = row[k]
            if not _is_zero(y):
                t = y * x
                acc = t if acc is None else acc + t
        out.append(acc if acc is not None else _zero_like(row[0], v[0]))
    return tuple(out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(a: Matrix, c) -> Matrix:
    return tuple(tuple(x * c for x in r) for r in a)


def mat_neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in r) for r in a)


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(x == y for r, s in zip(a, b) for x, y in zip(r, s))


def is_identity(a: Matrix) -> bool:
    n = len(a)
    return all((a[i][j] == 1) if i == j else _is_zero(a[i][j]) for i in range(n) for j in range(n))


def mat_pow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative powers are not supported here")
    spec = a[0][0].spec if isinstance(a[0][0], TowerElement) else QQ
    result = identity(len(a), spec)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def trace(a: Matrix):
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def mat_key(a: Matrix) -> tuple:
    """Hashable exact key (coefficients over the entries' tower)."""
    return tuple(x.coeffs for r in a for x in r)


def det(a: Matrix):
    """Determinant by exact Gaussian elimination (field entries)."""
    m = [list(r) for r in a]
    n = len(m)
    sign = 1
    acc = None
    for c in range(n):
        p = next((r for r in range(c, n) if not _is_zero(m[r][c])), None)
        if p is None:
            return _zero_like(a[0][0])
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        acc = piv if acc is None else acc * piv
        inv = piv.inverse()
        for r in range(c + 1, n):
            if _is_zero(m[r][c]):
                continue
            f = m[r][c] * inv
            m[r] = [x - f * y if j >= c else x for j, (x, y) in enumerate(zip(m[r], m[c]))]
    return acc if sign > 0 else -acc


def nullspace(a: Matrix) -> list[Vector]:
    """Basis of the right kernel of a, by exact row reduction."""
    m = [list(r) for r in a]
    rows, cols = len(m), len(m[0])
    spec = None
    for r in m:
        for x in r:
            if isinstance(x, TowerElement):
                spec = x.spec
                break
        if spec is not None:
            break
    spec = spec or QQ
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if not _is_zero(m[i][c])), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [spec.zero()] * cols
        v[fc] = spec.one()
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def sign_of(x) -> int:
    return certify_sign(x)


def pfaffian(w: Sequence[Sequence]):
    """Pfaffian of a skew matrix of size 2 or 4."""
    n = len(w)
    if n == 2:
        return w[0][1]
    if n == 4:
        return w[0][1] * w[2][3] - w[0][2] * w[1][3] + w[0][3] * w[1][2]
    raise ValueError("pfaffian implemented for sizes 2 and 4 only")
