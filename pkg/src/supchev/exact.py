"""Small exact linear algebra over Q(sqrt 2) and its subrings.

Matrices are lists of rows.  Entries may be ``int``, ``Fraction`` or ``Scalar``;
nothing here ever converts to floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalarring import exact_div, normalize

Matrix = list[list]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        orow = out[i]
        for k, aik in enumerate(row):
            if aik == 0:
                continue
            for j, bkj in enumerate(b[k]):
                if bkj != 0:
                    orow[j] = orow[j] + aik * bkj
    return [[normalize(x) for x in row] for row in out]


def matvec(a: Matrix, v: Sequence) -> list:
    return [normalize(sum((x * y for x, y in zip(row, v) if x != 0 and y != 0), 0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def row_reduce(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [exact_div(x, piv) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [normalize(x - f * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(row_reduce(a)[1]) if a else 0


def solve(a: Matrix, b: Sequence) -> list | None:
    """One solution x of a x = b, or None if inconsistent (free variables set to 0)."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [list(a[i]) + [b[i]] for i in range(rows)]
    red, piv = row_reduce(aug)
    if cols in piv:
        return None
    x = [0] * cols
    for i, c in enumerate(piv):
        x[c] = red[i][cols]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + identity(n)[i] for i in range(n)]
    red, piv = row_reduce(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def determinant(a: Matrix):
    m = [list(r) for r in a]
    n = len(m)
    det = 1
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        piv = m[c][c]
        det = det * piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = exact_div(m[i][c], piv)
                m[i] = [normalize(x - f * y) for x, y in zip(m[i], m[c])]
    return normalize(det)


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the Z-span of integer vectors (nonzero rows only)."""
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return []
    cols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for c in range(cols):
        # gcd-reduce column c among rows r..
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[p] = m[p], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    out = [row for row in m[:r] if any(row)]
    return out


def same_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return hnf(a) == hnf(b)


def common_denominator(values) -> int:
    d = 1
    for v in values:
        v = Fraction(v)
        d = d * v.denominator // _gcd(d, v.denominator)
    return d


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def dual_lattice(rows: Sequence[Sequence], dim: int) -> list[list[Fraction]]:
    """Basis of {x in Q^dim : r . x in Z for all rows r}, including free directions.

    The rows may be rational.  Rows spanning a rank-deficient space leave the
    orthogonal complement unconstrained; a rational basis of that complement is
    appended and flagged only by its presence (the lattice is then not discrete
    in those directions).
    """
    rows = [list(r) for r in rows if any(x != 0 for x in r)]
    if not rows:
        return [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    den = common_denominator(x for r in rows for x in r)
    ints = [[int(Fraction(x) * den) for x in r] for r in rows]
    basis = hnf(ints)  # Z-span of the scaled rows
    k = len(basis)
    # complete basis to a rational basis of Q^dim
    full = [list(map(Fraction, r)) for r in basis]
    for i in range(dim):
        cand = full + [[Fraction(int(i == j)) for j in range(dim)]]
        if rank(cand) > len(full):
            full = cand
    inv = inverse(full)  # columns: dual basis w.r.t. full
    # x with basis_i . x in den*Z  <=> x = sum_i den*n_i * col_i + free parts
    cols = transpose(inv)
    dual = [[normalize(den * v) for v in cols[i]] for i in range(k)]
    free = [[normalize(v) for v in cols[i]] for i in range(k, dim)]
    return dual + free
