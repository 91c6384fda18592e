"""Exact linear algebra over the integers and rationals.

Everything here works on plain lists of Python ints / Fractions, which keeps
the routines exact for arbitrarily large entries. Matrices are row-major;
"row HNF" means pivots move left to right down the rows, pivots are positive,
and entries above a pivot are reduced into [0, pivot).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            t = ai[k]
            if t:
                bk = b[k]
                for j in range(cols):
                    oi[j] += t * bk[j]
    return out


def hnf(rows: list[list[int]], transform: bool = False):
    """Row Hermite normal form.

    Returns (H, U, pivots) when transform is True, with U unimodular and
    U * rows == H; otherwise just (H, pivots). Zero rows of H sit at the
    bottom. pivots is the list of pivot column indices, one per nonzero row.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    h = [list(r) for r in rows]
    u = identity(m) if transform else None

    pivots = []
    r = 0  # current pivot row
    for col in range(n):
        # clear column below row r via extended gcd row operations
        piv = None
        for i in range(r, m):
            if h[i][col]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            h[r], h[piv] = h[piv], h[r]
            if transform:
                u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, m):
            if h[i][col]:
                g, x, y = xgcd(h[r][col], h[i][col])
                ar, ai = h[r][col] // g, h[i][col] // g
                h[r], h[i] = (
                    [x * h[r][j] + y * h[i][j] for j in range(n)],
                    [-ai * h[r][j] + ar * h[i][j] for j in range(n)],
                )
                if transform:
                    u[r], u[i] = (
                        [x * u[r][j] + y * u[i][j] for j in range(m)],
                        [-ai * u[r][j] + ar * u[i][j] for j in range(m)],
                    )
        if h[r][col] < 0:
            h[r] = [-v for v in h[r]]
            if transform:
                u[r] = [-v for v in u[r]]
        # reduce entries above the pivot into [0, pivot)
        d = h[r][col]
        for i in range(r):
            q = h[i][col] // d
            if q:
                h[i] = [h[i][j] - q * h[r][j] for j in range(n)]
                if transform:
                    u[i] = [u[i][j] - q * u[r][j] for j in range(m)]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if transform:
        return h, u, pivots
    return h, pivots


def hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    """Canonical basis (nonzero HNF rows) of the lattice spanned by rows."""
    if not rows:
        return []
    h, pivots = hnf(rows)
    return [h[i] for i in range(len(pivots))]


def left_kernel(rows: list[list[int]]) -> list[list[int]]:
    """Basis of {v : v * rows == 0}, canonicalized by HNF."""
    m = len(rows)
    if m == 0:
        return []
    h, u, pivots = hnf(rows, transform=True)
    rank = len(pivots)
    ker = [u[i] for i in range(rank, m)]
    return hnf_rows(ker) if ker else []


def in_lattice(vec: list[int], basis_hnf: list[list[int]]) -> bool:
    """Exact membership of an integer vector in the row lattice (HNF basis)."""
    v = list(vec)
    n = len(v)
    for row in basis_hnf:
        col = next((j for j in range(n) if row[j]), None)
        if col is None:
            continue
        q, r = divmod(v[col], row[col])
        if r != 0:
            return False
        if q:
            for j in range(n):
                v[j] -= q * row[j]
    return all(t == 0 for t in v)


def snf(rows: list[list[int]]):
    """Smith normal form with transforms: returns (S, U, V) where
    U * rows * V == S, U and V unimodular, and the diagonal of S is a
    divisibility chain d1 | d2 | ... with nonnegative entries."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    s = [list(r) for r in rows]
    u = identity(m)
    v = identity(n)

    def row_op(i1, i2, a, b, c, d):
        # (row i1, row i2) <- (a*r1 + b*r2, c*r1 + d*r2)
        for j in range(n):
            s[i1][j], s[i2][j] = a * s[i1][j] + b * s[i2][j], c * s[i1][j] + d * s[i2][j]
        for j in range(m):
            u[i1][j], u[i2][j] = a * u[i1][j] + b * u[i2][j], c * u[i1][j] + d * u[i2][j]

    def col_op(j1, j2, a, b, c, d):
        for i in range(m):
            s[i][j1], s[i][j2] = a * s[i][j1] + b * s[i][j2], c * s[i][j1] + d * s[i][j2]
        for i in range(n):
            v[i][j1], v[i][j2] = a * v[i][j1] + b * v[i][j2], c * v[i][j1] + d * v[i][j2]

    t = 0
    while t < min(m, n):
        # find a nonzero entry in the lower-right block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j]:
                    if piv is None or abs(s[i][j]) < abs(s[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            row_op(t, i0, 0, 1, 1, 0)
        if j0 != t:
            col_op(t, j0, 0, 1, 1, 0)
        # clear row and column t; plain reductions leave the pivot line
        # untouched, and every xgcd combine strictly shrinks |s[t][t]|,
        # which forces termination
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                w = s[i][t]
                if w:
                    if w % s[t][t] == 0:
                        row_op(t, i, 1, 0, -(w // s[t][t]), 1)
                    else:
                        g, x, y = xgcd(s[t][t], w)
                        a, b = s[t][t] // g, w // g
                        row_op(t, i, x, y, -b, a)
                    dirty = True
            for j in range(t + 1, n):
                w = s[t][j]
                if w:
                    if w % s[t][t] == 0:
                        col_op(t, j, 1, 0, -(w // s[t][t]), 1)
                    else:
                        g, x, y = xgcd(s[t][t], w)
                        a, b = s[t][t] // g, w // g
                        col_op(t, j, x, y, -b, a)
                    dirty = True
        # enforce divisibility: s[t][t] must divide every later entry
        d = s[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if s[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, 1, 1, 0, 1)
            continue
        if s[t][t] < 0:
            for j in range(n):
                s[t][j] = -s[t][j]
            for j in range(m):
                u[t][j] = -u[t][j]
        t += 1
    return s, u, v


def snf_diagonal(rows: list[list[int]]) -> list[int]:
    if not rows or not rows[0]:
        return []
    s, _, _ = snf(rows)
    return [s[i][i] for i in range(min(len(s), len(s[0])))]


def invariant_factors_by_minors(rows: list[list[int]]) -> list[int]:
    """Invariant factors via gcds of k x k minors (brute force).

    Independent of snf(); only usable for small matrices. Returns the
    diagonal d1, ..., dr of the nonzero invariant factors.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    from math import gcd

    factors = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rsel in combinations(range(m), k):
            for csel in combinations(range(n), k):
                g = gcd(g, _det_int([[rows[i][j] for j in csel] for i in rsel]))
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return factors


def _det_int(mat: list[list[int]]) -> int:
    d = det_fraction([[Fraction(x) for x in row] for row in mat])
    assert d.denominator == 1
    return abs(int(d))


def det_fraction(mat: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    n = len(mat)
    a = [list(row) for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            f = a[i][col] * inv
            if f:
                for j in range(col, n):
                    a[i][j] -= f * a[col][j]
    return det


def solve_fraction(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Solve x * a = b exactly for a square invertible matrix a (row-vector
    convention, matching the rest of the package)."""
    n = len(a)
    # transpose to the usual a^T y = b form
    aug = [[a[j][i] for j in range(n)] + [b[i]] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [t * inv for t in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [aug[i][j] - f * aug[col][j] for j in range(n + 1)]
    return [aug[i][n] for i in range(n)]


def invert_fraction(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse of a square Fraction matrix."""
    n = len(a)
    aug = [[a[i][j] for j in range(n)] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [t * inv for t in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [aug[i][j] - f * aug[col][j] for j in range(2 * n)]
    return [row[n:] for row in aug]


def hnf_rational(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Canonical HNF basis of the lattice spanned by rational rows."""
    if not rows:
        return []
    denom = 1
    for row in rows:
        for x in row:
            f = Fraction(x)
            denom = denom * f.denominator // _gcd(denom, f.denominator)
    int_rows = [[int(Fraction(x) * denom) for x in row] for row in rows]
    h = hnf_rows(int_rows)
    return [[Fraction(x, denom) for x in row] for row in h]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def lll(rows: list[list[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """Exact-arithmetic LLL reduction of an integer lattice basis.

    Gram-Schmidt data is kept as Fractions so the reduction never suffers
    floating loss; fine for the small dimensions used here.
    """
    b = [list(r) for r in rows]
    m = len(b)
    if m <= 1:
        return b

    def dot(x, y):
        return sum(Fraction(xi) * yi for xi, yi in zip(x, y))

    def gso():
        mu = [[Fraction(0)] * m for _ in range(m)]
        bstar = []
        norms = []
        for i in range(m):
            w = [Fraction(x) for x in b[i]]
            for j in range(i):
                if norms[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = dot(b[i], bstar[j]) / norms[j]
                w = [wv - mu[i][j] * sv for wv, sv in zip(w, bstar[j])]
            bstar.append(w)
            norms.append(dot(w, w))
        return mu, norms

    mu, norms = gso()
    k = 1
    while k < m:
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            r = int(q + Fraction(1, 2)) if q >= 0 else -int(-q + Fraction(1, 2))
            if r:
                b[k] = [bk - r * bj for bk, bj in zip(b[k], b[j])]
                mu, norms = gso()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gso()
            k = max(k - 1, 1)
    return b
