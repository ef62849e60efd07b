"""Integer lattice linear algebra.

Matrices are plain lists of lists of Python ints (row-major), so all
arithmetic is arbitrary precision.  The Smith normal form routine returns
U, S, V with ``A == U @ S @ V`` and U, V unimodular.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence


class NonPrimitive(ValueError):
    """The vector has a nontrivial common divisor."""


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def as_matrix(rows) -> list[list[int]]:
    return [[int(x) for x in row] for row in rows]


def shape(A) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def transpose(A):
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def det(A) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SNFDecomposition:
    U: list
    S: list
    V: list

    @property
    def diagonal(self) -> list[int]:
        m, n = shape(self.S)
        return [self.S[i][i] for i in range(min(m, n))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _snf_with_inverse(A):
    """Core elimination. Returns (U, S, V, Vinv) with A = U S V."""
    m, n = shape(A)
    S = [list(r) for r in A]
    U, V, Vinv = identity(m), identity(n), identity(n)

    def row_add(i, j, k):  # row_i += k * row_j
        S[i] = [a + k * b for a, b in zip(S[i], S[j])]
        for r in U:
            r[j] -= k * r[i]

    def row_swap(i, j):
        S[i], S[j] = S[j], S[i]
        for r in U:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        S[i] = [-a for a in S[i]]
        for r in U:
            r[i] = -r[i]

    def col_add(j, i, k):  # col_j += k * col_i
        for r in S:
            r[j] += k * r[i]
        for r in Vinv:
            r[j] += k * r[i]
        V[i] = [a - k * b for a, b in zip(V[i], V[j])]

    def col_swap(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in Vinv:
            r[i], r[j] = r[j], r[i]
        V[i], V[j] = V[j], V[i]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    row_add(i, t, -q)
                    if S[i][t]:
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    col_add(j, t, -q)
                    if S[t][j]:
                        done = False
            if done:
                # divisibility: pivot must divide the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if S[i][j] % S[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cands = [(abs(S[i][t]), i, t) for i in range(t, m) if S[i][t]]
            cands += [(abs(S[t][j]), t, j) for j in range(t, n) if S[t][j]]
            _, i, j = min(cands)
            if i != t:
                row_swap(t, i)
            if j != t:
                col_swap(t, j)
        if S[t][t] < 0:
            row_neg(t)
        t += 1
    return U, S, V, Vinv


def smith_normal_form(A) -> SNFDecomposition:
    """Smith normal form ``A = U S V`` with minimal-absolute-value pivoting."""
    A = as_matrix(A)
    U, S, V, _ = _snf_with_inverse(A)
    return SNFDecomposition(U, S, V)


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    return smith_normal_form(A).rank


def kernel_basis(A) -> list[list[int]]:
    """Z-basis of the integer kernel {v : A v = 0}."""
    A = as_matrix(A)
    m, n = shape(A)
    if m == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    _, S, _, Vinv = _snf_with_inverse(A)
    r = sum(1 for i in range(min(m, n)) if S[i][i])
    return [[Vinv[i][j] for i in range(n)] for j in range(r, n)]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a x + b y = g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def unimodular_complete(v: Sequence[int]) -> list[list[int]]:
    """Unimodular matrix whose first column is the primitive vector ``v``."""
    v = [int(x) for x in v]
    n = len(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        raise NonPrimitive(f"gcd of {v} is {g}, not 1")
    # Row-reduce v (as a column) to e_1 with unimodular P; then P^{-1} e_1 = v.
    U, S, V, _ = _snf_with_inverse([[x] for x in v])
    # v = U S V with S = e_1 * 1 and V = [[+-1]]
    s = V[0][0] * S[0][0]
    M = [list(r) for r in U]
    if s == -1:
        for r in M:
            r[0] = -r[0]
    if det(M) == -1 and n > 1:
        for r in M:
            r[n - 1] = -r[n - 1]
    assert [r[0] for r in M] == v
    return M


def rational_solve(A, b) -> list[Fraction] | None:
    """One solution of A x = b over Q (None if inconsistent)."""
    m, n = shape(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    piv, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = M[i][n]
    return x


def rational_inverse(A) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [row[n:] for row in M]


def rational_rank(rows) -> int:
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return 0
    m, n = len(M), len(M[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, m):
            if M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
    return r
