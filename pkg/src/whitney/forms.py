"""Symmetric bilinear forms on a quotient algebra, exact signature and determinant sign."""
from __future__ import annotations

from math import lcm

from gmpy2 import mpq, mpz

from whitney.algebra import QuotientAlgebra
from whitney.polyring import Polynomial, RingMismatch

ZERO = mpq(0)


class Functional:
    """A linear functional ``a -> sum a_i w_i`` on an algebra."""

    def __init__(self, algebra: QuotientAlgebra, weights):
        weights = [mpq(w) for w in weights]
        if len(weights) != algebra.d:
            raise ValueError(f"functional needs {algebra.d} weights, got {len(weights)}")
        self.algebra = algebra
        self.weights = weights

    def __call__(self, a) -> mpq:
        coords = a.coords if hasattr(a, "coords") else a
        return sum((x * w for x, w in zip(coords, self.weights) if x and w), ZERO)

    def is_zero(self):
        return not any(self.weights)

    def __repr__(self):
        return f"Functional({[str(w) for w in self.weights]})"


class SymBilinearForm:
    def __init__(self, algebra: QuotientAlgebra, matrix):
        d = len(matrix)
        for i in range(d):
            for j in range(i):
                if matrix[i][j] != matrix[j][i]:
                    raise ValueError("matrix is not symmetric")
        self.algebra = algebra
        self.matrix = [[mpq(x) for x in row] for row in matrix]

    def signature(self) -> int:
        return signature(self.matrix)

    def det_sign(self) -> int:
        return det_sign(self.matrix)

    def __repr__(self):
        return f"SymBilinearForm({[[str(x) for x in r] for r in self.matrix]})"


def build_form(A: QuotientAlgebra, phi: Functional, w: Polynomial | None = None) -> SymBilinearForm:
    """Matrix ``M[i][j] = phi(w * e_i * e_j)``; ``w=None`` means ``w = 1``."""
    if phi.algebra is not A:
        raise ValueError("functional belongs to another algebra")
    d = A.d
    if w is None:
        r = phi.weights
    else:
        if w.ring != A.ring:
            raise RingMismatch(f"{w.ring!r} vs {A.ring!r}")
        # r = W^T phi, so that phi(w*a) = r . a
        W = A.mult_matrix(A.project(w))
        r = [sum((W[k][j] * phi.weights[k] for k in range(d) if W[k][j]), ZERO) for j in range(d)]
    M = [[ZERO] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            v = sum((a * b for a, b in zip(r, A.table[i][j]) if a and b), ZERO)
            M[i][j] = M[j][i] = v
    return SymBilinearForm(A, M)


# ---------------------------------------------------------------------------
# exact linear algebra

def diagonalize(M) -> list:
    """Diagonal of a congruence diagonalization of the symmetric rational matrix ``M``.

    Zero rows/columns give zero entries; the list has length ``len(M)``.
    """
    a = [[mpq(x) for x in row] for row in M]
    n = len(a)
    diag = []
    active = list(range(n))
    while active:
        p = next((i for i in active if a[i][i]), None)
        if p is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j]), None)
            if pair is None:
                diag.extend([ZERO] * len(active))
                break
            i, j = pair
            # e_i <- e_i + e_j makes a[i][i] = 2 a[i][j] != 0 (diagonal entries are zero)
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        piv = a[p][p]
        active.remove(p)
        for i in active:
            f = a[i][p] / piv
            if f:
                for k in active:
                    a[i][k] -= f * a[p][k]
                a[i][p] = ZERO
        for i in active:
            a[p][i] = ZERO
        diag.append(piv)
    return diag


def signature(M) -> int:
    diag = diagonalize(M)
    return sum(1 for x in diag if x > 0) - sum(1 for x in diag if x < 0)


def rank(M) -> int:
    return sum(1 for x in diagonalize(M) if x)


def _integer_matrix(M):
    den = 1
    for row in M:
        for x in row:
            den = lcm(den, int(mpq(x).denominator))
    return [[mpz(mpq(x) * den) for x in row] for row in M]


def bareiss_det(M) -> mpz:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in M]
    n = len(a)
    if n == 0:
        return mpz(1)
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return mpz(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_sign(M) -> int:
    """Sign of the determinant; scaling by a positive common denominator keeps it."""
    if not M:
        return 1
    d = bareiss_det(_integer_matrix(M))
    return (d > 0) - (d < 0)


def solve(M, b) -> list:
    """Solve ``M x = b`` exactly; raises ``ZeroDivisionError`` if ``M`` is singular."""
    n = len(M)
    a = [[mpq(x) for x in row] + [mpq(y)] for row, y in zip(M, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]
