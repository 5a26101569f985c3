"""Finite-dimensional quotient algebras ``Q[x]/S`` and their tensor squares.

Elements are coordinate vectors over the standard-monomial basis; tensors in
``A ⊗ A`` are ``d x d`` coordinate matrices, never polynomials.
"""
from __future__ import annotations

from gmpy2 import mpq

from whitney.groebner import INFINITE, Ideal, standard_monomials
from whitney.polyring import Polynomial, RingMismatch

ZERO = mpq(0)
ONE = mpq(1)


class NotZeroDimensional(ValueError):
    pass


class AlgebraMismatch(ValueError):
    pass


class QuotientAlgebra:
    """``ring / ideal`` with an eagerly built multiplication table.

    ``mult[i]`` is the matrix of multiplication by ``e_i``: column ``j``
    holds the coordinates of ``e_i * e_j``.
    """

    def __init__(self, ideal: Ideal):
        basis = standard_monomials(ideal)
        if basis is INFINITE:
            raise NotZeroDimensional("quotient is infinite-dimensional (staircase unbounded)")
        if not basis:
            raise NotZeroDimensional("quotient by the unit ideal is the zero algebra")
        self.ideal = ideal
        self.ring = ideal.ring
        self.basis = basis
        self.d = len(basis)
        self.index = {m: i for i, m in enumerate(basis)}
        self._mono = {}
        n = len(self.ring)
        d = self.d
        # variable multiplication matrices, from normal forms of x_k * e_j
        self._varmat = []
        for k in range(n):
            cols = []
            for m in basis:
                e = m[:k] + (m[k] + 1,) + m[k + 1:]
                cols.append(self._nf_coords(e))
            self._varmat.append([[cols[j][i] for j in range(d)] for i in range(d)])
        for m in basis:
            self._mono[m] = _unit(d, self.index[m])
        table = [[None] * d for _ in range(d)]
        for i in range(d):
            for j in range(i, d):
                e = tuple(a + b for a, b in zip(basis[i], basis[j]))
                table[i][j] = table[j][i] = self.monomial_coords(e)
        self.table = table
        self.mult = [[[table[i][j][a] for j in range(d)] for a in range(d)] for i in range(d)]
        # sparse rows of each multiplication matrix: mult_sparse[i][a] = [(j, v), ...]
        self.mult_sparse = [
            [[(j, v) for j, v in enumerate(row) if v] for row in self.mult[i]] for i in range(d)
        ]

    def __repr__(self):
        return f"QuotientAlgebra(d={self.d})"

    # coordinates
    def _nf_coords(self, exp) -> list:
        nf = self.ideal.normal_form(Polynomial(self.ring, {exp: ONE}, _clean=True))
        v = [ZERO] * self.d
        for e, c in nf.terms.items():
            v[self.index[e]] = c
        return v

    def monomial_coords(self, exp) -> list:
        """Coordinates of the residue of ``x^exp`` (cached)."""
        exp = tuple(exp)
        hit = self._mono.get(exp)
        if hit is not None:
            return hit
        # peel one variable and multiply by its matrix
        k = next(i for i, e in enumerate(exp) if e)
        prev = self.monomial_coords(exp[:k] + (exp[k] - 1,) + exp[k + 1:])
        v = _matvec(self._varmat[k], prev)
        self._mono[exp] = v
        return v

    def coords(self, f: Polynomial) -> list:
        if f.ring != self.ring:
            raise RingMismatch(f"{f.ring!r} vs {self.ring!r}")
        v = [ZERO] * self.d
        for e, c in f.terms.items():
            for i, x in enumerate(self.monomial_coords(e)):
                if x:
                    v[i] += c * x
        return v

    def project(self, f: Polynomial) -> AlgElement:
        return AlgElement(self, self.coords(f))

    def element(self, coords) -> AlgElement:
        return AlgElement(self, [mpq(c) for c in coords])

    def basis_element(self, k: int) -> AlgElement:
        return AlgElement(self, _unit(self.d, k))

    def one(self) -> AlgElement:
        return self.basis_element(0)

    def basis_polynomials(self) -> list[Polynomial]:
        return [Polynomial(self.ring, {m: ONE}, _clean=True) for m in self.basis]

    def mult_matrix(self, a: AlgElement) -> list:
        """Matrix of ``x -> a*x``."""
        d = self.d
        M = [[ZERO] * d for _ in range(d)]
        for i, c in enumerate(a.coords):
            if c:
                for r in range(d):
                    for j, v in self.mult_sparse[i][r]:
                        M[r][j] += c * v
        return M

    def lift(self, a: AlgElement) -> Polynomial:
        return Polynomial(self.ring, {m: c for m, c in zip(self.basis, a.coords) if c}, _clean=True)

    def project_tensor(self, p: Polynomial) -> TensorElement:
        """Image of a polynomial in the doubled ring under ``x^a x'^b -> x^a ⊗ x^b``."""
        n = len(self.ring)
        if p.ring != self.ring.doubled():
            raise RingMismatch(f"{p.ring!r} is not the doubled ring of {self.ring!r}")
        d = self.d
        t = [[ZERO] * d for _ in range(d)]
        for e, c in p.terms.items():
            left = self.monomial_coords(e[:n])
            right = self.monomial_coords(e[n:])
            for i, a in enumerate(left):
                if a:
                    ca = c * a
                    row = t[i]
                    for j, b in enumerate(right):
                        if b:
                            row[j] += ca * b
        return TensorElement(self, t)

    def tensor_one(self) -> TensorElement:
        t = [[ZERO] * self.d for _ in range(self.d)]
        t[0][0] = ONE
        return TensorElement(self, t)

    def dump(self) -> dict:
        names = self.ring.names
        return {
            "d": self.d,
            "basis": [_mono_str(m, names) for m in self.basis],
            "table": [[[str(c) for c in self.table[i][j]] for j in range(self.d)] for i in range(self.d)],
        }


def build_algebra(S: Ideal) -> QuotientAlgebra:
    return QuotientAlgebra(S)


def project(f: Polynomial, A: QuotientAlgebra) -> AlgElement:
    return A.project(f)


def project_tensor(p: Polynomial, A: QuotientAlgebra) -> TensorElement:
    return A.project_tensor(p)


def _unit(d, k):
    v = [ZERO] * d
    v[k] = ONE
    return v


def _matvec(M, v):
    return [sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in M]


def _mono_str(m, names):
    s = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(names, m) if k)
    return s or "1"


class AlgElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: QuotientAlgebra, coords):
        if len(coords) != algebra.d:
            raise ValueError(f"expected {algebra.d} coordinates, got {len(coords)}")
        self.algebra = algebra
        self.coords = list(coords)

    def _same(self, other):
        if not isinstance(other, AlgElement) or other.algebra is not self.algebra:
            raise AlgebraMismatch("elements of different algebras")

    def __add__(self, other):
        self._same(other)
        return AlgElement(self.algebra, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._same(other)
        return AlgElement(self.algebra, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return AlgElement(self.algebra, [-a for a in self.coords])

    def __mul__(self, other):
        if not isinstance(other, AlgElement):
            c = mpq(other)
            return AlgElement(self.algebra, [a * c for a in self.coords])
        return alg_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, AlgElement) and other.algebra is self.algebra and self.coords == other.coords

    def is_zero(self):
        return not any(self.coords)

    def __repr__(self):
        return f"AlgElement({[str(c) for c in self.coords]})"


def alg_mul(a: AlgElement, b: AlgElement) -> AlgElement:
    a._same(b)
    A = a.algebra
    out = [ZERO] * A.d
    for i, x in enumerate(a.coords):
        if not x:
            continue
        for j, y in enumerate(b.coords):
            if not y:
                continue
            xy = x * y
            for k, v in enumerate(A.table[i][j]):
                if v:
                    out[k] += xy * v
    return AlgElement(A, out)


class TensorElement:
    """``sum t[i][j] e_i ⊗ e_j``."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: QuotientAlgebra, coords):
        d = algebra.d
        if len(coords) != d or any(len(r) != d for r in coords):
            raise ValueError(f"expected a {d}x{d} coordinate matrix")
        self.algebra = algebra
        self.coords = coords

    def is_zero(self):
        return not any(any(r) for r in self.coords)

    def __add__(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("tensors of different algebras")
        return TensorElement(
            self.algebra, [[a + b for a, b in zip(r, s)] for r, s in zip(self.coords, other.coords)]
        )

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_mul(self, other)
        c = mpq(other)
        return TensorElement(self.algebra, [[a * c for a in r] for r in self.coords])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        return isinstance(other, TensorElement) and other.algebra is self.algebra and self.coords == other.coords

    def __repr__(self):
        return f"TensorElement({[[str(c) for c in r] for r in self.coords]})"

    @classmethod
    def from_pure(cls, a: AlgElement, b: AlgElement) -> TensorElement:
        a._same(b)
        return cls(a.algebra, [[x * y for y in b.coords] for x in a.coords])


def tensor_mul(s: TensorElement, t: TensorElement) -> TensorElement:
    """Product in ``A ⊗ A``, factor-wise: ``(a⊗b)(c⊗d) = ac ⊗ bd``.

    With ``L_i`` the multiplication matrix of ``e_i``,
    ``s*t = sum_i L_i t R_i^T`` where ``R_i`` multiplies by ``sum_j s_ij e_j``.
    """
    A = s.algebra
    if t.algebra is not A:
        raise AlgebraMismatch("tensors of different algebras")
    d = A.d
    sp = A.mult_sparse
    tc = t.coords
    tsp = [[(l, v) for l, v in enumerate(row) if v] for row in tc]
    out = [[ZERO] * d for _ in range(d)]
    for i, srow in enumerate(s.coords):
        nz = [(j, c) for j, c in enumerate(srow) if c]
        if not nz:
            continue
        # R[b][l] = sum_j s_ij L_j[b][l]
        R = [dict() for _ in range(d)]
        for j, c in nz:
            for b in range(d):
                Rb = R[b]
                for l, v in sp[j][b]:
                    Rb[l] = Rb.get(l, ZERO) + c * v
        R = [[(l, v) for l, v in Rb.items() if v] for Rb in R]
        # W[k][b] = sum_l t[k][l] R[b][l]
        W = []
        for k in range(d):
            row_t = tc[k]
            if not tsp[k]:
                W.append(None)
                continue
            wk = []
            for b in range(d):
                acc = ZERO
                for l, v in R[b]:
                    x = row_t[l]
                    if x:
                        acc += x * v
                wk.append(acc)
            W.append(wk)
        # out[a][b] += sum_k L_i[a][k] W[k][b]
        Li = sp[i]
        for a in range(d):
            oa = out[a]
            for k, v in Li[a]:
                wk = W[k]
                if wk is None:
                    continue
                for b in range(d):
                    x = wk[b]
                    if x:
                        oa[b] += v * x
    return TensorElement(A, out)
