"""The Bezoutian element ``T`` in ``A ⊗ A`` and the functional it induces."""
from __future__ import annotations

import logging

from whitney import budget
from whitney.algebra import ZERO, AlgElement, QuotientAlgebra, TensorElement
from whitney.forms import Functional, solve
from whitney.polyring import Polynomial, divided_difference

log = logging.getLogger(__name__)


class SingularBezoutian(ArithmeticError):
    """The coefficient matrix of ``T`` is singular."""


def bezoutian_entries(H: list[Polynomial]) -> list[list[Polynomial]]:
    """All divided differences ``T_ij`` in the doubled ring."""
    ring2 = H[0].ring.doubled()
    return [[divided_difference(h, j, ring2) for j in range(len(H))] for h in H]


def bezoutian_tensor(H: list[Polynomial], A: QuotientAlgebra) -> TensorElement:
    """Image of ``det[T_ij]`` in ``A ⊗ A``.

    Each entry is projected first; the determinant is then expanded row by
    row over column subsets, so every intermediate stays a ``d x d`` tensor.
    """
    n = len(H)
    if n != len(A.ring):
        raise ValueError(f"need {len(A.ring)} components, got {n}")
    if any(h.ring != A.ring for h in H):
        raise ValueError("map components must live in the algebra's ring")
    ring2 = A.ring.doubled()
    # T_ij computed lazily, one row at a time, projected eagerly
    layer = {0: A.tensor_one()}
    for k, h in enumerate(H):
        row = []
        for j in range(n):
            p = divided_difference(h, j, ring2)
            t = A.project_tensor(p) if p else None
            row.append(None if t is None or t.is_zero() else t)
        nxt: dict[int, TensorElement] = {}
        for S, D in layer.items():
            for j in range(n):
                if S >> j & 1 or row[j] is None:
                    continue
                budget.check()
                # sign of the Laplace term: number of chosen columns after j
                sign = -1 if bin(S >> (j + 1)).count("1") & 1 else 1
                prod = row[j] * D
                if sign < 0:
                    prod = -prod
                T = S | 1 << j
                nxt[T] = nxt[T] + prod if T in nxt else prod
        layer = {S: D for S, D in nxt.items() if not D.is_zero()}
        log.debug("bezoutian row %d: %d live column subsets", k, len(layer))
        if not layer:
            break
    full = (1 << n) - 1
    if full in layer:
        return layer[full]
    return TensorElement(A, [[ZERO] * A.d for _ in range(A.d)])


def dual_basis(T: TensorElement) -> list[AlgElement]:
    """``ê_i = sum_j t_ij e_j`` -- the rows of the coefficient matrix."""
    return [AlgElement(T.algebra, list(row)) for row in T.coords]


def trace_functional(T: TensorElement) -> Functional:
    """The functional with weights ``A_1..A_d`` where ``1 = sum A_i ê_i``."""
    A = T.algebra
    d = A.d
    tt = [[T.coords[i][j] for i in range(d)] for j in range(d)]
    one = [1] + [0] * (d - 1)
    try:
        weights = solve(tt, one)
    except ZeroDivisionError:
        raise SingularBezoutian("Bezoutian coefficient matrix is singular") from None
    return Functional(A, weights)
