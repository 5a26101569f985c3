"""Floating-point cross-check: multi-start Newton for real zeros of ``H`` off ``V(I)``.

Only used by tests and ``--verify``; nothing here feeds the exact pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from whitney.polyring import Polynomial


@dataclass
class OracleConfig:
    box: float = 4.0
    starts: int = 2000
    newton_tol: float = 1e-12
    dedupe: float = 1e-6
    regularity_floor: float = 1e-8
    max_iter: int = 100
    on_excluded_tol: float = 1e-6
    # converged points farther than reach * box are escapes toward zeros at infinity
    reach: float = 100.0

    def __post_init__(self):
        for name in ("box", "newton_tol", "dedupe", "regularity_floor", "on_excluded_tol", "reach"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.starts < 1 or self.max_iter < 1:
            raise ValueError("starts and max_iter must be positive")


@dataclass
class OracleReport:
    sum: int
    zeros: list = field(default_factory=list)
    signs: list = field(default_factory=list)
    regular: bool = True

    def to_json(self):
        return {"sum": self.sum, "zeros": self.zeros, "signs": self.signs, "regular": self.regular}


class _Compiled:
    """Vectorized evaluation of a list of polynomials on a batch of points."""

    def __init__(self, polys: list[Polynomial]):
        self.parts = []
        for p in polys:
            if p.terms:
                exps = np.array(list(p.terms), dtype=float)
                coef = np.array([float(c) for c in p.terms.values()])
            else:
                exps = np.zeros((1, len(p.ring)))
                coef = np.zeros(1)
            self.parts.append((exps, coef))

    def __call__(self, X: np.ndarray) -> np.ndarray:
        out = np.empty((X.shape[0], len(self.parts)))
        for k, (E, C) in enumerate(self.parts):
            mons = np.prod(X[:, None, :] ** E[None, :, :], axis=2)
            out[:, k] = mons @ C
        return out

    def magnitude(self, X: np.ndarray) -> np.ndarray:
        """``sum |c| |x^e|`` per component: the scale for a backward-error test."""
        out = np.empty((X.shape[0], len(self.parts)))
        for k, (E, C) in enumerate(self.parts):
            mons = np.prod(np.abs(X)[:, None, :] ** E[None, :, :], axis=2)
            out[:, k] = mons @ np.abs(C)
        return out


def numeric_degree_sum(dp, cfg: OracleConfig | None = None, seed: int = 0) -> OracleReport:
    """Sum of ``sgn det DH`` over numerically found real zeros of ``H`` off ``V(I)``."""
    cfg = cfg or OracleConfig()
    names = dp.ring.names
    N = len(names)
    Hc = _Compiled(dp.H)
    Jc = _Compiled([h.diff(v) for h in dp.H for v in names])
    Ic = _Compiled(dp.I_gens) if dp.I_gens else None
    rng = np.random.default_rng(seed)
    X = rng.uniform(-cfg.box, cfg.box, size=(cfg.starts, N))
    alive = np.ones(len(X), dtype=bool)
    converged = np.zeros(len(X), dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(cfg.max_iter):
            idx = np.flatnonzero(alive)
            if not len(idx):
                break
            Xa = X[idx]
            F = Hc(Xa)
            Jm = Jc(Xa).reshape(len(idx), N, N)
            step = np.einsum("bij,bj->bi", np.linalg.pinv(Jm), F)
            X[idx] = Xa - step
            done = np.max(np.abs(step), axis=1) < cfg.newton_tol
            bad = ~np.all(np.isfinite(X[idx]), axis=1) | (np.max(np.abs(X[idx]), axis=1) > 1e6)
            converged[idx[done & ~bad]] = True
            alive[idx[done | bad]] = False
            X[idx[bad]] = np.nan
        # only points that met the step tolerance count; iterates drifting toward
        # zeros at infinity never do
        near = np.max(np.abs(X), axis=1) <= cfg.reach * cfg.box
        ok = converged & near & np.all(np.isfinite(X), axis=1)
        # pinv truncates near-singular Jacobians, so Newton can stall at points that are
        # not zeros; the untruncated correction J^-1 H(z) estimates the forward error
        for i in np.flatnonzero(ok):
            J = Jc(X[i : i + 1]).reshape(N, N)
            F = Hc(X[i : i + 1])[0]
            try:
                corr = np.linalg.solve(J, F)
            except np.linalg.LinAlgError:
                corr = np.linalg.pinv(J) @ F
            ok[i] = bool(np.all(np.isfinite(corr))) and float(np.max(np.abs(corr))) <= cfg.dedupe
        Z = X[ok]
        if Ic is not None and len(Z):
            on_excluded = np.all(np.abs(Ic(Z)) < cfg.on_excluded_tol, axis=1)
            Z = Z[~on_excluded]
    # deduplicate, deterministic by sorted coordinates
    Z = Z[np.lexsort(Z.T[::-1])] if len(Z) else Z
    reps: list[np.ndarray] = []
    for z in Z:
        if not any(np.max(np.abs(z - r)) < cfg.dedupe for r in reps):
            reps.append(z)
    signs = []
    regular = True
    for z in reps:
        det = np.linalg.det(Jc(z[None, :]).reshape(N, N))
        if abs(det) < cfg.regularity_floor:
            regular = False
        signs.append(int(np.sign(det)))
    return OracleReport(
        sum=int(sum(signs)),
        zeros=[[float(v) for v in z] for z in reps],
        signs=signs,
        regular=regular,
    )
