"""Degree sums away from an excluded zero set, and Whitney intersection numbers."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations

from whitney.algebra import QuotientAlgebra
from whitney.bezoutian import SingularBezoutian, bezoutian_tensor, trace_functional
from whitney.forms import Functional, SymBilinearForm, build_form
from whitney.groebner import INFINITE, Ideal, ideal_quotient, ideal_sum, standard_monomials
from whitney.polyring import DEGREVLEX, MonomialOrder, Polynomial, VarRing

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# errors (the CLI maps each family to an exit code)

class AssumptionViolated(ValueError):
    """The input violates a hypothesis of the degree formulas."""

    check = "assumption"


class InfiniteDimension(AssumptionViolated):
    check = "finite_dim"


class NotComaximal(AssumptionViolated):
    check = "comaximal"


class GenericityFailure(RuntimeError):
    """No admissible ``(u, phi)`` found, or a supplied one is degenerate."""


class DegenerateU(GenericityFailure):
    pass


class DegeneratePhiPsi(GenericityFailure):
    pass


class InternalInconsistency(ArithmeticError):
    """An identity that must hold did not: a bug or a violated upstream hypothesis."""


class NonIntegerResult(InternalInconsistency):
    pass


class OddSignature(InternalInconsistency):
    pass


class ProblemError(ValueError):
    """Malformed problem (counts, rings, unsupported dimension)."""


# ---------------------------------------------------------------------------
# problems

@dataclass
class DegreeProblem:
    H: list
    I_gens: list
    u: Polynomial | None = None

    def __post_init__(self):
        if not self.H:
            raise ProblemError("empty map")
        self.ring = self.H[0].ring
        if len(self.H) != len(self.ring):
            raise ProblemError(f"need {len(self.ring)} components, got {len(self.H)}")
        for p in list(self.H) + list(self.I_gens) + ([self.u] if self.u is not None else []):
            if p.ring != self.ring:
                raise ProblemError("all polynomials must share one ring")

    def with_u(self, u: Polynomial | None) -> DegreeProblem:
        return DegreeProblem(self.H, self.I_gens, u)


@dataclass
class ImmersionProblem:
    f: list
    g: list

    def __post_init__(self):
        if not self.g:
            raise ProblemError("empty map")
        self.ring = self.g[0].ring
        for p in list(self.f) + list(self.g):
            if p.ring != self.ring:
                raise ProblemError("all polynomials must share one ring")
        n = len(self.f)
        self.m = len(self.ring) - n
        if self.m < 1:
            raise ProblemError("need more variables than constraints")
        if len(self.g) != 2 * self.m:
            raise ProblemError(f"need 2m = {2 * self.m} map components, got {len(self.g)}")


def copy_names(names) -> list[str]:
    """Names for the second copy of the variables: ``x3 -> y3``, otherwise ``a -> a_y``."""
    out = [("y" + v[1:]) if v.startswith("x") else v + "_y" for v in names]
    if set(out) & set(names) or len(set(out)) != len(out):
        out = [v + "_y" for v in names]
    return out


def build_H(p: ImmersionProblem) -> DegreeProblem:
    """``H(x, y) = (f(x), f(y), g(x) - g(y))`` with excluded ideal ``<f(x), f(y), x - y>``."""
    xs = list(p.ring.names)
    ys = copy_names(xs)
    R = VarRing(xs + ys)
    ren = dict(zip(xs, ys))
    fx = [q.embed(R) for q in p.f]
    fy = [q.rename(ren, R) for q in p.f]
    G = [q.embed(R) - q.rename(ren, R) for q in p.g]
    diag = [Polynomial.var(R, a) - Polynomial.var(R, b) for a, b in zip(xs, ys)]
    return DegreeProblem(fx + fy + G, fx + fy + diag)


# ---------------------------------------------------------------------------
# the algebra

@dataclass
class Prepared:
    S: Ideal
    A: QuotientAlgebra | None      # None when the quotient is the zero algebra
    dim: int


def check_assumptions(dp: DegreeProblem, order: MonomialOrder = DEGREVLEX) -> Prepared:
    """Compute ``S = J : I`` and verify finite dimension and ``S + I = <1>``.

    No excluded generators means ``I = <1>``, i.e. nothing is excluded.
    """
    J = Ideal(dp.H, dp.ring, order)
    I = Ideal(dp.I_gens or [dp.ring.one()], dp.ring, order)
    S = ideal_quotient(J, I)
    basis = standard_monomials(S)
    if basis is INFINITE:
        raise InfiniteDimension("finite_dim: R[x]/(J:I) is infinite-dimensional")
    if not ideal_sum(S, I).is_unit():
        raise NotComaximal("comaximal: (J:I) + I is not the unit ideal")
    if not basis:
        return Prepared(S, None, 0)
    return Prepared(S, QuotientAlgebra(S), len(basis))


@dataclass
class DegreeReport:
    dim_A: int
    signature_phi_T: int | None = None
    signature_psi_T: int | None = None
    det_sign_phi: int | None = None
    det_sign_psi: int | None = None
    result: int | None = None
    mod2: bool = False
    u_used: str | None = None
    phi_used: list | None = None
    diagnostics: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)


def phi_T_form(pre: Prepared, H, keep: dict | None = None) -> tuple[Functional, SymBilinearForm]:
    """The Bezoutian functional and ``Phi_T``; ``keep`` receives the tensor under ``"T"``."""
    T = bezoutian_tensor(H, pre.A)
    if keep is not None:
        keep["T"] = T
    phi = trace_functional(T)
    return phi, build_form(pre.A, phi)


def degree_sum(dp: DegreeProblem, pre: Prepared | None = None) -> int:
    """Sum of local degrees over real zeros of ``H`` off ``V(I)``: the signature of ``Phi_T``."""
    pre = pre or check_assumptions(dp)
    if pre.A is None:
        return 0
    try:
        _, F = phi_T_form(pre, dp.H)
    except SingularBezoutian as exc:
        raise InternalInconsistency(f"Phi_T degenerate: {exc}") from exc
    return F.signature()


def degree_sum_halfspace(dp: DegreeProblem, pre: Prepared | None = None) -> int:
    """Sum of local degrees over zeros with ``u > 0``: ``(sig Phi_T + sig Psi_T) / 2``."""
    if dp.u is None:
        raise ProblemError("half-space sum needs u")
    pre = pre or check_assumptions(dp)
    if pre.A is None:
        return 0
    try:
        phi, F = phi_T_form(pre, dp.H)
    except SingularBezoutian as exc:
        raise InternalInconsistency(f"Phi_T degenerate: {exc}") from exc
    Psi = build_form(pre.A, phi, dp.u)
    if Psi.det_sign() == 0:
        raise DegenerateU("Psi_T is degenerate: u vanishes at a zero of H off V(I)")
    total = F.signature() + Psi.signature()
    if total % 2:
        raise NonIntegerResult(f"signature Phi_T + signature Psi_T = {total} is odd")
    return total // 2


def mod2_bit(dim: int, det_phi: int, det_psi: int) -> int:
    return (dim + 1 + (det_phi + det_psi) // 2) % 2


def degree_mod2(dp: DegreeProblem, phi: Functional | None, pre: Prepared | None = None) -> int:
    """Parity of the degree sum over ``{u > 0}`` from any ``phi`` with ``det Psi != 0``.

    ``phi=None`` uses the Bezoutian functional.
    """
    if dp.u is None:
        raise ProblemError("mod-2 degree needs u")
    pre = pre or check_assumptions(dp)
    if pre.A is None:
        return mod2_bit(0, 1, 1)
    if phi is None:
        phi, _ = phi_T_form(pre, dp.H)
    elif phi.is_zero():
        raise DegeneratePhiPsi("zero functional")
    Phi = build_form(pre.A, phi)
    Psi = build_form(pre.A, phi, dp.u)
    sphi, spsi = Phi.det_sign(), Psi.det_sign()
    if spsi == 0:
        raise DegeneratePhiPsi("det Psi = 0 for this (u, phi)")
    if sphi == 0:
        raise InternalInconsistency("det Psi != 0 but det Phi = 0")
    return mod2_bit(pre.dim, sphi, spsi)


def degree_report(dp: DegreeProblem, order: MonomialOrder = DEGREVLEX) -> DegreeReport:
    """Everything the ``degree`` command prints: ``Phi_T`` and, with ``u``, ``Psi_T``."""
    pre = check_assumptions(dp, order)
    rep = DegreeReport(dim_A=pre.dim)
    rep.diagnostics = {"finite_dim": True, "comaximal": True}
    rep.artifacts["A"] = pre.A
    if pre.A is None:
        rep.signature_phi_T = 0
        rep.result = 0
        if dp.u is not None:
            rep.signature_psi_T = 0
            rep.diagnostics["halfspace_degree_sum"] = 0
            rep.u_used = dp.u.to_str()
        return rep
    try:
        phi, F = phi_T_form(pre, dp.H, rep.artifacts)
    except SingularBezoutian as exc:
        raise InternalInconsistency(f"Phi_T degenerate: {exc}") from exc
    rep.artifacts.update(phi_T=F, phi_T_weights=phi.weights)
    rep.signature_phi_T = F.signature()
    rep.det_sign_phi = F.det_sign()
    rep.result = rep.signature_phi_T
    if dp.u is not None:
        Psi = build_form(pre.A, phi, dp.u)
        rep.artifacts["Psi_T"] = Psi
        rep.u_used = dp.u.to_str()
        rep.det_sign_psi = Psi.det_sign()
        if rep.det_sign_psi == 0:
            raise DegenerateU("Psi_T is degenerate: u vanishes at a zero of H off V(I)")
        rep.signature_psi_T = Psi.signature()
        total = rep.signature_phi_T + rep.signature_psi_T
        if total % 2:
            raise NonIntegerResult(f"signature Phi_T + signature Psi_T = {total} is odd")
        rep.diagnostics["halfspace_degree_sum"] = total // 2
    return rep


# ---------------------------------------------------------------------------
# immersions

@dataclass
class ImmersionReport(DegreeReport):
    m: int = 0
    intersection_number: int | None = None


def random_u(dp: DegreeProblem, m_vars: int, rng: random.Random) -> Polynomial:
    """``sum a_i (x_i - y_i)`` with ``a_i`` in ``{-5..5} \\ {0}``."""
    R = dp.ring
    xs, ys = R.names[:m_vars], R.names[m_vars:]
    u = R.zero()
    for a, b in zip(xs, ys):
        c = rng.choice([k for k in range(-5, 6) if k])
        u = u + c * (Polynomial.var(R, a) - Polynomial.var(R, b))
    return u


def random_functional(A: QuotientAlgebra, rng: random.Random) -> Functional:
    return Functional(A, [rng.randint(-9, 9) for _ in range(A.d)])


def intersection_number(
    p: ImmersionProblem,
    *,
    seed: int = 0,
    retries: int = 64,
    u: Polynomial | None = None,
    phi: Functional | None = None,
    order: MonomialOrder = DEGREVLEX,
    with_bezoutian: bool | None = None,
) -> ImmersionReport:
    """Whitney intersection number of ``g|M``.

    Even ``m``: half the signature of ``Phi_T``.  Odd ``m > 1``: the mod-2
    class from a random admissible ``(u, phi)`` (``u`` may be fixed by the
    caller).  For odd ``m`` the Bezoutian is optional (``with_bezoutian``);
    when present and ``Psi_T`` is non-degenerate, the half-space degree sum
    is checked against the mod-2 class.
    """
    m = p.m
    if m == 1:
        raise ProblemError("m = 1 is not supported: the odd case needs m > 1")
    dp = build_H(p)
    pre = check_assumptions(dp, order)
    rep = ImmersionReport(dim_A=pre.dim, m=m, mod2=bool(m % 2))
    rep.diagnostics = {"finite_dim": True, "comaximal": True}
    rep.artifacts["A"] = pre.A
    if m % 2 == 0 or with_bezoutian is None:
        with_bezoutian = True
    phi_T = None
    if with_bezoutian:
        if pre.A is None:
            rep.signature_phi_T = 0
        else:
            try:
                phi_T, F = phi_T_form(pre, dp.H, rep.artifacts)
            except SingularBezoutian as exc:
                raise InternalInconsistency(f"Phi_T degenerate: {exc}") from exc
            rep.signature_phi_T = F.signature()
            rep.artifacts["phi_T"] = F
            rep.artifacts["phi_T_weights"] = phi_T.weights
    if m % 2 == 0:
        sig = rep.signature_phi_T
        if sig % 2:
            raise OddSignature(f"signature Phi_T = {sig} is odd for even m")
        rep.result = rep.intersection_number = sig // 2
        return rep

    rng = random.Random(seed)
    nvars = len(p.ring)
    if pre.A is None:
        rep.result = rep.intersection_number = mod2_bit(0, 1, 1)
        rep.u_used = str(u if u is not None else random_u(dp, nvars, rng))
        return rep
    tries = 0
    while True:
        if tries >= retries:
            raise GenericityFailure(f"no (u, phi) with det Psi != 0 after {retries} draws")
        tries += 1
        uu = u if u is not None else random_u(dp, nvars, rng)
        ph = phi if phi is not None else random_functional(pre.A, rng)
        Phi = build_form(pre.A, ph)
        Psi = build_form(pre.A, ph, uu)
        sphi, spsi = Phi.det_sign(), Psi.det_sign()
        if spsi:
            break
        if u is not None and phi is not None:
            raise DegeneratePhiPsi("det Psi = 0 for the supplied (u, phi)")
    if sphi == 0:
        raise InternalInconsistency("det Psi != 0 but det Phi = 0")
    rep.det_sign_phi, rep.det_sign_psi = sphi, spsi
    rep.u_used = uu.to_str()
    rep.phi_used = [str(w) for w in ph.weights]
    rep.artifacts.update(Phi=Phi, Psi=Psi)
    rep.diagnostics["draws"] = tries
    rep.result = rep.intersection_number = mod2_bit(pre.dim, sphi, spsi)
    if phi_T is not None:
        Psi_T = build_form(pre.A, phi_T, uu)
        rep.artifacts["Psi_T"] = Psi_T
        if Psi_T.det_sign():
            rep.signature_psi_T = Psi_T.signature()
            half = rep.signature_phi_T + rep.signature_psi_T
            if half % 2:
                raise NonIntegerResult(f"signature Phi_T + signature Psi_T = {half} is odd")
            if (half // 2) % 2 != rep.result:
                raise InternalInconsistency(
                    f"half-space degree sum {half // 2} disagrees with the mod-2 class {rep.result}"
                )
            rep.diagnostics["halfspace_degree_sum"] = half // 2
    return rep


# ---------------------------------------------------------------------------
# immersion rank certificate

def poly_det(M: list[list[Polynomial]]) -> Polynomial:
    """Determinant of a square polynomial matrix by Laplace expansion over column subsets."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    layer = {0: M[0][0].ring.one()}
    for k in range(n):
        nxt = {}
        for S, D in layer.items():
            for j in range(n):
                if S >> j & 1 or not M[k][j]:
                    continue
                term = M[k][j] * D
                if bin(S >> (j + 1)).count("1") & 1:
                    term = -term
                T = S | 1 << j
                nxt[T] = nxt[T] + term if T in nxt else term
        layer = {S: D for S, D in nxt.items() if D}
    return layer.get((1 << n) - 1, M[0][0].ring.zero())


CERTIFIED = "CertifiedEverywhereComplex"
INCONCLUSIVE = "Inconclusive"


def immersion_certificate(p: ImmersionProblem) -> str:
    """Full rank of ``[Dg; Df]`` at every complex point of ``M``, or inconclusive."""
    names = p.ring.names
    rows = [[q.diff(v) for v in names] for q in list(p.g) + list(p.f)]
    k = len(names)
    minors = []
    for sel in combinations(range(len(rows)), k):
        det = poly_det([rows[i] for i in sel])
        if det:
            minors.append(det)
    if not minors:
        return INCONCLUSIVE
    ideal = Ideal(list(p.f) + minors, p.ring)
    return CERTIFIED if ideal.is_unit() else INCONCLUSIVE


# ---------------------------------------------------------------------------
# construction from parsed files

def problem_from_file(pf) -> DegreeProblem | ImmersionProblem:
    from whitney.parser import parse_polynomial

    ring = VarRing(pf.vars)

    def polys(tag):
        return [parse_polynomial(text, ring, line=ln) for t, text, ln in pf.statements if t == tag]

    if pf.kind == "immersion":
        return ImmersionProblem(polys("f"), polys("g"))
    us = polys("u")
    return DegreeProblem(polys("h"), polys("i"), us[0] if us else None)

