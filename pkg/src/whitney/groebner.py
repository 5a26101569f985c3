"""Buchberger Groebner bases and the ideal calculus built on them.

The engine works on plain dicts ``{exponent tuple: mpq}``; :class:`Ideal`
wraps it with a ring, a monomial order and a cached reduced basis.
"""
from __future__ import annotations

import heapq
import logging
import threading
from itertools import product

from gmpy2 import mpq

from whitney import budget
from whitney.polyring import DEGREVLEX, MonomialOrder, Polynomial, RingMismatch, VarRing

log = logging.getLogger(__name__)

TAG = "_t"


class Infinite:
    """Marker returned by :func:`standard_monomials` for an unbounded staircase."""

    def __repr__(self):
        return "Infinite"

    def __bool__(self):
        return False


INFINITE = Infinite()


# ---------------------------------------------------------------------------
# low level engine

def _mask(exp):
    m = 0
    for i, e in enumerate(exp):
        if e:
            m |= 1 << i
    return m


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Elt:
    """Monic polynomial prepared for reduction: leading monomial, its support mask, tail."""

    __slots__ = ("lm", "mask", "tail", "terms")

    def __init__(self, terms: dict, order: MonomialOrder):
        lm = max(terms, key=order.key)
        c = terms[lm]
        if c != 1:
            inv = 1 / c
            terms = {e: v * inv for e, v in terms.items()}
        self.terms = terms
        self.lm = lm
        self.mask = _mask(lm)
        self.tail = [(e, v) for e, v in terms.items() if e != lm]


def _find_divisor(exp, mask, basis):
    for g in basis:
        if not (g.mask & ~mask) and _divides(g.lm, exp):
            return g
    return None


def _reduce(terms: dict, basis: list, order: MonomialOrder, full: bool = True) -> dict:
    """Remainder of ``terms`` on division by the monic elements ``basis``.

    With ``full=False`` only the leading term is made irreducible.
    """
    if not terms or not basis:
        return dict(terms)
    nk = order.neg_key
    work = dict(terms)
    heap = [(nk(e), e) for e in work]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        g = _find_divisor(m, _mask(m), basis)
        if g is None:
            rem[m] = c
            if not full:
                rem.update(work)
                return rem
            continue
        q = [a - b for a, b in zip(m, g.lm)]
        for e, v in g.tail:
            mm = tuple(a + b for a, b in zip(q, e))
            old = work.get(mm)
            if old is None:
                work[mm] = -c * v
                heapq.heappush(heap, (nk(mm), mm))
            else:
                old -= c * v
                if old:
                    work[mm] = old
                else:
                    del work[mm]
    return rem


def _spoly(f: _Elt, g: _Elt) -> dict:
    lcm = _lcm(f.lm, g.lm)
    uf = [a - b for a, b in zip(lcm, f.lm)]
    ug = [a - b for a, b in zip(lcm, g.lm)]
    out = {}
    for e, v in f.tail:
        out[tuple(a + b for a, b in zip(uf, e))] = v
    for e, v in g.tail:
        mm = tuple(a + b for a, b in zip(ug, e))
        old = out.get(mm)
        if old is None:
            out[mm] = -v
        else:
            old -= v
            if old:
                out[mm] = old
            else:
                del out[mm]
    return out


def _update(polys, G, pairs, h, order):
    """Gebauer-Moeller installation of the new element index ``h``.

    Implements both Buchberger criteria: coprime leading monomials and the
    chain criterion.  ``G`` is a list of indices, ``pairs`` a list of
    ``(lcm, i, j)``.
    """
    lh = polys[h].lm
    C = [(g, _lcm(lh, polys[g].lm)) for g in G]
    D = []
    while C:
        g1, l1 = C.pop()
        if _coprime(lh, polys[g1].lm):
            D.append((g1, l1))
            continue
        redundant = False
        for g2, l2 in C:
            if _divides(l2, l1):
                redundant = True
                break
        if not redundant:
            for g2, l2 in D:
                if _divides(l2, l1):
                    redundant = True
                    break
        if not redundant:
            D.append((g1, l1))
    E = [(l, g, h) for g, l in D if not _coprime(lh, polys[g].lm)]
    kept = []
    for l, a, b in pairs:
        if (
            _divides(lh, l)
            and _lcm(polys[a].lm, lh) != l
            and _lcm(polys[b].lm, lh) != l
        ):
            continue
        kept.append((l, a, b))
    kept.extend(E)
    G = [g for g in G if not _divides(lh, polys[g].lm)]
    G.append(h)
    return G, kept


def buchberger(gens: list[dict], order: MonomialOrder) -> list[dict]:
    """Reduced Groebner basis of the dict polynomials ``gens``, monic, sorted ascending."""
    gens = [dict(g) for g in gens if g]
    if not gens:
        return []
    polys: list[_Elt] = []
    G: list[int] = []
    pairs: list = []
    # interreduce the input a little: add generators smallest first
    gens.sort(key=lambda t: order.key(max(t, key=order.key)))
    for g in gens:
        r = _reduce(g, [polys[i] for i in G], order)
        if not r:
            continue
        polys.append(_Elt(r, order))
        G, pairs = _update(polys, G, pairs, len(polys) - 1, order)
    key = order.key
    steps = 0
    while pairs:
        budget.check()
        # normal selection strategy: smallest lcm first
        best = min(range(len(pairs)), key=lambda k: (key(pairs[k][0]), pairs[k][1], pairs[k][2]))
        l, a, b = pairs[best]
        pairs[best] = pairs[-1]
        pairs.pop()
        s = _spoly(polys[a], polys[b])
        r = _reduce(s, [polys[i] for i in G], order)
        steps += 1
        if not r:
            continue
        polys.append(_Elt(r, order))
        if not any(polys[-1].lm):
            return [{(0,) * len(polys[-1].lm): mpq(1)}]
        G, pairs = _update(polys, G, pairs, len(polys) - 1, order)
    log.debug("buchberger: %d reductions, %d basis elements", steps, len(G))
    return _reduced([polys[i] for i in G], order)


def _reduced(elts: list[_Elt], order: MonomialOrder) -> list[dict]:
    elts = [g for g in elts if not any(h is not g and _divides(h.lm, g.lm) for h in elts)]
    out = []
    for g in elts:
        others = [h for h in elts if h is not g]
        tail = _reduce(dict(g.tail), others, order)
        tail[g.lm] = mpq(1)
        out.append(tail)
    out.sort(key=lambda t: order.key(max(t, key=order.key)))
    return out


# ---------------------------------------------------------------------------
# ideals

class Ideal:
    """Generators in one ring plus a lazily computed reduced Groebner basis."""

    def __init__(self, generators, ring: VarRing | None = None, order: MonomialOrder = DEGREVLEX):
        generators = list(generators)
        if ring is None:
            if not generators:
                raise ValueError("an empty ideal needs an explicit ring")
            ring = generators[0].ring
        for g in generators:
            if g.ring != ring:
                raise RingMismatch(f"generator {g} is not in {ring!r}")
        self.ring = ring
        self.generators = [g for g in generators if g]
        self.order = order
        self._gb = None
        self._elts = None
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal<{', '.join(map(str, self.generators))}>"

    def with_order(self, order: MonomialOrder) -> Ideal:
        return Ideal(self.generators, self.ring, order)

    def groebner_basis(self) -> list[Polynomial]:
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    raw = buchberger([g.terms for g in self.generators], self.order)
                    self._elts = [_Elt(t, self.order) for t in raw]
                    self._gb = [Polynomial(self.ring, t, _clean=True) for t in raw]
        return list(self._gb)

    gb = property(groebner_basis)

    def _reducers(self):
        self.groebner_basis()
        return self._elts

    def leading_monomials(self) -> list[tuple]:
        return [g.lm for g in self._reducers()]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatch(f"{f.ring!r} vs {self.ring!r}")
        return Polynomial(self.ring, _reduce(f.terms, self._reducers(), self.order), _clean=True)

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def __contains__(self, f):
        return self.contains(f)

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    def is_subset_of(self, other: Ideal) -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: Ideal) -> bool:
        """Equality as ideals, via reduced bases in this ideal's order."""
        o = other if other.order == self.order else other.with_order(self.order)
        return self.groebner_basis() == o.groebner_basis()

    def standard_monomials(self):
        """Monomials outside the leading-term ideal, ascending, or ``INFINITE``."""
        return standard_monomials(self)


def normal_form(f: Polynomial, I: Ideal) -> Polynomial:
    return I.normal_form(f)


def groebner_basis(I: Ideal) -> list[Polynomial]:
    return I.groebner_basis()


def _check(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring!r} vs {J.ring!r}")


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _check(I, J)
    return Ideal(I.generators + J.generators, I.ring, I.order)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _check(I, J)
    gens = [a * b for a, b in product(I.generators, J.generators)]
    return Ideal(gens, I.ring, I.order)


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` by eliminating ``t`` from ``t*I + (1-t)*J``."""
    _check(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal([], ring, I.order)
    if I.is_unit():
        return Ideal(J.generators, ring, I.order)
    if J.is_unit():
        return Ideal(I.generators, ring, I.order)
    if standard_monomials(I) is not INFINITE and standard_monomials(J) is not INFINITE:
        return intersect_zero_dim([I, J], I.order)
    tag = TAG
    while tag in ring:
        tag += "_"
    big = ring.extended(front=[tag])
    t = Polynomial.var(big, tag)
    gens = [t * g.embed(big) for g in I.generators]
    gens += [(1 - t) * g.embed(big) for g in J.generators]
    elim = buchberger([g.terms for g in gens], MonomialOrder("block", 1))
    out = []
    for terms in elim:
        if all(e[0] == 0 for e in terms):
            out.append(Polynomial(ring, {e[1:]: c for e, c in terms.items()}, _clean=True))
    return Ideal(out, ring, I.order)


def intersect_zero_dim(ideals: list[Ideal], order: MonomialOrder = DEGREVLEX) -> Ideal:
    """Intersection of zero-dimensional ideals by linear algebra on residues.

    Monomials are visited in increasing order; each is mapped to its stacked
    normal-form coordinates in every ``ring/I_k``.  A monomial whose vector
    depends on the earlier standard monomials yields a basis element, so the
    result is the reduced Groebner basis of the intersection in ``order``.
    """
    ring = ideals[0].ring
    n = len(ring)
    stairs = [standard_monomials(I) for I in ideals]
    if any(s is INFINITE for s in stairs):
        raise ValueError("intersect_zero_dim needs zero-dimensional ideals")
    index = [{m: i for i, m in enumerate(s)} for s in stairs]
    offsets = []
    total = 0
    for s in stairs:
        offsets.append(total)
        total += len(s)
    cache: list[dict] = [dict() for _ in ideals]

    def vector(exp):
        vec = {}
        for k, I in enumerate(ideals):
            c = cache[k].get(exp)
            if c is None:
                nf = _reduce({exp: mpq(1)}, I._reducers(), I.order)
                c = {index[k][e]: v for e, v in nf.items()}
                cache[k][exp] = c
            off = offsets[k]
            for i, v in c.items():
                vec[off + i] = v
        return vec

    # reduced echelon rows keyed by pivot column; each row carries the
    # combination of visited monomials it represents
    rows: dict[int, tuple[dict, dict]] = {}
    leads: list[tuple] = []
    out = []
    cand = {(0,) * n}
    while cand:
        budget.check()
        m = min(cand, key=order.key)
        cand.discard(m)
        if any(_divides(l, m) for l in leads):
            continue
        vec = vector(m)
        comb = {m: mpq(1)}
        for p in [p for p in vec if p in rows]:
            f = vec.get(p)
            if not f:
                continue
            row, rc = rows[p]
            _axpy(vec, -f, row)
            _axpy(comb, -f, rc)
        if not vec:
            leads.append(m)
            out.append(comb)
            continue
        p = min(vec)
        inv = 1 / vec[p]
        vec = {i: v * inv for i, v in vec.items()}
        comb = {e: v * inv for e, v in comb.items()}
        for q, (row, rc) in rows.items():
            f = row.get(p)
            if f:
                _axpy(row, -f, vec)
                _axpy(rc, -f, comb)
        rows[p] = (vec, comb)
        for i in range(n):
            cand.add(m[:i] + (m[i] + 1,) + m[i + 1:])
    # every relation has a minimal non-standard leading monomial and a
    # standard tail, so this already is the reduced basis
    out.sort(key=lambda t: order.key(max(t, key=order.key)))
    result = Ideal([Polynomial(ring, t, _clean=True) for t in out], ring, order)
    result._elts = [_Elt(t, order) for t in out]
    result._gb = list(result.generators)
    return result


def _axpy(y: dict, a, x: dict):
    """``y += a*x`` on sparse dicts, dropping zeros."""
    for i, v in x.items():
        nv = y.get(i, 0) + a * v
        if nv:
            y[i] = nv
        else:
            y.pop(i, None)


def divide_exact(p: Polynomial, g: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """Multivariate exact division ``p / g``; raises if ``g`` does not divide ``p``."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    elt = _Elt(dict(g.terms), order)
    lc = g.terms[elt.lm]
    quot: dict = {}
    work = dict(p.terms)
    while work:
        m = max(work, key=order.key)
        if not _divides(elt.lm, m):
            raise ArithmeticError(f"{g} does not divide {p}")
        c = work.pop(m)
        q = tuple(a - b for a, b in zip(m, elt.lm))
        quot[q] = c / lc
        for e, v in elt.tail:
            mm = tuple(a + b for a, b in zip(q, e))
            nv = work.get(mm, 0) - c * v
            if nv:
                work[mm] = nv
            else:
                work.pop(mm, None)
    return Polynomial(p.ring, quot, _clean=True)


def quotient_by_element(J: Ideal, g: Polynomial) -> Ideal:
    """``J : <g> = (J ∩ <g>) / g``."""
    ring = J.ring
    if not g or J.contains(g):
        return Ideal([ring.one()], ring, J.order)
    inter = ideal_intersect(J, Ideal([g], ring, J.order))
    return Ideal([divide_exact(h, g) for h in inter.generators], ring, J.order)


def quotient_by_linear_form(J: Ideal, g: Polynomial) -> Ideal:
    """``J : <g>`` for ``g`` of degree one, without an elimination order.

    Homogenize a degree-compatible basis of ``J`` with a new variable ``h``,
    change coordinates so that the homogenized ``g`` becomes a variable
    ``z`` placed last, and compute a degrevlex basis.  For homogeneous ideals
    and revlex with ``z`` last, dividing every basis element that ``z``
    divides gives a basis of the quotient by ``z``; setting ``h = 1`` and
    substituting back gives ``J : g``.
    """
    ring = J.ring
    if g.total_degree() != 1:
        raise ValueError(f"{g} is not of degree one")
    if J.contains(g):
        return Ideal([ring.one()], ring, J.order)
    if J.order.kind == "degrevlex":
        basis = J.groebner_basis()
    else:
        basis = J.with_order(DEGREVLEX).groebner_basis()
    lin = {ring.names[e.index(1)]: c for e, c in g.terms.items() if sum(e) == 1}
    v = max(lin, key=ring.index)
    hname, zname = "_h", "_z"
    while hname in ring or zname in ring:
        hname, zname = hname + "_", zname + "_"
    others = [name for name in ring.names if name != v]
    R2 = VarRing(others + [hname, zname])
    h = Polynomial.var(R2, hname)
    z = Polynomial.var(R2, zname)
    rest = g.constant_coeff() * h
    for name, c in lin.items():
        if name != v:
            rest = rest + c * Polynomial.var(R2, name)
    images = [(z - rest) * (1 / lin[v]) if name == v else Polynomial.var(R2, name) for name in ring.names]
    homog = []
    for p in basis:
        top = p.total_degree()
        hom = Polynomial(ring.extended(back=[hname]), {e + (top - sum(e),): c for e, c in p.terms.items()}, _clean=True)
        homog.append(hom.substitute(dict(zip(ring.names, images)) | {hname: h}, R2))
    B = buchberger([p.terms for p in homog], DEGREVLEX)
    zi = len(R2) - 1
    back = {hname: 1, zname: g}
    out = []
    for terms in B:
        budget.check()
        if all(e[zi] for e in terms):
            terms = {e[:zi] + (e[zi] - 1,): c for e, c in terms.items()}
        P = Polynomial(R2, terms, _clean=True)
        out.append(P.substitute(back | {name: Polynomial.var(ring, name) for name in others}, ring))
    return Ideal(out, ring, J.order)


def ideal_quotient(J: Ideal, I: Ideal, method: str = "auto") -> Ideal:
    """``J : I`` as the intersection of ``J : <g>`` over the generators ``g`` of ``I``.

    Generators already in ``J`` contribute the unit ideal and are skipped.
    ``method="intersect"`` always uses ``(J ∩ <g>) / g``; ``"auto"`` switches
    to :func:`quotient_by_linear_form` for degree-one generators.
    """
    _check(J, I)
    if method not in ("auto", "intersect"):
        raise ValueError(f"unknown quotient method {method!r}")
    ring = J.ring
    parts = []
    for g in I.generators:
        budget.check()
        if method == "auto" and g.total_degree() == 1:
            q = quotient_by_linear_form(J, g)
        else:
            q = quotient_by_element(J, g)
        if not q.is_unit():
            parts.append(q)
    if not parts:
        return Ideal([ring.one()], ring, J.order)
    result = parts[0]
    for q in parts[1:]:
        result = ideal_intersect(result, q)
    # canonical generators: the reduced basis itself
    return Ideal(result.groebner_basis(), ring, J.order)


def is_unit_ideal(I: Ideal) -> bool:
    return I.is_unit()


def standard_monomials(I: Ideal):
    """Basis of ``ring / I`` as exponent tuples, ascending in the order, or ``INFINITE``."""
    n = len(I.ring)
    lms = I.leading_monomials()
    if any(not any(m) for m in lms):
        return []
    bounds = []
    for i in range(n):
        pure = [m[i] for m in lms if m[i] and all(e == 0 for k, e in enumerate(m) if k != i)]
        if not pure:
            return INFINITE
        bounds.append(min(pure))
    out = []
    # depth-first walk of the staircase, pruning as soon as a monomial is a leading-term multiple
    stack = [(0,) * n]
    seen = {stack[0]}
    while stack:
        m = stack.pop()
        if any(_divides(l, m) for l in lms):
            continue
        out.append(m)
        for i in range(n):
            if m[i] + 1 < bounds[i]:
                nxt = m[:i] + (m[i] + 1,) + m[i + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    out.sort(key=I.order.key)
    return out
