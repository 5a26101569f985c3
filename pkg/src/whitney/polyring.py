"""Sparse multivariate polynomials over the rationals.

Coefficients are ``gmpy2.mpq`` values; a polynomial stores a dict mapping
exponent tuples to nonzero coefficients.  Values are treated as immutable.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from gmpy2 import mpq

Rational = type(mpq(0))

PRIME_SUFFIX = "#p"


def QQ(value) -> Rational:
    """Coerce ints, strings like ``"3/4"``, Fractions and mpq to mpq."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return mpq(value.strip())
    try:
        return mpq(value.numerator, value.denominator)
    except AttributeError:
        raise TypeError(f"cannot coerce {value!r} to a rational") from None


class RingMismatch(ValueError):
    pass


class VarRing:
    """An ordered tuple of variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {v: i for i, v in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarRing({' '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"variable {name!r} not in {self!r}") from None

    def __contains__(self, name):
        return name in self._index

    def doubled(self) -> VarRing:
        """The ring with a primed copy of every variable appended."""
        return VarRing(self.names + tuple(v + PRIME_SUFFIX for v in self.names))

    def extended(self, front: Iterable[str] = (), back: Iterable[str] = ()) -> VarRing:
        return VarRing(tuple(front) + self.names + tuple(back))

    def gens(self) -> list[Polynomial]:
        return [Polynomial.var(self, v) for v in self.names]

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return Polynomial.const(self, 1)

    def __call__(self, text: str) -> Polynomial:
        from whitney.parser import parse_polynomial

        return parse_polynomial(text, self)


# ---------------------------------------------------------------------------
# monomial orders

def _drl(exp):
    return (sum(exp),) + tuple(-e for e in reversed(exp))


class MonomialOrder:
    """degrevlex, lex, or block(k).

    ``block(k)`` compares the first ``k`` exponents by degrevlex and breaks
    ties with degrevlex on the rest, so it eliminates the first ``k``
    variables.
    """

    __slots__ = ("kind", "k", "key", "neg_key")

    def __init__(self, kind: str = "degrevlex", k: int = 0):
        if kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and k < 1:
            raise ValueError("block order needs k >= 1")
        self.kind = kind
        self.k = k if kind == "block" else 0
        if kind == "degrevlex":
            key = _drl
        elif kind == "lex":
            key = tuple
        else:
            def key(exp, k=k):
                return _drl(exp[:k]) + _drl(exp[k:])
        self.key = lru_cache(maxsize=1 << 18)(key)
        # min-heap key putting the largest monomial first
        self.neg_key = lru_cache(maxsize=1 << 18)(lambda exp: tuple(-x for x in self.key(exp)))

    @classmethod
    def parse(cls, text: str) -> MonomialOrder:
        text = text.strip()
        if text.startswith("block(") and text.endswith(")"):
            return cls("block", int(text[6:-1]))
        return cls(text)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.k) == (other.kind, other.k)

    def __hash__(self):
        return hash((self.kind, self.k))

    def __repr__(self):
        return f"block({self.k})" if self.kind == "block" else self.kind

    def less(self, a, b) -> bool:
        return self.key(tuple(a)) < self.key(tuple(b))


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# polynomials

def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: VarRing, terms: Mapping[tuple, object] | None = None, *, _clean=False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            n = len(ring)
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(exp)
                if len(exp) != n or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp} for {ring!r}")
                c = QQ(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
            self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def const(cls, ring: VarRing, c) -> Polynomial:
        c = QQ(c)
        return cls(ring, {(0,) * len(ring): c} if c else {}, _clean=True)

    @classmethod
    def var(cls, ring: VarRing, name: str) -> Polynomial:
        exp = [0] * len(ring)
        exp[ring.index(name)] = 1
        return cls(ring, {tuple(exp): mpq(1)}, _clean=True)

    @classmethod
    def monomial(cls, ring: VarRing, exp, c=1) -> Polynomial:
        return cls(ring, {tuple(exp): c})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self) -> Rational:
        return self.terms.get((0,) * len(self.ring), mpq(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> list[str]:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return [self.ring.names[i] for i in sorted(used)]

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX):
        """Terms from largest to smallest monomial."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = DEGREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=order.key)
        return exp, self.terms[exp]

    # arithmetic
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        return Polynomial.const(self.ring, other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            v = terms.get(exp)
            if v is None:
                terms[exp] = c
            else:
                v = v + c
                if v:
                    terms[exp] = v
                else:
                    del terms[exp]
        return Polynomial(self.ring, terms, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = QQ(other)
            except TypeError:
                return NotImplemented
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()}, _clean=True)
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return Polynomial(self.ring, terms, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = QQ(other)
        if not c:
            raise ZeroDivisionError("polynomial division by zero")
        return self * (1 / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == Polynomial.const(self.ring, other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # structural operations
    def substitute(self, assignment: Mapping[str, Polynomial | object], ring: VarRing | None = None) -> Polynomial:
        """Replace variables by polynomials.

        All replacement polynomials must share one ring, which becomes the
        ring of the result; variables that are not replaced must exist in it
        under the same name.
        """
        targets = [v for v in assignment.values() if isinstance(v, Polynomial)]
        if ring is None:
            ring = targets[0].ring if targets else self.ring
        if any(t.ring != ring for t in targets):
            raise RingMismatch("substitution targets live in different rings")
        images = []
        for name in self.ring.names:
            if name in assignment:
                v = assignment[name]
                images.append(v if isinstance(v, Polynomial) else Polynomial.const(ring, v))
            elif name in ring:
                images.append(Polynomial.var(ring, name))
            else:
                images.append(None)
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                if images[i] is None:
                    raise RingMismatch(f"variable {self.ring.names[i]} has no image in {ring!r}")
                powers[key] = images[i] ** k
            return powers[key]

        result = ring.zero()
        for exp, c in self.terms.items():
            term = Polynomial.const(ring, c)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def embed(self, ring: VarRing) -> Polynomial:
        """Move into a ring containing all variables that occur, matching by name."""
        if ring == self.ring:
            return self
        pos = [ring.index(v) if v in ring else None for v in self.ring.names]
        n = len(ring)
        terms = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(exp):
                if k:
                    if pos[i] is None:
                        raise RingMismatch(f"variable {self.ring.names[i]} not in {ring!r}")
                    new[pos[i]] = k
            terms[tuple(new)] = c
        return Polynomial(ring, terms, _clean=True)

    def rename(self, mapping: Mapping[str, str], ring: VarRing) -> Polynomial:
        """Rename variables (a monomial substitution) into ``ring``."""
        pos = [ring.index(mapping.get(v, v)) for v in self.ring.names]
        n = len(ring)
        terms = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(exp):
                new[pos[i]] += k
            new = tuple(new)
            v = terms.get(new, 0) + c
            if v:
                terms[new] = v
            else:
                terms.pop(new, None)
        return Polynomial(ring, terms, _clean=True)

    def diff(self, name: str) -> Polynomial:
        i = self.ring.index(name)
        terms = {}
        for exp, c in self.terms.items():
            k = exp[i]
            if k:
                e = list(exp)
                e[i] -= 1
                terms[tuple(e)] = c * k
        return Polynomial(self.ring, terms, _clean=True)

    def evaluate(self, point: Mapping[str, object] | list):
        """Evaluate at a point given as a name->value mapping or a list in ring order.

        Exact for rational inputs; floats give floats.
        """
        if isinstance(point, Mapping):
            point = [point[v] for v in self.ring.names]
        total = 0
        for exp, c in self.terms.items():
            t = c
            for x, k in zip(point, exp):
                if k:
                    t = t * x**k
            total = total + t
        return total

    # printing
    def to_str(self, order: MonomialOrder = DEGREVLEX) -> str:
        if not self.terms:
            return "0"
        out = []
        for exp, c in self.sorted_terms(order):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.ring.names, exp) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


# ---------------------------------------------------------------------------
# Bezoutian divided differences

def primed(name: str) -> str:
    return name + PRIME_SUFFIX


def exact_divide(p: Polynomial, d: Polynomial, var: str) -> Polynomial:
    """Divide ``p`` by ``d = var - r`` where ``r`` does not involve ``var``.

    Raises ``ArithmeticError`` if the remainder is nonzero.
    """
    if p.ring != d.ring:
        raise RingMismatch("exact_divide: ring mismatch")
    i = p.ring.index(var)
    x = Polynomial.var(p.ring, var)
    if d.degree_in(var) != 1 or any(e[i] == 1 and c != 1 for e, c in d.terms.items()):
        raise ValueError(f"divisor must be monic linear in {var}")
    r = x - d
    if r.degree_in(var) > 0:
        raise ValueError(f"divisor must be monic linear in {var}")
    # coefficients of p as a polynomial in var
    coeffs: dict[int, dict] = {}
    for exp, c in p.terms.items():
        k = exp[i]
        e = list(exp)
        e[i] = 0
        coeffs.setdefault(k, {})[tuple(e)] = c
    if not coeffs:
        return p.ring.zero()
    top = max(coeffs)
    coeff = [Polynomial(p.ring, coeffs.get(k, {}), _clean=True) for k in range(top + 1)]
    # synthetic division by (var - r)
    b = [None] * top
    acc = p.ring.zero()
    for k in range(top, 0, -1):
        acc = coeff[k] + r * acc if k < top else coeff[k]
        b[k - 1] = acc
    remainder = coeff[0] + r * acc if top > 0 else coeff[0]
    if remainder:
        raise ArithmeticError(f"nonzero remainder dividing by {d}: {remainder}")
    q = p.ring.zero()
    xk = p.ring.one()
    for k in range(top):
        q = q + b[k] * xk
        xk = xk * x
    return q


def divided_difference(h: Polynomial, j: int, ring2: VarRing | None = None) -> Polynomial:
    """The Bezoutian entry for component ``h`` and column ``j`` (0-based).

    Returns ``[h(x'_1..x'_{j-1}, x_j..x_n) - h(x'_1..x'_j, x_{j+1}..x_n)] / (x_j - x'_j)``
    in the doubled ring.
    """
    ring = h.ring
    n = len(ring)
    if not 0 <= j < n:
        raise IndexError(f"column {j} out of range for {n} variables")
    ring2 = ring2 or ring.doubled()
    names = ring.names
    before = {v: Polynomial.var(ring2, primed(v)) for v in names[:j]}
    upto = {v: Polynomial.var(ring2, primed(v)) for v in names[: j + 1]}
    hx = h.embed(ring2)
    num = hx.substitute(before, ring2) - hx.substitute(upto, ring2)
    den = Polynomial.var(ring2, names[j]) - Polynomial.var(ring2, primed(names[j]))
    return exact_divide(num, den, names[j])
