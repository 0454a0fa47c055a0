"""Exact arithmetic in the group ring Z[X] of a finite-rank lattice.

Elements are stored as a map from exponent tuples to nonzero Python ints, so
coefficients never overflow.  Every value is immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence


class LatticeMismatch(ValueError):
    """Operands live on lattices of different rank."""


class NotDivisible(ArithmeticError):
    """Raised by :func:`divide_exact` when the quotient is not a Laurent polynomial."""


@dataclass(frozen=True)
class Lattice:
    rank: int
    labels: tuple = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"x{i}" for i in range(self.rank)))
        if len(self.labels) != self.rank or len(set(self.labels)) != self.rank:
            raise ValueError("lattice labels must be unique, one per coordinate")

    def zero(self):
        return (0,) * self.rank


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix acting on column vectors: target_rank x source_rank."""

    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(a) for a in row) for row in self.matrix))
        widths = {len(r) for r in self.matrix}
        if len(widths) > 1:
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def source_rank(self):
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def target_rank(self):
        return len(self.matrix)

    def __call__(self, v):
        if len(v) != self.source_rank:
            raise LatticeMismatch(f"vector of length {len(v)} for map with source rank {self.source_rank}")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def __matmul__(self, other):
        if self.source_rank != other.target_rank:
            raise LatticeMismatch("cannot compose lattice maps")
        cols = list(zip(*other.matrix)) if other.matrix else []
        return LatticeMap(tuple(tuple(sum(a * b for a, b in zip(row, c)) for c in cols) for row in self.matrix))


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


class LaurentPoly:
    """An element sum_l a_l e^l of Z[X]."""

    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None, rank: int | None = None):
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = int(c)
                if c:
                    clean[tuple(int(a) for a in exp)] = c
        if rank is None:
            if not clean:
                raise ValueError("rank required for the zero polynomial")
            rank = len(next(iter(clean)))
        for exp in clean:
            if len(exp) != rank:
                raise LatticeMismatch(f"exponent {exp} does not have length {rank}")
        self.rank = rank
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms, rank):
        # terms already canonical: tuple keys, nonzero int values
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, rank):
        return cls._raw({}, rank)

    @classmethod
    def one(cls, rank):
        return cls._raw({(0,) * rank: 1}, rank)

    @classmethod
    def constant(cls, c, rank):
        return cls({(0,) * rank: c}, rank)

    @classmethod
    def monomial(cls, exp, coeff=1):
        exp = tuple(int(a) for a in exp)
        return cls({exp: coeff}, len(exp))

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        return sorted(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_one(self):
        return len(self._terms) == 1 and self._terms.get((0,) * self.rank) == 1

    def is_unit(self):
        """Units of Z[X] are exactly the signed monomials +-e^l."""
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c in (1, -1)

    def inverse_unit(self):
        if not self.is_unit():
            raise NotDivisible(f"{self} is not a unit")
        ((exp, c),) = self._terms.items()
        return LaurentPoly._raw({tuple(-a for a in exp): c}, self.rank)

    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, int):
                return LaurentPoly.constant(other, self.rank)
            return NotImplemented
        if other.rank != self.rank:
            raise LatticeMismatch(f"rank {self.rank} vs rank {other.rank}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for exp, c in other._terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                del out[exp]
        return LaurentPoly._raw(out, self.rank)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self.rank)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if not a or not b:
            return LaurentPoly._raw({}, self.rank)
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(exp, 0) + ca * cb
                if v:
                    out[exp] = v
                else:
                    del out[exp]
        return LaurentPoly._raw(out, self.rank)

    __rmul__ = __mul__

    def scale(self, c: int):
        if not c:
            return LaurentPoly._raw({}, self.rank)
        return LaurentPoly._raw({e: v * c for e, v in self._terms.items()}, self.rank)

    def shift(self, exp):
        """Multiply by the monomial e^exp."""
        return LaurentPoly._raw({_vadd(e, exp): c for e, c in self._terms.items()}, self.rank)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse_unit() ** (-n)
        result = LaurentPoly.one(self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other, self.rank)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self._terms.items())))
        return self._hash

    def support_box(self):
        """Per-coordinate (min, max) of the exponents; None for zero."""
        if not self._terms:
            return None
        exps = list(self._terms)
        return [(min(e[i] for e in exps), max(e[i] for e in exps)) for i in range(self.rank)]

    def max_abs_exponent(self):
        return max((abs(a) for e in self._terms for a in e), default=0)

    def substitute(self, f: LatticeMap):
        return substitute(self, f)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self.sorted_items():
            if not any(exp):
                mono = ""
            else:
                mono = "e^(" + ",".join(map(str, exp)) + ")"
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            elif mono:
                parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {"terms": [{"exp": list(e), "coeff": c} for e, c in self.sorted_items()]}

    @classmethod
    def from_json(cls, obj, rank):
        terms: dict = {}
        for t in obj["terms"]:
            exp = tuple(int(a) for a in t["exp"])
            if len(exp) != rank:
                raise LatticeMismatch(f"exponent {exp} does not have length {rank}")
            terms[exp] = terms.get(exp, 0) + int(t["coeff"])
        return cls(terms, rank)


def lp_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def lp_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def divide_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return r with q*r == p, or raise NotDivisible.

    Long division by the lex-leading term of q.  For Laurent polynomials over
    an integral domain the per-coordinate exponent range of a quotient is the
    difference of the ranges of p and q, so any quotient term outside that box
    proves non-divisibility, and inside the box lex-decreasing steps terminate.
    """
    if p.rank != q.rank:
        raise LatticeMismatch(f"rank {p.rank} vs rank {q.rank}")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    rank = p.rank
    if p.is_zero():
        return LaurentPoly.zero(rank)
    if len(q) == 1:
        ((eq, cq),) = q.items()
        out = {}
        for e, c in p.items():
            if c % cq:
                raise NotDivisible(f"coefficient {c} not divisible by {cq}")
            out[_vsub(e, eq)] = c // cq
        return LaurentPoly._raw(out, rank)
    pbox, qbox = p.support_box(), q.support_box()
    lo = [pb[0] - qb[0] for pb, qb in zip(pbox, qbox)]
    hi = [pb[1] - qb[1] for pb, qb in zip(pbox, qbox)]
    if any(a > b for a, b in zip(lo, hi)):
        raise NotDivisible("exponent ranges are incompatible")
    lead = max(q._terms)
    lead_c = q._terms[lead]
    qterms = list(q.items())
    rem = dict(p._terms)
    quot = {}
    while rem:
        m = max(rem)
        c = rem[m]
        if c % lead_c:
            raise NotDivisible(f"coefficient {c} not divisible by {lead_c}")
        e = _vsub(m, lead)
        if any(x < a or x > b for x, a, b in zip(e, lo, hi)):
            raise NotDivisible("quotient term leaves the admissible exponent box")
        k = c // lead_c
        quot[e] = k
        for eq, cq in qterms:
            exp = _vadd(eq, e)
            v = rem.get(exp, 0) - k * cq
            if v:
                rem[exp] = v
            else:
                rem.pop(exp, None)
    r = LaurentPoly._raw(quot, rank)
    if q * r != p:  # self-certification
        raise AssertionError("exact division failed verification")
    return r


def is_unit(p: LaurentPoly) -> bool:
    return p.is_unit()


def substitute(p: LaurentPoly, f: LatticeMap) -> LaurentPoly:
    """Apply the ring map e^l -> e^{f(l)}."""
    if f.source_rank != p.rank:
        raise LatticeMismatch(f"map source rank {f.source_rank} vs polynomial rank {p.rank}")
    out: dict = {}
    for e, c in p.items():
        img = f(e)
        v = out.get(img, 0) + c
        if v:
            out[img] = v
        else:
            out.pop(img, None)
    return LaurentPoly._raw(out, f.target_rank)


def box_points(rank: int, bound: int) -> list:
    """All exponent vectors with every coordinate in [-bound, bound], lex order."""
    return list(product(range(-bound, bound + 1), repeat=rank))


def random_laurent(rng, rank: int, lo: int = -5, hi: int = 5, max_terms: int = 6, coeff: int = 5):
    n = rng.randint(0, max_terms)
    terms: dict = {}
    for _ in range(n):
        exp = tuple(rng.randint(lo, hi) for _ in range(rank))
        terms[exp] = terms.get(exp, 0) + rng.randint(-coeff, coeff)
    return LaurentPoly(terms, rank)


def quotient_is_reduced(rank: int, lam):
    """Structure of R/(1 - e^lambda) for R = Z[Z^rank].

    Choosing X = Z v + Z^k with lambda = n v (Smith form of the row lambda),
    the quotient is Z[Z/n + Z^k], a group ring of a finitely generated abelian
    group over Z, hence reduced.  For lambda = 0 the quotient is R itself.
    """
    from .intmat import smith_normal_form, matmul

    lam = [int(a) for a in lam]
    if len(lam) != rank:
        raise LatticeMismatch(f"point of length {len(lam)} in a lattice of rank {rank}")
    if not any(lam):
        return {"reduced": True, "structure": (0, rank), "snf": None}
    U, D, V = smith_normal_form([lam])
    if matmul(matmul(U, [lam]), V) != D:
        raise AssertionError("Smith normal form identity failed")
    return {"reduced": True, "structure": (D[0][0], rank - 1), "snf": (U, D, V)}


lp_divide_exact = divide_exact
lp_substitute = substitute
