"""Demazure operators on Z[X] and the splitting R = R^s + e^w R^s."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .laurent import LaurentPoly, LatticeMap, divide_exact, NotDivisible
from .rootdatum import RootDatum, find_fundamental_weight, NotSCTypeAt


@dataclass(frozen=True)
class DemazureContext:
    """Data attached to one simple reflection s of a datum.

    varpi is None when no weight pairs to 1 with the coroot; the operators
    D_s and D_s^- still make sense, the splitting does not.
    """

    datum: RootDatum
    s: int
    alpha: tuple
    coalpha: tuple
    varpi: tuple | None
    refl: LatticeMap

    @property
    def rank(self):
        return self.datum.rank

    @property
    def name(self):
        return self.datum.generators[self.s]

    def e(self, exp):
        return LaurentPoly.monomial(exp)

    def s_act(self, p: LaurentPoly) -> LaurentPoly:
        return p.substitute(self.refl)

    def s_varpi(self):
        return self.refl(self.require_varpi())

    def require_varpi(self):
        if self.varpi is None:
            raise NotSCTypeAt(self.name)
        return self.varpi

    @property
    def one_minus_e_neg_alpha(self):
        return LaurentPoly.one(self.rank) - LaurentPoly.monomial(tuple(-a for a in self.alpha))

    @property
    def one_minus_e_alpha(self):
        return LaurentPoly.one(self.rank) - LaurentPoly.monomial(self.alpha)


@lru_cache(maxsize=None)
def demazure_context(D: RootDatum, s) -> DemazureContext:
    i = D.index(s)
    try:
        varpi = tuple(find_fundamental_weight(D, i))
    except NotSCTypeAt:
        varpi = None
    return DemazureContext(D, i, D.simple_roots[i], D.simple_coroots[i], varpi, D.reflection(i))


def _divide(p, q):
    try:
        return divide_exact(p, q)
    except NotDivisible as exc:  # impossible for a valid datum
        raise AssertionError(f"Demazure numerator not divisible: {exc}") from exc


def demazure(ctx: DemazureContext, p: LaurentPoly) -> LaurentPoly:
    """D_s(p) = (p - e^{-alpha} s(p)) / (1 - e^{-alpha})."""
    neg = LaurentPoly.monomial(tuple(-a for a in ctx.alpha))
    return _divide(p - neg * ctx.s_act(p), ctx.one_minus_e_neg_alpha)


def demazure_minus(ctx: DemazureContext, p: LaurentPoly) -> LaurentPoly:
    """D_s^- = 1 - D_s."""
    return p - demazure(ctx, p)


def demazure_minus_closed(ctx: DemazureContext, p: LaurentPoly) -> LaurentPoly:
    """(p - s(p)) / (1 - e^alpha); agrees with demazure_minus."""
    return _divide(p - ctx.s_act(p), ctx.one_minus_e_alpha)


def is_invariant(ctx: DemazureContext, p: LaurentPoly) -> bool:
    return ctx.s_act(p) == p


def ps_split(ctx: DemazureContext, p: LaurentPoly):
    """(a, b) with a, b s-invariant and p = a + e^varpi b."""
    varpi = ctx.require_varpi()
    b = _divide(p - ctx.s_act(p), ctx.one_minus_e_neg_alpha).shift(tuple(-v for v in varpi))
    a = p - b.shift(varpi)
    if not (is_invariant(ctx, a) and is_invariant(ctx, b)):
        raise AssertionError("splitting components are not invariant")
    return a, b


def demazure_pair(ctx: DemazureContext, p: LaurentPoly):
    """(D_s p, D_s^- p).  The second component lies in e^{s(varpi)} R^s and
    equals -e^{s(varpi)} times the b of ps_split."""
    d = demazure(ctx, p)
    return d, p - d


def comparison_factor(ctx: DemazureContext) -> LaurentPoly:
    """The unit u with b = u * D_s^-(p), namely -e^{-s(varpi)}."""
    return LaurentPoly.monomial(tuple(-v for v in ctx.s_varpi()), -1)


def demazure_word(D: RootDatum, word, p: LaurentPoly) -> LaurentPoly:
    """Apply D_{s_1} ... D_{s_k} (rightmost first)."""
    for s in reversed(list(word)):
        p = demazure(demazure_context(D, s), p)
    return p
