import pytest
from hypothesis import given

from kmsoergel.laurent import LaurentPoly
from kmsoergel.rootdatum import sl2, sl3, pgl2, affine_sl2, NotSCTypeAt
from kmsoergel.demazure import (demazure_context, demazure, demazure_minus, demazure_minus_closed,
                                is_invariant, ps_split, demazure_pair, comparison_factor, demazure_word)
from conftest import laurent_polys


def geometric_oracle(D, s, p):
    """D_s on monomials by the finite geometric series, extended linearly."""
    i = D.index(s)
    a = D.simple_roots[i]
    out = LaurentPoly.zero(D.rank)
    for lam, c in p.items():
        n = D.pairing(lam, D.simple_coroots[i])
        shift = lambda k: tuple(x - k * y for x, y in zip(lam, a))
        if n >= 0:
            terms = [(shift(k), c) for k in range(n + 1)]
        else:
            terms = [(shift(-j), -c) for j in range(1, -n)]
        for e, cc in terms:
            out = out + LaurentPoly.monomial(e, cc)
    return out


CASES = [(sl2(), "s1"), (sl3(), "s1"), (sl3(), "s2"), (affine_sl2(), "s0"), (affine_sl2(), "s1"),
         (pgl2(), "s1")]


@pytest.mark.parametrize("D,s", CASES)
def test_matches_geometric_series(D, s, rng):
    from kmsoergel.laurent import random_laurent
    ctx = demazure_context(D, s)
    for _ in range(40):
        p = random_laurent(rng, D.rank)
        assert demazure(ctx, p) == geometric_oracle(D, s, p)


def test_small_values_sl2():
    ctx = demazure_context(sl2(), "s1")
    e = lambda k: LaurentPoly.monomial((k,))
    assert demazure(ctx, e(0)) == e(0)
    assert demazure(ctx, e(-1)) == LaurentPoly.zero(1)
    assert demazure(ctx, e(1)) == e(1) + e(-1)
    assert demazure(ctx, e(-3)) == -(e(-1) + e(1))


@given(laurent_polys(2), laurent_polys(2))
def test_properties_affine(p, q):
    ctx = demazure_context(affine_sl2(), "s0")
    d = demazure(ctx, p)
    assert is_invariant(ctx, d)
    assert demazure(ctx, d) == d
    assert d + demazure_minus(ctx, p) == p
    inv = q + ctx.s_act(q)
    assert demazure(ctx, inv * p) == inv * d


@given(laurent_polys(1))
def test_minus_closed_form(p):
    ctx = demazure_context(sl2(), "s1")
    assert demazure_minus(ctx, p) == demazure_minus_closed(ctx, p)


@given(laurent_polys(2))
def test_ps_split_and_comparison(p):
    for s in ("s0", "s1"):
        ctx = demazure_context(affine_sl2(), s)
        a, b = ps_split(ctx, p)
        assert is_invariant(ctx, a) and is_invariant(ctx, b)
        assert a + b.shift(ctx.require_varpi()) == p
        _, dm = demazure_pair(ctx, p)
        assert b == comparison_factor(ctx) * dm


def test_split_needs_varpi():
    ctx = demazure_context(pgl2(), "s1")
    with pytest.raises(NotSCTypeAt):
        ps_split(ctx, LaurentPoly.one(1))


@given(laurent_polys(2))
def test_braid_a2(p):
    D = sl3()
    assert demazure_word(D, ["s1", "s2", "s1"], p) == demazure_word(D, ["s2", "s1", "s2"], p)
