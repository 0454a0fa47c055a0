import pytest

from kmsoergel import rmatrix as rm
from kmsoergel.laurent import LaurentPoly
from kmsoergel.rootdatum import sl2, sl3, affine_sl2
from kmsoergel.bimodule import BSObject
from kmsoergel.complexes import (ChainComplex, ComplexError, unit_complex, delta_letter, nabla_letter,
                                 rouquier_delta, rouquier_nabla, tensor_complex, gaussian_eliminate, minimize,
                                 is_unit_complex, dualize, find_isomorphism, is_chain_map, hom_complex, gram)

AFF = affine_sl2()


def test_letter_complexes_shape():
    D = sl2()
    d = delta_letter(D, "s1")
    assert d.labels() == {0: ["BS(s1)"], 1: ["BS()"]}
    n = nabla_letter(D, "s1")
    assert n.labels() == {-1: ["BS()"], 0: ["BS(s1)"]}


def test_d_squared_rejected():
    D = sl2()
    one = LaurentPoly.one(1)
    with pytest.raises(ComplexError):
        ChainComplex(D, {0: [BSObject(D, ())], 1: [BSObject(D, ())], 2: [BSObject(D, ())]},
                     {0: [[one]], 1: [[one]]})


@pytest.mark.parametrize("word", [["s0", "s1"], ["s1", "s0", "s1"]])
def test_rouquier_tensor_sizes(word):
    C = rouquier_delta(AFF, word)
    n = len(word)
    assert C.degrees() == list(range(n + 1))
    # degree k holds binomial(n, k) objects of total rank 2^(n-k) each
    from math import comb
    for k in range(n + 1):
        assert len(C.objects[k]) == comb(n, k)
        assert C.total(k) == comb(n, k) * 2 ** (n - k)


@pytest.mark.parametrize("D,s", [(sl2(), "s1"), (AFF, "s0"), (AFF, "s1")])
def test_inversion_with_certificate(D, s):
    for C in (tensor_complex(delta_letter(D, s), nabla_letter(D, s)),
              tensor_complex(nabla_letter(D, s), delta_letter(D, s))):
        M, cert = gaussian_eliminate(C)
        assert cert.verify()
        assert M.labels() == {0: ["BS()"]}
        assert is_unit_complex(C)


def test_delta_squared_is_not_unit():
    D = sl2()
    C = rouquier_delta(D, ["s1", "s1"])
    M, cert = gaussian_eliminate(C)
    assert cert.verify()
    assert not is_unit_complex(C)
    assert M.signature() == {0: [2], 1: [2], 2: [1]}


def test_json_roundtrip():
    C = tensor_complex(delta_letter(AFF, "s0"), nabla_letter(AFF, "s1"))
    C2 = ChainComplex.from_json(AFF, C.to_json())
    assert C2.to_json() == C.to_json()


def test_gram_is_symmetric_and_invertible():
    for word in ([0], [0, 1], [1, 0, 1]):
        G = gram(AFF, tuple(word))
        assert rm.equal(G, rm.transpose(G))
        assert rm.det(G, AFF.rank).is_unit()


@pytest.mark.parametrize("D,s", [(sl2(), "s1"), (AFF, "s0"), (AFF, "s1")])
def test_dualize(D, s):
    d = delta_letter(D, s)
    assert dualize(dualize(d)).to_json() == d.to_json()
    iso = find_isomorphism(minimize(dualize(d)), minimize(nabla_letter(D, s)), bound=3)
    assert iso is not None
    assert is_chain_map(minimize(dualize(d)), minimize(nabla_letter(D, s)), iso["F"])


def test_dualize_two_letters_involution():
    C = rouquier_delta(AFF, ["s0", "s1"])
    assert dualize(dualize(C)).to_json() == C.to_json()


def test_find_isomorphism_rejects_different_shapes():
    D = sl2()
    assert find_isomorphism(delta_letter(D, "s1"), nabla_letter(D, "s1")) is None


def test_braid_relation_a2():
    D = sl3()
    A = minimize(rouquier_delta(D, ["s1", "s2", "s1"]))
    B = minimize(rouquier_delta(D, ["s2", "s1", "s2"]))
    assert A.signature() == B.signature()
    assert find_isomorphism(A, B, bound=3) is not None


def test_hom_complex_unit():
    res = hom_complex(unit_complex(sl2()), unit_complex(sl2()), support_bound=2)
    # Hom(R, R) = R, truncated to exponents in [-2, 2]
    assert res.homology() == {0: 5}


def test_hom_complex_delta_into_unit_acyclic():
    # maps out of Delta_s into the unit are null-homotopic
    for s in ("s0", "s1"):
        res = hom_complex(delta_letter(AFF, s), unit_complex(AFF), support_bound=2)
        assert res.is_acyclic()


def test_hom_complex_unit_into_delta():
    # H^1 Hom(R, Delta_s) is R/(1 - e^alpha): nonzero torsion-free rank in the box
    res = hom_complex(unit_complex(sl2()), delta_letter(sl2(), "s1"), support_bound=2)
    assert res.homology()[0] == 0
    assert res.homology()[1] > 0
