"""K-theoretic Soergel bimodules with explicit left bases.

Every object is a free left R-module with a chosen basis; the right action of
e^lambda is a square matrix rho(lambda) over R acting on coordinate columns,
so (basis_j) * e^lambda = sum_i rho(lambda)[i][j] basis_i.  A morphism is a
matrix M over R with M rho_src(lambda) = rho_tgt(lambda) M.

Bott-Samelson basis: for a word (s_1, ..., s_n) the tensors
1 (x) f_1 (x) ... (x) f_n with f_k in {1, e^{varpi_k}}, indexed by bit tuples
in lexicographic order (first slot most significant).
"""
from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from . import rmatrix as rm
from .demazure import demazure_context, ps_split
from .intmat import smith_normal_form
from .laurent import LaurentPoly
from .linsys import MatrixSystem
from .rootdatum import RootDatum, classify
from .weyl import WeylElement, weyl_group


class IncompleteBound(RuntimeError):
    """No solution was found inside the requested support box."""


class NotAMorphism(ValueError):
    pass


# ---------------------------------------------------------------------------
# right actions of Bott-Samelson objects

_RHO_CACHE: dict = {}
_SPLIT_CACHE: dict = {}


def _split_monomial(D, s, exp):
    key = (D, s, exp)
    hit = _SPLIT_CACHE.get(key)
    if hit is None:
        hit = ps_split(demazure_context(D, s), LaurentPoly.monomial(exp))
        _SPLIT_CACHE[key] = hit
    return hit


def _rho_monomial(D: RootDatum, word: tuple, exp: tuple):
    key = (D, word, exp)
    hit = _RHO_CACHE.get(key)
    if hit is not None:
        return hit
    r = D.rank
    if not word:
        M = [[LaurentPoly.monomial(exp)]]
    else:
        prefix, s = word[:-1], word[-1]
        varpi = demazure_context(D, s).require_varpi()
        n = 1 << len(prefix)
        M = rm.zeros(2 * n, 2 * n, r)
        for bit in (0, 1):
            shifted = tuple(a + bit * v for a, v in zip(exp, varpi))
            a, b = _split_monomial(D, s, shifted)
            for comp, part in ((0, a), (1, b)):
                if part.is_zero():
                    continue
                P = _rho_poly(D, prefix, part)
                for i in range(n):
                    for j in range(n):
                        if not P[i][j].is_zero():
                            M[2 * i + comp][2 * j + bit] = P[i][j]
    _RHO_CACHE[key] = M
    return M


def _rho_poly(D, word, p: LaurentPoly):
    n = 1 << len(word)
    acc = rm.zeros(n, n, D.rank)
    for exp, c in p.items():
        acc = rm.add(acc, rm.scale(_rho_monomial(D, word, exp), LaurentPoly.constant(c, D.rank)))
    return acc


# ---------------------------------------------------------------------------
# objects

class BimoduleObject:
    """Interface: datum, rank, right_action(lam), basis_degrees(), key."""

    idempotent = None

    @property
    def underlying(self):
        return self

    def right_action_poly(self, p: LaurentPoly):
        acc = rm.zeros(self.rank, self.rank, self.datum.rank)
        for exp, c in p.items():
            acc = rm.add(acc, rm.scale(self.right_action(exp), LaurentPoly.constant(c, self.datum.rank)))
        return acc

    def identity(self):
        return rm.eye(self.rank, self.datum.rank)

    @property
    def effective_rank(self):
        return self.rank


@dataclass(frozen=True)
class BSObject(BimoduleObject):
    datum: RootDatum
    word: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.datum.index(g) for g in self.word))

    @property
    def rank(self):
        return 1 << len(self.word)

    def right_action(self, lam):
        return _rho_monomial(self.datum, self.word, tuple(lam))

    def basis_labels(self):
        return list(product((0, 1), repeat=len(self.word)))

    def basis_degrees(self):
        D = self.datum
        ws = [demazure_context(D, s).require_varpi() for s in self.word]
        out = []
        for bits in self.basis_labels():
            v = [0] * D.rank
            for b, w in zip(bits, ws):
                if b:
                    v = [x + y for x, y in zip(v, w)]
            out.append(tuple(v))
        return out

    @property
    def key(self):
        return ("BS", self.word)

    def names(self):
        return [self.datum.generators[i] for i in self.word]

    def label(self):
        return "BS(" + ",".join(self.names()) + ")"

    def to_json(self):
        return {"word": self.names()}


@dataclass(frozen=True)
class StdBimodule(BimoduleObject):
    """R_w: left action untwisted, right action of e^lambda is e^{w(lambda)}."""

    datum: RootDatum
    twist: WeylElement = None

    def __post_init__(self):
        if self.twist is None:
            object.__setattr__(self, "twist", weyl_group(self.datum).one)

    rank = 1

    def right_action(self, lam):
        return [[LaurentPoly.monomial(self.twist.act(tuple(lam)))]]

    def basis_degrees(self):
        return [(0,) * self.datum.rank]

    @property
    def key(self):
        return ("Std", self.twist.word)

    def label(self):
        return "R_" + (repr(self.twist))

    def to_json(self):
        return {"twist": self.twist.names()}


@dataclass(frozen=True, eq=False)
class DirectSum(BimoduleObject):
    summands: tuple = ()

    @property
    def datum(self):
        return self.summands[0].datum

    @property
    def rank(self):
        return sum(s.rank for s in self.summands)

    def right_action(self, lam):
        return rm.block_diag([s.right_action(lam) for s in self.summands], self.datum.rank)

    def basis_degrees(self):
        return [d for s in self.summands for d in s.basis_degrees()]

    @property
    def key(self):
        return ("Sum",) + tuple(s.key for s in self.summands)

    def label(self):
        return " + ".join(s.label() for s in self.summands)

    def to_json(self):
        return {"sum": [s.to_json() for s in self.summands]}


class KaroubiObject(BimoduleObject):
    """The image of an idempotent endomorphism of a plain object."""

    def __init__(self, underlying: BimoduleObject, idempotent):
        self._under = underlying
        self.idempotent = idempotent
        self.datum = underlying.datum
        self.rank = underlying.rank
        r = self.datum.rank
        if not rm.equal(rm.mul(idempotent, idempotent, r), idempotent):
            raise NotAMorphism("idempotent does not square to itself")
        check_intertwines(underlying, underlying, idempotent)

    @property
    def underlying(self):
        return self._under

    def right_action(self, lam):
        return self._under.right_action(lam)

    def basis_degrees(self):
        return self._under.basis_degrees()

    def identity(self):
        return [list(r) for r in self.idempotent]

    @property
    def effective_rank(self):
        """Rank of the image (trace of the idempotent specialized at 1)."""
        ev = rm.evaluate_at_one(self.idempotent)
        return sum(ev[i][i] for i in range(len(ev)))

    @property
    def key(self):
        return ("Karoubi", self._under.key, tuple(tuple(a for a in r) for r in self.idempotent))

    def label(self):
        return f"im(e on {self._under.label()}; rank {self.effective_rank})"

    def to_json(self):
        return {"underlying": self._under.to_json(), "idempotent": rm.to_json(self.idempotent)}


def object_from_json(D: RootDatum, obj):
    if "word" in obj:
        return BSObject(D, tuple(obj["word"]))
    if "twist" in obj:
        return StdBimodule(D, weyl_group(D).element(obj["twist"]))
    if "sum" in obj:
        return DirectSum(tuple(object_from_json(D, o) for o in obj["sum"]))
    if "underlying" in obj:
        return KaroubiObject(object_from_json(D, obj["underlying"]), rm.from_json(obj["idempotent"], D.rank))
    raise ValueError(f"unrecognized bimodule object {obj!r}")


# ---------------------------------------------------------------------------
# morphisms

def _generators(D):
    r = D.rank
    return [tuple(int(i == k) for i in range(r)) for k in range(r)]


def intertwines(src, tgt, M, with_negatives=True):
    r = src.datum.rank
    lams = _generators(src.datum)
    if with_negatives:
        lams = lams + [tuple(-a for a in l) for l in lams]
    return all(rm.equal(rm.mul(M, src.right_action(l), r), rm.mul(tgt.right_action(l), M, r)) for l in lams)


def check_intertwines(src, tgt, M):
    if rm.shape(M) != (tgt.rank, src.rank):
        raise NotAMorphism(f"matrix shape {rm.shape(M)} for a map of rank {src.rank} -> {tgt.rank}")
    if not intertwines(src, tgt, M):
        raise NotAMorphism("matrix does not intertwine the right actions")


@dataclass(eq=False)
class BimMorphism:
    source: BimoduleObject
    target: BimoduleObject
    matrix: list
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.check:
            check_intertwines(self.source, self.target, self.matrix)
            r = self.source.datum.rank
            if self.source.idempotent is not None or self.target.idempotent is not None:
                E = rm.mul(rm.mul(self.target.identity(), self.matrix, r), self.source.identity(), r)
                if not rm.equal(E, self.matrix):
                    raise NotAMorphism("matrix does not respect the idempotents")

    def __matmul__(self, other: "BimMorphism"):
        r = self.source.datum.rank
        return BimMorphism(other.source, self.target, rm.mul(self.matrix, other.matrix, r), check=False)

    def __eq__(self, other):
        return isinstance(other, BimMorphism) and rm.equal(self.matrix, other.matrix)

    def is_identity(self):
        return rm.equal(self.matrix, self.source.identity())

    def to_json(self):
        return {"src": self.source.to_json(), "tgt": self.target.to_json(), "matrix": rm.to_json(self.matrix)}


# ---------------------------------------------------------------------------
# operations

def right_action_matrix(B: BimoduleObject, lam):
    return B.right_action(tuple(lam))


def tensor(B1, B2):
    if B1.datum != B2.datum:
        raise ValueError("objects over different root data")
    if isinstance(B1, BSObject) and isinstance(B2, BSObject):
        return BSObject(B1.datum, B1.word + B2.word)
    if isinstance(B1, StdBimodule) and isinstance(B2, StdBimodule):
        return tensor_std(B1.twist, B2.twist)
    raise TypeError("tensor is defined for Bott-Samelson and standard objects")


def tensor_std(w, w2):
    return StdBimodule(w.group.datum, w * w2)


def hom_std(w: WeylElement, w2: WeylElement):
    """Rank of Hom(R_{w2}, R_w) as an R-module."""
    D = w.group.datum
    same_word = w == w2
    same_action = w.same_action(w2)
    out = {"module_rank": int(same_action)}
    if same_action and not same_word:
        msg = f"{w!r} and {w2!r} differ in W but act identically on X (datum is not free)"
        out["warning"] = msg
        warnings.warn(msg, stacklevel=2)
    elif same_action and not classify(D).free:
        out["warning"] = "datum is not free; rank computed from the action on X"
    return out


def gr_map(D: RootDatum, s):
    """B_s -> R_e + R_s, r (x) r' -> (r r', r s(r'))."""
    ctx = demazure_context(D, s)
    W = weyl_group(D)
    Bs = BSObject(D, (ctx.s,))
    tgt = DirectSum((StdBimodule(D, W.one), StdBimodule(D, W.gen(ctx.s))))
    one = LaurentPoly.one(D.rank)
    ev = LaurentPoly.monomial(ctx.require_varpi())
    esv = LaurentPoly.monomial(ctx.s_varpi())
    M = [[one, ev], [one, esv]]
    return BimMorphism(Bs, tgt, M)


def gr_determinant(D, s):
    f = gr_map(D, s)
    return rm.det(f.matrix, D.rank)


def std_multiplicities(D: RootDatum, word):
    W = weyl_group(D)
    idx = W.parse_word(word)
    counts: Counter = Counter()
    for mask in product((0, 1), repeat=len(idx)):
        counts[W.element([i for i, m in zip(idx, mask) if m])] += 1
    return dict(counts)


def decompose_bsbs(D: RootDatum, s):
    """phi: B_s B_s -> B_s + B_s and its inverse psi.

    The middle slot splits as R^s + e^varpi R^s, so the basis tensor
    1 (x) f_1 (x) f_2 goes to 1 (x) f_2 in copy f_1; in the chosen bases both
    maps are the identity matrix.
    """
    i = D.index(s)
    src = BSObject(D, (i, i))
    Bs = BSObject(D, (i,))
    tgt = DirectSum((Bs, Bs))
    I = rm.eye(4, D.rank)
    phi = BimMorphism(src, tgt, I)
    psi = BimMorphism(tgt, src, [list(r) for r in I])
    return phi, psi


def contraction_permutation(word, pos):
    """For word[pos] == word[pos+1], the basis permutation realizing
    BS(x s s y) = BS(x s y) + BS(x s y).  Returns a list mapping each
    source index to its target index in the two-copy ordering."""
    n = len(word)
    if not (0 <= pos < n - 1 and word[pos] == word[pos + 1]):
        raise ValueError("no repeated letter at this position")
    small = n - 1
    out = []
    for bits in product((0, 1), repeat=n):
        copy = bits[pos]
        rest = bits[:pos] + bits[pos + 1:]
        idx = 0
        for b in rest:
            idx = 2 * idx + b
        out.append(copy * (1 << small) + idx)
    return out


# ---------------------------------------------------------------------------
# bounded Hom solver

@dataclass
class HomResult:
    morphisms: list
    bound: int
    complete: bool = False

    def __len__(self):
        return len(self.morphisms)

    def __iter__(self):
        return iter(self.morphisms)

    def to_json(self):
        return {"bound": self.bound, "complete_within_bound_only": True,
                "count": len(self.morphisms), "morphisms": [m.to_json() for m in self.morphisms]}


def intertwining_system(sys: MatrixSystem, h, src, tgt):
    for lam in _generators(src.datum):
        sys.equation([(None, h, src.right_action(lam), 1), (tgt.right_action(lam), h, None, -1)])
    if src.idempotent is not None:
        sys.equation([(None, h, src.idempotent, 1), (None, h, None, -1)])
    if tgt.idempotent is not None:
        sys.equation([(tgt.idempotent, h, None, 1), (None, h, None, -1)])


def hom_bounded(B1, B2, support_bound):
    """Z-independent morphisms B1 -> B2 with entries supported in the box;
    they span (over Q) every bounded morphism."""
    if support_bound <= 0:
        raise ValueError("support bound must be positive")
    D = B1.datum
    sys = MatrixSystem(D.rank, support_bound)
    h = sys.unknown("M", B2.rank, B1.rank)
    intertwining_system(sys, h, B1, B2)
    out = []
    for vec in sys.kernel():
        M = sys.matrices(vec)["M"]
        out.append(BimMorphism(B1, B2, M))
    return HomResult(out, support_bound)


@lru_cache(maxsize=None)
def _central(D: RootDatum, s: int, bound: int):
    Bs = BSObject(D, (s,))
    R = BSObject(D, ())
    res = hom_bounded(R, Bs, bound)
    gen = None
    for f in res:
        c0 = f.matrix[0][0]
        if c0.is_unit():
            gen = rm.scale(f.matrix, c0.inverse_unit())
            break
    if gen is None:
        raise IncompleteBound(f"no generator of Hom(R, B_s) within bound {bound}")
    for f in res:  # every bounded solution is an R-multiple of the generator
        r = f.matrix[0][0]
        if not rm.equal(rm.scale(gen, r), f.matrix):
            raise IncompleteBound("bounded Hom(R, B_s) is not cyclic on the candidate generator")
    return tuple(tuple(r) for r in gen)


def central_element(D: RootDatum, s=None, support_bound=2):
    """c_s in B_s with e^lambda c = c e^lambda, coefficient of 1 (x) 1 equal to 1.

    Returned as the column of coordinates in the left basis.  With s=None the
    empty word is meant and c = 1.
    """
    if s is None:
        return [LaurentPoly.one(D.rank)]
    gen = _central(D, D.index(s), support_bound)
    return [r[0] for r in gen]


def central_morphism(D, s, support_bound=2):
    c = central_element(D, s, support_bound)
    return BimMorphism(BSObject(D, ()), BSObject(D, (D.index(s),)), [[x] for x in c])


def multiplication_morphism(D, s):
    """B_s -> R, r (x) r' -> r r'."""
    ctx = demazure_context(D, s)
    M = [[LaurentPoly.one(D.rank), LaurentPoly.monomial(ctx.require_varpi())]]
    return BimMorphism(BSObject(D, (ctx.s,)), BSObject(D, ()), M)


def tensor_morphisms(f: BimMorphism, g: BimMorphism):
    """f (x)_R g for morphisms between Bott-Samelson objects.

    For a basis tensor b (x) b' with b in B1, b' in B2 we need
    f(b) (x) g(b'), and moving the left coefficients of g(b') across the
    tensor sign uses the right action of B1'.
    """
    A, A2 = f.source, f.target
    B, B2 = g.source, g.target
    D = A.datum
    r = D.rank
    tgt_rank = A2.rank * B2.rank
    src_rank = A.rank * B.rank
    M = rm.zeros(tgt_rank, src_rank, r)
    for a in range(A.rank):
        col_f = [f.matrix[i][a] for i in range(A2.rank)]
        for b in range(B.rank):
            # f(e_a) (x) g(e_b) = sum_i sum_k col_f[i] e_i (x) g[k][b] e_k
            #                   = sum_i sum_k col_f[i] (e_i * g[k][b]) (x) e_k
            for k in range(B2.rank):
                gk = g.matrix[k][b]
                if gk.is_zero():
                    continue
                moved = rm.mul(A2.right_action_poly(gk), [[x] for x in col_f], r)
                for i in range(A2.rank):
                    val = moved[i][0]
                    if not val.is_zero():
                        row = i * B2.rank + k
                        M[row][a * B.rank + b] = M[row][a * B.rank + b] + val
    src = tensor(A, B)
    tgt = tensor(A2, B2)
    return BimMorphism(src, tgt, M, check=False)


def identity_morphism(B):
    return BimMorphism(B, B, B.identity(), check=False)


def coset_class(D: RootDatum):
    """Function sending lambda to its class in X/Q (as an integer tuple)."""
    A = [[D.simple_roots[j][i] for j in range(D.n)] for i in range(D.rank)]
    if not A or not A[0]:
        return lambda lam: tuple(lam)
    U, S, _ = smith_normal_form(A)
    diag = [S[i][i] if i < len(S[0]) else 0 for i in range(D.rank)]

    def cls(lam):
        v = [sum(u * x for u, x in zip(row, lam)) for row in U]
        return tuple((a % d) if d else a for a, d in zip(v, diag))

    return cls
