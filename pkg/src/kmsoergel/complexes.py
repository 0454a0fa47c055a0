"""Bounded complexes of Soergel bimodules.

A complex stores, for each degree k, a list of objects C_k and a matrix d_k
over R from the direct sum of C_k to the direct sum of C_{k+1} (columns
indexed by the concatenated left bases).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import flint

from . import rmatrix as rm
from .bimodule import (BSObject, DirectSum, KaroubiObject, StdBimodule, BimMorphism, IncompleteBound,
                       central_element, check_intertwines, contraction_permutation, intertwining_system,
                       multiplication_morphism, object_from_json, tensor, tensor_morphisms,
                       identity_morphism)
from .demazure import demazure, demazure_context
from .laurent import LaurentPoly
from .linsys import MatrixSystem
from .rootdatum import RootDatum
from .weyl import weyl_group


class ComplexError(ValueError):
    pass


def _offsets(objs):
    out, o = [], 0
    for X in objs:
        out.append(o)
        o += X.rank
    return out, o


class ChainComplex:
    def __init__(self, datum: RootDatum, objects: dict, diffs: dict | None = None, check=True):
        self.datum = datum
        self.objects = {int(k): list(v) for k, v in objects.items() if v}
        self.diffs = {}
        diffs = diffs or {}
        for k in self.degrees():
            if k + 1 in self.objects:
                M = diffs.get(k)
                if M is None:
                    M = rm.zeros(self.total(k + 1), self.total(k), datum.rank)
                self.diffs[k] = [list(r) for r in M]
        if check:
            self.check()

    # ------------------------------------------------------------------
    def degrees(self):
        return sorted(self.objects)

    def total(self, k):
        return sum(X.rank for X in self.objects.get(k, []))

    def offsets(self, k):
        return _offsets(self.objects.get(k, []))[0]

    def d(self, k):
        if k in self.diffs:
            return self.diffs[k]
        return rm.zeros(self.total(k + 1), self.total(k), self.datum.rank)

    def block(self, k, a, b):
        """Component of d_k from object a of C_k to object b of C_{k+1}."""
        oa, ob = self.offsets(k), self.offsets(k + 1)
        Xa, Yb = self.objects[k][a], self.objects[k + 1][b]
        return rm.submatrix(self.diffs[k], range(ob[b], ob[b] + Yb.rank), range(oa[a], oa[a] + Xa.rank))

    def sum_object(self, k):
        objs = self.objects.get(k, [])
        return SumObject(self.datum, tuple(objs))

    def identity(self, k):
        return self.sum_object(k).identity()

    def check(self):
        r = self.datum.rank
        for k, M in self.diffs.items():
            if rm.shape(M) != (self.total(k + 1), self.total(k)):
                raise ComplexError(f"differential d_{k} has shape {rm.shape(M)}")
            if k + 1 in self.diffs and not rm.is_zero(rm.mul(self.diffs[k + 1], M, r)):
                raise ComplexError(f"d_{k + 1} d_{k} != 0")
            check_intertwines(self.sum_object(k), self.sum_object(k + 1), M)

    def signature(self):
        """Degree -> sorted ranks of the objects (isomorphism invariant)."""
        return {k: sorted(X.effective_rank for X in v) for k, v in sorted(self.objects.items())}

    def labels(self):
        return {k: [X.label() for X in v] for k, v in sorted(self.objects.items())}

    def is_zero(self):
        return not self.objects

    def total_rank(self):
        return sum(self.total(k) for k in self.objects)

    def __repr__(self):
        parts = [f"{k}: " + " + ".join(X.label() for X in v) for k, v in sorted(self.objects.items())]
        return "Complex{" + "; ".join(parts) + "}"

    def to_json(self):
        return {
            "degrees": {str(k): [X.to_json() for X in v] for k, v in sorted(self.objects.items())},
            "differentials": {str(k): rm.to_json(M) for k, M in sorted(self.diffs.items())},
        }

    @classmethod
    def from_json(cls, D, obj):
        objs = {int(k): [object_from_json(D, o) for o in v] for k, v in obj["degrees"].items()}
        diffs = {int(k): rm.from_json(M, D.rank) for k, M in obj.get("differentials", {}).items()}
        return cls(D, objs, diffs)


class SumObject(DirectSum):
    """Direct sum that also tolerates the empty sum and Karoubi summands."""

    def __init__(self, datum, summands):
        object.__setattr__(self, "summands", tuple(summands))
        object.__setattr__(self, "_datum", datum)

    @property
    def datum(self):
        return self._datum

    def right_action(self, lam):
        return rm.block_diag([s.right_action(lam) for s in self.summands], self._datum.rank)

    @property
    def idempotent(self):
        if all(s.idempotent is None for s in self.summands):
            return None
        return self.identity()

    def identity(self):
        return rm.block_diag([s.identity() for s in self.summands], self._datum.rank)


# ---------------------------------------------------------------------------
# constructors

def unit_complex(D):
    return ChainComplex(D, {0: [BSObject(D, ())]})


def delta_letter(D, s):
    m = multiplication_morphism(D, s)
    return ChainComplex(D, {0: [m.source], 1: [m.target]}, {0: m.matrix})


def nabla_letter(D, s, bound=2):
    c = central_element(D, s, bound)
    i = D.index(s)
    return ChainComplex(D, {-1: [BSObject(D, ())], 0: [BSObject(D, (i,))]}, {-1: [[x] for x in c]})


def rouquier_delta(D, word):
    C = unit_complex(D)
    for s in weyl_group(D).parse_word(word):
        C = tensor_complex(C, delta_letter(D, s))
    return C


def rouquier_nabla(D, word, bound=2):
    C = unit_complex(D)
    for s in weyl_group(D).parse_word(word):
        C = tensor_complex(C, nabla_letter(D, s, bound))
    return C


def tensor_complex(C: ChainComplex, E: ChainComplex, check=True):
    D = C.datum
    if E.datum != D:
        raise ComplexError("complexes over different root data")
    r = D.rank
    objs, index = {}, {}
    for p in C.degrees():
        for q in E.degrees():
            n = p + q
            for a, X in enumerate(C.objects[p]):
                for b, Y in enumerate(E.objects[q]):
                    lst = objs.setdefault(n, [])
                    index[(p, a, q, b)] = (n, len(lst))
                    lst.append(tensor(X, Y))
    offs = {n: _offsets(v)[0] for n, v in objs.items()}
    diffs = {n: rm.zeros(sum(Z.rank for Z in objs[n + 1]), sum(Z.rank for Z in v), r)
             for n, v in objs.items() if n + 1 in objs}

    def place(n, src_i, tgt_i, M):
        o_s, o_t = offs[n][src_i], offs[n + 1][tgt_i]
        T = diffs[n]
        for i, row in enumerate(M):
            for j, x in enumerate(row):
                if not x.is_zero():
                    T[o_t + i][o_s + j] = T[o_t + i][o_s + j] + x

    for (p, a, q, b), (n, si) in index.items():
        X, Y = C.objects[p][a], E.objects[q][b]
        if p in C.diffs:
            for a2, X2 in enumerate(C.objects[p + 1]):
                blk = C.block(p, a, a2)
                if rm.is_zero(blk):
                    continue
                f = BimMorphism(X, X2, blk, check=False)
                M = tensor_morphisms(f, identity_morphism(Y)).matrix
                place(n, si, index[(p + 1, a2, q, b)][1], M)
        if q in E.diffs:
            sign = -1 if p % 2 else 1
            for b2, Y2 in enumerate(E.objects[q + 1]):
                blk = E.block(q, b, b2)
                if rm.is_zero(blk):
                    continue
                g = BimMorphism(Y, Y2, blk, check=False)
                M = tensor_morphisms(identity_morphism(X), g).matrix
                if sign < 0:
                    M = rm.neg(M)
                place(n, si, index[(p, a, q + 1, b2)][1], M)
    return ChainComplex(D, objs, diffs, check=check)


# ---------------------------------------------------------------------------
# homotopy certificates

@dataclass
class HomotopyCertificate:
    """p: C -> C', i: C' -> C, h_k: C_k -> C_{k-1} with p i = id and
    i p = id + d h + h d."""

    source: ChainComplex
    target: ChainComplex
    p: dict
    i: dict
    h: dict = field(default_factory=dict)

    def verify(self):
        C, E = self.source, self.target
        r = C.datum.rank
        degs = sorted(set(C.degrees()) | set(E.degrees()))

        def get(m, k, rows, cols):
            M = m.get(k)
            return M if M is not None else rm.zeros(rows, cols, r)

        for k in degs:
            pk = get(self.p, k, E.total(k), C.total(k))
            ik = get(self.i, k, C.total(k), E.total(k))
            if not rm.equal(rm.mul(pk, ik, r), E.identity(k)):
                return False
            lhs = rm.sub(rm.mul(ik, pk, r, C.total(k)), C.identity(k))
            hk = get(self.h, k, C.total(k - 1), C.total(k))
            hk1 = get(self.h, k + 1, C.total(k), C.total(k + 1))
            n = C.total(k)
            rhs = rm.add(rm.mul(C.d(k - 1), hk, r, n), rm.mul(hk1, C.d(k), r, n))
            if not rm.equal(lhs, rhs):
                return False
            # chain map conditions
            pk1 = get(self.p, k + 1, E.total(k + 1), C.total(k + 1))
            if not rm.equal(rm.mul(E.d(k), pk, r, C.total(k)), rm.mul(pk1, C.d(k), r, C.total(k))):
                return False
            ik1 = get(self.i, k + 1, C.total(k + 1), E.total(k + 1))
            if not rm.equal(rm.mul(C.d(k), ik, r, E.total(k)), rm.mul(ik1, E.d(k), r, E.total(k))):
                return False
        return True


class _Eliminator:
    def __init__(self, C: ChainComplex, bound):
        self.orig = C
        self.D = C.datum
        self.r = C.datum.rank
        self.bound = bound
        self.objects = {k: list(v) for k, v in C.objects.items()}
        self.diffs = {k: [list(x) for x in M] for k, M in C.diffs.items()}
        self.P = {k: C.identity(k) for k in C.degrees()}
        self.I = {k: C.identity(k) for k in C.degrees()}
        self.H = {}

    # bookkeeping -------------------------------------------------------
    def total(self, k):
        return sum(X.rank for X in self.objects.get(k, []))

    def offsets(self, k):
        return _offsets(self.objects.get(k, []))[0]

    def d(self, k):
        if k in self.diffs:
            return self.diffs[k]
        return rm.zeros(self.total(k + 1), self.total(k), self.r)

    def ident(self, objs):
        return rm.block_diag([X.identity() for X in objs], self.r) if objs else []

    def _orig_total(self, k):
        return self.orig.total(k)

    def _rebase(self, k, new_objs, Pk, Qk):
        """Replace C_k by an isomorphic sum: Pk: C_k -> new, Qk: new -> C_k."""
        r = self.r
        if k in self.diffs:
            self.diffs[k] = rm.mul(self.diffs[k], Qk, r)
        if k - 1 in self.diffs:
            self.diffs[k - 1] = rm.mul(Pk, self.diffs[k - 1], r)
        self.objects[k] = new_objs
        self.P[k] = rm.mul(Pk, self.P[k], r)
        self.I[k] = rm.mul(self.I[k], Qk, r)

    # steps ---------------------------------------------------------------
    def contract(self):
        """Split every BS(x s s y) as BS(x s y) + BS(x s y)."""
        changed = False
        for k in sorted(self.objects):
            while True:
                objs = self.objects[k]
                hit = None
                for a, X in enumerate(objs):
                    if isinstance(X, BSObject):
                        w = X.word
                        pos = next((t for t in range(len(w) - 1) if w[t] == w[t + 1]), None)
                        if pos is not None:
                            hit = (a, pos)
                            break
                if hit is None:
                    break
                a, pos = hit
                X = objs[a]
                perm = contraction_permutation(X.word, pos)
                small = BSObject(self.D, X.word[:pos] + X.word[pos + 1:])
                new_objs = objs[:a] + [small, small] + objs[a + 1:]
                n = self.total(k)
                o = self.offsets(k)[a]
                one = LaurentPoly.one(self.r)
                Pk = rm.zeros(n, n, self.r)
                for i in range(n):
                    if not (o <= i < o + X.rank):
                        Pk[i][i] = one
                for j, t in enumerate(perm):
                    Pk[o + t][o + j] = one
                Qk = rm.transpose(Pk)
                self._rebase(k, new_objs, Pk, Qk)
                changed = True
        return changed

    def eliminate(self, k, a, b, phi_inv):
        """Cancel object a of C_k against object b of C_{k+1}; phi_inv is the
        inverse of their block of d_k."""
        r = self.r
        X_objs, Y_objs = self.objects[k], self.objects[k + 1]
        ox, oy = self.offsets(k), self.offsets(k + 1)
        Xi = list(range(ox[a], ox[a] + X_objs[a].rank))
        Ai = [i for i in range(self.total(k)) if i not in set(Xi)]
        Yi = list(range(oy[b], oy[b] + Y_objs[b].rank))
        Bi = [i for i in range(self.total(k + 1)) if i not in set(Yi)]
        dk = self.diffs[k]
        beta = rm.submatrix(dk, Yi, Ai)
        gamma = rm.submatrix(dk, Bi, Xi)
        delta = rm.submatrix(dk, Bi, Ai)
        new_A = X_objs[:a] + X_objs[a + 1:]
        new_B = Y_objs[:b] + Y_objs[b + 1:]
        eA, eB = self.ident(new_A), self.ident(new_B)
        ginv = rm.mul(gamma, phi_inv, r)
        new_dk = rm.sub(delta, rm.mul(ginv, beta, r))

        # chain maps of the step
        nk, nk1 = self.total(k), self.total(k + 1)
        p_k = rm.zeros(len(Ai), nk, r)
        for t, i in enumerate(Ai):
            for u, j in enumerate(Ai):
                p_k[t][j] = eA[t][u]
        p_k1 = rm.zeros(len(Bi), nk1, r)
        for t in range(len(Bi)):
            for u, j in enumerate(Bi):
                p_k1[t][j] = eB[t][u]
            for u, j in enumerate(Yi):
                p_k1[t][j] = -ginv[t][u]
        i_k = rm.zeros(nk, len(Ai), r)
        pib = rm.mul(phi_inv, beta, r)
        for t, i in enumerate(Xi):
            for u in range(len(Ai)):
                i_k[i][u] = -pib[t][u]
        for t, i in enumerate(Ai):
            for u in range(len(Ai)):
                i_k[i][u] = eA[t][u]
        i_k1 = rm.zeros(nk1, len(Bi), r)
        for t, i in enumerate(Bi):
            for u in range(len(Bi)):
                i_k1[i][u] = eB[t][u]
        h_k1 = rm.zeros(nk, nk1, r)
        for t, i in enumerate(Xi):
            for u, j in enumerate(Yi):
                h_k1[i][j] = -phi_inv[t][u]

        # accumulate: H += I_old h P_old, then P = p P, I = I i
        hk1_total = rm.mul(rm.mul(self.I[k], h_k1, r), self.P[k + 1], r)
        self.H[k + 1] = rm.add(self.H[k + 1], hk1_total) if k + 1 in self.H else hk1_total
        self.P[k] = rm.mul(p_k, self.P[k], r)
        self.P[k + 1] = rm.mul(p_k1, self.P[k + 1], r)
        self.I[k] = rm.mul(self.I[k], i_k, r)
        self.I[k + 1] = rm.mul(self.I[k + 1], i_k1, r)

        # new differentials
        if k - 1 in self.diffs:
            self.diffs[k - 1] = rm.submatrix(self.diffs[k - 1], Ai, range(self.total(k - 1)))
        if k + 1 in self.diffs:
            self.diffs[k + 1] = rm.submatrix(self.diffs[k + 1], range(self.total(k + 2)), Bi)
        self.diffs[k] = new_dk
        self.objects[k], self.objects[k + 1] = new_A, new_B
        for deg in (k, k + 1):
            if not self.objects[deg]:
                self._drop(deg)

    def _drop(self, k):
        del self.objects[k]
        self.diffs.pop(k, None)
        self.diffs.pop(k - 1, None)
        self.P[k] = []
        self.I[k] = rm.zeros(self._orig_total(k), 0, self.r) if self._orig_total(k) else []

    def find_iso(self):
        for k in sorted(self.diffs):
            for a, X in enumerate(self.objects[k]):
                for b, Y in enumerate(self.objects[k + 1]):
                    if X.idempotent is not None or Y.idempotent is not None or X.rank != Y.rank:
                        continue
                    blk = self._block(k, a, b)
                    if rm.is_zero(blk):
                        continue
                    if X.rank == 1 and not blk[0][0].is_unit():
                        continue
                    inv = rm.inverse(blk, self.r)
                    if inv is not None:
                        return k, a, b, inv
        return None

    def _block(self, k, a, b):
        ox, oy = self.offsets(k), self.offsets(k + 1)
        X, Y = self.objects[k][a], self.objects[k + 1][b]
        return rm.submatrix(self.diffs[k], range(oy[b], oy[b] + Y.rank), range(ox[a], ox[a] + X.rank))

    def find_split(self):
        """A block that is a split epimorphism or split monomorphism onto or
        from a smaller object, with the splitting found by a bounded search."""
        cands = []
        for k in sorted(self.diffs):
            for a, X in enumerate(self.objects[k]):
                for b, Y in enumerate(self.objects[k + 1]):
                    if X.effective_rank == Y.effective_rank:
                        continue
                    blk = self._block(k, a, b)
                    if rm.is_zero(blk):
                        continue
                    cands.append((min(X.rank, Y.rank) * max(X.rank, Y.rank), k, a, b))
        cands.sort()
        for _, k, a, b in cands:
            X, Y = self.objects[k][a], self.objects[k + 1][b]
            blk = self._block(k, a, b)
            for bound in range(1, self.bound + 1):
                if X.effective_rank > Y.effective_rank:
                    sec = _solve_one_sided(Y, X, blk, bound, side="section")
                    if sec is not None:
                        return ("epi", k, a, b, sec)
                else:
                    ret = _solve_one_sided(Y, X, blk, bound, side="retraction")
                    if ret is not None:
                        return ("mono", k, a, b, ret)
        return None

    def split_and_eliminate(self, kind, k, a, b, s):
        r = self.r
        phi = self._block(k, a, b)
        if kind == "epi":
            X = self.objects[k][a]
            e = X.identity()
            f1 = rm.mul(s, phi, r)  # sigma phi
            f2 = rm.sub(e, f1)
            base = X.underlying
            X1, X2 = KaroubiObject(base, f1), KaroubiObject(base, f2)
            objs = self.objects[k]
            self._rebase_split(k, a, [X1, X2], [f1, f2])
            # X1 now sits at index a, with block phi and inverse sigma
            self.eliminate(k, a, b, s)
        else:
            Y = self.objects[k + 1][b]
            f = Y.identity()
            g1 = rm.mul(phi, s, r)  # phi tau
            g2 = rm.sub(f, g1)
            base = Y.underlying
            Y1, Y2 = KaroubiObject(base, g1), KaroubiObject(base, g2)
            self._rebase_split(k + 1, b, [Y1, Y2], [g1, g2])
            self.eliminate(k, a, b, s)

    def _rebase_split(self, k, a, pieces, idems):
        r = self.r
        objs = self.objects[k]
        n = self.total(k)
        o = self.offsets(k)[a]
        m = objs[a].rank
        new_objs = objs[:a] + pieces + objs[a + 1:]
        n2 = n + m
        Pk = rm.zeros(n2, n, r)
        Qk = rm.zeros(n, n2, r)
        one = LaurentPoly.one(r)
        for i in range(o):
            Pk[i][i] = one
            Qk[i][i] = one
        for i in range(o + m, n):
            Pk[i + m][i] = one
            Qk[i][i + m] = one
        for t, E in enumerate(idems):
            for i in range(m):
                for j in range(m):
                    Pk[o + t * m + i][o + j] = E[i][j]
                    Qk[o + i][o + t * m + j] = E[i][j]
        self._rebase(k, new_objs, Pk, Qk)

    def run(self):
        while True:
            self.contract()
            hit = self.find_iso()
            if hit is not None:
                self.eliminate(*hit)
                continue
            split = self.find_split() if self.bound else None
            if split is not None:
                self.split_and_eliminate(*split)
                continue
            break
        C2 = ChainComplex(self.D, self.objects, self.diffs)
        degs = set(self.orig.degrees())
        cert = HomotopyCertificate(self.orig, C2,
                                   {k: v for k, v in self.P.items() if k in degs and v},
                                   {k: v for k, v in self.I.items() if k in degs and v and v[0]},
                                   dict(self.H))
        return C2, cert


def _solve_one_sided(Y, X, phi, bound, side):
    """side='section': sigma: Y -> X with phi sigma = id_Y.
    side='retraction': tau: Y -> X with tau phi = id_X  (phi: X -> Y)."""
    D = X.datum
    sys = MatrixSystem(D.rank, bound)
    h = sys.unknown("S", X.rank, Y.rank)
    intertwining_system(sys, h, Y, X)
    if side == "section":
        sys.equation([(phi, h, None, 1)], Y.identity())
    else:
        sys.equation([(None, h, phi, 1)], X.identity())
    sol = sys.particular()
    if sol is None:
        return None
    S = sys.matrices(sol)["S"]
    r = D.rank
    if X.idempotent is not None:
        S = rm.mul(X.identity(), S, r)
    if Y.idempotent is not None:
        S = rm.mul(S, Y.identity(), r)
    ok = rm.equal(rm.mul(phi, S, r), Y.identity()) if side == "section" else rm.equal(rm.mul(S, phi, r), X.identity())
    return S if ok else None


def gaussian_eliminate(C: ChainComplex, split_bound=3):
    """Minimize C by cancelling invertible blocks; returns (C', certificate).

    Adjacent repeated letters are contracted first (BS(x s s y) splits as two
    copies of BS(x s y)).  When no block is invertible, a block that is a
    split epi/mono with a splitting inside the support box of size
    split_bound is cancelled after passing to Karoubi summands.
    """
    return _Eliminator(C, split_bound).run()


def minimize(C, split_bound=3):
    return gaussian_eliminate(C, split_bound)[0]


def is_unit_complex(C: ChainComplex, split_bound=3) -> bool:
    M = minimize(C, split_bound)
    if M.degrees() != [0] or len(M.objects[0]) != 1:
        return False
    X = M.objects[0][0]
    if X.idempotent is not None:
        return False
    if isinstance(X, BSObject):
        return X.word == ()
    if isinstance(X, StdBimodule):
        return X.twist.is_identity()
    return False


# ---------------------------------------------------------------------------
# duality

def gram(D: RootDatum, word):
    """Pairing matrix <e_J, e_I> = D_{s_1}(f_1 g_1 D_{s_2}(... D_{s_n}(f_n g_n))).

    It identifies BS(word) with its left dual Hom_{R-}(BS(word), R)."""
    return [list(r) for r in _gram(D, tuple(word))]


@lru_cache(maxsize=None)
def _gram(D, word):
    labs = list(product((0, 1), repeat=len(word)))
    ctxs = [demazure_context(D, s) for s in word]

    def pair(J, I):
        acc = LaurentPoly.one(D.rank)
        for c, j, i in reversed(list(zip(ctxs, J, I))):
            acc = demazure(c, acc.shift(tuple((j + i) * x for x in c.require_varpi())))
        return acc

    return tuple(tuple(pair(J, I) for I in labs) for J in labs)


@lru_cache(maxsize=None)
def _gram_inverse(D, word):
    inv = rm.inverse(gram(D, word), D.rank)
    if inv is None:
        raise ComplexError("Gram matrix is not invertible")
    return tuple(tuple(r) for r in inv)


def _pure_tensor_coords(D, word, xs):
    """Left coordinates of x_0 (x) x_1 (x) ... (x) x_n in BS(word)."""
    coords = [xs[0]]
    for t in range(1, len(word) + 1):
        B = BSObject(D, word[:t])
        zero = LaurentPoly.zero(D.rank)
        ext = []
        for c in coords:
            ext.extend([c, zero])
        coords = [row[0] for row in rm.mul(B.right_action_poly(xs[t]), [[c] for c in ext], D.rank)]
    return coords


@lru_cache(maxsize=None)
def _right_basis(D, word):
    """Columns: left coordinates of the right basis f_J (x) 1 in BS(word)."""
    n = len(word)
    cols = []
    for J in product((0, 1), repeat=n):
        xs = [LaurentPoly.monomial(tuple(j * v for v in demazure_context(D, s).require_varpi()))
              for s, j in zip(word, J)] + [LaurentPoly.one(D.rank)]
        cols.append(_pure_tensor_coords(D, word, xs))
    return tuple(cols)


def _rev_index(J_index, n):
    bits = [(J_index >> (n - 1 - t)) & 1 for t in range(n)]
    out = 0
    for b in reversed(bits):
        out = 2 * out + b
    return out


def _to_mirror_coords(D, word, coords):
    """Left coordinates of an element of BS(word) -> left coordinates of its
    mirror image in BS(reversed word)."""
    rev = tuple(reversed(word))
    n = len(word)
    Brev = BSObject(D, rev)
    basis = _right_basis(D, rev)
    acc = [LaurentPoly.zero(D.rank)] * (1 << n)
    for K, c in enumerate(coords):
        if c.is_zero():
            continue
        col = basis[_rev_index(K, n)]
        img = rm.mul(Brev.right_action_poly(c), [[x] for x in col], D.rank)
        acc = [a + b[0] for a, b in zip(acc, img)]
    return acc


def op_object(X):
    if isinstance(X, BSObject):
        return BSObject(X.datum, tuple(reversed(X.word)))
    if isinstance(X, StdBimodule):
        return StdBimodule(X.datum, X.twist.inverse())
    raise ComplexError(f"op is not implemented for {type(X).__name__}")


def op_matrix(X, Y, M):
    """Matrix of the side-swapped morphism op(X) -> op(Y)."""
    D = X.datum
    if isinstance(X, StdBimodule) and isinstance(Y, StdBimodule):
        return [[M[0][0].substitute(X.twist.inverse().lattice_map())]]
    if not (isinstance(X, BSObject) and isinstance(Y, BSObject)):
        raise ComplexError("op is implemented for Bott-Samelson and standard objects")
    n, m = len(X.word), len(Y.word)
    rX = _right_basis(D, X.word)
    out = rm.zeros(Y.rank, X.rank, D.rank)
    for J in range(X.rank):
        img = rm.mul(M, [[x] for x in rX[J]], D.rank)
        col = _to_mirror_coords(D, Y.word, [row[0] for row in img])
        jj = _rev_index(J, n)
        for i in range(Y.rank):
            out[i][jj] = col[i]
    return out


def dual_matrix(X, Y, M):
    """Left dual of f: X -> Y, as a map Y -> X through the Gram identifications."""
    D = X.datum
    r = D.rank

    def G(Z):
        if isinstance(Z, BSObject):
            return gram(D, Z.word)
        return rm.eye(1, r)

    def Ginv(Z):
        if isinstance(Z, BSObject):
            return [list(x) for x in _gram_inverse(D, Z.word)]
        return rm.eye(1, r)

    return rm.mul(rm.mul(Ginv(X), rm.transpose(M), r), G(Y), r)


def dualize(C: ChainComplex) -> ChainComplex:
    """Negate degrees, reverse words, invert twists; each differential block
    becomes the (Gram-identified) transpose of its side-swapped version."""
    D = C.datum
    r = D.rank
    objs = {-k: [op_object(X) for X in v] for k, v in C.objects.items()}
    diffs = {}
    for k in C.diffs:
        # d_k: C_k -> C_{k+1} becomes a map from degree -k-1 to -k
        src = objs[-k - 1]
        tgt = objs[-k]
        M = rm.zeros(sum(X.rank for X in tgt), sum(X.rank for X in src), r)
        ot, os_ = _offsets(tgt)[0], _offsets(src)[0]
        for a, X in enumerate(C.objects[k]):
            for b, Y in enumerate(C.objects[k + 1]):
                blk = C.block(k, a, b)
                if rm.is_zero(blk):
                    continue
                opb = op_matrix(X, Y, blk)
                dual = dual_matrix(op_object(X), op_object(Y), opb)
                for i, row in enumerate(dual):
                    for j, x in enumerate(row):
                        M[ot[a] + i][os_[b] + j] = x
        diffs[-k - 1] = M
    return ChainComplex(D, objs, diffs)


# ---------------------------------------------------------------------------
# isomorphisms of complexes

def _plain_sum(C, k):
    return SumObject(C.datum, tuple(X.underlying for X in C.objects.get(k, [])))


def _chain_map(C, E, bound, normalize_degree):
    """Chain map F: C -> E with F at the normalization degree the identity.

    On Karoubi summands F_k = e_E Phi_k e_C with Phi_k an arbitrary bounded
    map between the underlying objects, so the support box constrains Phi."""
    D = C.datum
    r = D.rank
    sys = MatrixSystem(D.rank, bound)
    degs = [k for k in C.degrees() if k in E.objects]
    hs, eC, eE = {}, {}, {}
    for k in degs:
        hs[k] = sys.unknown(k, E.total(k), C.total(k))
        intertwining_system(sys, hs[k], _plain_sum(C, k), _plain_sum(E, k))
        eC[k] = None if C.sum_object(k).idempotent is None else C.identity(k)
        eE[k] = None if E.sum_object(k).idempotent is None else E.identity(k)
    for k in sorted(set(C.degrees()) | set(E.degrees())):
        # d_E F_k - F_{k+1} d_C = 0
        terms = []
        if k in hs and k in E.diffs:
            terms.append((E.diffs[k], hs[k], eC[k], 1))
        if k + 1 in hs and k in C.diffs:
            terms.append((eE[k + 1], hs[k + 1], C.diffs[k], -1))
        if terms:
            sys.equation(terms)
    k0 = normalize_degree
    sys.equation([(eE[k0], hs[k0], eC[k0], 1)], E.identity(k0))
    sol = sys.particular()
    if sol is None:
        return None
    Phi = sys.matrices(sol)
    F = {}
    for k in degs:
        M = Phi[k]
        if eE[k] is not None:
            M = rm.mul(eE[k], M, r)
        if eC[k] is not None:
            M = rm.mul(M, eC[k], r)
        F[k] = M
    return F


def _invertible_on_image(M, E):
    """M = e M e is invertible on the image of the idempotent e."""
    r = len(M)
    if r == 0:
        return True
    rank = M[0][0].rank
    comp = rm.sub(rm.eye(r, rank), E)
    d = rm.det(rm.add(M, comp), rank)
    return d.is_unit()


def is_chain_map(C, E, F):
    r = C.datum.rank
    for k in sorted(set(C.degrees()) | set(E.degrees())):
        Fk = F.get(k, rm.zeros(E.total(k), C.total(k), r))
        Fk1 = F.get(k + 1, rm.zeros(E.total(k + 1), C.total(k + 1), r))
        if not rm.equal(rm.mul(E.d(k), Fk, r, C.total(k)), rm.mul(Fk1, C.d(k), r, C.total(k))):
            return False
    return True


def find_isomorphism(C: ChainComplex, E: ChainComplex, bound=3):
    """Chain maps F: C -> E and G: E -> C with F_k G_k and G_k F_k invertible,
    searched with entries in the support box, normalized to the identity on
    a degree where both complexes are a single copy of R.  Returns
    {"F": ..., "G": ..., "bound": b} or None."""
    if C.signature() != E.signature():
        return None
    norm = None
    for k in sorted(C.degrees(), key=abs):
        if (len(C.objects[k]) == 1 and len(E.objects.get(k, [])) == 1
                and C.objects[k][0].rank == 1 and E.objects[k][0].rank == 1):
            norm = k
            break
    if norm is None:
        return None
    r = C.datum.rank
    for b in range(1, bound + 1):
        F = _chain_map(C, E, b, norm)
        if F is None:
            continue
        G = _chain_map(E, C, b, norm)
        if G is None:
            continue
        ok = True
        for k in C.degrees():
            if not (_invertible_on_image(rm.mul(G[k], F[k], r), C.identity(k))
                    and _invertible_on_image(rm.mul(F[k], G[k], r), E.identity(k))):
                ok = False
                break
        if ok and is_chain_map(C, E, F) and is_chain_map(E, C, G):
            return {"F": F, "G": G, "bound": b}
    return None


# ---------------------------------------------------------------------------
# hom complexes

@dataclass
class HomComplexResult:
    bound: int
    boundary_bound: int
    degrees: dict  # n -> {"hom": rank, "cycles": rank, "homology": rank}

    def homology(self):
        return {n: v["homology"] for n, v in self.degrees.items()}

    def is_acyclic(self):
        return all(v == 0 for v in self.homology().values())

    def to_json(self):
        return {"bound": self.bound, "boundary_bound": self.boundary_bound, "truncated": True,
                "degrees": {str(n): v for n, v in sorted(self.degrees.items())}}


def _hom_system(C, E, n, bound, cycles):
    D = C.datum
    sys = MatrixSystem(D.rank, bound)
    hs = {}
    for k in C.degrees():
        if k + n in E.objects:
            hs[k] = sys.unknown(k, E.total(k + n), C.total(k))
            intertwining_system(sys, hs[k], C.sum_object(k), E.sum_object(k + n))
    if cycles:
        for k in sorted(set(C.degrees()) | {j - n for j in E.degrees()}):
            # (Df)_k = d_E f_k - (-1)^n f_{k+1} d_C : C_k -> E_{k+n+1}
            terms = []
            if k in hs and (k + n) in E.diffs:
                terms.append((E.diffs[k + n], hs[k], None, 1))
            if k + 1 in hs and k in C.diffs:
                terms.append((None, hs[k + 1], C.diffs[k], -1 if n % 2 == 0 else 1))
            if terms:
                sys.equation(terms)
    return sys, hs


def _flatten(mats):
    """Sparse integer vector of a family {k: matrix over R}."""
    v = {}
    for k, M in mats.items():
        for i, row in enumerate(M):
            for j, p in enumerate(row):
                for e, c in p.items():
                    v[(k, i, j, e)] = c
    return v


def _apply_D(C, E, n, f):
    r = C.datum.rank
    out = {}
    for k in set(f) | {k - 1 for k in f}:
        acc = None
        if k in f and (k + n) in E.diffs:
            acc = rm.mul(E.diffs[k + n], f[k], r)
        if k + 1 in f and k in C.diffs:
            t = rm.mul(f[k + 1], C.diffs[k], r)
            if n % 2 == 0:
                t = rm.neg(t)
            acc = t if acc is None else rm.add(acc, t)
        if acc is not None:
            out[k] = acc
    return out


def _rank(vectors):
    if not vectors:
        return 0
    keys = sorted({key for v in vectors for key in v})
    idx = {key: t for t, key in enumerate(keys)}
    M = flint.fmpz_mat(len(vectors), len(keys))
    for i, v in enumerate(vectors):
        for key, c in v.items():
            M[i, idx[key]] = c
    return M.rank()


def hom_complex(C: ChainComplex, E: ChainComplex, support_bound=3):
    """Degreewise bounded Hom(C, E) with its differential
    Df = d_E f - (-1)^n f d_C.  Cycles are taken among maps with entries in
    the support box; boundaries are images of maps with support enlarged by
    the largest exponent occurring in the differentials."""
    if support_bound <= 0:
        raise ValueError("support bound must be positive")
    margin = max([rm.support_bound(M) for M in list(C.diffs.values()) + list(E.diffs.values())] + [0])
    outer = support_bound + margin
    lo = min(E.degrees()) - max(C.degrees()) if C.objects and E.objects else 0
    hi = max(E.degrees()) - min(C.degrees()) if C.objects and E.objects else -1
    result = {}
    for n in range(lo, hi + 1):
        sys, hs = _hom_system(C, E, n, support_bound, cycles=False)
        hom_rank = len(sys.kernel()) if hs else 0
        sysZ, hsZ = _hom_system(C, E, n, support_bound, cycles=True)
        Z = [_flatten(sysZ.matrices(v)) for v in sysZ.kernel()] if hsZ else []
        sysB, hsB = _hom_system(C, E, n - 1, outer, cycles=False)
        Bvec = []
        if hsB:
            for v in sysB.kernel():
                img = _flatten(_apply_D(C, E, n - 1, sysB.matrices(v)))
                if img:
                    Bvec.append(img)
        z = _rank(Z)
        inter = z + _rank(Bvec) - _rank(Z + Bvec)
        result[n] = {"hom": hom_rank, "cycles": z, "homology": z - inter}
    return HomComplexResult(support_bound, outer, result)
