"""Kac-Moody root data: validation, classification, Langlands duality,
affinization, and fundamental-weight witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from functools import reduce

from .intmat import canonical_solution, integer_rank
from .laurent import LatticeMap

DEFAULT_ROOT_CAP = 10_000

MODES = ("loop", "loop_rotation", "central_extension")


class RootDatumError(ValueError):
    pass


class RootEnumerationError(RootDatumError):
    """Root closure did not terminate within the cap (datum not of finite type)."""


class NotSCTypeAt(RootDatumError):
    """No weight pairs to 1 with the coroot at this index."""

    def __init__(self, index):
        super().__init__(f"datum is not of simply-connected type at index {index}")
        self.index = index


def _pair(u, v):
    return sum(a * b for a, b in zip(u, v))


def _vgcd(v):
    return reduce(gcd, (abs(a) for a in v), 0)


@dataclass(frozen=True)
class RootDatum:
    """(X, {alpha_i}, {alpha_i^vee}) with X = Z^rank and X^vee its dual.

    ``special`` holds named lattice points produced by affinization, as
    (name, space, vector) triples with space "X" or "Xv".
    """

    rank: int
    generators: tuple
    simple_roots: tuple
    simple_coroots: tuple
    special: tuple = field(default=(), compare=False)

    def __post_init__(self):
        norm = lambda vs: tuple(tuple(int(a) for a in v) for v in vs)
        object.__setattr__(self, "generators", tuple(str(g) for g in self.generators))
        object.__setattr__(self, "simple_roots", norm(self.simple_roots))
        object.__setattr__(self, "simple_coroots", norm(self.simple_coroots))
        object.__setattr__(self, "special", tuple((n, s, tuple(v)) for n, s, v in self.special))
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise RootDatumError("generator names must be unique")
        if len(self.simple_roots) != n or len(self.simple_coroots) != n:
            raise RootDatumError("need one simple root and one simple coroot per generator")
        for v in self.simple_roots + self.simple_coroots:
            if len(v) != self.rank:
                raise RootDatumError(f"vector {v} does not have length {self.rank}")

    @property
    def n(self):
        return len(self.generators)

    def index(self, gen):
        if isinstance(gen, int):
            if not 0 <= gen < self.n:
                raise RootDatumError(f"no generator with index {gen}")
            return gen
        try:
            return self.generators.index(str(gen))
        except ValueError:
            raise RootDatumError(f"unknown generator {gen!r}") from None

    def pairing(self, weight, coweight):
        return _pair(weight, coweight)

    @property
    def cartan_matrix(self):
        """a_ij = <alpha_j, alpha_i^vee>."""
        return tuple(tuple(_pair(aj, ci) for aj in self.simple_roots) for ci in self.simple_coroots)

    def reflection(self, i) -> LatticeMap:
        """s_i on X: lambda -> lambda - <lambda, alpha_i^vee> alpha_i."""
        a, c = self.simple_roots[i], self.simple_coroots[i]
        r = self.rank
        return LatticeMap(tuple(tuple(int(p == q) - a[p] * c[q] for q in range(r)) for p in range(r)))

    def coreflection(self, i) -> LatticeMap:
        a, c = self.simple_roots[i], self.simple_coroots[i]
        r = self.rank
        return LatticeMap(tuple(tuple(int(p == q) - c[p] * a[q] for q in range(r)) for p in range(r)))

    def special_point(self, name):
        for n, space, v in self.special:
            if n == name:
                return v
        raise KeyError(name)

    def to_json(self):
        out = {
            "rank": self.rank,
            "generators": list(self.generators),
            "simple_roots": [list(v) for v in self.simple_roots],
            "simple_coroots": [list(v) for v in self.simple_coroots],
        }
        if self.special:
            out["special"] = {n: {"space": s, "vector": list(v)} for n, s, v in self.special}
        return out

    @classmethod
    def from_json(cls, obj):
        try:
            special = tuple((n, d["space"], tuple(d["vector"])) for n, d in obj.get("special", {}).items())
            return cls(int(obj["rank"]), tuple(obj["generators"]), tuple(map(tuple, obj["simple_roots"])),
                       tuple(map(tuple, obj["simple_coroots"])), special)
        except (KeyError, TypeError) as exc:
            raise RootDatumError(f"malformed root datum: {exc}") from exc


@dataclass(frozen=True)
class DatumClassification:
    free: bool
    cofree: bool
    sc_type: bool
    adjoint_type: bool
    sc_at: tuple = ()
    adjoint_at: tuple = ()

    def to_json(self):
        return {"free": self.free, "cofree": self.cofree, "sc_type": self.sc_type,
                "adjoint_type": self.adjoint_type, "sc_at": list(self.sc_at),
                "adjoint_at": list(self.adjoint_at)}


def validate(D: RootDatum) -> list:
    """List of violated GCM axioms; empty means the datum is valid."""
    A = D.cartan_matrix
    out = []
    for i in range(D.n):
        if A[i][i] != 2:
            out.append(f"a_ii != 2 at i={D.generators[i]} (a_ii = {A[i][i]})")
    for i in range(D.n):
        for j in range(D.n):
            if i == j:
                continue
            if A[i][j] > 0:
                out.append(f"positive off-diagonal entry at ({D.generators[i]},{D.generators[j]}): {A[i][j]}")
            if i < j and (A[i][j] == 0) != (A[j][i] == 0):
                out.append(f"asymmetric vanishing at ({D.generators[i]},{D.generators[j]}): "
                           f"a_ij = {A[i][j]}, a_ji = {A[j][i]}")
    return out


def classify(D: RootDatum) -> DatumClassification:
    free = integer_rank(D.simple_roots) == D.n if D.n else True
    cofree = integer_rank(D.simple_coroots) == D.n if D.n else True
    sc_at = tuple(_vgcd(c) == 1 for c in D.simple_coroots)
    ad_at = tuple(_vgcd(a) == 1 for a in D.simple_roots)
    return DatumClassification(free, cofree, all(sc_at), all(ad_at), sc_at, ad_at)


def langlands_dual(D: RootDatum) -> RootDatum:
    swap = {"X": "Xv", "Xv": "X"}
    return RootDatum(D.rank, D.generators, D.simple_coroots, D.simple_roots,
                     tuple((n, swap[s], v) for n, s, v in D.special))


def find_fundamental_weight(D: RootDatum, i):
    """Canonical weight w with <w, alpha_i^vee> = 1 (HNF-reduced representative)."""
    i = D.index(i)
    sol = canonical_solution(D.simple_coroots[i], 1)
    if sol is None:
        raise NotSCTypeAt(D.generators[i])
    return sol


# ---------------------------------------------------------------------------
# finite root systems

def real_roots(D: RootDatum, cap=DEFAULT_ROOT_CAP):
    """All real roots with their coroots, in root-lattice coordinates.

    Returns a dict {root: coroot} keyed by Z^I vectors.  Raises
    RootEnumerationError when more than ``cap`` roots appear.
    """
    A = D.cartan_matrix
    n = D.n
    unit = lambda i: tuple(int(i == j) for j in range(n))
    found = {}
    frontier = []
    for i in range(n):
        pair = (unit(i), unit(i))
        found[pair[0]] = pair[1]
        frontier.append(pair)
    while frontier:
        nxt = []
        for beta, cobeta in frontier:
            for i in range(n):
                k = sum(beta[j] * A[i][j] for j in range(n))   # <beta, alpha_i^vee>
                kc = sum(cobeta[j] * A[j][i] for j in range(n))  # <alpha_i, beta^vee>
                b2 = tuple(beta[j] - k * (i == j) for j in range(n))
                c2 = tuple(cobeta[j] - kc * (i == j) for j in range(n))
                if b2 not in found:
                    found[b2] = c2
                    nxt.append((b2, c2))
                    if len(found) > cap:
                        raise RootEnumerationError(f"more than {cap} roots; datum is not of finite type")
        frontier = nxt
    return found


def positive_roots(D: RootDatum, cap=DEFAULT_ROOT_CAP):
    return {b: c for b, c in real_roots(D, cap).items() if all(x >= 0 for x in b)}


def highest_root(D: RootDatum, cap=DEFAULT_ROOT_CAP):
    """(theta, theta_vee) as vectors in X and X^vee."""
    pos = positive_roots(D, cap)
    top = max(pos, key=lambda b: (sum(b), b))
    if not all(all(t >= b for t, b in zip(top, beta)) for beta in pos):
        raise RootDatumError("no unique highest root; the finite datum must be irreducible")
    cotop = pos[top]
    theta = tuple(sum(top[j] * D.simple_roots[j][p] for j in range(D.n)) for p in range(D.rank))
    theta_v = tuple(sum(cotop[j] * D.simple_coroots[j][p] for j in range(D.n)) for p in range(D.rank))
    return theta, theta_v, top


def _new_generator(D):
    name = "s0"
    while name in D.generators:
        name += "'"
    return name


def affinize(D0: RootDatum, mode: str, cap=DEFAULT_ROOT_CAP) -> RootDatum:
    """Affine datum from a finite irreducible one; the new index comes first.

    loop: alpha_0 = -theta, alpha_0^vee = -theta^vee on the same lattice.
    loop_rotation: X + Z delta, X^vee + Z d, alpha_0 = -theta + delta.
    central_extension: X + Z K*, X^vee + Z K, alpha_0^vee = -theta^vee + K.
    """
    if mode not in MODES:
        raise RootDatumError(f"unknown affinization mode {mode!r}; expected one of {MODES}")
    theta, theta_v, _ = highest_root(D0, cap)
    gens = (_new_generator(D0),) + D0.generators
    neg = lambda v: tuple(-a for a in v)
    if mode == "loop":
        roots = (neg(theta),) + D0.simple_roots
        coroots = (neg(theta_v),) + D0.simple_coroots
        special = (("theta", "X", theta), ("theta_vee", "Xv", theta_v))
        return RootDatum(D0.rank, gens, roots, coroots, special)
    r = D0.rank + 1
    ext = lambda v, last=0: tuple(v) + (last,)
    new = tuple(int(p == D0.rank) for p in range(r))
    if mode == "loop_rotation":
        roots = (ext(neg(theta), 1),) + tuple(ext(a) for a in D0.simple_roots)
        coroots = (ext(neg(theta_v)),) + tuple(ext(c) for c in D0.simple_coroots)
        special = (("delta", "X", new), ("d", "Xv", new),
                   ("theta", "X", ext(theta)), ("theta_vee", "Xv", ext(theta_v)))
    else:
        roots = (ext(neg(theta)),) + tuple(ext(a) for a in D0.simple_roots)
        coroots = (ext(neg(theta_v), 1),) + tuple(ext(c) for c in D0.simple_coroots)
        special = (("K*", "X", new), ("K", "Xv", new),
                   ("theta", "X", ext(theta)), ("theta_vee", "Xv", ext(theta_v)))
    return RootDatum(r, gens, roots, coroots, special)


# ---------------------------------------------------------------------------
# standard examples

def simply_connected(cartan, generators=None):
    """X = weight lattice (fundamental weight basis), coroots = dual basis."""
    n = len(cartan)
    gens = generators or tuple(f"s{i + 1}" for i in range(n))
    roots = tuple(tuple(cartan[i][j] for i in range(n)) for j in range(n))
    coroots = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return RootDatum(n, gens, roots, coroots)


def adjoint(cartan, generators=None):
    """X = root lattice, roots = basis."""
    n = len(cartan)
    gens = generators or tuple(f"s{i + 1}" for i in range(n))
    roots = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    coroots = tuple(tuple(cartan[i][j] for j in range(n)) for i in range(n))
    return RootDatum(n, gens, roots, coroots)


def cartan_type_A(n):
    return tuple(tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)) for i in range(n))


def sl2():
    return simply_connected(((2,),))


def pgl2():
    return adjoint(((2,),))


def sl3():
    return simply_connected(cartan_type_A(2))


def affine_sl2(mode="loop_rotation"):
    return affinize(sl2(), mode)


NAMED = {
    "sl2": sl2,
    "pgl2": pgl2,
    "sl3": sl3,
    "a2": sl3,
    "affine_sl2": affine_sl2,
    "affine_sl2_loop": lambda: affine_sl2("loop"),
    "affine_pgl2_central": lambda: affinize(pgl2(), "central_extension"),
}
