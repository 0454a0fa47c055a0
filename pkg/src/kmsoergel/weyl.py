"""Word calculus for (possibly infinite) Kac-Moody Weyl groups.

Elements are identified through the reflection representation on the root
lattice Z^I, s_i(e_j) = e_j - a_ij e_i, which is faithful for every
generalized Cartan matrix.  Words are stored in ShortLex normal form.
"""
from __future__ import annotations

from functools import lru_cache

from .laurent import LatticeMap
from .rootdatum import RootDatum, positive_roots


def _matmul(A, B):
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, c)) for c in cols) for row in A)


class WeylGroup:
    def __init__(self, datum: RootDatum):
        self.datum = datum
        A = datum.cartan_matrix
        n = datum.n
        self.n = n
        self._refl = tuple(
            tuple(tuple(int(p == j) - int(p == i) * A[i][j] for j in range(n)) for p in range(n))
            for i in range(n)
        )
        self._refl_X = tuple(datum.reflection(i).matrix for i in range(n))
        self._id = tuple(tuple(int(p == q) for q in range(n)) for p in range(n))
        self.one = WeylElement(self, (), self._id, self._id)

    def __eq__(self, other):
        return isinstance(other, WeylGroup) and other.datum == self.datum

    def __hash__(self):
        return hash(self.datum)

    def gen(self, i):
        return self.element((self.datum.index(i),))

    def gens(self):
        return [self.gen(i) for i in range(self.n)]

    def parse_word(self, word):
        if isinstance(word, str):
            word = [w for w in word.replace(" ", ",").split(",") if w]
        return tuple(self.datum.index(int(a) if isinstance(a, int) else a) for a in word)

    def element(self, word):
        """The element represented by an arbitrary (not necessarily reduced) word."""
        M, Minv = self._id, self._id
        for i in self.parse_word(word):
            M = _matmul(M, self._refl[i])
            Minv = _matmul(self._refl[i], Minv)
        return self._from_matrices(M, Minv)

    def _from_matrices(self, M, Minv):
        return WeylElement(self, self._normal_form(Minv), M, Minv)

    def _normal_form(self, Minv):
        # ShortLex: repeatedly strip the smallest left descent s, i.e. the
        # smallest s with w^{-1}(alpha_s) negative.
        word = []
        n = self.n
        while True:
            for s in range(n):
                col = [Minv[p][s] for p in range(n)]
                if any(col) and all(c <= 0 for c in col):
                    break
            else:
                return tuple(word)
            word.append(s)
            Minv = _matmul(Minv, self._refl[s])

    def enumerate(self, max_length):
        """All elements with length <= max_length, by BFS from the identity."""
        seen = {self.one.matrix_Q: self.one}
        layer = [self.one]
        out = [self.one]
        for _ in range(max_length):
            nxt = []
            for w in layer:
                for i in range(self.n):
                    if w.has_right_descent(i):
                        continue
                    v = w * self.gen(i)
                    if v.matrix_Q not in seen:
                        seen[v.matrix_Q] = v
                        nxt.append(v)
            nxt.sort(key=lambda w: w.word)
            out.extend(nxt)
            layer = nxt
        return out

    def reflection_X(self, i):
        return self._refl_X[i]


class WeylElement:
    __slots__ = ("group", "word", "matrix_Q", "_Qinv", "_X")

    def __init__(self, group, word, M, Minv):
        self.group = group
        self.word = tuple(word)
        self.matrix_Q = M
        self._Qinv = Minv
        self._X = None

    @property
    def datum(self):
        return self.group.datum

    def __len__(self):
        return len(self.word)

    @property
    def length(self):
        return len(self.word)

    def is_identity(self):
        return not self.word

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.group == other.group and self.matrix_Q == other.matrix_Q

    def __hash__(self):
        return hash(self.matrix_Q)

    def __repr__(self):
        if not self.word:
            return "e"
        return "*".join(self.group.datum.generators[i] for i in self.word)

    def names(self):
        return [self.group.datum.generators[i] for i in self.word]

    def __mul__(self, other):
        if not isinstance(other, WeylElement) or other.group != self.group:
            return NotImplemented
        M, Minv = self.matrix_Q, self._Qinv
        refl = self.group._refl
        for i in other.word:
            M = _matmul(M, refl[i])
            Minv = _matmul(refl[i], Minv)
        return self.group._from_matrices(M, Minv)

    def inverse(self):
        return self.group._from_matrices(self._Qinv, self.matrix_Q)

    def has_right_descent(self, i):
        """ws_i < w iff w(alpha_i) is a negative root."""
        n = self.group.n
        col = [self.matrix_Q[p][i] for p in range(n)]
        return all(c <= 0 for c in col)

    def has_left_descent(self, i):
        n = self.group.n
        col = [self._Qinv[p][i] for p in range(n)]
        return all(c <= 0 for c in col)

    @property
    def matrix_X(self):
        """Action on X as an integer matrix (column vectors)."""
        if self._X is None:
            r = self.group.datum.rank
            M = tuple(tuple(int(p == q) for q in range(r)) for p in range(r))
            for i in self.word:
                M = _matmul(M, self.group._refl_X[i]) if r else M
            self._X = M
        return self._X

    def lattice_map(self):
        return LatticeMap(self.matrix_X)

    def act(self, weight):
        return act_on_weight(self, weight)

    def same_action(self, other):
        """Equality in W(D), the image in GL(X)."""
        return self.matrix_X == other.matrix_X


def act_on_weight(w: WeylElement, weight):
    if len(weight) != w.group.datum.rank:
        raise ValueError(f"weight of length {len(weight)} for a lattice of rank {w.group.datum.rank}")
    return tuple(sum(a * b for a, b in zip(row, weight)) for row in w.matrix_X)


def multiply(w1: WeylElement, w2: WeylElement) -> WeylElement:
    return w1 * w2


def length(w: WeylElement) -> int:
    return w.length


def bruhat_leq(x: WeylElement, w: WeylElement) -> bool:
    """x <= w in Bruhat order, by the lifting property along left descents."""
    return _bruhat(x, w)


def _bruhat(x, w):
    if x.length > w.length:
        return False
    if w.length == 0:
        return x.length == 0
    if x.length == 0:
        return True
    s = w.word[0]
    sw = w.group.gen(s) * w
    if x.has_left_descent(s):
        return _bruhat(w.group.gen(s) * x, sw)
    return _bruhat(x, sw)


def inversion_count(w: WeylElement) -> int:
    """Number of positive roots sent to negative roots (finite type only)."""
    n = w.group.n
    count = 0
    for beta in positive_roots(w.group.datum):
        img = [sum(w.matrix_Q[p][j] * beta[j] for j in range(n)) for p in range(n)]
        if all(c <= 0 for c in img):
            count += 1
    return count


@lru_cache(maxsize=None)
def weyl_group(datum: RootDatum) -> WeylGroup:
    return WeylGroup(datum)
