"""Linear systems whose unknowns are matrices over R with bounded support.

Each unknown matrix entry is sum_mu x_mu e^mu with mu in the box
[-bound, bound]^rank; an equation sum_k L_k M_k R_k = T between matrices over
R becomes one integer row per (entry, exponent).  Rows are grouped into
connected components (in practice the X/Q-grading blocks) and each block is
solved separately with FLINT.
"""
from __future__ import annotations

from collections import defaultdict

from .laurent import LaurentPoly, box_points
from . import intmat


class MatrixSystem:
    def __init__(self, rank, bound):
        if bound <= 0:
            raise ValueError("support bound must be positive")
        self.rank = rank
        self.bound = bound
        self.box = box_points(rank, bound)
        self._box_index = {mu: k for k, mu in enumerate(self.box)}
        self.unknowns = []  # (name, rows, cols, offset)
        self.nvars = 0
        self.rows = defaultdict(dict)
        self.rhs = {}
        self._eq = 0

    def unknown(self, name, rows, cols):
        h = len(self.unknowns)
        self.unknowns.append((name, rows, cols, self.nvars))
        self.nvars += rows * cols * len(self.box)
        return h

    def _var(self, h, a, b, k):
        _, _, cols, off = self.unknowns[h]
        return off + (a * cols + b) * len(self.box) + k

    def equation(self, terms, target=None):
        """Impose sum over (L, h, R, sign) of sign * L M_h R == target.

        L or R may be None for the identity; target None means zero.
        """
        eq = self._eq
        self._eq += 1
        nbox = len(self.box)
        for L, h, R, sign in terms:
            _, ra, cb, _ = self.unknowns[h]
            left = [(i, i, None) for i in range(ra)] if L is None else [
                (i, a, L[i][a]) for i in range(len(L)) for a in range(ra) if not L[i][a].is_zero()]
            right = [(b, b, None) for b in range(cb)] if R is None else [
                (b, j, R[b][j]) for b in range(cb) for j in range(len(R[0])) if not R[b][j].is_zero()]
            for i, a, lp in left:
                for b, j, rp in right:
                    if lp is None and rp is None:
                        coeffs = {(0,) * self.rank: sign}
                    elif lp is None:
                        coeffs = {e: sign * c for e, c in rp.items()}
                    elif rp is None:
                        coeffs = {e: sign * c for e, c in lp.items()}
                    else:
                        coeffs = {e: sign * c for e, c in (lp * rp).items()}
                    base = self._var(h, a, b, 0)
                    for k, mu in enumerate(self.box):
                        var = base + k
                        for nu, c in coeffs.items():
                            key = (eq, i, j, tuple(x + y for x, y in zip(mu, nu)))
                            row = self.rows[key]
                            v = row.get(var, 0) + c
                            if v:
                                row[var] = v
                            else:
                                del row[var]
        if target is not None:
            for i, r in enumerate(target):
                for j, p in enumerate(r):
                    for nu, c in p.items():
                        key = (eq, i, j, nu)
                        self.rows[key]  # ensure the row exists
                        self.rhs[key] = self.rhs.get(key, 0) + c

    # ------------------------------------------------------------------
    def _components(self):
        parent = list(range(self.nvars))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for row in self.rows.values():
            vs = list(row)
            for v in vs[1:]:
                ra, rb = find(vs[0]), find(v)
                if ra != rb:
                    parent[ra] = rb
        comp_vars = defaultdict(list)
        for v in range(self.nvars):
            comp_vars[find(v)].append(v)
        comp_rows = defaultdict(list)
        orphan_rows = []
        for key, row in self.rows.items():
            if row:
                comp_rows[find(next(iter(row)))].append(key)
            else:
                orphan_rows.append(key)
        return comp_vars, comp_rows, orphan_rows

    def kernel(self):
        """Integer vectors spanning (over Q) the solutions of the homogeneous system."""
        comp_vars, comp_rows, _ = self._components()
        out = []
        for root, vars_ in sorted(comp_vars.items(), key=lambda kv: kv[1][0]):
            local = {v: k for k, v in enumerate(vars_)}
            rows = [{local[v]: c for v, c in self.rows[key].items()} for key in comp_rows.get(root, [])]
            for vec in intmat.nullspace(rows, len(vars_)):
                full = {}
                for k, c in enumerate(vec):
                    if c:
                        full[vars_[k]] = c
                out.append(full)
        return out

    def particular(self):
        """One integer solution of the inhomogeneous system, or None."""
        comp_vars, comp_rows, orphan = self._components()
        if any(self.rhs.get(k, 0) for k in orphan):
            return None
        sol = {}
        for root, vars_ in comp_vars.items():
            keys = comp_rows.get(root, [])
            if not any(self.rhs.get(k, 0) for k in keys):
                continue
            local = {v: k for k, v in enumerate(vars_)}
            rows = [{local[v]: c for v, c in self.rows[k].items()} for k in keys]
            x = intmat.solve_integer(rows, [self.rhs.get(k, 0) for k in keys], len(vars_))
            if x is None:
                return None
            for k, c in enumerate(x):
                if c:
                    sol[vars_[k]] = c
        return sol

    def matrices(self, vec):
        """Split a solution {var: value} into one matrix over R per unknown."""
        out = {}
        nbox = len(self.box)
        for name, ra, cb, off in self.unknowns:
            terms = [[{} for _ in range(cb)] for _ in range(ra)]
            for var, c in vec.items():
                if off <= var < off + ra * cb * nbox:
                    local = var - off
                    ab, k = divmod(local, nbox)
                    a, b = divmod(ab, cb)
                    terms[a][b][self.box[k]] = c
            out[name] = [[LaurentPoly._raw(t, self.rank) for t in r] for r in terms]
        return out
