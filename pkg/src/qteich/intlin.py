"""Exact integer linear algebra: Hermite forms, lattice membership, coset reps.

Everything here is on plain tuples of ints; no numpy, no overflow.
"""

from fractions import Fraction


def _swap_rows(rows, i, j):
    rows[i], rows[j] = rows[j], rows[i]


def hermite_normal_form(vectors):
    """Row-style Hermite normal form of the integer span of ``vectors``.

    Returns a list of nonzero rows with strictly increasing pivot columns,
    positive pivots, and entries above each pivot reduced into [0, pivot).
    """
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis = []
    col = 0
    while col < ncols and rows:
        pivot_rows = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(pivot_rows) > 1:
            pivot_rows.sort(key=lambda r: abs(r[col]))
            small = pivot_rows[0]
            new_pivots = [small]
            for r in pivot_rows[1:]:
                q = r[col] // small[col]
                reduced = [a - q * b for a, b in zip(r, small)]
                if reduced[col] != 0:
                    new_pivots.append(reduced)
                elif any(reduced):
                    rest.append(reduced)
            if len(new_pivots) == len(pivot_rows) and len(new_pivots) > 1:
                # no progress possible when all remainders vanished
                pass
            pivot_rows = new_pivots
            if len(pivot_rows) == 1:
                break
        if pivot_rows:
            piv = pivot_rows[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append(piv)
        rows = rest
        col += 1
    # reduce entries above pivots
    for i in range(len(basis) - 1, -1, -1):
        pc = next(k for k, a in enumerate(basis[i]) if a != 0)
        for j in range(i):
            q = basis[j][pc] // basis[i][pc]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    basis.sort(key=lambda r: next(k for k, a in enumerate(r) if a != 0))
    return [tuple(r) for r in basis]


class IntLattice:
    """Integer lattice given by a spanning set, with canonical coset reps."""

    def __init__(self, vectors, dim=None):
        vectors = [tuple(v) for v in vectors]
        if dim is None:
            if not vectors:
                raise ValueError("dimension required for an empty lattice")
            dim = len(vectors[0])
        if any(len(v) != dim for v in vectors):
            raise ValueError("ragged lattice vectors")
        self.dim = dim
        self.basis = hermite_normal_form(vectors)
        self._pivots = [next(k for k, a in enumerate(r) if a != 0) for r in self.basis]

    @property
    def rank(self):
        return len(self.basis)

    def reduce(self, vector):
        """Canonical coset representative of ``vector`` modulo the lattice.

        Entries at pivot columns are reduced into [0, pivot); idempotent.
        Returns (representative, correction) with vector = rep + correction
        and correction in the lattice.
        """
        v = list(vector)
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        corr = [0] * self.dim
        for row, pc in zip(self.basis, self._pivots):
            q = v[pc] // row[pc]
            if q:
                for k in range(self.dim):
                    v[k] -= q * row[k]
                    corr[k] += q * row[k]
        return tuple(v), tuple(corr)

    def contains(self, vector):
        rep, _ = self.reduce(vector)
        return not any(rep)

    def saturation_matrix(self):
        """Integer projection with kernel exactly the rational span.

        Returns rows spanning the orthogonal-complement coordinates: a list of
        integer vectors w such that w.v = 0 for all lattice v, and the map
        v -> (w_1.v, ..., w_k.v) has kernel = saturation of the lattice.
        """
        # solve over Q: nullspace of basis-as-rows acting on the right
        rows = [list(map(Fraction, r)) for r in self.basis]
        n = self.dim
        # row-reduce to find pivot columns
        mat = [r[:] for r in rows]
        pivots = []
        rr = 0
        for c in range(n):
            pr = next((i for i in range(rr, len(mat)) if mat[i][c] != 0), None)
            if pr is None:
                continue
            _swap_rows(mat, rr, pr)
            pv = mat[rr][c]
            mat[rr] = [a / pv for a in mat[rr]]
            for i in range(len(mat)):
                if i != rr and mat[i][c] != 0:
                    f = mat[i][c]
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[rr])]
            pivots.append(c)
            rr += 1
            if rr == len(mat):
                break
        free = [c for c in range(n) if c not in pivots]
        out = []
        for fc in free:
            w = [Fraction(0)] * n
            w[fc] = Fraction(1)
            for i, pc in enumerate(pivots):
                w[pc] = -mat[i][fc]
            den = 1
            for a in w:
                den = den * a.denominator // _gcd(den, a.denominator)
            out.append(tuple(int(a * den) for a in w))
        return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a if a else 1
