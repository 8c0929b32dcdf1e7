"""Exact classical coordinate engine: cluster mutations, ratio charts,
coordinate-change substitutions, loop relations, and the two-form identity.

Vertex coordinates live in a Laurent ring with one variable per quiver
vertex; ratio coordinates y_s, z_s live in a ring with two variables per
shaded label.  All checks are exact over Q.
"""

from fractions import Fraction

from .errors import AmbiguousEdge, FrozenDirection
from .intlin import IntLattice
from .quiver import QuiverDT, apply_transform, mutate_eps
from .ratfun import Factored, PolyRing, RatFn


class Seed:
    """Bare mutation seed: vertices, skew arrow counts, frozen set."""

    def __init__(self, vertices, eps, frozen=()):
        self.vertices = tuple(vertices)
        self._eps = dict(eps)
        self.frozen = frozenset(frozen)

    @classmethod
    def from_quiver(cls, Q):
        return cls(Q.vertices, Q._eps, Q.frozen)

    def eps(self, u, v):
        return self._eps.get((u, v), 0)

    def mutated(self, k):
        return Seed(self.vertices, mutate_eps(self, k), self.frozen)


def delta_ring(seed):
    return PolyRing(tuple(seed.vertices))


def identity_assignment(seed, ring=None):
    ring = ring or delta_ring(seed)
    return {v: RatFn.gen(ring, v) for v in seed.vertices}


def a_mutation(assign, seed, k):
    """Exchange-relation update of the vertex-coordinate assignment at k."""
    if k in seed.frozen:
        raise FrozenDirection(f"vertex {k} is frozen")
    pos = [(j, seed.eps(k, j)) for j in seed.vertices if seed.eps(k, j) > 0]
    neg = [(j, -seed.eps(k, j)) for j in seed.vertices if seed.eps(k, j) < 0]
    ring = assign[k].num.ring
    if not pos and not neg:
        new = RatFn.const_in(ring, 2) * assign[k].inv()
    else:
        left = RatFn.const_in(ring, 1)
        for j, e in pos:
            left = left * assign[j] ** e
        right = RatFn.const_in(ring, 1)
        for j, e in neg:
            right = right * assign[j] ** e
        new = assign[k].inv() * (left + right)
    out = dict(assign)
    out[k] = new
    return out


def _sgn(e):
    return 1 if e >= 0 else -1


def x_mutation(assign, seed, k):
    """Shear-type mutation of the face-coordinate assignment at k."""
    if k in seed.frozen:
        raise FrozenDirection(f"vertex {k} is frozen")
    out = {}
    zero_row = all(seed.eps(k, j) == 0 for j in seed.vertices)
    ring = assign[k].num.ring
    one = RatFn.const_in(ring, 1)
    for i in seed.vertices:
        if i == k:
            out[i] = assign[k] ** (-2) if zero_row else assign[k].inv()
            continue
        e = seed.eps(i, k)
        if e == 0:
            out[i] = assign[i]
        else:
            out[i] = assign[i] * (one + assign[k] ** (-_sgn(e))) ** (-e)
    return out


def p_pullback(seed, assign=None, ring=None):
    """Monomial map sending each face coordinate to its vertex-coordinate image."""
    ring = ring or delta_ring(seed)
    if assign is None:
        assign = identity_assignment(seed, ring)
    out = {}
    for i in seed.vertices:
        img = RatFn.const_in(ring, 1)
        for j in seed.vertices:
            e = seed.eps(i, j)
            if e:
                img = img * assign[j] ** e
        out[i] = img
    return out


def p_commutes_with_mutation(seed, k, ring=None):
    """Exact check that the monomial map intertwines the two mutations at k."""
    ring = ring or delta_ring(seed)
    delta = identity_assignment(seed, ring)
    x_now = p_pullback(seed, delta, ring)
    lhs = x_mutation(x_now, seed, k)          # mutate face coords, then express
    mutated = seed.mutated(k)
    delta_new = a_mutation(delta, seed, k)
    rhs = p_pullback(mutated, delta_new, ring)
    return all(lhs[i] == rhs[i] for i in seed.vertices)


# ---------------------------------------------------------------------------
# ratio charts


def ratio_chart(Q, assign=None, ring=None):
    """Per-label (y, z) ratio coordinates as rational functions of the
    vertex coordinates."""
    seed = Seed.from_quiver(Q)
    ring = ring or delta_ring(seed)
    if assign is None:
        assign = identity_assignment(seed, ring)
    chart = {}
    for label, sh in Q.shaded.items():
        a1, a2, a3 = sh.ratio_frame()
        chart[label] = (assign[a1] * assign[a2].inv(),
                        assign[a3] * assign[a2].inv())
    return chart


def yz_ring(labels):
    names = []
    for lab in sorted(labels, key=repr):
        names.append(("y", lab))
        names.append(("z", lab))
    return PolyRing(tuple(names))


def identity_subst(ring, cls=RatFn):
    return {name: cls.gen(ring, name) for name in ring.names}


def classical_change(tr, ring, cls=RatFn):
    """Substitution: new ratio coordinates as functions of the old ones."""
    sub = identity_subst(ring, cls)
    g = lambda name: cls.gen(ring, name)
    if tr.kind == "mutation":
        yr, zr = ("y", tr.r), ("z", tr.r)
        ys, zs = ("y", tr.s), ("z", tr.s)
        sub[yr] = (g(zs) + g(yr).inv() * g(ys)).inv()
        sub[zr] = (g(yr) * g(zr).inv() * g(ys).inv() * g(zs) + g(zr).inv()).inv()
        sub[ys] = g(yr) * g(zs) + g(ys)
        sub[zs] = g(zr) * g(zs)
    elif tr.kind == "invisible-flip":
        yr, zr = ("y", tr.r), ("z", tr.r)
        ys, zs = ("y", tr.s), ("z", tr.s)
        sub[zr] = g(zr) * g(zs).inv()
        sub[ys] = g(ys) * g(yr)
    elif tr.kind == "dot-change":
        ys, zs = ("y", tr.s), ("z", tr.s)
        sub[ys] = g(zs).inv()
        sub[zs] = g(ys) * g(zs).inv()
    elif tr.kind == "relabel":
        inv = {b: a for a, b in tr.perm}
        for kind in ("y", "z"):
            for lab_new, lab_old in inv.items():
                if (kind, lab_new) in ring.index:
                    sub[(kind, lab_new)] = g((kind, lab_old))
    else:
        raise ValueError(f"unknown transform {tr.kind}")
    return sub


def compose_subst(first, then, ring):
    """Substitution of the composite word: ``first`` applied before ``then``."""
    out = {}
    for name in ring.names:
        out[name] = then[name].substitute(
            {n: first[n] for n in ring.names})
    return out


def word_subst(word, ring, cls=Factored):
    """Fold a transform word (application order) into one substitution."""
    total = identity_subst(ring, cls)
    for tr in word:
        step = classical_change(tr, ring, cls)
        total = compose_subst(total, step, ring)
    return total


def change_from_delta(tr, Q):
    """Recompute the coordinate change from the vertex-coordinate mutation.

    Returns (old_chart, new_chart, assign') where the new chart is expressed
    in the original vertex variables; the companion checker asserts this is
    exactly the formula-level substitution.
    """
    seed = Seed.from_quiver(Q)
    ring = delta_ring(seed)
    assign = identity_assignment(seed, ring)
    chart0 = ratio_chart(Q, assign, ring)
    Q2 = apply_transform(Q, tr)
    if tr.kind == "mutation":
        c = Q.shaded[tr.s].dotted_vertex()
        assign2 = a_mutation(assign, seed, c)
    else:
        assign2 = assign
    chart1 = ratio_chart(Q2, assign2, ring)
    return chart0, chart1, assign2


def elementary_change_matches_delta(tr, Q):
    """Exact equality of the substitution formulas with the recomputation."""
    labels = sorted(Q.shaded, key=repr)
    ring = yz_ring(labels)
    sub = classical_change(tr, ring)
    chart0, chart1, _ = change_from_delta(tr, Q)
    images = {}
    for lab in labels:
        images[("y", lab)] = chart0[lab][0]
        images[("z", lab)] = chart0[lab][1]
    for lab in labels:
        for kind, idx in (("y", 0), ("z", 1)):
            expect = chart1[lab][idx]
            got = sub[(kind, lab)].substitute(images)
            if not got == expect:
                return False, (kind, lab)
    return True, None


# ---------------------------------------------------------------------------
# loop relations


def _side_log_vector(sh, k, basis_index, label):
    """Log of the tail/head vertex-coordinate ratio of side k, in (q, p) basis."""
    d = sh.dot
    vec = [0] * len(basis_index)
    qi = basis_index[("q", label)]
    pi = basis_index[("p", label)]
    rel = (k - d) % 3
    if rel == 2:        # side into the dotted corner: a1 -> a2
        vec[qi] = 1
    elif rel == 0:      # side out of the dotted corner: a2 -> a3
        vec[pi] = -1
    else:               # opposite side: a3 -> a1
        vec[pi] = 1
        vec[qi] = -1
    return vec


def log_basis(Q):
    names = []
    for lab in sorted(Q.shaded, key=repr):
        names.append(("q", lab))
        names.append(("p", lab))
    return names


def loop_relations(Q):
    """Integer lattice of linear relations among the log ratio coordinates.

    One relation per fundamental cycle of the side multigraph (each shaded
    triangle contributes its three sides, invisible included); returned as
    an IntLattice over the (q_s, p_s) basis of ``log_basis(Q)``.
    """
    names = log_basis(Q)
    basis_index = {n: i for i, n in enumerate(names)}
    edges = []
    claims = {}
    for label in Q.labels():
        sh = Q.shaded[label]
        for k in range(3):
            u, v = sh.side(k)
            vec = _side_log_vector(sh, k, basis_index, label)
            edges.append((u, v, tuple(vec)))
            if Q.side_is_real(sh, k):
                claims[(u, v)] = claims.get((u, v), 0) + 1
    for (u, v), n in claims.items():
        if n > max(Q.eps(u, v), 0):
            raise AmbiguousEdge(
                f"{n} shaded sides claim the {Q.eps(u, v)} arrows {u}->{v}")
    # spanning forest via BFS; one fundamental cycle per non-tree edge
    adjacency = {}
    for eid, (u, v, vec) in enumerate(edges):
        adjacency.setdefault(u, []).append((v, eid, 1))
        adjacency.setdefault(v, []).append((u, eid, -1))
    acc = {}
    tree_edges = set()
    for start in sorted(adjacency, key=repr):
        if start in acc:
            continue
        acc[start] = [0] * len(names)
        queue = [start]
        while queue:
            x = queue.pop()
            for y, eid, sign in adjacency[x]:
                if y in acc:
                    continue
                vec = edges[eid][2]
                acc[y] = [a + sign * b for a, b in zip(acc[x], vec)]
                tree_edges.add(eid)
                queue.append(y)
    vectors = []
    for eid, (u, v, vec) in enumerate(edges):
        if eid in tree_edges:
            continue
        cycle = [a + b - c for a, b, c in zip(acc[u], vec, acc[v])]
        if any(cycle):
            vectors.append(tuple(cycle))
    return IntLattice(vectors, dim=len(names))


def monomial_in_log_basis(ratfn, ring, labels):
    """Exponent vector of a (y,z)-monomial in the (q,p) log basis ordering."""
    exps, coeff = ratfn.monomial_exponents()
    names = []
    for lab in sorted(labels, key=repr):
        names.append(("q", lab))
        names.append(("p", lab))
    out = [0] * len(names)
    for name, e in zip(ring.names, exps):
        kind, lab = name
        tgt = ("q", lab) if kind == "y" else ("p", lab)
        out[names.index(tgt)] = e
    return tuple(out), coeff


# ---------------------------------------------------------------------------
# two-form identity


def two_form_check(Q):
    """Arrow form equals the diagonal form -2 sum dq^dp, as integer matrices."""
    verts = list(Q.vertices)
    n = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    eps_mat = [[Q.eps(u, v) for v in verts] for u in verts]
    acc = [[0] * n for _ in range(n)]
    for label in Q.labels():
        a1, a2, a3 = Q.shaded[label].ratio_frame()
        qv = [0] * n
        pv = [0] * n
        qv[idx[a1]] += 1
        qv[idx[a2]] -= 1
        pv[idx[a3]] += 1
        pv[idx[a2]] -= 1
        for i in range(n):
            if pv[i] == 0 and qv[i] == 0:
                continue
            for j in range(n):
                acc[i][j] += pv[i] * qv[j] - qv[i] * pv[j]
    return eps_mat == acc
