"""Marked surfaces, ideal/dotted triangulations, and the dotted-move groupoid.

Conventions
-----------
Each triangle carries corners 0,1,2 in the cyclic order induced by the
surface orientation; side k runs from corner k to corner k+1 (mod 3).
A gluing identifies side k of one triangle with side j of another so that
the shared edge is traversed in opposite directions: corner k <-> corner
j+1 and corner k+1 <-> corner j.

Moves on dotted triangulations:

* dot change: the dot advances one corner against the cyclic order
  (k -> k-1 mod 3); order three.
* enhanced flip on (t, s): supported when the dot of t sits at the tail
  corner of the shared side inside t and the dot of s sits at the corner
  of s opposite the shared side.  The diagonal rotates; the dots stay at
  the same surface corners and the labels follow them.
* label permutation: relabels triangles by sigma (new label = sigma(old)).

The composite move omega(i, j) = dot_i . dot_j^-1 . flip_ij . dot_j . dot_i^-1
(rightmost applied first) matches Kashaev's original flip generator.
"""

import json
from dataclasses import dataclass
from itertools import permutations

from .errors import (
    BudgetExceeded,
    EulerMismatch,
    NonInvolutiveGluing,
    OrientationConflict,
    Unsupported,
)


@dataclass(frozen=True)
class MarkedSurface:
    """Oriented surface of given genus with punctures and marked boundary.

    ``boundary_arcs`` lists, per boundary component, the number of boundary
    arcs (= marked points) on it; unmarked holes should be declared as
    punctures instead.
    """

    genus: int
    punctures: int
    boundary_arcs: tuple = ()

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise ValueError("genus and punctures must be nonnegative")
        if any(a < 1 for a in self.boundary_arcs):
            raise ValueError("each boundary component needs at least one arc; "
                             "declare unmarked holes as punctures")

    @property
    def boundary_components(self):
        return len(self.boundary_arcs)

    @property
    def total_arcs(self):
        return sum(self.boundary_arcs)

    @property
    def punctured_boundary_components(self):
        return self.punctures + self.total_arcs

    def is_hyperbolic(self):
        n = self.punctured_boundary_components
        return self.genus > 1 or (self.genus == 1 and n > 0) or (self.genus == 0 and n >= 3)

    def triangle_count(self):
        """Number of triangles in any ideal triangulation."""
        t = (4 * self.genus - 4 + 2 * self.punctures
             + 2 * self.boundary_components + self.total_arcs)
        return t

    def validate(self):
        if not self.is_hyperbolic():
            raise ValueError(f"{self} is not hyperbolic")
        if self.triangle_count() <= 0:
            raise EulerMismatch(f"{self} admits no ideal triangulation")


class IdealTriangulation:
    """Triangles plus a side-gluing involution; immutable value."""

    def __init__(self, surface, triangles, gluing):
        self.surface = surface
        self.triangles = tuple(sorted(triangles))
        glu = {}
        for a, b in gluing.items():
            glu[(a[0], a[1])] = (b[0], b[1])
        self.gluing = glu
        self._key = (self.triangles, tuple(sorted(self.gluing.items())))
        self._validate()

    def _validate(self):
        tris = set(self.triangles)
        if len(tris) != len(self.triangles):
            raise ValueError("duplicate triangle ids")
        for a, b in self.gluing.items():
            for t, k in (a, b):
                if t not in tris or k not in (0, 1, 2):
                    raise NonInvolutiveGluing(f"bad side reference {(t, k)}")
            if a == b:
                raise NonInvolutiveGluing(f"side {a} glued to itself")
            if self.gluing.get(b) != a:
                raise NonInvolutiveGluing(f"gluing not involutive at {a}")
        surf = self.surface
        if len(self.triangles) != surf.triangle_count():
            raise EulerMismatch(
                f"{len(self.triangles)} triangles, expected {surf.triangle_count()}")
        unglued = [s for s in self.all_sides() if s not in self.gluing]
        if len(unglued) != surf.total_arcs:
            raise EulerMismatch(
                f"{len(unglued)} boundary sides, expected {surf.total_arcs}")
        interior, boundary = self.vertex_orbits()
        if len(interior) != surf.punctures:
            raise EulerMismatch(
                f"{len(interior)} interior vertices, expected {surf.punctures}")
        if len(boundary) != surf.total_arcs:
            raise EulerMismatch(
                f"{len(boundary)} boundary vertices, expected {surf.total_arcs}")

    def all_sides(self):
        return [(t, k) for t in self.triangles for k in range(3)]

    def is_interior(self, side):
        return side in self.gluing

    def vertex_orbits(self):
        """Corner orbits; returns (interior_orbits, boundary_orbits)."""
        seen = set()
        interior, boundary = [], []
        for t in self.triangles:
            for k in range(3):
                if (t, k) in seen:
                    continue
                orbit = [(t, k)]
                seen.add((t, k))
                closed = True
                # forward: cross side k
                cur = (t, k)
                while True:
                    side = cur
                    if side not in self.gluing:
                        closed = False
                        break
                    t2, j2 = self.gluing[side]
                    nxt = (t2, (j2 + 1) % 3)
                    if nxt == (t, k):
                        break
                    orbit.append(nxt)
                    seen.add(nxt)
                    cur = nxt
                if not closed:
                    # walk backwards: cross side k-1
                    cur = (t, k)
                    while True:
                        t1, k1 = cur
                        back = (t1, (k1 - 1) % 3)
                        if back not in self.gluing:
                            break
                        t2, j2 = self.gluing[back]
                        prev = (t2, j2)
                        orbit.append(prev)
                        seen.add(prev)
                        cur = prev
                (interior if closed else boundary).append(tuple(orbit))
        return interior, boundary

    def __eq__(self, other):
        return isinstance(other, IdealTriangulation) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"IdealTriangulation({len(self.triangles)} triangles)"


def build_triangulation(surface, gluing, triangles=None, corner_maps=None):
    """Validated construction from a raw gluing table.

    ``gluing`` maps (triangle, side) to (triangle, side); only one direction
    per edge is required.  ``corner_maps`` optionally spells out the corner
    identification of each glued pair and must match the orientation
    convention (tail of one side = head of the other).
    """
    surface.validate()
    table = {}
    for a, b in gluing.items():
        a, b = tuple(a), tuple(b)
        if a == b:
            raise NonInvolutiveGluing(f"side {a} glued to itself")
        if table.get(a, b) != b or table.get(b, a) != a:
            raise NonInvolutiveGluing(f"conflicting entries at {a}")
        table[a] = b
        table[b] = a
    if triangles is None:
        triangles = sorted({t for (t, _) in table})
        if not triangles:
            raise ValueError("cannot infer triangles from an empty gluing")
    if corner_maps:
        for (a, b), pairs in corner_maps.items():
            a, b = tuple(a), tuple(b)
            ta, ka = a
            tb, kb = b
            expect = {(ka, (kb + 1) % 3), ((ka + 1) % 3, kb)}
            if set(map(tuple, pairs)) != expect:
                raise OrientationConflict(f"corner map at {a}~{b} breaks orientation")
    return IdealTriangulation(surface, triangles, table)


class DottedTriangulation:
    """Ideal triangulation with a dotted corner and a label per triangle."""

    def __init__(self, base, dots, labels):
        self.base = base
        self.dots = dict(dots)
        self.labels = dict(labels)
        if set(self.dots) != set(base.triangles):
            raise ValueError("dot map must cover every triangle")
        if any(d not in (0, 1, 2) for d in self.dots.values()):
            raise ValueError("dots must be corner indices")
        if set(self.labels) != set(base.triangles):
            raise ValueError("label map must cover every triangle")
        if len(set(self.labels.values())) != len(self.labels):
            raise ValueError("labels must be a bijection")
        self._key = canonical_form(self)

    @property
    def label_set(self):
        return frozenset(self.labels.values())

    def triangle_of(self, label):
        for t, lab in self.labels.items():
            if lab == label:
                return t
        raise KeyError(label)

    def __eq__(self, other):
        return isinstance(other, DottedTriangulation) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"DottedTriangulation({len(self.base.triangles)} triangles)"


def canonical_form(td):
    """Canonical key: labels and dots are part of the identity.

    Every triangle is renamed by its label and rotated so its dotted corner
    becomes corner 0; the rotated gluing table, sorted, is the key.
    """
    rot = {t: td.dots[t] for t in td.base.triangles}

    def conv(side):
        t, k = side
        return (td.labels[t], (k - rot[t]) % 3)

    rows = []
    for t in sorted(td.base.triangles, key=lambda x: str(td.labels[x])):
        for k in range(3):
            old = (t, (k + rot[t]) % 3)
            part = td.base.gluing.get(old)
            rows.append((conv(old), conv(part) if part else None))
    return tuple(rows)


# ---------------------------------------------------------------------------
# moves


@dataclass(frozen=True)
class KashaevMove:
    kind: str              # "dot", "flip", "perm", "omega"
    t: object = None
    s: object = None
    perm: tuple = None     # sorted tuple of (label, image) pairs
    power: int = 1

    def __post_init__(self):
        if self.kind not in ("dot", "flip", "perm", "omega"):
            raise ValueError(f"unknown move kind {self.kind}")
        if self.kind in ("flip", "omega") and self.t == self.s:
            raise ValueError("two-index move needs distinct labels")
        if self.power not in (1, -1):
            raise ValueError("power must be +-1")

    def inverse(self):
        if self.kind == "perm":
            inv = tuple(sorted((b, a) for a, b in self.perm))
            return KashaevMove("perm", perm=inv)
        return KashaevMove(self.kind, self.t, self.s, self.perm, -self.power)

    def __str__(self):
        sup = "" if self.power == 1 else "^-1"
        if self.kind == "dot":
            return f"dot[{self.t}]{sup}"
        if self.kind == "flip":
            return f"flip[{self.t},{self.s}]{sup}"
        if self.kind == "omega":
            return f"omega[{self.t},{self.s}]{sup}"
        return f"perm[{dict(self.perm)}]"


def dot_move(t, power=1):
    return KashaevMove("dot", t=t, power=power)


def flip_move(t, s, power=1):
    return KashaevMove("flip", t=t, s=s, power=power)


def perm_move(mapping):
    return KashaevMove("perm", perm=tuple(sorted(mapping.items())))


def omega_move(t, s, power=1):
    return KashaevMove("omega", t=t, s=s, power=power)


def perm_of_cycle(labels, cycle):
    """Permutation of ``labels`` given by one cycle, e.g. (a, b) or (a, b, c)."""
    mapping = {lab: lab for lab in labels}
    for i, a in enumerate(cycle):
        mapping[a] = cycle[(i + 1) % len(cycle)]
    return perm_move(mapping)


def expand_omega(move):
    """omega as a word of elementary moves, in application order."""
    i, j = move.t, move.s
    word = [dot_move(i, -1), dot_move(j), flip_move(i, j, move.power),
            dot_move(j, -1), dot_move(i)]
    return tuple(word)


def supports(td, move):
    try:
        apply_move(td, move)
        return True
    except Unsupported:
        return False


def apply_move(td, move):
    """Apply a single move, returning a new DottedTriangulation."""
    if move.kind == "omega":
        cur = td
        for m in expand_omega(move):
            cur = apply_move(cur, m)
        return cur
    if move.kind == "dot":
        t = _triangle_of(td, move, move.t)
        step = -1 if move.power == 1 else 1
        dots = dict(td.dots)
        dots[t] = (dots[t] + step) % 3
        return DottedTriangulation(td.base, dots, td.labels)
    if move.kind == "perm":
        mapping = dict(move.perm)
        labels = {t: mapping.get(lab, lab) for t, lab in td.labels.items()}
        if len(set(labels.values())) != len(labels):
            raise Unsupported(move, "permutation is not a bijection on labels")
        return DottedTriangulation(td.base, td.dots, labels)
    if move.power == 1:
        return _apply_flip(td, move)
    return _apply_flip_inverse(td, move)


def _triangle_of(td, move, label):
    for t, lab in td.labels.items():
        if lab == label:
            return t
    raise Unsupported(move, f"no triangle labeled {label}")


def _apply_flip(td, move):
    t = _triangle_of(td, move, move.t)
    s = _triangle_of(td, move, move.s)
    if t == s:
        raise Unsupported(move, "labels name the same triangle")
    i = td.dots[t]                      # flip side candidate in t
    partner = td.base.gluing.get((t, i))
    if partner is None:
        raise Unsupported(move, "dotted side of first triangle is a boundary arc")
    s2, j = partner
    if s2 != s:
        raise Unsupported(move, "shared side does not meet the second triangle")
    if td.dots[s] != (j + 2) % 3:
        raise Unsupported(move, "dot of second triangle not opposite the shared side")

    # old sides keeping their gluing partners
    side_map = {
        (t, (i + 2) % 3): (t, 0),
        (s, (j + 1) % 3): (t, 1),
        (s, (j + 2) % 3): (s, 0),
        (t, (i + 1) % 3): (s, 1),
    }
    gluing = _reglue(td.base.gluing, side_map, drop={(t, i), (s, j)},
                     add={(t, 2): (s, 2)})
    base = IdealTriangulation(td.base.surface, td.base.triangles, gluing)
    dots = dict(td.dots)
    dots[t] = 1
    dots[s] = 0
    return DottedTriangulation(base, dots, td.labels)


def _apply_flip_inverse(td, move):
    t = _triangle_of(td, move, move.t)
    s = _triangle_of(td, move, move.s)
    if t == s:
        raise Unsupported(move, "labels name the same triangle")
    a = (td.dots[t] + 1) % 3            # shared side candidate in t
    partner = td.base.gluing.get((t, a))
    if partner is None:
        raise Unsupported(move, "candidate side is a boundary arc")
    s2, b = partner
    if s2 != s:
        raise Unsupported(move, "shared side does not meet the second triangle")
    if td.dots[s] != (b + 1) % 3:
        raise Unsupported(move, "dot of second triangle not at the head of the shared side")

    side_map = {
        (s, (b + 2) % 3): (t, 1),
        (t, (a + 1) % 3): (t, 2),
        (t, (a + 2) % 3): (s, 1),
        (s, (b + 1) % 3): (s, 2),
    }
    gluing = _reglue(td.base.gluing, side_map, drop={(t, a), (s, b)},
                     add={(t, 0): (s, 0)})
    base = IdealTriangulation(td.base.surface, td.base.triangles, gluing)
    dots = dict(td.dots)
    dots[t] = 0
    dots[s] = 2
    return DottedTriangulation(base, dots, td.labels)


def _reglue(gluing, side_map, drop, add):
    out = {}
    for old, new in add.items():
        out[old] = new
        out[new] = old
    for a, b in gluing.items():
        if a in drop or b in drop:
            continue
        na = side_map.get(a, a)
        nb = side_map.get(b, b)
        out[na] = nb
        out[nb] = na
    return out


def apply_word(td, word):
    """Apply a word of moves given in application order (first move first)."""
    cur = td
    for m in word:
        cur = apply_move(cur, m)
    return cur


def supports_word(td, word):
    try:
        apply_word(td, word)
        return True
    except Unsupported:
        return False


# ---------------------------------------------------------------------------
# relations of the move calculus (omega/dot/perm presentation)


def relation_instances(labels, perm_pool=None):
    """Concrete relation instances: (name, params, lhs, rhs) in application order."""
    labels = sorted(labels, key=str)
    out = []
    if perm_pool is None:
        perm_pool = [{a: a for a in labels}]
        for x in range(len(labels)):
            for y in range(x + 1, len(labels)):
                m = {a: a for a in labels}
                m[labels[x]], m[labels[y]] = labels[y], labels[x]
                perm_pool.append(m)
        if 1 < len(labels) <= 4:
            perm_pool = [dict(zip(labels, img)) for img in permutations(labels)]

    def add(name, params, lhs, rhs):
        out.append((name, params, tuple(lhs), tuple(rhs)))

    for i in labels:
        add("order-three", (i,), [dot_move(i)] * 3, [])
    distinct2 = [(i, j) for i in labels for j in labels if i != j]
    for i, j in distinct2:
        for k in labels:
            if k in (i, j):
                continue
            # omega_jk omega_ik omega_ij = omega_ij omega_jk, rightmost first
            add("pentagon", (i, j, k),
                [omega_move(i, j), omega_move(i, k), omega_move(j, k)],
                [omega_move(j, k), omega_move(i, j)])
    for i, j in distinct2:
        add("inversion", (i, j),
            [omega_move(j, i), dot_move(j), omega_move(i, j)],
            [perm_of_cycle(labels, (i, j)), dot_move(j), dot_move(i)])
        add("consistency", (i, j),
            [dot_move(i), omega_move(i, j), dot_move(j)],
            [dot_move(j), omega_move(j, i), dot_move(i)])
        add("commute-dot-dot", (i, j),
            [dot_move(j), dot_move(i)], [dot_move(i), dot_move(j)])
    add("perm-identity", (), [perm_move({a: a for a in labels})], [])
    for p1 in perm_pool:
        for p2 in perm_pool:
            comp = {a: p1[p2[a]] for a in labels}
            add("perm-product", (tuple(sorted(p1.items())), tuple(sorted(p2.items()))),
                [perm_move(p2), perm_move(p1)], [perm_move(comp)])
    for p in perm_pool:
        for i in labels:
            add("index-change-dot", (tuple(sorted(p.items())), i),
                [dot_move(i), perm_move(p)], [perm_move(p), dot_move(p[i])])
        for i, j in distinct2:
            add("index-change-omega", (tuple(sorted(p.items())), i, j),
                [omega_move(i, j), perm_move(p)], [perm_move(p), omega_move(p[i], p[j])])
    for i, j in distinct2:
        for k, l in distinct2:
            if len({i, j, k, l}) == 4:
                add("commute-omega-omega", (i, j, k, l),
                    [omega_move(k, l), omega_move(i, j)],
                    [omega_move(i, j), omega_move(k, l)])
        for k in labels:
            if k not in (i, j):
                add("commute-omega-dot", (i, j, k),
                    [dot_move(k), omega_move(i, j)],
                    [omega_move(i, j), dot_move(k)])
    return out


def verify_relation_instances(td, perm_pool=None):
    """Check every relation instance whose left side is supported at ``td``.

    Returns a list of dicts, one per supported instance.
    """
    report = []
    for name, params, lhs, rhs in relation_instances(sorted(td.label_set, key=str),
                                                     perm_pool=perm_pool):
        try:
            left = apply_word(td, lhs)
        except Unsupported:
            continue
        entry = {"relation": name, "params": tuple(map(str, params)),
                 "lhs_len": len(lhs), "rhs_len": len(rhs)}
        try:
            right = apply_word(td, rhs)
        except Unsupported as exc:
            entry["ok"] = False
            entry["why"] = f"rhs unsupported: {exc.reason}"
            report.append(entry)
            continue
        entry["ok"] = left == right
        if not entry["ok"]:
            entry["why"] = "sides disagree"
        report.append(entry)
    return report


# ---------------------------------------------------------------------------
# exploration


def elementary_moves(labels):
    labels = sorted(labels, key=str)
    moves = []
    for t in labels:
        moves.append(dot_move(t))
        moves.append(dot_move(t, -1))
    for t in labels:
        for s in labels:
            if t != s:
                moves.append(flip_move(t, s))
                moves.append(flip_move(t, s, -1))
    for x in range(len(labels)):
        for y in range(x + 1, len(labels)):
            m = {a: a for a in labels}
            m[labels[x]], m[labels[y]] = labels[y], labels[x]
            moves.append(perm_move(m))
    return moves


def explore(seed, max_objects, check_relations=False):
    """Breadth-first closure of ``seed`` under elementary moves.

    Returns a dict with nodes, typed edges, a truncation flag, and (when
    ``check_relations``) per-node relation verification summaries.
    """
    if max_objects < 1:
        raise ValueError("max_objects must be >= 1")
    moves = elementary_moves(seed.label_set)
    index = {seed: 0}
    frontier = [seed]
    objects = [seed]
    edges = []
    truncated = False
    while frontier:
        nxt = []
        for obj in frontier:
            for mv in moves:
                try:
                    new = apply_move(obj, mv)
                except Unsupported:
                    continue
                if new not in index:
                    if len(index) >= max_objects:
                        truncated = True
                        continue
                    index[new] = len(objects)
                    objects.append(new)
                    nxt.append(new)
                edges.append((index[obj], str(mv), index[new]))
        frontier = nxt
    result = {
        "nodes": len(objects),
        "edges": sorted(set(edges)),
        "truncated": truncated,
        "connected": True,          # BFS closure from one seed
    }
    if check_relations:
        bad = 0
        checked = 0
        for obj in objects:
            for entry in verify_relation_instances(obj):
                checked += 1
                if not entry["ok"]:
                    bad += 1
        result["relation_instances"] = checked
        result["relation_failures"] = bad
    result["objects"] = objects
    return result


# ---------------------------------------------------------------------------
# built-in surfaces and serialization


def builtin(name):
    """Standard dotted triangulations used by the verification suites."""
    if name in ("triangle", "one-triangle"):
        surf = MarkedSurface(0, 0, (3,))
        base = IdealTriangulation(surf, [0], {})
        return DottedTriangulation(base, {0: 0}, {0: "t"})
    if name in ("square", "two-triangle-square"):
        surf = MarkedSurface(0, 0, (4,))
        base = IdealTriangulation(surf, [0, 1], {(0, 2): (1, 0), (1, 0): (0, 2)})
        return DottedTriangulation(base, {0: 2, 1: 2}, {0: "t", 1: "s"})
    if name in ("pentagon", "fan"):
        surf = MarkedSurface(0, 0, (5,))
        glu = {(0, 2): (1, 0), (1, 2): (2, 0)}
        glu.update({v: k for k, v in glu.items()})
        base = IdealTriangulation(surf, [0, 1, 2], glu)
        return DottedTriangulation(base, {0: 0, 1: 0, 2: 0}, {0: "t", 1: "s", 2: "u"})
    if name in ("punctured-torus", "torus"):
        surf = MarkedSurface(1, 1, ())
        glu = {(0, k): (1, k) for k in range(3)}
        glu.update({v: k for k, v in glu.items()})
        base = IdealTriangulation(surf, [0, 1], glu)
        return DottedTriangulation(base, {0: 0, 1: 0}, {0: "t", 1: "s"})
    if name in ("sphere-4", "four-punctured-sphere"):
        surf = MarkedSurface(0, 4, ())
        glu = {
            (0, 0): (2, 2), (0, 1): (3, 2), (0, 2): (1, 0),
            (1, 1): (3, 1), (1, 2): (2, 0), (2, 1): (3, 0),
        }
        glu.update({v: k for k, v in glu.items()})
        base = IdealTriangulation(surf, [0, 1, 2, 3], glu)
        return DottedTriangulation(base, {t: 0 for t in range(4)},
                                   {0: "t", 1: "s", 2: "u", 3: "v"})
    raise ValueError(f"unknown builtin surface {name!r}")


BUILTIN_NAMES = ("triangle", "square", "pentagon", "punctured-torus", "sphere-4")


def dumps(td):
    """Line-oriented text form: tri/dot/lab records."""
    lines = []
    for t in td.base.triangles:
        cells = []
        for k in range(3):
            part = td.base.gluing.get((t, k))
            cells.append("-" if part is None else f"{part[0]}:{part[1]}")
        lines.append(f"tri {t} {' '.join(cells)}")
    for t in td.base.triangles:
        lines.append(f"dot {t} {td.dots[t]}")
    for t in td.base.triangles:
        lines.append(f"lab {t} {td.labels[t]}")
    return "\n".join(lines) + "\n"


def loads(text, surface):
    gluing = {}
    dots = {}
    labels = {}
    triangles = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "tri":
            t = int(parts[1])
            triangles.append(t)
            for k, cell in enumerate(parts[2:5]):
                if cell != "-":
                    o, j = cell.split(":")
                    gluing[(t, k)] = (int(o), int(j))
        elif parts[0] == "dot":
            dots[int(parts[1])] = int(parts[2])
        elif parts[0] == "lab":
            labels[int(parts[1])] = parts[2]
        else:
            raise ValueError(f"bad record {line!r}")
    base = IdealTriangulation(surface, triangles, gluing)
    return DottedTriangulation(base, dots, labels)


def explore_report_json(result):
    payload = {
        "nodes": result["nodes"],
        "edges": [[a, mv, b] for a, mv, b in result["edges"]],
        "truncated": result["truncated"],
        "connected": result["connected"],
    }
    for key in ("relation_instances", "relation_failures"):
        if key in result:
            payload[key] = result[key]
    return json.dumps(payload, indent=2, sort_keys=True)
