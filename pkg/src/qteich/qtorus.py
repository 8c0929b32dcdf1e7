"""Exact quantum-torus arithmetic, conjugation automorphisms, and the
multi-strategy equality oracle.

Monomials are kept in symmetrized (Weyl) form: an integer vector over the
log generators (one p-slot and one q-slot per label, optionally doubled
for the weak modular copy) together with half-integer powers of the formal
deformation parameters.  Multiplication adjusts the power by the
symplectic pairing, so y_r z_r = q^2 z_r y_r with y = exp of the q-slot,
z = exp of the p-slot.

Equality of rational expressions is decided by a cascade: polynomial
normal forms, a left-division decision when one side is a monomial, exact
commutative specialization (conclusive for inequality), and seeded
clock-and-shift matrix models over a prime field (honest EqualRandomized
verdicts, never upgraded).
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (DepthBudgetExceeded, NoRootOfUnity, SingularDenominator)
from .ratfun import Factored, PolyRing


class Universe:
    """Ordered label set defining the generator slots."""

    def __init__(self, labels, doubled=False):
        self.labels = tuple(sorted(labels, key=repr))
        self.doubled = doubled
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.block = 2 * len(self.labels)
        self.dim = self.block * (2 if doubled else 1)

    def __eq__(self, other):
        return (isinstance(other, Universe) and self.labels == other.labels
                and self.doubled == other.doubled)

    def __hash__(self):
        return hash((self.labels, self.doubled))

    def slot(self, kind, label, hat=False):
        # P-slot even, Q-slot odd
        base = 2 * self.index[label] + (0 if kind == "p" else 1)
        if hat:
            if not self.doubled:
                raise ValueError("universe is not doubled")
            base += self.block
        return base

    def zero_vec(self):
        return (0,) * self.dim

    def unit(self, kind, label, hat=False, power=1):
        v = [0] * self.dim
        v[self.slot(kind, label, hat)] = power
        return tuple(v)

    def pairing(self, v1, v2):
        """Block-wise symplectic pairing (plain block, hat block)."""
        plain = 0
        for i in range(0, self.block, 2):
            plain += v1[i] * v2[i + 1] - v1[i + 1] * v2[i]
        hat = 0
        if self.doubled:
            for i in range(self.block, 2 * self.block, 2):
                hat += v1[i] * v2[i + 1] - v1[i + 1] * v2[i]
        return plain, hat


@dataclass(frozen=True)
class QMono:
    """q^qpow * qhat^hpow * Weyl(vec) over a fixed universe."""

    universe: Universe
    vec: tuple
    qpow: Fraction = Fraction(0)
    hpow: Fraction = Fraction(0)
    coeff: Fraction = Fraction(1)

    def __mul__(self, other):
        u = self.universe
        if isinstance(other, QMono):
            plain, hat = u.pairing(self.vec, other.vec)
            return QMono(u, tuple(a + b for a, b in zip(self.vec, other.vec)),
                         self.qpow + other.qpow - plain,
                         self.hpow + other.hpow - hat,
                         self.coeff * other.coeff)
        return NotImplemented

    def inv(self):
        return QMono(self.universe, tuple(-a for a in self.vec),
                     -self.qpow, -self.hpow, 1 / self.coeff)

    def scaled(self, qshift=0, hshift=0, coeff=1):
        return QMono(self.universe, self.vec, self.qpow + qshift,
                     self.hpow + hshift, self.coeff * coeff)

    def conjugated_by(self, mono_vec):
        """m^-1 * self * m for the Weyl monomial with vector ``mono_vec``."""
        plain, hat = self.universe.pairing(mono_vec, self.vec)
        return self.scaled(qshift=2 * plain, hshift=2 * hat)

    def is_identity(self):
        return (not any(self.vec) and self.qpow == 0 and self.hpow == 0
                and self.coeff == 1)

    def key(self):
        return (self.vec, self.qpow, self.hpow, self.coeff)


class QPoly:
    """Finite sum of Weyl monomials; coefficients are Laurent in q, qhat."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe, terms=None):
        self.universe = universe
        # terms: vec -> {(qpow, hpow): Fraction}
        self.terms = {}
        for vec, coeffs in (terms or {}).items():
            cleaned = {k: v for k, v in coeffs.items() if v}
            if cleaned:
                self.terms[vec] = cleaned

    @classmethod
    def from_mono(cls, m):
        return cls(m.universe, {m.vec: {(m.qpow, m.hpow): m.coeff}})

    @classmethod
    def one(cls, universe):
        return cls(universe, {universe.zero_vec(): {(Fraction(0), Fraction(0)): Fraction(1)}})

    def __bool__(self):
        return bool(self.terms)

    def monomials(self):
        for vec, coeffs in self.terms.items():
            for (qp, hp), c in coeffs.items():
                yield QMono(self.universe, vec, qp, hp, c)

    def term_count(self):
        return sum(len(c) for c in self.terms.values())

    def __add__(self, other):
        out = {v: dict(c) for v, c in self.terms.items()}
        for vec, coeffs in other.terms.items():
            tgt = out.setdefault(vec, {})
            for k, v in coeffs.items():
                s = tgt.get(k, 0) + v
                if s:
                    tgt[k] = s
                else:
                    tgt.pop(k, None)
        return QPoly(self.universe, out)

    def __neg__(self):
        return QPoly(self.universe,
                     {v: {k: -c for k, c in cs.items()} for v, cs in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def mul_mono(self, m, side="right"):
        """self * m (right) or m * self (left)."""
        out = {}
        for t in self.monomials():
            prod = t * m if side == "right" else m * t
            tgt = out.setdefault(prod.vec, {})
            k = (prod.qpow, prod.hpow)
            s = tgt.get(k, 0) + prod.coeff
            if s:
                tgt[k] = s
            else:
                tgt.pop(k, None)
        return QPoly(self.universe, out)

    def __mul__(self, other):
        if isinstance(other, QMono):
            return self.mul_mono(other)
        out = QPoly(self.universe)
        for t in self.monomials():
            out = out + other.mul_mono(t, side="left")
        return out

    def single_mono(self):
        if len(self.terms) == 1:
            (vec, coeffs), = self.terms.items()
            if len(coeffs) == 1:
                ((qp, hp), c), = coeffs.items()
                return QMono(self.universe, vec, qp, hp, c)
        return None

    def lead_vec(self):
        return max(self.terms)

    def key(self):
        rows = []
        for vec in sorted(self.terms):
            rows.append((vec, tuple(sorted(self.terms[vec].items()))))
        return tuple(rows)

    def __eq__(self, other):
        return isinstance(other, QPoly) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _lead_mono(poly):
    lead = poly.lead_vec()
    coeffs = poly.terms[lead]
    if len(coeffs) != 1:
        return None
    ((qp, hp), c), = coeffs.items()
    return QMono(poly.universe, lead, qp, hp, c)


def left_divide(den, num):
    """X with den * X = num, or None; lex leading-term division."""
    if not num:
        return QPoly(num.universe)
    lead_mono = _lead_mono(den)
    if lead_mono is None:
        return None
    lead_inv = lead_mono.inv()
    rem = num
    out = QPoly(num.universe)
    guard = 4 * (num.term_count() + 1) * (den.term_count() + 1) + 16
    while rem:
        guard -= 1
        if guard < 0:
            return None
        rvec = rem.lead_vec()
        coeffs = rem.terms[rvec]
        (rqp, rhp), rc = sorted(coeffs.items())[0]
        rmono = QMono(rem.universe, rvec, rqp, rhp, rc)
        x = lead_inv * rmono
        out = out + QPoly.from_mono(x)
        rem = rem - den.mul_mono(x)
        if rem and rem.lead_vec() > rvec:
            return None
    return out


def right_divide(num, den):
    """X with X * den = num, or None."""
    if not num:
        return QPoly(num.universe)
    lead_mono = _lead_mono(den)
    if lead_mono is None:
        return None
    lead_inv = lead_mono.inv()
    rem = num
    out = QPoly(num.universe)
    guard = 4 * (num.term_count() + 1) * (den.term_count() + 1) + 16
    while rem:
        guard -= 1
        if guard < 0:
            return None
        rvec = rem.lead_vec()
        coeffs = rem.terms[rvec]
        (rqp, rhp), rc = sorted(coeffs.items())[0]
        rmono = QMono(rem.universe, rvec, rqp, rhp, rc)
        x = rmono * lead_inv
        out = out + QPoly.from_mono(x)
        rem = rem - den.mul_mono(x, side="left")
        if rem and rem.lead_vec() > rvec:
            return None
    return out


# ---------------------------------------------------------------------------
# expressions


class QExpr:
    __slots__ = ("kind", "args")

    def __init__(self, kind, args):
        self.kind = kind
        self.args = args

    def __repr__(self):
        return f"QExpr({self.kind})"


def mono_expr(m):
    return QExpr("mono", m)


def poly_expr(p):
    return QExpr("poly", p)


def sum_expr(parts):
    return QExpr("sum", tuple(parts))


def prod_expr(parts):
    return QExpr("prod", tuple(parts))


def inv_expr(e):
    return QExpr("inv", e)


def gen_expr(universe, kind, label, hat=False, power=1):
    return mono_expr(QMono(universe, universe.unit(kind, label, hat, power)))


def expr_support(e):
    out = set()

    def walk(x):
        if x.kind == "mono":
            u = x.args.universe
            for i, v in enumerate(x.args.vec):
                if v:
                    out.add(u.labels[(i % u.block) // 2])
        elif x.kind == "poly":
            u = x.args.universe
            for vec in x.args.terms:
                for i, v in enumerate(vec):
                    if v:
                        out.add(u.labels[(i % u.block) // 2])
        elif x.kind == "inv":
            walk(x.args)
        else:
            for y in x.args:
                walk(y)

    walk(e)
    return out


def expr_depth(e):
    if e.kind in ("mono", "poly"):
        return 1
    if e.kind == "inv":
        return 1 + expr_depth(e.args)
    return 1 + max((expr_depth(x) for x in e.args), default=0)


def try_poly(e):
    """Collapse to a QPoly when no genuine inverse blocks it."""
    if e.kind == "mono":
        return QPoly.from_mono(e.args)
    if e.kind == "poly":
        return e.args
    if e.kind == "sum":
        parts = [try_poly(x) for x in e.args]
        if any(p is None for p in parts):
            return None
        out = parts[0]
        for p in parts[1:]:
            out = out + p
        return out
    if e.kind == "prod":
        parts = [try_poly(x) for x in e.args]
        if any(p is None for p in parts):
            return None
        out = parts[0]
        for p in parts[1:]:
            out = out * p
        return out
    inner = try_poly(e.args)
    if inner is not None:
        m = inner.single_mono()
        if m is not None:
            return QPoly.from_mono(m.inv())
    return None


# -- flat forms -------------------------------------------------------------


class FlatForm:
    """Ordered product of polynomial factors (with +-1 exponents) and a
    trailing monomial."""

    __slots__ = ("factors", "tail")

    def __init__(self, factors, tail):
        self.factors = list(factors)
        self.tail = tail

    @classmethod
    def from_mono(cls, m):
        return cls([], m)

    def push_mono(self, m):
        """Multiply on the right by a monomial."""
        return FlatForm(self.factors, self.tail * m)

    def times(self, other):
        """self * other; the tail is pushed through by monomial conjugation."""
        factors = list(self.factors)
        t = self.tail
        for poly, e in other.factors:
            factors.append((conj_poly_by_mono(poly, t), e))
        return FlatForm(factors, t * other.tail)

    def inverse(self):
        inv_tail = self.tail.inv()
        factors = []
        for poly, e in reversed(self.factors):
            factors.append((conj_poly_by_mono(poly, self.tail), -e))
        return FlatForm(factors, inv_tail)


def conj_poly_by_mono(poly, m):
    """m^-1 * poly * m."""
    out = {}
    for t in poly.monomials():
        c = t.conjugated_by(m.vec)
        tgt = out.setdefault(c.vec, {})
        k = (c.qpow, c.hpow)
        s = tgt.get(k, 0) + c.coeff
        if s:
            tgt[k] = s
    return QPoly(poly.universe, out)


def flatten(e):
    """FlatForm of an expression, or None when a sum blocks it."""
    if e.kind == "mono":
        return FlatForm([], e.args)
    if e.kind == "poly":
        m = e.args.single_mono()
        if m is not None:
            return FlatForm([], m)
        if not e.args:
            return None
        u = e.args.universe
        return FlatForm([(e.args, 1)], QMono(u, u.zero_vec()))
    if e.kind == "sum":
        p = try_poly(e)
        if p is None:
            return None
        return flatten(poly_expr(p))
    if e.kind == "prod":
        out = None
        for part in e.args:
            f = flatten(part)
            if f is None:
                return None
            out = f if out is None else out.times(f)
        if out is None:
            u = universe_of(e)
            out = FlatForm([], QMono(u, u.zero_vec()))
        return out
    inner = flatten(e.args)
    if inner is None:
        return None
    return inner.inverse()


def universe_of(e):
    if e.kind == "mono":
        return e.args.universe
    if e.kind == "poly":
        return e.args.universe
    if e.kind == "inv":
        return universe_of(e.args)
    for x in e.args:
        u = universe_of(x)
        if u is not None:
            return u
    return None


def normalize_flat(flat, universe):
    """Canonical form: factors lead-normalized, monomials pushed into the tail.

    Each polynomial factor is split off its lex-leading monomial (right for
    positive exponents, left for inverted ones) so the remaining core has
    leading term one; the monomial is conjugated through the remaining
    factors and absorbed into the tail.  Adjacent inverse pairs cancel.
    """
    factors = [(p, e) for p, e in flat.factors]
    tail = flat.tail
    out = []
    i = 0
    while i < len(factors):
        poly, e = factors[i]
        m = poly.single_mono()
        if m is not None:
            core = None
        else:
            lead = poly.lead_vec()
            coeffs = poly.terms[lead]
            if len(coeffs) == 1:
                ((qp, hp), c), = coeffs.items()
                m = QMono(universe, lead, qp, hp, c)
                if e == 1:
                    core = poly.mul_mono(m.inv())          # poly * m^-1
                else:
                    core = poly.mul_mono(m.inv(), side="left")   # m^-1 * poly
            else:
                m = None
                core = poly
        if m is not None:
            carry = m if e == 1 else m.inv()
            if core is not None and core.term_count() > 1:
                out.append((core, e))
            # E = ... core . carry . REST . tail = ... core . (carry REST carry^-1) . carry tail
            inv_carry = carry.inv()
            for j in range(i + 1, len(factors)):
                pj, ej = factors[j]
                factors[j] = (conj_poly_by_mono(pj, inv_carry), ej)
            tail = carry * tail
        else:
            out.append((core, e))
        i += 1
    # cancel adjacent pairs whose quotient is trivial or a bare monomial
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            (p1, e1), (p2, e2) = out[i], out[i + 1]
            if e1 == -e2 and p1 == p2:
                del out[i:i + 2]
                changed = True
                break
            if e1 == e2 or not _monomial_quotient_possible(p1, p2):
                continue
            quo = None
            if e1 == -1 and e2 == 1:
                quo = left_divide(p1, p2)       # p1^-1 p2 = quo
            elif e1 == 1 and e2 == -1:
                quo = right_divide(p1, p2)      # p1 p2^-1 = quo
            if quo is not None:
                m = quo.single_mono()
                if m is not None:
                    # replace the pair by the monomial, pushed into the tail
                    rest = out[i + 2:]
                    inv_m = m.inv()
                    rest = [(conj_poly_by_mono(pj, inv_m), ej) for pj, ej in rest]
                    out[i:] = rest
                    tail = m * tail
                    changed = True
                    break
    return FlatForm(out, tail)


def _monomial_quotient_possible(p1, p2):
    """Cheap necessary condition for p1, p2 to differ by one monomial factor."""
    if p1.term_count() != p2.term_count() or len(p1.terms) != len(p2.terms):
        return False
    v1 = sorted(p1.terms)
    v2 = sorted(p2.terms)
    shift = tuple(a - b for a, b in zip(v2[0], v1[0]))
    return all(tuple(a - b for a, b in zip(x2, x1)) == shift
               for x1, x2 in zip(v1, v2))


def flat_equal_exact(f1, f2, universe):
    """Equality of canonical flat normal forms (sound, not complete)."""
    n1 = normalize_flat(f1, universe)
    n2 = normalize_flat(f2, universe)
    if len(n1.factors) != len(n2.factors):
        return None
    if n1.tail.key() != n2.tail.key():
        return None
    for (p1, e1), (p2, e2) in zip(n1.factors, n2.factors):
        if e1 != e2 or p1 != p2:
            return None
    return True


def decide_monomial_flat(flat, u, vec_hint=None, classical_fn=None):
    """Exact monomial value of a flat form, or None.

    First canonicalizes the flat form (telescoping cancellations); any
    remaining factor product is compared against the candidate monomial by
    a bidirectional exact-division chain.
    """
    flat = normalize_flat(flat, u)
    if not flat.factors:
        return flat.tail
    vec = vec_hint if vec_hint is not None else (
        classical_fn() if classical_fn else None)
    if vec is None:
        return None
    # product of the factors must equal mono(vec) * tail^-1
    target = QPoly.from_mono(QMono(u, vec) * flat.tail.inv())
    factors = list(flat.factors)
    a, b = 0, len(factors) - 1
    while a <= b:
        pa, ea = factors[a]
        pb, eb = factors[b]
        if ea == -1:
            target = pa * target
            a += 1
            continue
        if eb == -1:
            target = target * pb
            b -= 1
            continue
        quo = left_divide(pa, target)
        if quo is not None:
            target = quo
            a += 1
            continue
        quo = right_divide(target, pb)
        if quo is None:
            return None
        target = quo
        b -= 1
    m = target.single_mono()
    if m is None or any(m.vec) or m.coeff != 1:
        return None
    return QMono(u, vec, m.qpow, m.hpow)


def decide_monomial(e, classical_hint=None):
    """Exact monomial value of the expression, or None."""
    flat = flatten(e)
    if flat is None:
        return None
    u = universe_of(e)
    hint = classical_hint

    def hint_fn():
        return classical_monomial_vector(e)

    return decide_monomial_flat(flat, u, vec_hint=hint, classical_fn=hint_fn)


# ---------------------------------------------------------------------------
# classical specialization


def classical_ring(universe):
    names = []
    for lab in universe.labels:
        names.append(("y", lab))
        names.append(("z", lab))
    if universe.doubled:
        for lab in universe.labels:
            names.append(("yy", lab))
            names.append(("zz", lab))
    return PolyRing(tuple(names))


def classical_value(e, ring=None):
    """Commutative image with q, qhat -> 1, as a Factored rational."""
    u = universe_of(e)
    ring = ring or classical_ring(u)

    def mono_val(m):
        mono = [0] * len(ring.names)
        for i, v in enumerate(m.vec):
            if not v:
                continue
            hat = i >= u.block
            j = i % u.block
            lab = u.labels[j // 2]
            kind = ("zz" if hat else "z") if j % 2 == 0 else ("yy" if hat else "y")
            mono[ring.index[(kind, lab)]] = v
        return Factored(ring, m.coeff, mono, {})

    def walk(x):
        if x.kind == "mono":
            return mono_val(x.args)
        if x.kind == "poly":
            out = Factored.const_in(ring, 0)
            for m in x.args.monomials():
                out = out + mono_val(m)
            return out
        if x.kind == "sum":
            out = Factored.const_in(ring, 0)
            for y in x.args:
                out = out + walk(y)
            return out
        if x.kind == "prod":
            out = Factored.const_in(ring, 1)
            for y in x.args:
                out = out * walk(y)
            return out
        return walk(x.args).inv()

    return walk(e)


def classical_monomial_vector(e):
    u = universe_of(e)
    ring = classical_ring(u)
    val = classical_value(e, ring)
    if not val.is_monomial():
        return None
    mono, coeff = val.monomial_exponents()
    if coeff != 1:
        return None
    vec = [0] * u.dim
    for name, power in zip(ring.names, mono):
        if not power:
            continue
        kind, lab = name
        hat = kind in ("yy", "zz")
        vec[u.slot("p" if kind in ("z", "zz") else "q", lab, hat)] = power
    return tuple(vec)


# ---------------------------------------------------------------------------
# automorphism tables


def identity_aut(universe):
    table = {}
    for lab in universe.labels:
        for kind in ("y", "z"):
            table[(kind, lab)] = gen_expr(universe, "q" if kind == "y" else "p", lab)
            if universe.doubled:
                table[(kind + kind, lab)] = gen_expr(
                    universe, "q" if kind == "y" else "p", lab, hat=True)
    return table


def _image(universe, entries):
    """Poly from a list of (vec, qpow, hpow) monomial descriptions."""
    out = QPoly(universe)
    for vec, qp, hp in entries:
        out = out + QPoly.from_mono(QMono(universe, vec, Fraction(qp), Fraction(hp)))
    return out


def _vec(universe, hat, *pairs):
    v = [0] * universe.dim
    for kind, lab, power in pairs:
        v[universe.slot(kind, lab, hat)] += power
    return tuple(v)


def aut_dot_change(universe, s):
    """Conjugation table of the dot-change operator on label s."""
    table = identity_aut(universe)
    blocks = [(False, "y", "z")] + ([(True, "yy", "zz")] if universe.doubled else [])
    for hat, ykey, zkey in blocks:
        table[(ykey, s)] = mono_expr(QMono(universe, _vec(universe, hat, ("p", s, -1))))
        table[(zkey, s)] = mono_expr(
            QMono(universe, _vec(universe, hat, ("q", s, 1), ("p", s, -1))))
    return table


def aut_mutation(universe, r, s):
    table = identity_aut(universe)
    blocks = [(False, "y", "z")] + ([(True, "yy", "zz")] if universe.doubled else [])
    for hat, ykey, zkey in blocks:
        v = lambda *pairs: _vec(universe, hat, *pairs)
        table[(ykey, r)] = inv_expr(poly_expr(_image(universe, [
            (v(("p", s, 1)), 0, 0),
            (v(("q", r, -1), ("q", s, 1)), 0, 0),
        ])))
        table[(zkey, r)] = inv_expr(poly_expr(_image(universe, [
            (v(("q", r, 1), ("p", r, -1), ("q", s, -1), ("p", s, 1)), 0, 0),
            (v(("p", r, -1)), 0, 0),
        ])))
        table[(ykey, s)] = poly_expr(_image(universe, [
            (v(("q", r, 1), ("p", s, 1)), 0, 0),
            (v(("q", s, 1)), 0, 0),
        ]))
        table[(zkey, s)] = mono_expr(QMono(universe, v(("p", r, 1), ("p", s, 1))))
    return table


def aut_invisible_flip(universe, r, s):
    table = identity_aut(universe)
    blocks = [(False, "y", "z")] + ([(True, "yy", "zz")] if universe.doubled else [])
    for hat, ykey, zkey in blocks:
        v = lambda *pairs: _vec(universe, hat, *pairs)
        table[(zkey, r)] = mono_expr(QMono(universe, v(("p", r, 1), ("p", s, -1))))
        table[(ykey, s)] = mono_expr(QMono(universe, v(("q", r, 1), ("q", s, 1))))
    return table


def aut_relabel(universe, mapping):
    table = identity_aut(universe)
    inv = {b: a for a, b in mapping.items()}
    for lab in universe.labels:
        src = inv.get(lab, lab)
        table[("y", lab)] = gen_expr(universe, "q", src)
        table[("z", lab)] = gen_expr(universe, "p", src)
        if universe.doubled:
            table[("yy", lab)] = gen_expr(universe, "q", src, hat=True)
            table[("zz", lab)] = gen_expr(universe, "p", src, hat=True)
    return table


def subst_expr(e, table, universe, depth_budget=64):
    if depth_budget <= 0:
        raise DepthBudgetExceeded("substitution too deep")

    def mono_image(m):
        parts = []
        qshift = m.qpow
        hshift = m.hpow
        # Weyl form -> normal-ordered product with q adjustment
        for i in range(0, universe.dim, 2):
            a = m.vec[i]       # p exponent
            b = m.vec[i + 1]   # q exponent
            if not (a or b):
                continue
            hat = i >= universe.block
            lab = universe.labels[(i % universe.block) // 2]
            if hat:
                hshift -= Fraction(a * b)
            else:
                qshift -= Fraction(a * b)
            ykey = "yy" if hat else "y"
            zkey = "zz" if hat else "z"
            if b:
                img = table[(ykey, lab)]
                parts.append(img if b == 1 else
                             inv_expr(img) if b == -1 else _power_expr(img, b))
            if a:
                img = table[(zkey, lab)]
                parts.append(img if a == 1 else
                             inv_expr(img) if a == -1 else _power_expr(img, a))
        scalar = QMono(universe, universe.zero_vec(), qshift, hshift, m.coeff)
        if not parts:
            return mono_expr(scalar)
        if not scalar.is_identity():
            parts = [mono_expr(scalar)] + parts
        return prod_expr(parts) if len(parts) > 1 else parts[0]

    def walk(x):
        if x.kind == "mono":
            return mono_image(x.args)
        if x.kind == "poly":
            return sum_expr([mono_image(m) for m in x.args.monomials()])
        if x.kind == "sum":
            return sum_expr([walk(y) for y in x.args])
        if x.kind == "prod":
            return prod_expr([walk(y) for y in x.args])
        return inv_expr(walk(x.args))

    return walk(e)


def _power_expr(e, n):
    base = e if n > 0 else inv_expr(e)
    return prod_expr([base] * abs(n))


def compose(first, then, universe):
    """Table of 'apply first, then then' (conjugation by the product word)."""
    return {key: subst_expr(expr, then, universe) for key, expr in first.items()}


def compose_word(tables, universe):
    if not tables:
        return identity_aut(universe)
    total = tables[0]
    for t in tables[1:]:
        total = compose(total, t, universe)
    return total


# ---------------------------------------------------------------------------
# clock-and-shift models


def is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def default_prime(n_root, lower=30000):
    """Smallest prime p >= lower with p = 1 mod 4*n_root."""
    step = 4 * n_root
    p = ((lower - 2) // step + 1) * step + 1
    while not is_probable_prime(p):
        p += step
    return p


def _primitive_root_power(p, order):
    if (p - 1) % order:
        raise NoRootOfUnity(f"{p} has no element of order {order}")
    exp = (p - 1) // order
    for g in range(2, p):
        candidate = pow(g, exp, p)
        if candidate == 1:
            continue
        ok = True
        for q in _prime_factors(order):
            if pow(candidate, order // q, p) == 1:
                ok = False
                break
        if ok:
            return candidate
    raise NoRootOfUnity(f"no element of order {order} found mod {p}")


def _prime_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


class ClockShiftModel:
    """Seeded matrix model: one N-dimensional clock/shift slot per label."""

    def __init__(self, labels, n_dim, prime, seed, half_powers=True):
        self.labels = tuple(sorted(labels, key=repr))
        self.n = n_dim
        self.p = prime
        self.seed = seed
        order = 4 * n_dim if half_powers else 2 * n_dim
        self.root = _primitive_root_power(prime, order)   # rho, order 4N
        self.qval = self.root * self.root % prime         # q = rho^2, order 2N
        rng = np.random.default_rng(seed)
        self.scale_y = {}
        self.scale_z = {}
        for lab in self.labels:
            self.scale_y[lab] = int(rng.integers(1, prime))
            self.scale_z[lab] = int(rng.integers(1, prime))
        self.dim = n_dim ** len(self.labels)
        self._cache = {}
        # digit decomposition of the tensor index, slot 0 most significant
        k = len(self.labels)
        idx = np.arange(self.dim, dtype=np.int64)
        self._digits = [(idx // (n_dim ** (k - 1 - pos))) % n_dim
                        for pos in range(k)]
        omega = pow(self.qval, 2, prime)
        self._omega_pow = np.array([pow(omega, j, prime) for j in range(n_dim)],
                                   dtype=np.int64)

    def q_power(self, half_exponent):
        """rho^(2*nu) for nu in (1/2)Z."""
        e = Fraction(half_exponent) * 2
        if e.denominator != 1:
            raise NoRootOfUnity("q-power needs a finer root of unity")
        return pow(self.root, int(e) % (4 * self.n), self.p)

    def mono_action(self, mono):
        """Generalized-permutation action (targets, scales) of a Weyl monomial.

        Per slot, Y^b Z^a maps |i> to y^b z^a omega^{b(i+a)} |i+a>; models
        are built per sector, so both deformation slots feed one root.
        """
        u = mono.universe
        p = self.p
        scalar = self.q_power(mono.qpow + mono.hpow)
        scalar = scalar * (mono.coeff.numerator % p) % p
        scalar = scalar * pow(mono.coeff.denominator % p, p - 2, p) % p
        tgt = np.zeros(self.dim, dtype=np.int64)
        scales = np.full(self.dim, scalar, dtype=np.int64)
        k = len(self.labels)
        for pos, lab in enumerate(self.labels):
            a = mono.vec[u.slot("p", lab)]
            b = mono.vec[u.slot("q", lab)]
            scal = self.q_power(Fraction(-a * b))     # Weyl ordering twist
            if b:
                base = self.scale_y[lab] if b > 0 else pow(self.scale_y[lab], p - 2, p)
                scal = scal * pow(base, abs(b), p) % p
            if a:
                base = self.scale_z[lab] if a > 0 else pow(self.scale_z[lab], p - 2, p)
                scal = scal * pow(base, abs(a), p) % p
            digits = self._digits[pos]
            new_digits = (digits + a) % self.n
            tgt += new_digits * (self.n ** (k - 1 - pos))
            if b:
                scales = scales * self._omega_pow[(b * new_digits) % self.n] % p
            if scal != 1:
                scales = scales * scal % p
        return tgt, scales

    def mono_matrix(self, mono):
        tgt, scales = self.mono_action(mono)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        out[tgt, np.arange(self.dim)] = scales
        return out

    def eval_expr(self, e):
        if e.kind == "mono":
            key = ("m", e.args.key())
            if key not in self._cache:
                self._cache[key] = self.mono_matrix(e.args)
            return self._cache[key]
        if e.kind == "poly":
            key = ("p", e.args.key())
            if key not in self._cache:
                out = np.zeros((self.dim, self.dim), dtype=np.int64)
                cols = np.arange(self.dim)
                for m in e.args.monomials():
                    tgt, scales = self.mono_action(m)
                    np.add.at(out, (tgt, cols), scales)
                self._cache[key] = out % self.p
            return self._cache[key]
        if e.kind == "sum":
            out = np.zeros((self.dim, self.dim), dtype=np.int64)
            for y in e.args:
                out = (out + self.eval_expr(y)) % self.p
            return out
        if e.kind == "prod":
            out = None
            for y in e.args:
                m = self.eval_expr(y)
                out = m if out is None else kernels.matmul_mod(out, m, self.p)
            return out
        key = None
        if e.args.kind == "poly":
            key = ("ip", e.args.args.key())
            if key in self._cache:
                return self._cache[key]
        inner = self.eval_expr(e.args)
        inv = kernels.inv_mod(inner, self.p)
        if inv is None:
            raise SingularDenominator("denominator is singular in the model")
        if key is not None:
            self._cache[key] = inv
        return inv


# ---------------------------------------------------------------------------
# the equality oracle


@dataclass
class Verdict:
    status: str                 # EqualExact / EqualRandomized / NotEqual / Inconclusive
    strategy: str
    details: dict

    @property
    def equal(self):
        return self.status in ("EqualExact", "EqualRandomized")

    def as_record(self):
        return {"status": self.status, "strategy": self.strategy, **self.details}


class EqualityOptions:
    def __init__(self, n_dim=None, prime=None, seeds=(11, 12, 13),
                 dense_cap=2500, allowed_dims=(7, 5, 3, 2), strict=False):
        self.n_dim = n_dim
        self.prime = prime
        self.seeds = tuple(seeds)
        self.dense_cap = dense_cap
        self.allowed_dims = tuple(allowed_dims)
        self.strict = strict
        self.model_cache = {}

    def model_for(self, labels, n_dim, prime, seed):
        key = (tuple(labels), n_dim, prime, seed)
        if key not in self.model_cache:
            self.model_cache[key] = ClockShiftModel(labels, n_dim, prime, seed)
        return self.model_cache[key]


def expr_equal(e1, e2, opts=None):
    """Multi-strategy equality of two quantum-torus expressions."""
    opts = opts or EqualityOptions()
    u = universe_of(e1) or universe_of(e2)

    p1, p2 = try_poly(e1), try_poly(e2)
    if p1 is not None and p2 is not None:
        if p1 == p2:
            return Verdict("EqualExact", "poly-normal-form", {})
        return Verdict("NotEqual", "poly-normal-form", {"witness": "coefficients"})

    f1, f2 = flatten(e1), flatten(e2)
    if f1 is not None and f2 is not None:
        if flat_equal_exact(f1, f2, u):
            return Verdict("EqualExact", "flat-normal-form", {})

    m2 = decide_monomial(e2)
    if m2 is not None:
        m1 = decide_monomial(e1)
        if m1 is not None:
            if m1.key() == m2.key():
                return Verdict("EqualExact", "monomial-division", {})
            return Verdict("NotEqual", "monomial-division",
                           {"witness": (m1.key(), m2.key())})

    ring = classical_ring(u)
    c1 = classical_value(e1, ring)
    c2 = classical_value(e2, ring)
    if not c1 == c2:
        return Verdict("NotEqual", "classical-specialization", {})
    classical_ok = True
    if u.doubled:
        return Verdict("Inconclusive", "doubled-universe",
                       {"classical": classical_ok})

    # randomized clock-and-shift models
    support = sorted(expr_support(e1) | expr_support(e2), key=repr)
    if not support:
        support = list(u.labels[:1])
    n_dim = opts.n_dim
    if n_dim is None:
        for cand in opts.allowed_dims:
            if cand ** len(support) <= opts.dense_cap:
                n_dim = cand
                break
        else:
            return Verdict("Inconclusive", "support-too-large",
                           {"support": len(support), "classical": classical_ok})
    if n_dim ** len(support) > 4 * opts.dense_cap:
        return Verdict("Inconclusive", "model-too-large",
                       {"dim": n_dim ** len(support)})
    prime = opts.prime or default_prime(n_dim)
    sub = Universe(support, doubled=u.doubled)
    pe1 = _project_expr(e1, u, sub)
    pe2 = _project_expr(e2, u, sub)
    seeds_used = []
    for seed in opts.seeds:
        attempts = 0
        while True:
            model = opts.model_for(support, n_dim, prime, seed + 1000 * attempts)
            try:
                v1 = model.eval_expr(pe1)
                v2 = model.eval_expr(pe2)
                break
            except SingularDenominator:
                attempts += 1
                if attempts > 4:
                    return Verdict("Inconclusive", "singular-models",
                                   {"seed": seed})
        seeds_used.append(seed)
        if not np.array_equal(v1, v2):
            return Verdict("NotEqual", "clock-shift-model",
                           {"seed": seed, "dim": n_dim, "prime": prime})
    return Verdict("EqualRandomized", "clock-shift-model",
                   {"dim": n_dim, "prime": prime, "seeds": seeds_used,
                    "classical_corroborated": classical_ok})


def _project_expr(e, u_from, u_to):
    """Rebuild an expression over a sub-universe (plain block only)."""
    if u_from.doubled:
        raise ValueError("model evaluation works sector by sector")

    def proj_vec(vec):
        out = [0] * u_to.dim
        for i, v in enumerate(vec):
            if v:
                lab = u_from.labels[(i % u_from.block) // 2]
                kind = "p" if i % 2 == 0 else "q"
                out[u_to.slot(kind, lab)] = v
        return tuple(out)

    def walk(x):
        if x.kind == "mono":
            m = x.args
            return mono_expr(QMono(u_to, proj_vec(m.vec), m.qpow, m.hpow, m.coeff))
        if x.kind == "poly":
            out = QPoly(u_to)
            for m in x.args.monomials():
                out = out + QPoly.from_mono(
                    QMono(u_to, proj_vec(m.vec), m.qpow, m.hpow, m.coeff))
            return poly_expr(out)
        if x.kind == "sum":
            return sum_expr([walk(y) for y in x.args])
        if x.kind == "prod":
            return prod_expr([walk(y) for y in x.args])
        return inv_expr(walk(x.args))

    return walk(e)
