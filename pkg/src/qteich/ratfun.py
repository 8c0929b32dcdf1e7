"""Exact multivariate Laurent polynomials and rational functions over Q.

Polynomials are sparse dicts mapping integer exponent tuples to Fractions.
Rational functions are num/den pairs; equality is decided by cross
multiplication, never by gcd canonicalization.  Monomial content extraction
keeps intermediate objects small; full gcd reduction (via sympy) is an
optional knob used only when composing long substitution chains.
"""

from fractions import Fraction


class PolyRing:
    """A Laurent polynomial ring with a fixed ordered tuple of variable names."""

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.index = {v: i for i, v in enumerate(names)}
        self._zero_exp = (0,) * len(names)

    def __repr__(self):
        return f"PolyRing({','.join(map(str, self.names))})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def zero(self):
        return LaurentPoly(self, {})

    def one(self):
        return LaurentPoly(self, {self._zero_exp: Fraction(1)})

    def const(self, c):
        c = Fraction(c)
        return LaurentPoly(self, {self._zero_exp: c} if c else {})

    def gen(self, name, power=1):
        exp = [0] * len(self.names)
        exp[self.index[name]] = power
        return LaurentPoly(self, {tuple(exp): Fraction(1)})

    def monomial(self, exps, coeff=1):
        coeff = Fraction(coeff)
        exps = tuple(exps)
        if len(exps) != len(self.names):
            raise ValueError("exponent length mismatch")
        return LaurentPoly(self, {exps: coeff} if coeff else {})


class LaurentPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return isinstance(other, LaurentPoly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return LaurentPoly(self.ring, {e: k * c for e, k in self.terms.items()}) if c else self.ring.zero()
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RatFn")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def is_monomial(self):
        return len(self.terms) == 1

    def monomial_content(self):
        """(exps, coeff) with exps the componentwise min and coeff a positive
        rational making the cofactor primitive with integer coefficients."""
        if not self.terms:
            return self.ring._zero_exp, Fraction(1)
        exps = [min(e[i] for e in self.terms) for i in range(len(self.ring.names))]
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = _igcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // _igcd(den_lcm, c.denominator)
        return tuple(exps), Fraction(num_gcd, den_lcm)

    def shift(self, exps, scale=1):
        scale = Fraction(scale)
        return LaurentPoly(
            self.ring,
            {tuple(a + b for a, b in zip(e, exps)): c * scale for e, c in self.terms.items()},
        )

    def substitute(self, images):
        """Evaluate with each variable replaced by a RatFn from ``images``."""
        target = None
        for v in images.values():
            target = v.num.ring
            break
        if target is None:
            raise ValueError("empty substitution")
        out = RatFn.const_in(target, 0)
        for e, c in self.terms.items():
            term = RatFn.const_in(target, c)
            for name, power in zip(self.ring.names, e):
                if power:
                    term = term * images[name] ** power
            out = out + term
        return out

    def eval_fractions(self, point):
        """Exact evaluation at a dict name -> Fraction (all nonzero)."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for name, power in zip(self.ring.names, e):
                if power:
                    v *= point[name] ** power
            total += v
        return total

    def is_subtraction_free(self):
        signs = {c > 0 for c in self.terms.values()}
        return len(signs) <= 1

    def divide_exact(self, divisor):
        """Exact quotient self/divisor as a LaurentPoly, or None."""
        if not divisor:
            raise ZeroDivisionError("division by zero polynomial")
        if not self:
            return self.ring.zero()
        rem = dict(self.terms)
        lead_d = max(divisor.terms)
        lead_c = divisor.terms[lead_d]
        out = {}
        guard = len(self.terms) * len(divisor.terms) + len(self.terms) + 8
        while rem:
            guard -= 1
            if guard < 0:
                return None
            lead_r = max(rem)
            qe = tuple(a - b for a, b in zip(lead_r, lead_d))
            qc = rem[lead_r] / lead_c
            out[qe] = out.get(qe, 0) + qc
            for e, c in divisor.terms.items():
                te = tuple(a + b for a, b in zip(e, qe))
                s = rem.get(te, 0) - c * qc
                if s:
                    rem[te] = s
                else:
                    rem.pop(te, None)
        return LaurentPoly(self.ring, out)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{n}^{p}" if p != 1 else str(n)
                for n, p in zip(self.ring.names, e)
                if p
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a


class RatFn:
    """Rational function num/den with exact cross-multiplication equality."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if not den:
            raise ZeroDivisionError("zero denominator")
        # strip common monomial content to keep things small
        ne, nc = num.monomial_content()
        de, dc = den.monomial_content()
        exps = tuple(min(a, b) for a, b in zip(ne, de))
        scale = nc if nc < dc else dc
        if nc and scale != 1 or any(exps):
            inv = [-a for a in exps]
            num = num.shift(inv, 1 / scale if scale else 1)
            den = den.shift(inv, 1 / scale if scale else 1)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p):
        return cls(p, p.ring.one())

    @classmethod
    def const_in(cls, ring, c):
        return cls(ring.const(c), ring.one())

    @classmethod
    def gen(cls, ring, name, power=1):
        if power >= 0:
            return cls(ring.gen(name, power), ring.one())
        return cls(ring.one(), ring.gen(name, -power))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFn.const_in(self.num.ring, other)
        if not isinstance(other, RatFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RatFn is unhashable (equality is semantic)")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFn.const_in(self.num.ring, other)
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFn.const_in(self.num.ring, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFn.const_in(self.num.ring, other)
        return RatFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        return RatFn(self.den, self.num)

    def __pow__(self, n):
        if n < 0:
            return RatFn(self.den ** (-n), self.num ** (-n))
        return RatFn(self.num ** n, self.den ** n)

    def substitute(self, images):
        num = self.num.substitute(images)
        den = self.den.substitute(images)
        return num * den.inv()

    def is_monomial(self):
        return self.num.is_monomial() and self.den.is_monomial()

    def monomial_exponents(self):
        """Exponent vector and coefficient, assuming self is a monomial."""
        if not self.is_monomial():
            raise ValueError("not a monomial")
        (ne, nc), = self.num.terms.items()
        (de, dc), = self.den.terms.items()
        return tuple(a - b for a, b in zip(ne, de)), nc / dc

    def is_positive(self):
        """Subtraction-free after sign normalization of both layers."""
        num, den = self.num, self.den
        if not num:
            return True
        ns = num.is_subtraction_free()
        ds = den.is_subtraction_free()
        return ns and ds

    def eval_fractions(self, point):
        d = self.den.eval_fractions(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanished at sample point")
        return self.num.eval_fractions(point) / d

    def reduced(self):
        """GCD-reduced copy (sympy-backed); optional, used to tame long chains."""
        if self.num.is_monomial() or self.den.is_monomial() or not self.num:
            return self
        import sympy

        ring = self.num.ring
        syms = sympy.symbols(" ".join(f"v{i}" for i in range(len(ring.names))))
        if len(ring.names) == 1:
            syms = (syms,)

        def lift(p):
            expr = sympy.Integer(0)
            for e, c in p.terms.items():
                t = sympy.Rational(c.numerator, c.denominator)
                for s, k in zip(syms, e):
                    if k:
                        t *= s ** k
                expr += t
            return expr

        # clear Laurent content first so both parts are genuine polynomials
        ne, _ = self.num.monomial_content()
        de, _ = self.den.monomial_content()
        shift = [-min(a, b, 0) for a, b in zip(ne, de)]
        num = lift(self.num.shift(tuple(shift)))
        den = lift(self.den.shift(tuple(shift)))
        g = sympy.gcd(sympy.Poly(num, *syms), sympy.Poly(den, *syms))
        num_r = sympy.Poly(num, *syms).div(g)[0]
        den_r = sympy.Poly(den, *syms).div(g)[0]

        def lower(poly):
            out = {}
            for mono, coeff in poly.terms():
                q = Fraction(int(coeff.numerator if hasattr(coeff, "numerator") else coeff),
                             int(coeff.denominator if hasattr(coeff, "denominator") else 1))
                out[tuple(int(m) for m in mono)] = q
            return LaurentPoly(ring, out)

        return RatFn(lower(num_r), lower(den_r))

    def sorted_terms(self):
        return self.num.sorted_terms(), self.den.sorted_terms()

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


def _primitive_key(poly):
    """(key, mono_exps, content) with key a canonical primitive factor.

    The factor is shifted to zero minimum exponents, scaled to integer
    coefficients with content one, and signed so the lex-largest term is
    positive.  Returns None key for monomials (they carry no factor).
    """
    exps, content = poly.monomial_content()
    core = poly.shift(tuple(-e for e in exps), 1 / content)
    if max(core.terms) != tuple(0 for _ in exps) and core.terms[max(core.terms)] < 0:
        core = -core
        content = -content
    if core.terms[max(core.terms)] < 0:
        core = -core
        content = -content
    if len(core.terms) == 1:
        ((e, c),) = core.terms.items()
        return None, tuple(a + b for a, b in zip(exps, e)), content * c
    return tuple(sorted(core.terms.items())), tuple(exps), content


class Factored:
    """Rational function kept as coeff * monomial * prod(factor^exp).

    Factors are canonical primitive polynomials; equal polynomials share a
    key, so the factor cancellations driving cluster-style substitution
    chains happen syntactically.  Addition expands only the non-common part
    and peels known factors off the sum by trial division.
    """

    __slots__ = ("ring", "coeff", "mono", "factors")

    def __init__(self, ring, coeff, mono, factors):
        self.ring = ring
        self.coeff = Fraction(coeff)
        self.mono = tuple(mono)
        self.factors = {k: e for k, e in factors.items() if e}
        if not self.coeff:
            self.mono = ring._zero_exp
            self.factors = {}

    @classmethod
    def const_in(cls, ring, c):
        return cls(ring, c, ring._zero_exp, {})

    @classmethod
    def gen(cls, ring, name, power=1):
        exp = [0] * len(ring.names)
        exp[ring.index[name]] = power
        return cls(ring, 1, exp, {})

    @classmethod
    def from_poly(cls, poly):
        if not poly:
            return cls.const_in(poly.ring, 0)
        key, mono, content = _primitive_key(poly)
        factors = {} if key is None else {key: 1}
        return cls(poly.ring, content, mono, factors)

    def _factor_poly(self, key):
        return LaurentPoly(self.ring, dict(key))

    def expand_pair(self):
        """(num, den) LaurentPolys with den having positive factor exponents."""
        num = self.ring.monomial(
            tuple(max(e, 0) for e in self.mono), self.coeff.numerator)
        den = self.ring.monomial(
            tuple(max(-e, 0) for e in self.mono), self.coeff.denominator)
        for k, e in self.factors.items():
            p = self._factor_poly(k)
            if e > 0:
                for _ in range(e):
                    num = num * p
            else:
                for _ in range(-e):
                    den = den * p
        return num, den

    def to_ratfn(self):
        num, den = self.expand_pair()
        return RatFn(num, den)

    def __bool__(self):
        return bool(self.coeff)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Factored.const_in(self.ring, other)
        if not isinstance(other, Factored):
            return NotImplemented
        quot = self * other.inv() if other else None
        if other and not quot.factors:
            return quot.coeff == 1 and not any(quot.mono)
        n1, d1 = self.expand_pair()
        n2, d2 = other.expand_pair()
        return n1 * d2 == n2 * d1

    def __hash__(self):
        raise TypeError("Factored is unhashable")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Factored.const_in(self.ring, other)
        if not self.coeff or not other.coeff:
            return Factored.const_in(self.ring, 0)
        factors = dict(self.factors)
        for k, e in other.factors.items():
            factors[k] = factors.get(k, 0) + e
        return Factored(self.ring, self.coeff * other.coeff,
                        tuple(a + b for a, b in zip(self.mono, other.mono)),
                        factors)

    __rmul__ = __mul__

    def inv(self):
        if not self.coeff:
            raise ZeroDivisionError("inverting zero")
        return Factored(self.ring, 1 / self.coeff,
                        tuple(-a for a in self.mono),
                        {k: -e for k, e in self.factors.items()})

    def __pow__(self, n):
        if n == 0:
            return Factored.const_in(self.ring, 1)
        base = self if n > 0 else self.inv()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def __neg__(self):
        return Factored(self.ring, -self.coeff, self.mono, self.factors)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Factored.const_in(self.ring, other)
        if not other.coeff:
            return self
        if not self.coeff:
            return other
        keys = set(self.factors) | set(other.factors)
        common = {k: min(self.factors.get(k, 0), other.factors.get(k, 0))
                  for k in keys}
        common = {k: e for k, e in common.items() if e}
        cmono = tuple(min(a, b) for a, b in zip(self.mono, other.mono))
        ccoeff = Fraction(_igcd(self.coeff.numerator, other.coeff.numerator),
                          _ilcm(self.coeff.denominator, other.coeff.denominator))
        base = Factored(self.ring, ccoeff, cmono, common)
        red_a = self * base.inv()
        red_b = other * base.inv()
        pa, da = red_a.expand_pair()
        pb, db = red_b.expand_pair()
        if len(da.terms) != 1 or len(db.terms) != 1:
            # only monomial denominators can remain after removing commons
            num = pa * db + pb * da
            den = da * db
            return (base * Factored.from_poly(num)
                    * Factored.from_poly(den).inv())
        s = pa * db + pb * da
        if not s:
            return Factored.const_in(self.ring, 0)
        den_mono = Factored.from_poly(da * db).inv()
        parts = Factored.const_in(self.ring, 1)
        for k in keys:
            p = self._factor_poly(k)
            while True:
                q = s.divide_exact(p)
                if q is None:
                    break
                s = q
                parts = parts * Factored(self.ring, 1, self.ring._zero_exp, {k: 1})
        return base * den_mono * parts * Factored.from_poly(s)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Factored.const_in(self.ring, other)
        return self + (-other)

    def substitute(self, images):
        target = next(iter(images.values())).ring
        out = Factored.const_in(target, self.coeff)
        for name, power in zip(self.ring.names, self.mono):
            if power:
                out = out * images[name] ** power
        for k, e in self.factors.items():
            poly = self._factor_poly(k)
            val = Factored.const_in(target, 0)
            for exps, c in poly.terms.items():
                term = Factored.const_in(target, c)
                for name, power in zip(self.ring.names, exps):
                    if power:
                        term = term * images[name] ** power
                val = val + term
            out = out * val ** (1 if e > 0 else -1) if abs(e) == 1 else out * val ** e
        return out

    def is_monomial(self):
        return not self.factors

    def monomial_exponents(self):
        if self.factors:
            raise ValueError("not a monomial")
        return self.mono, self.coeff

    def __repr__(self):
        bits = [str(self.coeff)]
        for n, e in zip(self.ring.names, self.mono):
            if e:
                bits.append(f"{n}^{e}")
        for k, e in self.factors.items():
            bits.append(f"({self._factor_poly(k)!r})^{e}")
        return " * ".join(bits)


def _ilcm(a, b):
    return a * b // _igcd(a, b)
