"""Exact coefficient arithmetic.

Three layers, each built on the previous one:

* ``BaseScalar`` -- elements a + b*w of the quadratic extension Q(w) where
  w^2 + w + 1 = 0 (so w is a primitive cube root of unity).  Plain rationals
  are the b = 0 slice.
* ``Poly`` -- sparse multivariate polynomials over ``BaseScalar`` in a fixed
  parameter alphabet, with graded-lexicographic monomial order.
* ``RatFunc`` -- the fraction field of ``Poly``, kept in a canonical form
  (gcd-reduced, monic denominator) so equality is a syntactic comparison.

``ScalarField`` bundles the parameter alphabet and the base-field kind and
provides constructors; all values are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping


class ScalarError(ValueError):
    pass


class ScalarDivisionError(ZeroDivisionError):
    """Division by a zero scalar; carries the offending expression."""

    def __init__(self, expression: str):
        super().__init__(f"division by zero scalar: {expression}")
        self.expression = expression


class SpecializationError(ScalarError):
    """A denominator vanished under a parameter assignment."""

    def __init__(self, expression: str, assignment: Mapping[str, "BaseScalar"]):
        shown = ", ".join(f"{k}={v}" for k, v in sorted(assignment.items()))
        super().__init__(f"denominator of {expression} vanishes at {{{shown}}}")
        self.expression = expression
        self.assignment = dict(assignment)


_F0 = Fraction(0)
_F1 = Fraction(1)


class BaseScalar:
    """a + b*w with w^2 + w + 1 = 0; a, b exact rationals."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", a if type(a) is Fraction else Fraction(a))
        object.__setattr__(self, "b", b if type(b) is Fraction else Fraction(b))

    def __setattr__(self, *_):
        raise AttributeError("BaseScalar is immutable")

    # -- predicates -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.a and not self.b

    def is_one(self) -> bool:
        return self.a == 1 and not self.b

    def is_rational(self) -> bool:
        return not self.b

    # -- arithmetic -------------------------------------------------
    def __add__(self, other: "BaseScalar") -> "BaseScalar":
        return BaseScalar(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "BaseScalar") -> "BaseScalar":
        return BaseScalar(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "BaseScalar":
        return BaseScalar(-self.a, -self.b)

    def __mul__(self, other: "BaseScalar") -> "BaseScalar":
        # (a + bw)(c + dw) = ac - bd + (ad + bc - bd)w  using w^2 = -1 - w
        a, b, c, d = self.a, self.b, other.a, other.b
        if not b and not d:
            return BaseScalar(a * c, _F0)
        bd = b * d
        return BaseScalar(a * c - bd, a * d + b * c - bd)

    def inverse(self) -> "BaseScalar":
        if self.is_zero():
            raise ScalarDivisionError("0")
        a, b = self.a, self.b
        if not b:
            return BaseScalar(1 / a, _F0)
        n = a * a - a * b + b * b  # norm (a + bw)(a + bw^2)
        return BaseScalar((a - b) / n, -b / n)

    def __truediv__(self, other: "BaseScalar") -> "BaseScalar":
        if other.is_zero():
            raise ScalarDivisionError(str(self) + " / 0")
        return self * other.inverse()

    def __pow__(self, n: int) -> "BaseScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / hashing ---------------------------------------
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BaseScalar)
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.a, self.b))

    def sort_key(self):
        return (self.a, self.b)

    def is_negative_lead(self) -> bool:
        """Display sign: used by printers to pull a minus out front."""
        return (self.a, self.b) < (_F0, _F0)

    def __repr__(self):
        return f"BaseScalar({self.a!r}, {self.b!r})"

    def __str__(self):
        a, b = self.a, self.b
        if not b:
            return str(a)
        if b == 1:
            wpart = "w"
        elif b == -1:
            wpart = "-w"
        else:
            wpart = f"{_frac_str(b)}*w"
        if not a:
            return wpart
        sign = " - " if wpart.startswith("-") else " + "
        return f"{a}{sign}{wpart.lstrip('-')}"


def _frac_str(f: Fraction) -> str:
    return str(f) if f.denominator == 1 else f"({f})"


ZERO = BaseScalar(0)
ONE = BaseScalar(1)
THETA = BaseScalar(0, 1)  # primitive cube root of unity


def base_from(value) -> BaseScalar:
    if isinstance(value, BaseScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return BaseScalar(value)
    if isinstance(value, str):
        return BaseScalar(Fraction(value))
    raise ScalarError(f"cannot coerce {value!r} to a base scalar")


# ---------------------------------------------------------------------------
# Sparse multivariate polynomials over BaseScalar
# ---------------------------------------------------------------------------

Exps = tuple  # exponent vector, one slot per parameter


def _grlex_key(exps: Exps):
    return (sum(exps), exps)


class Poly:
    """Sparse polynomial: exponent vector -> nonzero BaseScalar."""

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: tuple, terms: dict):
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    # -- constructors -----------------------------------------------
    @staticmethod
    def zero(params: tuple) -> "Poly":
        return Poly(params, {})

    @staticmethod
    def const(params: tuple, c: BaseScalar) -> "Poly":
        if c.is_zero():
            return Poly(params, {})
        return Poly(params, {(0,) * len(params): c})

    @staticmethod
    def var(params: tuple, name: str) -> "Poly":
        i = params.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(params)))
        return Poly(params, {exps: ONE})

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_one(self) -> bool:
        if len(self.terms) != 1:
            return False
        exps, c = next(iter(self.terms.items()))
        return not any(exps) and c.is_one()

    def constant_value(self) -> BaseScalar:
        if not self.terms:
            return ZERO
        return self.terms[(0,) * len(self.params)]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return Poly(self.params, out)

    def __neg__(self) -> "Poly":
        return Poly(self.params, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return Poly.zero(self.params)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                if s is None:
                    out[e] = c
                else:
                    s = s + c
                    if s.is_zero():
                        del out[e]
                    else:
                        out[e] = s
        return Poly(self.params, out)

    def scale(self, c: BaseScalar) -> "Poly":
        if c.is_zero():
            return Poly.zero(self.params)
        if c.is_one():
            return self
        return Poly(self.params, {e: k * c for e, k in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(self.params, ONE)
        for _ in range(n):
            out = out * self
        return out

    # -- structure ----------------------------------------------------
    def leading(self) -> tuple:
        """(exponent vector, coefficient) of the grlex-largest monomial."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def variables(self) -> list:
        """Indices of parameters that actually occur."""
        seen = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    seen.add(i)
        return sorted(seen)

    def degree_in(self, v: int) -> int:
        return max((e[v] for e in self.terms), default=0)

    def coeff_of_power(self, v: int, k: int) -> "Poly":
        """Coefficient of params[v]**k, as a polynomial with slot v zeroed."""
        out = {}
        for e, c in self.terms.items():
            if e[v] == k:
                out[e[:v] + (0,) + e[v + 1:]] = c
        return Poly(self.params, out)

    def mul_power(self, v: int, k: int) -> "Poly":
        if k == 0:
            return self
        return Poly(
            self.params,
            {e[:v] + (e[v] + k,) + e[v + 1:]: c for e, c in self.terms.items()},
        )

    def evaluate(self, assignment: Mapping[str, BaseScalar]) -> BaseScalar:
        missing = [self.params[i] for i in self.variables() if self.params[i] not in assignment]
        if missing:
            raise ScalarError(f"assignment missing parameters: {', '.join(missing)}")
        total = ZERO
        for e, c in self.terms.items():
            val = c
            for i, k in enumerate(e):
                if k:
                    val = val * (assignment[self.params[i]] ** k)
            total = total + val
        return total

    # -- comparison / printing -----------------------------------------
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.params == other.params
            and self.terms == other.terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.params, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def monomial_count(self) -> int:
        return len(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(self.params[i])
                elif k > 1:
                    factors.append(f"{self.params[i]}^{k}")
            mono = "*".join(factors)
            neg = c.is_negative_lead()
            cc = -c if neg else c
            if not mono:
                body = _coeff_str(cc)
            elif cc.is_one():
                body = mono
            else:
                body = f"{_coeff_str(cc)}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def _coeff_str(c: BaseScalar) -> str:
    """Print a BaseScalar so that it can re-enter a product unambiguously."""
    if c.is_rational():
        return _frac_str(c.a)
    if not c.a:
        if c.b == 1:
            return "w"
        return f"{_frac_str(c.b)}*w"
    return f"({c})"


# -- gcd machinery ----------------------------------------------------------


def _monic(f: Poly) -> Poly:
    if f.is_zero():
        return f
    _, lc = f.leading()
    return f if lc.is_one() else f.scale(lc.inverse())


def poly_divexact(f: Poly, g: Poly) -> Poly:
    """Exact division f / g; raises if g does not divide f."""
    if g.is_zero():
        raise ScalarDivisionError(str(f))
    params = f.params
    if len(g.terms) == 1:
        ge, gc = next(iter(g.terms.items()))
        gcinv = gc.inverse()
        out = {}
        for e, c in f.terms.items():
            diff = tuple(x - y for x, y in zip(e, ge))
            if any(d < 0 for d in diff):
                raise ScalarError(f"inexact polynomial division: {f} by {g}")
            out[diff] = c * gcinv
        return Poly(params, out)
    q = Poly.zero(params)
    r = f
    ge, gc = g.leading()
    gcinv = gc.inverse()
    while not r.is_zero():
        re, rc = r.leading()
        diff = tuple(x - y for x, y in zip(re, ge))
        if any(d < 0 for d in diff):
            raise ScalarError(f"inexact polynomial division: {f} by {g}")
        t = Poly(params, {diff: rc * gcinv})
        q = q + t
        r = r - t * g
    return q


def _content_and_coeffs(f: Poly, v: int) -> tuple:
    coeffs = {k: f.coeff_of_power(v, k) for k in range(f.degree_in(v) + 1)}
    coeffs = {k: c for k, c in coeffs.items() if not c.is_zero()}
    cont = reduce(poly_gcd, coeffs.values())
    return cont, coeffs


def _prem(f: Mapping[int, Poly], g: Mapping[int, Poly], v: int, params: tuple) -> Poly:
    """Pseudo-remainder of univariate views (coefficient dicts in variable v)."""

    def as_poly(u: Mapping[int, Poly]) -> Poly:
        out = Poly.zero(params)
        for k, c in u.items():
            out = out + c.mul_power(v, k)
        return out

    r = as_poly(f)
    dg = max(g)
    glead = g[dg]
    gp = as_poly(g)
    while not r.is_zero() and r.degree_in(v) >= dg:
        dr = r.degree_in(v)
        rlead = r.coeff_of_power(v, dr)
        r = r * glead - gp * rlead.mul_power(v, dr - dg)
    return r


def _monomial_gcd(f: Poly, g: Poly) -> Poly:
    """gcd when at least one operand is a single term."""
    mono = next(iter(f.terms)) if len(f.terms) == 1 else next(iter(g.terms))
    other = g if len(f.terms) == 1 else f
    exps = list(mono)
    for e in other.terms:
        exps = [min(a, b) for a, b in zip(exps, e)]
        if not any(exps):
            break
    return Poly(f.params, {tuple(exps): ONE})


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """gcd of multivariate polynomials over the base field, monic-normalized."""
    if f.is_zero():
        return _monic(g)
    if g.is_zero():
        return _monic(f)
    if f.is_constant() or g.is_constant():
        return Poly.const(f.params, ONE)
    if len(f.terms) == 1 or len(g.terms) == 1:
        return _monomial_gcd(f, g)
    if f.terms == g.terms:
        return _monic(f)
    vs = set(f.variables()) | set(g.variables())
    v = min(vs)
    cf, fc = _content_and_coeffs(f, v)
    cg, gc = _content_and_coeffs(g, v)
    c = poly_gcd(cf, cg)
    fp = {k: poly_divexact(p, cf) for k, p in fc.items()}
    gp = {k: poly_divexact(p, cg) for k, p in gc.items()}
    if max(fp) < max(gp):
        fp, gp = gp, fp
    while True:
        r = _prem(fp, gp, v, f.params)
        if r.is_zero():
            # gcd is primitive part of gp times the content gcd
            gpoly = Poly.zero(f.params)
            for k, p in gp.items():
                gpoly = gpoly + p.mul_power(v, k)
            cont, _ = _content_and_coeffs(gpoly, v)
            return _monic(c * poly_divexact(gpoly, cont))
        if r.degree_in(v) == 0:
            return _monic(c)
        cont, rc = _content_and_coeffs(r, v)
        fp, gp = gp, {k: poly_divexact(p, cont) for k, p in rc.items()}


# ---------------------------------------------------------------------------
# Fraction field
# ---------------------------------------------------------------------------


class RatFunc:
    """Canonical fraction num/den of polynomials: gcd-reduced, monic den."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly, _canonical: bool = False):
        if den.is_zero():
            raise ScalarDivisionError(str(num))
        if not _canonical:
            num, den = _reduce_fraction(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("RatFunc is immutable")

    @property
    def params(self) -> tuple:
        return self.num.params

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def constant_value(self) -> BaseScalar:
        if not self.is_constant():
            raise ScalarError(f"{self} is not constant")
        return self.num.constant_value()

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num + other.num, self.den, _canonical=True)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _canonical=True)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc(Poly.zero(self.params), _one_poly(self.params), _canonical=True)
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num * other.num, self.den, _canonical=True)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = self.num if g1.is_one() else poly_divexact(self.num, g1)
        d2 = other.den if g1.is_one() else poly_divexact(other.den, g1)
        n2 = other.num if g2.is_one() else poly_divexact(other.num, g2)
        d1 = self.den if g2.is_one() else poly_divexact(self.den, g2)
        num, den = n1 * n2, d1 * d2
        _, lc = den.leading()
        if not lc.is_one():
            inv = lc.inverse()
            num, den = num.scale(inv), den.scale(inv)
        return RatFunc(num, den, _canonical=True)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ScalarDivisionError("0")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ScalarDivisionError(str(self) + " / (" + str(other) + ")")
        return self * other.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        out = RatFunc(_one_poly(self.params), _one_poly(self.params), _canonical=True)
        for _ in range(n):
            out = out * self
        return out

    # -- specialization -------------------------------------------------
    def specialize(self, assignment: Mapping[str, BaseScalar]) -> BaseScalar:
        den = self.den.evaluate(assignment)
        if den.is_zero():
            raise SpecializationError(str(self), assignment)
        return self.num.evaluate(assignment) / den

    # -- comparison / printing -------------------------------------------
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def sign_split(self) -> tuple:
        """(is_negative, |self|) by the numerator's grlex-leading coefficient."""
        if self.is_zero():
            return False, self
        _, lc = self.num.leading()
        if lc.is_negative_lead():
            return True, -self
        return False, self

    def needs_parens_in_product(self) -> bool:
        if not self.den.is_one():
            return False  # printed as num/den which binds like a factor chain
        if self.num.monomial_count() > 1:
            return True
        _, lc = self.num.leading()
        return not lc.is_rational() and bool(lc.a)

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        num = str(self.num)
        if self.num.monomial_count() > 1:
            num = f"({num})"
        den = str(self.den)
        if self.den.monomial_count() > 1 or len(self.den.variables()) > 1 \
                or any(sum(e) > 1 for e in self.den.terms) \
                or not self.den.leading()[1].is_one():
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RatFunc({self})"


def _one_poly(params: tuple) -> Poly:
    return Poly.const(params, ONE)


def _reduce_fraction(num: Poly, den: Poly) -> tuple:
    if num.is_zero():
        return num, _one_poly(num.params)
    g = poly_gcd(num, den)
    if not g.is_one():
        num, den = poly_divexact(num, g), poly_divexact(den, g)
    _, lc = den.leading()
    if not lc.is_one():
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def specialize(s: RatFunc, assignment: Mapping[str, BaseScalar]) -> BaseScalar:
    """Evaluation homomorphism at a parameter assignment."""
    return s.specialize(assignment)


def is_zero(s: RatFunc) -> bool:
    return s.is_zero()


def canonical(s: RatFunc) -> RatFunc:
    """Re-run canonicalization (idempotent by construction)."""
    return RatFunc(s.num, s.den)


# ---------------------------------------------------------------------------
# Field context
# ---------------------------------------------------------------------------


class ScalarField:
    """Parameter alphabet plus base-field kind ('rational' or 'cyclotomic')."""

    __slots__ = ("params", "base", "_zero", "_one")

    def __init__(self, params: Iterable[str] = (), base: str = "cyclotomic"):
        params = tuple(params)
        if base not in ("rational", "cyclotomic"):
            raise ScalarError(f"unknown base field kind: {base}")
        if len(set(params)) != len(params):
            raise ScalarError("duplicate parameter names")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "_zero", RatFunc(Poly.zero(params), _one_poly(params), _canonical=True))
        object.__setattr__(self, "_one", RatFunc(_one_poly(params), _one_poly(params), _canonical=True))

    def __setattr__(self, *_):
        raise AttributeError("ScalarField is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, ScalarField)
            and self.params == other.params
            and self.base == other.base
        )

    def __hash__(self):
        return hash((self.params, self.base))

    def __repr__(self):
        return f"ScalarField(params={self.params}, base={self.base!r})"

    def zero(self) -> RatFunc:
        return self._zero

    def one(self) -> RatFunc:
        return self._one

    def from_base(self, c) -> RatFunc:
        c = base_from(c)
        if not c.is_rational() and self.base == "rational":
            raise ScalarError("cyclotomic value not allowed over a rational base field")
        return RatFunc(Poly.const(self.params, c), _one_poly(self.params), _canonical=True)

    def from_int(self, n: int) -> RatFunc:
        return self.from_base(BaseScalar(n))

    def theta(self) -> RatFunc:
        if self.base != "cyclotomic":
            raise ScalarError("w is only available over the cyclotomic base field")
        return self.from_base(THETA)

    def param(self, name: str) -> RatFunc:
        if name not in self.params:
            raise ScalarError(f"unknown parameter: {name}")
        p = Poly.var(self.params, name)
        return RatFunc(p, _one_poly(self.params), _canonical=True)

    def coerce(self, value) -> RatFunc:
        if isinstance(value, RatFunc):
            if value.params != self.params:
                raise ScalarError("parameter alphabet mismatch")
            return value
        return self.from_base(value)
