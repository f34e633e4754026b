"""First-order and higher differential calculus with linear twists.

The bimodule structure is a * dg = dg * nu_g(a) for one automorphism nu_g
per generator.  The differential acts on a word by the Leibniz expansion,
pushing every left factor through its dg via nu; coefficients live on the
right and are kept in quotient normal form.

Wedge commutation scalars are not an independent input: for diagonal tables
they are derived by differentiating the bimodule relation
g_j * dg_i = dg_i * c_ij g_j, which forces dg_j ^ dg_i = -c_ij dg_i ^ dg_j,
and dg ^ dg = 0 is imposed.  Non-diagonal tables are supported for degree-1
operations only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .freealg import AlgebraElement, AlgebraError, FreeAlgebra, Presentation
from .quotient import GradedBasis, build_graded_basis
from .scalars import RatFunc


class CalculusError(AlgebraError):
    pass


class AutomorphismTable:
    """Per generator g_i, a degree-1 linear map nu_i(g_j) = sum_k m[i][j][k] g_k."""

    __slots__ = ("algebra", "maps", "_diag")

    def __init__(self, algebra: FreeAlgebra, maps):
        maps = tuple(tuple(tuple(row) for row in m) for m in maps)
        n = algebra.ngens
        if len(maps) != n or any(
            len(m) != n or any(len(r) != n for r in m) for m in maps
        ):
            raise CalculusError("automorphism table has wrong shape")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "maps", maps)
        diag = all(
            maps[i][j][k].is_zero()
            for i in range(n)
            for j in range(n)
            for k in range(n)
            if j != k
        )
        object.__setattr__(self, "_diag", diag)

    def __setattr__(self, *_):
        raise AttributeError("AutomorphismTable is immutable")

    @classmethod
    def diagonal(cls, algebra: FreeAlgebra, c) -> "AutomorphismTable":
        """Build from the scalar grid c[i][j] with nu_i(g_j) = c[i][j] g_j."""
        n = algebra.ngens
        zero = algebra.field.zero()
        maps = [
            [[c[i][j] if j == k else zero for k in range(n)] for j in range(n)]
            for i in range(n)
        ]
        return cls(algebra, maps)

    @classmethod
    def identity(cls, algebra: FreeAlgebra) -> "AutomorphismTable":
        one = algebra.field.one()
        n = algebra.ngens
        return cls.diagonal(algebra, [[one] * n for _ in range(n)])

    @property
    def is_diagonal(self) -> bool:
        return self._diag

    def c(self, i: int, j: int) -> RatFunc:
        """Diagonal scalar of nu_i on g_j."""
        if not self._diag:
            raise CalculusError("table is not diagonal")
        return self.maps[i][j][j]

    def gen_image(self, i: int, j: int) -> AlgebraElement:
        alg = self.algebra
        return alg.element([(self.maps[i][j][k], (k,)) for k in range(alg.ngens)])

    def determinant(self, i: int) -> RatFunc:
        """Determinant of nu_i's matrix (it must be nonzero for a twist)."""
        from itertools import permutations

        n = self.algebra.ngens
        m = self.maps[i]
        total = self.algebra.field.zero()
        for perm in permutations(range(n)):
            inversions = sum(
                1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b]
            )
            term = self.algebra.field.one()
            for j in range(n):
                term = term * m[j][perm[j]]
            total = total + term if inversions % 2 == 0 else total - term
        return total

    def invertible(self) -> bool:
        return all(
            not self.determinant(i).is_zero() for i in range(self.algebra.ngens)
        )

    def apply(self, i: int, a: AlgebraElement) -> AlgebraElement:
        """The algebra endomorphism nu_i on a free-algebra element."""
        alg = self.algebra
        if self._diag:
            out: dict = {}
            for word, coeff in a.terms.items():
                s = coeff
                for letter in word:
                    s = s * self.maps[i][letter][letter]
                if not s.is_zero():
                    out[word] = s
            return AlgebraElement(alg, out)
        total = alg.zero()
        for word, coeff in a.terms.items():
            img = alg.one()
            for letter in word:
                img = img * self.gen_image(i, letter)
            total = total + img.scale(coeff)
        return total

    def apply_sequence(self, letters: Sequence[int], a: AlgebraElement) -> AlgebraElement:
        for i in letters:
            a = self.apply(i, a)
        return a

    def assumptions(self) -> tuple:
        """Nonvanishing conditions implied by the table's denominators."""
        seen = set()
        for m in self.maps:
            for row in m:
                for entry in row:
                    if not entry.den.is_one():
                        seen.add(f"{entry.den} != 0")
        return tuple(sorted(seen))

    def entries_repr(self) -> list:
        alg = self.algebra
        out = []
        for i in range(alg.ngens):
            for j in range(alg.ngens):
                img = self.gen_image(i, j)
                out.append((alg.gens[i], alg.gens[j], str(img)))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, AutomorphismTable)
            and self.algebra == other.algebra
            and self.maps == other.maps
        )

    def __hash__(self):
        return hash((self.algebra, self.maps))

    def __repr__(self):
        rows = ", ".join(f"nu[{g}]" for g in self.algebra.gens)
        return f"AutomorphismTable({rows})"


def sklyanin3_table(pres: Presentation) -> AutomorphismTable:
    """The diagonal twist family for the three-generator Sklyanin presentation.

    nu_x = diag(-1, -p/q, -q/p), nu_y = diag(-q/p, -1, -p/q),
    nu_z = diag(-p/q, -q/p, -1).  Needs p and q invertible.
    """
    if pres.family != "sklyanin3":
        raise CalculusError("preset table only exists for the sklyanin3 family")
    f = pres.field
    if pres.family_values is None:
        p, q = f.param("p"), f.param("q")
    else:
        p, q, _ = pres.family_values
        if p.is_zero() or q.is_zero():
            raise CalculusError(
                "the family twist table needs p != 0 and q != 0"
            )
    one = f.one()
    pq = p / q
    qp = q / p
    c = [
        [-one, -pq, -qp],
        [-qp, -one, -pq],
        [-pq, -qp, -one],
    ]
    return AutomorphismTable.diagonal(pres.algebra, c)


# ---------------------------------------------------------------------------
# Forms
# ---------------------------------------------------------------------------


class FormElement:
    """Degree-k form: strictly increasing wedge word -> right coefficient."""

    __slots__ = ("alg", "degree", "terms")

    def __init__(self, alg: FreeAlgebra, degree: int, terms: dict):
        for w in terms:
            if len(w) != degree or any(a >= b for a, b in zip(w, w[1:])):
                raise CalculusError(f"bad wedge word {w} for degree {degree}")
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *_):
        raise AttributeError("FormElement is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, wedge) -> AlgebraElement:
        return self.terms.get(tuple(wedge), self.alg.zero())

    def __add__(self, other: "FormElement") -> "FormElement":
        if self.alg != other.alg or self.degree != other.degree:
            raise CalculusError("form degree or algebra mismatch")
        out = dict(self.terms)
        for w, a in other.terms.items():
            s = out.get(w)
            s = a if s is None else s + a
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return FormElement(self.alg, self.degree, out)

    def __neg__(self) -> "FormElement":
        return FormElement(
            self.alg, self.degree, {w: -a for w, a in self.terms.items()}
        )

    def __sub__(self, other: "FormElement") -> "FormElement":
        return self + (-other)

    def __eq__(self, other):
        return (
            isinstance(other, FormElement)
            and self.alg == other.alg
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.alg, self.degree, frozenset(self.terms.items())))

    def wedge_str(self, w) -> str:
        return "^".join(f"d{self.alg.gens[i]}" for i in w)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            a = self.terms[w]
            parts.append(f"{self.wedge_str(w)}*({a})")
        return " + ".join(parts)

    def __repr__(self):
        return f"FormElement({self})"


@dataclass(frozen=True)
class VolumeForm:
    """Top wedge word with its composite push-through automorphism."""

    word: tuple
    nu_scalars: tuple  # per generator j: scalar of nu_omega on g_j (diagonal)


class Calculus:
    """A presentation, a twist table and a truncation, with d and wedge."""

    def __init__(
        self,
        pres: Presentation,
        table: AutomorphismTable,
        basis: Optional[GradedBasis] = None,
        max_degree: int = 6,
    ):
        if table.algebra != pres.algebra:
            raise CalculusError("table and presentation over different algebras")
        self.pres = pres
        self.table = table
        self.basis = basis if basis is not None else build_graded_basis(pres, max_degree)
        self.alg = pres.algebra

    # -- elementary pieces ---------------------------------------------
    def zero_form(self, degree: int) -> FormElement:
        return FormElement(self.alg, degree, {})

    def gen_form(self, i: int) -> FormElement:
        return FormElement(self.alg, 1, {(i,): self.alg.one()})

    def form_term(self, wedge, coeff: AlgebraElement) -> FormElement:
        """Build coeff on an arbitrary wedge word, sorting it into the basis."""
        sorted_w, scal = self.sort_wedge(tuple(wedge))
        if sorted_w is None or coeff.is_zero():
            return self.zero_form(len(wedge))
        nf = self.basis.normal_form(coeff.scale(scal))
        if nf.is_zero():
            return self.zero_form(len(wedge))
        return FormElement(self.alg, len(wedge), {sorted_w: nf})

    def push_left_coefficient(self, a: AlgebraElement, wedge) -> AlgebraElement:
        """nu_w(a) for a wedge word w, so that a * w = w * nu_w(a)."""
        out = self.table.apply_sequence(tuple(wedge), a)
        return self.basis.normal_form(out)

    def commutation_scalar(self, j: int, i: int) -> RatFunc:
        """Scalar s in dg_j ^ dg_i = s * dg_i ^ dg_j, derived from the table."""
        if j == i:
            raise CalculusError("no commutation scalar for equal letters")
        return -self.table.c(i, j)

    def sort_wedge(self, word: tuple):
        """(sorted strict word, scalar) or (None, _) when a letter repeats."""
        letters = list(word)
        scal = self.alg.field.one()
        for a in range(1, len(letters)):
            b = a
            while b > 0 and letters[b - 1] > letters[b]:
                scal = scal * self.commutation_scalar(letters[b - 1], letters[b])
                letters[b - 1], letters[b] = letters[b], letters[b - 1]
                b -= 1
        for a, b in zip(letters, letters[1:]):
            if a == b:
                return None, scal
        return tuple(letters), scal

    # -- differential ----------------------------------------------------
    def differential(self, a: AlgebraElement) -> FormElement:
        """d(a) as a 1-form: word-by-word Leibniz with left factors pushed."""
        alg = self.alg
        acc: dict = {}
        for word, coeff in a.terms.items():
            for pos, letter in enumerate(word):
                prefix = AlgebraElement(alg, {word[:pos]: coeff})
                pushed = self.table.apply(letter, prefix)
                contrib = pushed * alg.word(word[pos + 1:])
                key = (letter,)
                s = acc.get(key)
                acc[key] = contrib if s is None else s + contrib
        out: dict = {}
        for key, val in acc.items():
            nf = self.basis.normal_form(val)
            if not nf.is_zero():
                out[key] = nf
        return FormElement(alg, 1, out)

    def partial(self, a: AlgebraElement, i: int) -> AlgebraElement:
        return self.differential(a).coefficient((i,))

    def d_form(self, psi: FormElement) -> FormElement:
        """Extension of d to forms: d(w * a) = (-1)^deg(w) w ^ d(a)."""
        sign = -1 if psi.degree % 2 else 1
        acc: dict = {}
        for w, a in psi.terms.items():
            da = self.differential(a)
            for (i,), b in da.terms.items():
                sorted_w, scal = self.sort_wedge(w + (i,))
                if sorted_w is None:
                    continue
                contrib = b.scale(scal if sign > 0 else -scal)
                s = acc.get(sorted_w)
                acc[sorted_w] = contrib if s is None else s + contrib
        out = {}
        for w, val in acc.items():
            nf = self.basis.normal_form(val)
            if not nf.is_zero():
                out[w] = nf
        return FormElement(self.alg, psi.degree + 1, out)

    # -- wedge product ----------------------------------------------------
    def wedge(self, u: FormElement, v: FormElement) -> FormElement:
        """(w1 a) ^ (w2 b) = (w1 ^ w2) nu_{w2}(a) b, wedge words sorted."""
        acc: dict = {}
        for w1, a in u.terms.items():
            for w2, b in v.terms.items():
                sorted_w, scal = self.sort_wedge(w1 + w2)
                if sorted_w is None:
                    continue
                pushed = self.table.apply_sequence(w2, a)
                contrib = (pushed * b).scale(scal)
                s = acc.get(sorted_w)
                acc[sorted_w] = contrib if s is None else s + contrib
        out = {}
        for w, val in acc.items():
            nf = self.basis.normal_form(val)
            if not nf.is_zero():
                out[w] = nf
        return FormElement(self.alg, u.degree + v.degree, out)

    def rmul(self, psi: FormElement, a: AlgebraElement) -> FormElement:
        """Right action: (w c) * a = w (c a)."""
        out = {}
        for w, c in psi.terms.items():
            nf = self.basis.normal_form(c * a)
            if not nf.is_zero():
                out[w] = nf
        return FormElement(self.alg, psi.degree, out)

    def lmul(self, a: AlgebraElement, psi: FormElement) -> FormElement:
        """Left action through the twists: a * (w c) = w (nu_w(a) c)."""
        out = {}
        for w, c in psi.terms.items():
            pushed = self.table.apply_sequence(w, a)
            nf = self.basis.normal_form(pushed * c)
            if not nf.is_zero():
                out[w] = nf
        return FormElement(self.alg, psi.degree, out)

    # -- volume form --------------------------------------------------------
    def volume_form(self) -> VolumeForm:
        if not self.table.is_diagonal:
            raise CalculusError("volume form needs a diagonal table")
        n = self.alg.ngens
        word = tuple(range(n))
        scalars = []
        for j in range(n):
            s = self.alg.field.one()
            for i in word:
                s = s * self.table.c(i, j)
            scalars.append(s)
        return VolumeForm(word=word, nu_scalars=tuple(scalars))

    def nu_omega(self, a: AlgebraElement) -> AlgebraElement:
        vol = self.volume_form()
        return self.basis.normal_form(self.table.apply_sequence(vol.word, a))

    def nu_omega_inverse(self, a: AlgebraElement) -> AlgebraElement:
        vol = self.volume_form()
        out: dict = {}
        for word, coeff in a.terms.items():
            s = coeff
            for letter in word:
                s = s / vol.nu_scalars[letter]
            if not s.is_zero():
                out[word] = s
        return self.basis.normal_form(AlgebraElement(self.alg, out))

    def volume_pi(self, psi: FormElement) -> AlgebraElement:
        """pi_omega: the unique a with psi = omega a (top degree)."""
        n = self.alg.ngens
        if psi.degree != n:
            raise CalculusError("volume projection needs a top-degree form")
        return psi.coefficient(tuple(range(n)))


# ---------------------------------------------------------------------------
# Closed-form partial candidates for ordered monomials (3-generator family)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialsResult:
    """Leibniz-expansion partials, with closed-form candidates when defined.

    ``closed_form`` holds textbook-style candidate values for ordered
    monomials x^k y^l z^s; ``discrepant`` marks coordinates where they
    disagree with the ground-truth Leibniz expansion.
    """

    computed: tuple
    closed_form: Optional[tuple]
    discrepant: Optional[tuple]


def ordered_monomial_exponents(word: tuple, ngens: int) -> Optional[tuple]:
    """(k, l, s, ...) when the word is an ordered monomial, else None."""
    counts = [0] * ngens
    for a, b in zip(word, word[1:]):
        if a > b:
            return None
    for letter in word:
        counts[letter] += 1
    return tuple(counts)


def closed_form_partials(calc: Calculus, word: tuple) -> Optional[tuple]:
    """Candidate partials of x^k y^l z^s for the three-generator family.

    These are the commonly quoted closed forms
      d_x = (-1)^k k x^(k-1) y^l z^s,
      d_y = (-1)^(k+l) l p^(-k) x^k y^(l-1) z^s,
      d_z = (-1)^(k+l+s) s p^(k-l) q^(-k) x^k y^l z^(s-1);
    the Leibniz expansion is the ground truth and disagreements are flagged
    by the caller, starting already at d_x(x).
    """
    pres = calc.pres
    if pres.family != "sklyanin3" or pres.algebra.ngens != 3:
        return None
    exps = ordered_monomial_exponents(word, 3)
    if exps is None:
        return None
    k, l, s = exps
    f = pres.field
    if pres.family_values is None:
        p, q = f.param("p"), f.param("q")
    else:
        p, q, _ = pres.family_values
        if p.is_zero() or q.is_zero():
            return None
    alg = pres.algebra
    minus_one = -f.one()

    def monomial(ek: int, el: int, es: int) -> tuple:
        return (0,) * ek + (1,) * el + (2,) * es

    out = []
    if k == 0:
        out.append(alg.zero())
    else:
        c = (minus_one ** k) * f.from_int(k)
        out.append(alg.word(monomial(k - 1, l, s), c))
    if l == 0:
        out.append(alg.zero())
    else:
        c = (minus_one ** (k + l)) * f.from_int(l) * p ** (-k)
        out.append(alg.word(monomial(k, l - 1, s), c))
    if s == 0:
        out.append(alg.zero())
    else:
        c = (minus_one ** (k + l + s)) * f.from_int(s) * p ** (k - l) * q ** (-k)
        out.append(alg.word(monomial(k, l, s - 1), c))
    return tuple(out)


def partials(calc: Calculus, a: AlgebraElement) -> PartialsResult:
    """All dg-coefficients of d(a), with the closed-form cross-check."""
    computed = tuple(
        calc.partial(a, i) for i in range(calc.alg.ngens)
    )
    closed = None
    discrepant = None
    if len(a.terms) == 1:
        word, coeff = next(iter(a.terms.items()))
        if coeff.is_one():
            closed = closed_form_partials(calc, word)
            if closed is not None:
                closed = tuple(calc.basis.normal_form(c) for c in closed)
                discrepant = tuple(
                    c != g for c, g in zip(closed, computed)
                )
    return PartialsResult(computed=computed, closed_form=closed, discrepant=discrepant)
