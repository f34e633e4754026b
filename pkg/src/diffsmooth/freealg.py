"""Free associative algebra on a finite generator alphabet.

Words are tuples of generator indices (the empty word is the unit), elements
are sparse maps word -> RatFunc, graded by word length.  Presentations pair
an algebra with homogeneous degree-2 relations and optional scalar
constraints on the parameters.

The built-in constructors cover the presentations the verifier ships with:
the three- and four-generator Sklyanin families, the commutative polynomial
presentation, and the two monomial degenerations.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional, Sequence

from .scalars import BaseScalar, RatFunc, ScalarError, ScalarField, base_from

Word = tuple  # tuple[int, ...]


class AlgebraError(ValueError):
    pass


class FreeAlgebra:
    """Generator alphabet over a scalar field; element factory."""

    __slots__ = ("gens", "field")

    def __init__(self, gens: Sequence[str], field: ScalarField):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise AlgebraError("duplicate generator names")
        if set(gens) & set(field.params):
            raise AlgebraError("generator and parameter names overlap")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *_):
        raise AttributeError("FreeAlgebra is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, FreeAlgebra)
            and self.gens == other.gens
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.gens, self.field))

    def __repr__(self):
        return f"FreeAlgebra(gens={self.gens}, params={self.field.params})"

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(): self.field.one()})

    def gen(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {(i,): self.field.one()})

    def word(self, word: Word, coeff=None) -> "AlgebraElement":
        c = self.field.one() if coeff is None else self.field.coerce(coeff)
        if c.is_zero():
            return self.zero()
        return AlgebraElement(self, {tuple(word): c})

    def element(self, terms: Iterable) -> "AlgebraElement":
        out: dict = {}
        for coeff, word in terms:
            c = self.field.coerce(coeff)
            if c.is_zero():
                continue
            w = tuple(word)
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return AlgebraElement(self, out)

    def words_of_degree(self, n: int) -> list:
        """All words of length n in lexicographic order."""
        if n == 0:
            return [()]
        out = [()]
        for _ in range(n):
            out = [w + (i,) for w in out for i in range(self.ngens)]
        return out

    def word_str(self, word: Word) -> str:
        if not word:
            return "1"
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            name = self.gens[word[i]]
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)


def deglex_key(word: Word):
    return (len(word), word)


class AlgebraElement:
    """Finite linear combination of words with RatFunc coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeAlgebra, terms: dict):
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *_):
        raise AttributeError("AlgebraElement is immutable")

    # -- structure ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Maximal word length; -1 for the zero element."""
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {len(w) for w in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, n: int) -> "AlgebraElement":
        return AlgebraElement(
            self.alg, {w: c for w, c in self.terms.items() if len(w) == n}
        )

    def coefficient(self, word: Word) -> RatFunc:
        return self.terms.get(tuple(word), self.alg.field.zero())

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: deglex_key(t[0]))

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "AlgebraElement"):
        if self.alg != other.alg:
            raise AlgebraError("generator alphabet mismatch")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return AlgebraElement(self.alg, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                s = out.get(w)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = s
        return AlgebraElement(self.alg, out)

    def scale(self, coeff) -> "AlgebraElement":
        c = self.alg.field.coerce(coeff)
        if c.is_zero():
            return self.alg.zero()
        return AlgebraElement(self.alg, {w: k * c for w, k in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.alg == other.alg
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.alg, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            neg, cc = c.sign_split()
            word = self.alg.word_str(w)
            if not w:
                body = str(cc) if not cc.needs_parens_in_product() else f"({cc})"
            elif cc.is_one():
                body = word
            else:
                cs = str(cc)
                if cc.needs_parens_in_product() or " " in cs:
                    cs = f"({cs})"
                body = f"{cs}*{word}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"AlgebraElement({self})"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Bilinear concatenation product in the free algebra."""
    return a * b


class Presentation:
    """Quadratic presentation: algebra, relations, optional constraints."""

    __slots__ = (
        "name",
        "algebra",
        "relations",
        "relation_texts",
        "constraints",
        "constraint_texts",
        "family",
        "family_values",
    )

    def __init__(
        self,
        name: str,
        algebra: FreeAlgebra,
        relations: Sequence[AlgebraElement],
        relation_texts: Optional[Sequence[str]] = None,
        constraints: Sequence[RatFunc] = (),
        constraint_texts: Optional[Sequence[str]] = None,
        family: Optional[str] = None,
        family_values: Optional[tuple] = None,
    ):
        relations = tuple(relations)
        if not relations:
            raise AlgebraError("relation list nonempty")
        for r in relations:
            if r.alg != algebra:
                raise AlgebraError("relation over a different algebra")
            if r.is_zero() or not r.is_homogeneous() or r.degree() != 2:
                raise AlgebraError(f"relation must be homogeneous of degree 2: {r}")
        if relation_texts is None:
            relation_texts = tuple(str(r) for r in relations)
        else:
            relation_texts = tuple(relation_texts)
        if len(relation_texts) != len(relations):
            raise AlgebraError("relation texts out of step with relations")
        constraints = tuple(constraints)
        if constraint_texts is None:
            constraint_texts = tuple(str(c) for c in constraints)
        else:
            constraint_texts = tuple(constraint_texts)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "relation_texts", relation_texts)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "constraint_texts", constraint_texts)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "family_values", family_values)

    def __setattr__(self, *_):
        raise AttributeError("Presentation is immutable")

    def __repr__(self):
        return f"Presentation({self.name!r}, gens={self.algebra.gens})"

    @property
    def field(self) -> ScalarField:
        return self.algebra.field

    def constraint_violations(self) -> list:
        """Constraints that fail (decidable only for parameter-free fields)."""
        out = []
        for c, text in zip(self.constraints, self.constraint_texts):
            if c.is_constant() and not c.is_zero():
                out.append(text)
        return out


# ---------------------------------------------------------------------------
# Built-in presentations
# ---------------------------------------------------------------------------


def _triple_field(values, names, base) -> tuple:
    """(field, scalars) for an all-symbolic or all-numeric parameter triple."""
    given = [v for v in values if v is not None]
    if given and len(given) != len(values):
        raise AlgebraError("give all parameter values or none (symbolic)")
    if not given:
        field = ScalarField(names, base)
        return field, tuple(field.param(n) for n in names)
    field = ScalarField((), base)
    return field, tuple(field.from_base(base_from(v)) for v in values)


def sklyanin3(p=None, q=None, r=None, base: str = "cyclotomic") -> Presentation:
    """Three-generator Sklyanin presentation S(p, q, r).

    Generators x, y, z with relations p*y*z + q*z*y + r*x^2 and its two
    cyclic rotations.  Omitting all three values gives the symbolic family.
    """
    field, (sp, sq, sr) = _triple_field((p, q, r), ("p", "q", "r"), base)
    if not field.params and sp.is_zero() and sq.is_zero() and sr.is_zero():
        raise AlgebraError("parameter triple must not be all zero")
    alg = FreeAlgebra(("x", "y", "z"), field)
    x, y, z = 0, 1, 2
    cycles = [(x, y, z), (y, z, x), (z, x, y)]
    relations = []
    texts = []
    for a, b, c in cycles:
        relations.append(
            alg.element([(sp, (b, c)), (sq, (c, b)), (sr, (a, a))])
        )
        ga, gb, gc = alg.gens[a], alg.gens[b], alg.gens[c]
        texts.append(_triple_text(sp, sq, sr, f"{gb}*{gc}", f"{gc}*{gb}", f"{ga}^2"))
    for rel in relations:
        if rel.is_zero():
            raise AlgebraError("parameter triple collapses a relation to zero")
    values = None if field.params else (sp, sq, sr)
    name = "sklyanin3(p,q,r)" if field.params else f"sklyanin3({p},{q},{r})"
    return Presentation(
        name, alg, relations, texts, family="sklyanin3", family_values=values
    )


def _triple_text(cp, cq, cr, w1, w2, w3) -> str:
    parts = []
    for c, w in ((cp, w1), (cq, w2), (cr, w3)):
        if c.is_zero():
            continue
        neg, cc = c.sign_split()
        cs = f"({cc})" if cc.needs_parens_in_product() else str(cc)
        body = w if cc.is_one() else f"{cs}*{w}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def sklyanin4(alpha=None, beta=None, gamma=None, base: str = "rational") -> Presentation:
    """Four-generator Sklyanin presentation on x0..x3.

    Six quadratic relations in the (alpha, beta, gamma) family; the defining
    condition alpha + beta + gamma + alpha*beta*gamma = 0 is recorded as a
    constraint and checked when the parameters are numeric.
    """
    field, (sa, sb, sc) = _triple_field(
        (alpha, beta, gamma), ("alpha", "beta", "gamma"), base
    )
    alg = FreeAlgebra(("x0", "x1", "x2", "x3"), field)
    one = field.one()
    relations = []
    texts = []
    # (i, j, k, l, scalar): x_i x_j - x_j x_i - s (x_k x_l + x_l x_k)
    #                  and  x_i x_j + x_j x_i - (x_k x_l - x_l x_k)
    for (j, k, l), s in (((1, 2, 3), sa), ((2, 3, 1), sb), ((3, 1, 2), sc)):
        xi, xj, xk, xl = 0, j, k, l
        relations.append(
            alg.element([
                (one, (xi, xj)),
                (-one, (xj, xi)),
                (-s, (xk, xl)),
                (-s, (xl, xk)),
            ])
        )
        gi, gj, gk, gl = (alg.gens[t] for t in (xi, xj, xk, xl))
        neg, ss = s.sign_split()
        scoef = "" if ss.is_one() else (
            f"({ss})*" if ss.needs_parens_in_product() else f"{ss}*"
        )
        sign = "+" if neg else "-"
        texts.append(
            f"{gi}*{gj} - {gj}*{gi} {sign} {scoef}{gk}*{gl} {sign} {scoef}{gl}*{gk}"
        )
        relations.append(
            alg.element([
                (one, (xi, xj)),
                (one, (xj, xi)),
                (-one, (xk, xl)),
                (one, (xl, xk)),
            ])
        )
        texts.append(f"{gi}*{gj} + {gj}*{gi} - {gk}*{gl} + {gl}*{gk}")
    constraint = sa + sb + sc + sa * sb * sc
    ctext = "alpha + beta + gamma + alpha*beta*gamma"
    values = None if field.params else (sa, sb, sc)
    name = (
        "sklyanin4(alpha,beta,gamma)"
        if field.params
        else f"sklyanin4({alpha},{beta},{gamma})"
    )
    return Presentation(
        name,
        alg,
        relations,
        texts,
        constraints=(constraint,),
        constraint_texts=(ctext,),
        family="sklyanin4",
        family_values=values,
    )


def specialize_presentation(pres: Presentation,
                            assignment: Mapping[str, BaseScalar]) -> Presentation:
    """Evaluate every parameter; the result lives over a constant field."""
    if not pres.field.params:
        return pres
    field = ScalarField((), pres.field.base)
    alg = FreeAlgebra(pres.algebra.gens, field)
    relations = []
    for rel in pres.relations:
        el = alg.element(
            (field.from_base(c.specialize(assignment)), w)
            for w, c in rel.terms.items()
        )
        if el.is_zero():
            raise AlgebraError(
                f"relation {rel} collapses to zero under the assignment"
            )
        relations.append(el)
    constraints = tuple(
        field.from_base(c.specialize(assignment)) for c in pres.constraints
    )
    values = None
    if pres.family in ("sklyanin3", "sklyanin4"):
        values = tuple(
            field.from_base(assignment[name]) for name in pres.field.params
        )
    shown = ",".join(f"{k}={v}" for k, v in sorted(assignment.items()))
    return Presentation(
        f"{pres.name}|{shown}",
        alg,
        relations,
        None,
        constraints=constraints,
        constraint_texts=pres.constraint_texts,
        family=pres.family,
        family_values=values,
    )


def commutative_polynomials(names: Sequence[str] = ("x", "y", "z"),
                            base: str = "rational") -> Presentation:
    """Commutative polynomial presentation: relations g_i g_j - g_j g_i."""
    field = ScalarField((), base)
    alg = FreeAlgebra(tuple(names), field)
    one = field.one()
    relations = []
    texts = []
    for i in range(alg.ngens):
        for j in range(i + 1, alg.ngens):
            relations.append(alg.element([(one, (i, j)), (-one, (j, i))]))
            texts.append(f"{alg.gens[i]}*{alg.gens[j]} - {alg.gens[j]}*{alg.gens[i]}")
    return Presentation(
        f"commutative{alg.ngens}", alg, relations, texts, family="commutative"
    )


def monomial_presentation(words: Sequence[str], name: str,
                          base: str = "rational") -> Presentation:
    """Monomial quotient of the free algebra on x, y, z."""
    field = ScalarField((), base)
    alg = FreeAlgebra(("x", "y", "z"), field)
    index = {g: i for i, g in enumerate(alg.gens)}
    relations = []
    texts = []
    for w in words:
        word = tuple(index[ch] for ch in w)
        relations.append(alg.word(word))
        texts.append(alg.word_str(word))
    return Presentation(name, alg, relations, texts, family="monomial")


def monomial_squares(base: str = "rational") -> Presentation:
    return monomial_presentation(("xx", "yy", "zz"), "monomial-squares", base)


def monomial_cycle(base: str = "rational") -> Presentation:
    return monomial_presentation(("xy", "yz", "zx"), "monomial-cycle", base)


BUILTIN_NAMES = (
    "sklyanin3",
    "sklyanin4",
    "commutative3",
    "monomial-squares",
    "monomial-cycle",
)
