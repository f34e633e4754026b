"""Degree-truncated computation in the quotient algebra.

The degree-n slice of the two-sided ideal is spanned by
{w1 * rel * w2 : |w1| + 2 + |w2| = n} and is materialized incrementally as
I_n = F_1 * I_{n-1} + R * F_{n-2} using the echelonized rows of the previous
degree.  Quotient bases are the non-pivot words; pivoting is on the
deglex-largest word of each row, so basis words are deglex-minimal (ordered
monomials whenever the presentation happens to rewrite cleanly).

Ranks are computed by exact row reduction of the relation-product spans --
never by assuming a PBW basis -- because generic quadratic input need not
be confluent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .freealg import AlgebraElement, AlgebraError, Presentation, deglex_key
from .linalg import SparseEchelon


class TruncationError(AlgebraError):
    pass


class GradedBasis:
    """Per-degree quotient bases and ideal-slice projection data up to N."""

    def __init__(self, pres: Presentation, max_degree: int):
        if max_degree < 2:
            raise AlgebraError("truncation degree must be at least 2")
        self.pres = pres
        self.max_degree = max_degree
        self.echelons: list = []      # SparseEchelon per degree
        self.basis_words: list = []   # list[list[Word]] per degree
        self.dims: list = []
        self._build()

    def _build(self):
        alg = self.pres.algebra
        key = deglex_key
        for n in range(self.max_degree + 1):
            ech = SparseEchelon(col_key=key)
            if n >= 2:
                rows = []
                # left-extend the previous degree's echelon rows
                for pivot_word in sorted(self.echelons[n - 1].pivots, key=key):
                    prow = self.echelons[n - 1].pivots[pivot_word]
                    for g in range(alg.ngens):
                        rows.append({(g,) + w: c for w, c in prow.items()})
                # relation * word for every word of degree n - 2
                for rel in self.pres.relations:
                    for w in alg.words_of_degree(n - 2):
                        rows.append({rw + w: c for rw, c in rel.terms.items()})
                for row in rows:
                    ech.insert(row)
            self.echelons.append(ech)
            words = alg.words_of_degree(n)
            basis = [w for w in words if w not in ech.pivots]
            self.basis_words.append(basis)
            self.dims.append(len(basis))

    def ideal_rank(self, n: int) -> int:
        return self.echelons[n].rank

    def normal_form(self, a: AlgebraElement) -> AlgebraElement:
        """Projection onto the span of basis words; 0 iff a is in the ideal."""
        if a.alg != self.pres.algebra:
            raise AlgebraError("element over a different algebra")
        deg = a.degree()
        if deg > self.max_degree:
            raise TruncationError(
                f"degree {deg} exceeds truncation {self.max_degree}"
            )
        out: dict = {}
        for n in sorted({len(w) for w in a.terms}):
            part = {w: c for w, c in a.terms.items() if len(w) == n}
            reduced = self.echelons[n].reduce(part)
            out.update(reduced)
        return AlgebraElement(a.alg, out)

    def coordinates(self, a: AlgebraElement, n: int) -> list:
        """Coordinates of NF(a) in the degree-n basis (a homogeneous of deg n)."""
        nf = self.normal_form(a)
        zero = self.pres.field.zero()
        return [nf.terms.get(w, zero) for w in self.basis_words[n]]


def build_graded_basis(pres: Presentation, max_degree: int) -> GradedBasis:
    return GradedBasis(pres, max_degree)


def normal_form(a: AlgebraElement, basis: GradedBasis) -> AlgebraElement:
    return basis.normal_form(a)


# ---------------------------------------------------------------------------
# Hilbert data and growth
# ---------------------------------------------------------------------------


def _binomial(n: int, k: int) -> int:
    if k < 0 or n < 0:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


@dataclass(frozen=True)
class HilbertData:
    """Graded dimensions up to the truncation degree, with series targets.

    ``probe`` is set when symbolic parameters were evaluated at a fixed
    rational point to keep high-degree rank computations tractable; ranks
    can only drop on closed parameter subsets, so probe dims bound the
    generic dims from above and agree with them away from those subsets.
    """

    presentation: str
    max_degree: int
    dims: tuple
    ngens: int
    probe: Optional[tuple] = None

    def polynomial_ring_targets(self) -> tuple:
        """Coefficients of 1/(1-t)^g up to the truncation degree."""
        g = self.ngens
        return tuple(_binomial(n + g - 1, g - 1) for n in range(self.max_degree + 1))

    @property
    def matches_polynomial_ring(self) -> bool:
        return self.dims == self.polynomial_ring_targets()

    def cumulative(self) -> tuple:
        total = 0
        out = []
        for d in self.dims:
            total += d
            out.append(total)
        return tuple(out)


SYMBOLIC_EXACT_LIMIT = 4
_PROBE_VALUES = (2, 5, 11, 17, 23, 31, 41, 47)

_FAMILY_PROBES = {
    # values keep the family away from its degenerate loci / constraints
    "sklyanin3": {"p": Fraction(2), "q": Fraction(5), "r": Fraction(11)},
    "sklyanin4": {"alpha": Fraction(2), "beta": Fraction(3), "gamma": Fraction(-5, 7)},
}


def probe_assignment(pres: Presentation) -> dict:
    from .scalars import BaseScalar

    chosen = _FAMILY_PROBES.get(pres.family, {})
    out = {}
    for i, name in enumerate(pres.field.params):
        value = chosen.get(name, Fraction(_PROBE_VALUES[i % len(_PROBE_VALUES)]))
        out[name] = BaseScalar(value)
    return out


def hilbert(pres: Presentation, max_degree: int,
            basis: Optional[GradedBasis] = None,
            symbolic_limit: int = SYMBOLIC_EXACT_LIMIT) -> HilbertData:
    """Graded dimensions, exact over the parameter field where feasible.

    Symbolic presentations are eliminated exactly up to ``symbolic_limit``;
    beyond that the parameters are specialized at a fixed rational probe
    point (recorded on the result) to keep elimination over Q.
    """
    probe = None
    if pres.field.params and max_degree > symbolic_limit and basis is None:
        from .freealg import specialize_presentation
        from .scalars import SpecializationError

        assignment = probe_assignment(pres)
        try:
            pres_for_dims = specialize_presentation(pres, assignment)
            probe = tuple((k, str(v)) for k, v in sorted(assignment.items()))
        except (SpecializationError, AlgebraError):
            pres_for_dims = pres
    else:
        pres_for_dims = pres
    if basis is None or basis.max_degree < max_degree:
        basis = build_graded_basis(pres_for_dims, max_degree)
    return HilbertData(
        presentation=pres.name,
        max_degree=max_degree,
        dims=tuple(basis.dims[: max_degree + 1]),
        ngens=pres.algebra.ngens,
        probe=probe,
    )


@dataclass(frozen=True)
class GrowthReport:
    """Finite-window growth classification of a graded dimension sequence."""

    classification: str            # "polynomial" | "exponential" | "inconclusive"
    degree: Optional[int]          # fitted degree of the cumulative sequence
    ratio_low: Optional[Fraction]  # uniform lower bound on dims ratios
    window: tuple                  # (first degree, last degree) used as evidence
    cumulative: tuple = field(default=())

    @property
    def gk_estimate(self) -> Optional[int]:
        return self.degree if self.classification == "polynomial" else None


def growth_estimate(h: HilbertData) -> GrowthReport:
    """Classify growth from exact integer finite differences.

    polynomial(d): order-(d+1) differences of the cumulative dimensions
    vanish identically over the window.  exponential: every consecutive
    dims ratio is >= some uniform c > 1.  The cumulative sequence matches
    the dimension of the degree-<=n filtration, so the fitted degree is the
    finite-window Gelfand-Kirillov estimate.
    """
    if h.max_degree < 5:
        raise AlgebraError("growth estimation needs truncation degree >= 5")
    cum = list(h.cumulative())
    window = (0, h.max_degree)
    # smallest d with (d+1)-st differences identically zero
    diffs = cum
    for d in range(0, len(cum) - 1):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if diffs and all(v == 0 for v in diffs):
            return GrowthReport(
                classification="polynomial",
                degree=d,
                ratio_low=None,
                window=window,
                cumulative=tuple(cum),
            )
    dims = h.dims[1:]
    if all(dims) and all(b > a for a, b in zip(dims, dims[1:])):
        ratios = [Fraction(b, a) for a, b in zip(dims, dims[1:])]
        low = min(ratios)
        if low > 1:
            return GrowthReport(
                classification="exponential",
                degree=None,
                ratio_low=low,
                window=(1, h.max_degree),
                cumulative=tuple(cum),
            )
    return GrowthReport(
        classification="inconclusive",
        degree=None,
        ratio_low=None,
        window=window,
        cumulative=tuple(cum),
    )


# ---------------------------------------------------------------------------
# Parameter classification for the three-generator family
# ---------------------------------------------------------------------------


def is_degenerate3(p, q, r) -> bool:
    """Degenerate parameter test: coordinate point or p^3 = q^3 = r^3."""
    from .scalars import base_from

    p, q, r = base_from(p), base_from(q), base_from(r)
    nonzero = [v for v in (p, q, r) if not v.is_zero()]
    if not nonzero:
        raise AlgebraError("parameter triple must not be all zero")
    if len(nonzero) == 1:
        return True
    return p ** 3 == q ** 3 == r ** 3


@dataclass(frozen=True)
class PbwReport:
    """Closed-form PBW clauses next to the independent dimension oracle."""

    point: tuple
    clause_coordinate_product: bool   # p*r = q*r = 0
    clause_equal_cubes: bool          # p^3 = q^3 = r^3
    clause_sum_cube: bool             # (p+q)^3 + r^3 = 0 and w available
    clause_pbw: bool
    dim3: int
    dim3_pbw: bool                    # dim3 == 10 for 3 generators / 3 relations
    concordant: bool
    incident: Optional[str]


def pbw_classify(p, q, r, cyclotomic_base: bool = True) -> PbwReport:
    """Evaluate the PBW parameter clauses and the independent dim3 oracle.

    The two verdicts are both reported; a mismatch is surfaced as a named
    incident, never suppressed.
    """
    from .freealg import sklyanin3
    from .scalars import base_from

    pb, qb, rb = base_from(p), base_from(q), base_from(r)
    if pb.is_zero() and qb.is_zero() and rb.is_zero():
        raise AlgebraError("parameter triple must not be all zero")
    c1 = (pb * rb).is_zero() and (qb * rb).is_zero()
    c2 = pb ** 3 == qb ** 3 == rb ** 3
    c3 = ((pb + qb) ** 3 + rb ** 3).is_zero() and cyclotomic_base
    clause_pbw = c1 or c2 or c3
    pres = sklyanin3(pb, qb, rb)
    dims = build_graded_basis(pres, 3).dims
    dim3 = dims[3]
    dim3_pbw = dim3 == 10
    concordant = clause_pbw == dim3_pbw
    incident = None
    if not concordant:
        incident = (
            f"pbw-dim3-mismatch at ({pb},{qb},{rb}): "
            f"clauses say {'PBW' if clause_pbw else 'not PBW'} "
            f"but dim3 = {dim3}"
        )
    return PbwReport(
        point=(pb, qb, rb),
        clause_coordinate_product=c1,
        clause_equal_cubes=c2,
        clause_sum_cube=c3,
        clause_pbw=clause_pbw,
        dim3=dim3,
        dim3_pbw=dim3_pbw,
        concordant=concordant,
        incident=incident,
    )
