"""Exact linear algebra over the scalar fraction field.

Two entry points:

* ``SparseEchelon`` -- an incremental row-echelon accumulator over sparse
  rows (dict column -> RatFunc).  Used degree-by-degree for ideal slices,
  where the column order is the word order.
* ``solve_linear`` -- dense-interface Gaussian elimination for systems
  M x = v, returning either a parametrized solution set or an inconsistency
  witness: an explicit row combination that reduces to 0 = c with c != 0.

Pivots are chosen on the first nonzero canonical entry of each row under
the supplied column order; parameters are treated generically (any nonzero
rational function may be inverted).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Hashable, Optional

from .scalars import BaseScalar, Poly, RatFunc, ScalarField, poly_divexact, poly_gcd


Row = dict  # column key -> RatFunc (nonzero)


def _one_like(p: Poly) -> Poly:
    from .scalars import ONE

    return Poly.const(p.params, ONE)


class SparseEchelon:
    """Incremental echelon form; pivot = extremal column of each row.

    ``col_key`` orders columns; each inserted row is pivoted on its column
    with the *largest* key.  (Pass a negated key to pivot on the smallest.)

    Rows are held fraction-free: denominators are cleared on insertion and
    every row operation is L * row - a * pivot_row followed by a content
    strip, so no rational-function gcd runs per entry.  The projection this
    computes is canonical (the row space and its leading-column set do not
    depend on scaling or insertion order).
    """

    def __init__(self, col_key: Callable[[Hashable], object]):
        self.col_key = col_key
        self.pivots: dict = {}    # pivot column -> poly row (dict col -> Poly)
        self._ratrows: dict = {}  # pivot column -> normalized RatFunc row

    # -- fraction clearing / content stripping -------------------------
    @staticmethod
    def _to_poly_row(row: Row) -> dict:
        vals = list(row.values())
        if not vals:
            return {}
        if isinstance(vals[0], Poly):
            return dict(row)
        dens = []
        for v in vals:
            if not v.den.is_one() and all(v.den != d for d in dens):
                dens.append(v.den)
        if not dens:
            return {c: v.num for c, v in row.items()}
        mult = dens[0]
        for d in dens[1:]:
            mult = mult * d
        out = {}
        for c, v in row.items():
            cleared = v * RatFunc(mult, _one_like(mult), _canonical=True)
            if not cleared.den.is_one():
                raise ValueError("denominator failed to clear")
            out[c] = cleared.num
        return out

    @staticmethod
    def _strip_content(row: dict) -> dict:
        if not row:
            return row
        entries = sorted(row.values(), key=lambda p: len(p.terms))
        g = entries[0]
        for e in entries[1:]:
            if g.is_constant():
                break
            g = poly_gcd(g, e)
        if not g.is_constant():
            row = {c: poly_divexact(p, g) for c, p in row.items()}
        num_gcd = 0
        den_lcm = 1
        for p in row.values():
            for coeff in p.terms.values():
                for part in (coeff.a, coeff.b):
                    if part:
                        num_gcd = gcd(num_gcd, part.numerator)
                        den_lcm = den_lcm * part.denominator // gcd(
                            den_lcm, part.denominator
                        )
        scale = Fraction(den_lcm, num_gcd) if num_gcd else Fraction(1)
        if scale != 1:
            s = BaseScalar(scale)
            row = {c: p.scale(s) for c, p in row.items()}
        return row

    # -- reduction ------------------------------------------------------
    def _ratrow(self, c) -> dict:
        """Pivot row as canonical fractions with pivot entry 1 (cached)."""
        cached = self._ratrows.get(c)
        if cached is None:
            prow = self.pivots[c]
            lead = prow[c]
            cached = {c2: RatFunc(p, lead) for c2, p in prow.items()}
            self._ratrows[c] = cached
        return cached

    def reduce(self, row: Row) -> Row:
        """Fully reduce a row of RatFunc entries against the pivot rows."""
        row = dict(row)
        pivots = self.pivots
        key = self.col_key
        while row:
            hits = [c for c in row if c in pivots]
            if not hits:
                break
            c = max(hits, key=key)
            coeff = row.pop(c)
            for c2, v in self._ratrow(c).items():
                if c2 == c:
                    continue
                s = row.get(c2)
                s = v * (-coeff) if s is None else s - coeff * v
                if s.is_zero():
                    row.pop(c2, None)
                else:
                    row[c2] = s
        return row

    def insert(self, row: Row) -> Optional[Hashable]:
        """Reduce then adopt the row; returns the new pivot column or None.

        Accepts RatFunc- or Poly-valued rows.
        """
        row = self._strip_content(self._to_poly_row(row))
        pivots = self.pivots
        key = self.col_key
        while row:
            hits = [c for c in row if c in pivots]
            if not hits:
                break
            c = max(hits, key=key)
            a = row.pop(c)
            prow = pivots[c]
            lead = prow[c]
            out = {c2: lead * v for c2, v in row.items()}
            for c2, p in prow.items():
                if c2 == c:
                    continue
                t = a * p
                s = out.get(c2)
                s = -t if s is None else s - t
                if s.is_zero():
                    out.pop(c2, None)
                else:
                    out[c2] = s
            row = self._strip_content(out)
        if not row:
            return None
        lead_col = max(row, key=key)
        self.pivots[lead_col] = row
        return lead_col

    @property
    def rank(self) -> int:
        return len(self.pivots)


@dataclass(frozen=True)
class LinearSolution:
    """Parametrized solution set of M x = v."""

    rank: int
    pivot_cols: tuple
    free_cols: tuple
    particular: tuple  # one solution, free variables set to 0
    nullspace: tuple   # basis vectors, one per free column (that entry = 1)

    @property
    def unique(self) -> bool:
        return not self.free_cols

    def solution_with(self, free_values: dict) -> tuple:
        """Solution with the given values for free columns (RatFunc values)."""
        out = list(self.particular)
        for vec, col in zip(self.nullspace, self.free_cols):
            val = free_values.get(col)
            if val is None or val.is_zero():
                continue
            for j, entry in enumerate(vec):
                if not entry.is_zero():
                    out[j] = out[j] + val * entry
        return tuple(out)


@dataclass(frozen=True)
class Inconsistency:
    """Certificate: sum(combo[i] * row_i) has zero matrix part and rhs c != 0."""

    combo: tuple      # pairs (row index, RatFunc coefficient)
    constant: RatFunc # the nonzero right-hand side of the combined row


def solve_linear(matrix, rhs, field: ScalarField):
    """Exact Gaussian elimination on M x = v.

    ``matrix`` is a sequence of rows (sequences of RatFunc); ``rhs`` the
    right-hand sides.  Returns LinearSolution or Inconsistency.
    """
    nrows = len(matrix)
    if len(rhs) != nrows:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    ncols = len(matrix[0]) if nrows else 0
    for r in matrix:
        if len(r) != ncols:
            raise ValueError("ragged matrix")

    zero, one = field.zero(), field.one()
    # Work rows: (cols dict, rhs, trace dict original-row -> coeff)
    work = []
    for i, (mrow, b) in enumerate(zip(matrix, rhs)):
        cols = {j: v for j, v in enumerate(mrow) if not v.is_zero()}
        work.append((cols, b, {i: one}))

    pivots: dict = {}  # col -> (cols, rhs, trace), pivot entry normalized to 1
    for cols, b, trace in work:
        cols = dict(cols)
        trace = dict(trace)
        while True:
            hits = [c for c in cols if c in pivots]
            if not hits:
                break
            c = min(hits)
            coeff = cols.pop(c)
            pcols, pb, ptrace = pivots[c]
            for c2, v in pcols.items():
                if c2 == c:
                    continue
                s = cols.get(c2, zero) - coeff * v
                if s.is_zero():
                    cols.pop(c2, None)
                else:
                    cols[c2] = s
            b = b - coeff * pb
            for k, v in ptrace.items():
                s = trace.get(k, zero) - coeff * v
                if s.is_zero():
                    trace.pop(k, None)
                else:
                    trace[k] = s
        if not cols:
            if not b.is_zero():
                combo = tuple(sorted(trace.items()))
                return Inconsistency(combo=combo, constant=b)
            continue
        lead = min(cols)
        inv = cols[lead].inverse()
        pivots[lead] = (
            {c: v * inv for c, v in cols.items()},
            b * inv,
            {k: v * inv for k, v in trace.items()},
        )

    # Back-substitute to reduced form so each pivot row touches only its own
    # pivot among pivot columns.
    for c in sorted(pivots, reverse=True):
        cols, b, trace = pivots[c]
        for c2 in sorted(k for k in cols if k != c and k in pivots):
            coeff = cols.pop(c2, None)
            if coeff is None:
                continue
            pcols, pb, _ = pivots[c2]
            for c3, v in pcols.items():
                if c3 == c2:
                    continue
                s = cols.get(c3, zero) - coeff * v
                if s.is_zero():
                    cols.pop(c3, None)
                else:
                    cols[c3] = s
            b = b - coeff * pb
        pivots[c] = (cols, b, trace)

    pivot_cols = tuple(sorted(pivots))
    free_cols = tuple(c for c in range(ncols) if c not in pivots)
    particular = [zero] * ncols
    for c in pivot_cols:
        particular[c] = pivots[c][1]
    nullspace = []
    for f in free_cols:
        vec = [zero] * ncols
        vec[f] = one
        for c in pivot_cols:
            entry = pivots[c][0].get(f)
            if entry is not None:
                vec[c] = -entry
        nullspace.append(tuple(vec))
    return LinearSolution(
        rank=len(pivot_cols),
        pivot_cols=pivot_cols,
        free_cols=free_cols,
        particular=tuple(particular),
        nullspace=tuple(nullspace),
    )


def verify_inconsistency(matrix, rhs, witness: Inconsistency, field: ScalarField) -> bool:
    """Replay a witness: the combination must give zero rows and rhs constant."""
    ncols = len(matrix[0]) if matrix else 0
    acc = [field.zero()] * ncols
    b = field.zero()
    for i, coeff in witness.combo:
        for j in range(ncols):
            acc[j] = acc[j] + coeff * matrix[i][j]
        b = b + coeff * rhs[i]
    return all(v.is_zero() for v in acc) and b == witness.constant and not b.is_zero()
