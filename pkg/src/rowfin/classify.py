"""Preorder-indexed subrings: membership, classification, and witnesses.

A preorder on the indices cuts out the incidence-style subring of maps
whose nonzero cells respect the relation.  Such subrings fall into
exactly two classes: diagonal-like (finitely many infinite up-sets) and
full-like (infinitely many), and the full-like case carries an explicit
sandwich witness built from the descriptor's refinement metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import matrices as mx
from .indexing import (PreorderDescriptor, Refinement,
                       check_preorder_descriptor)
from .matrices import FinVec, RowFiniteMap
from .rings import BaseRing, PrimeField


class ClassifyError(Exception):
    pass


# ---------------------------------------------------------------------------
# Membership


@dataclass
class MembershipReport:
    ok: bool
    violations: list  # (row, col) cells breaking the relation


def preorder_membership(f: RowFiniteMap, rho: PreorderDescriptor,
                        window: int) -> MembershipReport:
    violations = []
    for a in range(1, window + 1):
        for b in sorted(f.row_support(a)):
            if not rho.rel(a, b):
                violations.append((a, b))
    return MembershipReport(ok=not violations, violations=violations)


# ---------------------------------------------------------------------------
# Classification


@dataclass
class Classification:
    verdict: str                    # "DClass" | "EClass"
    evidence: object                # frozenset of exceptional rows, or enumerator

    D_CLASS = "DClass"
    E_CLASS = "EClass"


def classify_preorder(rho: PreorderDescriptor, spot_bound: int = 40,
                      rng=None) -> Classification:
    """Diagonal-like iff only finitely many rows have infinite up-sets.

    The finiteness tags are trusted after spot-checks; the two verdicts
    are mutually exclusive by construction.
    """
    problems = check_preorder_descriptor(rho, bound=spot_bound, rng=rng)
    if problems:
        raise ClassifyError(f"descriptor inconsistent: {problems[0]}")
    if rho.has_finitely_many_infinite_upsets():
        return Classification(Classification.D_CLASS,
                              rho.infinite_upset_indices)
    return Classification(Classification.E_CLASS, rho.infinite_upset_indices)


# ---------------------------------------------------------------------------
# Full-class sandwich witnesses


@dataclass
class EquivWitness:
    branch: str
    rho: PreorderDescriptor
    ring: BaseRing
    g: RowFiniteMap
    h: RowFiniteMap

    def lift(self, target: RowFiniteMap, window: int) -> RowFiniteMap:
        raise NotImplementedError

    def verify(self, target: RowFiniteMap, window: int) -> RowFiniteMap:
        """Lift and re-check g * lift * h = target on the window."""
        lifted = self.lift(target, window)
        sandwich = mx.compose(mx.compose(self.g, lifted), self.h)
        check = mx.equal_on_window(sandwich, target, window)
        if not check:
            raise ClassifyError(f"sandwich mismatch: {check.describe()}")
        member = preorder_membership(lifted, self.rho, window)
        if not member.ok:
            raise ClassifyError(
                f"lift violates membership at {member.violations[0]}"
            )
        return lifted


class NestedWitness(EquivWitness):
    """Upper-triangular targets via nested bars.

    beta_j is picked greedily (least unused) from bars(j); since the bars
    are nested downward, beta_k lies in every earlier bar, so the lifted
    rows stay inside the anchors' up-sets.
    """

    def __init__(self, rho, ring):
        ref = rho.refinement
        self._anchors = ref.anchors
        self._bars = ref.bars
        self._betas: list[int] = []
        g = mx.from_index_map(ring, self._anchor_of, tag="nested_g")
        h = RowFiniteMap(ring, self._h_row(ring), tag="nested_h")
        super().__init__(Refinement.NESTED, rho, ring, g, h)

    def _anchor_of(self, j):
        return self._anchors(j)

    def beta(self, j: int) -> int:
        while len(self._betas) < j:
            jj = len(self._betas) + 1
            bar = self._bars(jj)
            t = 1
            while bar.nth(t) in self._betas:
                t += 1
            self._betas.append(bar.nth(t))
        return self._betas[j - 1]

    def _h_row(self, ring):
        def rowfn(alpha):
            # h sends each beta_j back to j; betas are distinct by choice.
            j = 1
            while True:
                b = self.beta(j)
                if b == alpha:
                    return FinVec.unit(ring, j)
                # The betas need not be increasing; stop once all remaining
                # bars start beyond alpha.
                if self._bars(j).nth(1) > alpha and b > alpha:
                    return FinVec.zero(ring)
                j += 1

        return rowfn

    def lift(self, target: RowFiniteMap, window: int) -> RowFiniteMap:
        rows = {}
        for j in range(1, window + 1):
            row = target.row(j)
            entries = {}
            for k, v in row.entries.items():
                if k < j:
                    raise ClassifyError(
                        f"target not upper-triangular: cell ({j},{k})"
                    )
                entries[self.beta(k)] = v
            if entries:
                rows[self._anchors(j)] = entries
        return mx.from_rows(self.ring, rows, tag="nested_lift")


class DisjointWitness(EquivWitness):
    """Arbitrary targets via pairwise disjoint bars.

    Row j of the target is spread along bar j's enumeration; h collapses
    every bar back onto the base coordinates, and disjointness keeps the
    collapses from clashing.
    """

    def __init__(self, rho, ring):
        ref = rho.refinement
        self._anchors = ref.anchors
        self._bars = ref.bars
        g = mx.from_index_map(ring, ref.anchors, tag="disjoint_g")
        h = RowFiniteMap(ring, self._h_row(ring), tag="disjoint_h")
        super().__init__(Refinement.DISJOINT, rho, ring, g, h)

    def _h_row(self, ring):
        def rowfn(alpha):
            j = 1
            while True:
                bar = self._bars(j)
                pos = bar.index_of(alpha)
                if pos is not None:
                    return FinVec.unit(ring, pos)
                if bar.nth(1) > alpha:
                    # Later bars may still start low; bound the scan by
                    # checking a stretch of bar heads beyond alpha.
                    if all(self._bars(t).nth(1) > alpha
                           for t in range(j, j + 8)):
                        return FinVec.zero(ring)
                j += 1

        return rowfn

    def lift(self, target: RowFiniteMap, window: int) -> RowFiniteMap:
        rows = {}
        for j in range(1, window + 1):
            bar = self._bars(j)
            entries = {bar.nth(k): v for k, v in target.row(j).entries.items()}
            if entries:
                rows[self._anchors(j)] = entries
        return mx.from_rows(self.ring, rows, tag="disjoint_lift")


def eclass_witness(rho: PreorderDescriptor, ring: BaseRing) -> EquivWitness:
    cls = classify_preorder(rho)
    if cls.verdict != Classification.E_CLASS:
        raise ClassifyError(f"{rho.name} is not full-like")
    if rho.refinement is None:
        raise ClassifyError(f"{rho.name} has no refinement metadata")
    if rho.refinement.branch == Refinement.NESTED:
        return NestedWitness(rho, ring)
    return DisjointWitness(rho, ring)


# ---------------------------------------------------------------------------
# Finite-scale subring census


@dataclass
class SubringCensus:
    n: int
    p: int
    count: int
    preorders: list   # sorted pair tuples, one per subring
    sizes: list


def simple_full_check(n: int, p: int, feasibility_cap: int = 2**16) -> SubringCensus:
    """Enumerate diagonal-containing subrings of the n x n matrices over GF(p).

    Each subring must equal the incidence subring of its own nonzero-cell
    relation, and that relation must be a preorder; the census is returned
    for comparison against the preorder count.
    """
    ring = MatrixRing_np(n, p)
    if p ** (n * n) > feasibility_cap:
        raise ClassifyError(f"{p}^{n * n} exceeds feasibility cap")
    all_elems = list(ring.elements())
    diagonal = [e for e in all_elems
                if all(e[i][j] == 0 for i in range(n) for j in range(n) if i != j)]

    def closure(gens):
        s = set(gens)
        frontier = set(gens)
        while frontier:
            new = set()
            items = list(s)
            for a in frontier:
                for b in items:
                    for c in (ring.mul(a, b), ring.mul(b, a),
                              ring.add(a, b), ring.neg(a)):
                        if c not in s:
                            new.add(c)
            s |= new
            frontier = new
        return frozenset(s)

    base = closure(diagonal)
    found = {base}
    queue = [base]
    while queue:
        s = queue.pop()
        for x in all_elems:
            if x in s:
                continue
            bigger = closure(s | {x})
            if bigger not in found:
                found.add(bigger)
                queue.append(bigger)

    preorders = []
    sizes = []
    for s in sorted(found, key=len):
        rel = set()
        for e in s:
            for i in range(n):
                for j in range(n):
                    if e[i][j] != 0:
                        rel.add((i + 1, j + 1))
        # The subring must be exactly the matrices supported on rel.
        expected = p ** len(rel)
        if len(s) != expected:
            raise ClassifyError(
                f"subring of size {len(s)} is not an incidence subring"
            )
        for a, b in rel:
            if (a, a) not in rel:
                raise ClassifyError("relation not reflexive")
            for c, d in rel:
                if b == c and (a, d) not in rel:
                    raise ClassifyError("relation not transitive")
        preorders.append(tuple(sorted(rel)))
        sizes.append(len(s))
    return SubringCensus(n=n, p=p, count=len(found),
                         preorders=preorders, sizes=sizes)


def MatrixRing_np(n: int, p: int):
    from .rings import MatrixRing

    return MatrixRing(PrimeField(p), n)


# ---------------------------------------------------------------------------
# The column-anchored subring C


@dataclass
class CMembership:
    member: bool
    scalar: object = None      # the common diagonal payload s
    column_part: dict = None   # (row -> payload) entries of the column-1 part
    violation: tuple = None    # first offending cell


def c_membership(f: RowFiniteMap, window: int) -> CMembership:
    """Window-scale test for f = s*1 + (column-1 matrix).

    Off column 1, every cell must be diagonal with one common value s;
    the residue f - s*1 is then supported in column 1 alone.
    """
    ring = f.ring
    scalar = f.row(2).get(2) if window >= 2 else f.row(1).get(1)
    for a in range(1, window + 1):
        row = f.row(a)
        for b, v in sorted(row.entries.items()):
            if b == 1:
                continue
            if b != a:
                return CMembership(member=False, violation=(a, b))
        if a >= 2 and row.get(a) != scalar:
            return CMembership(member=False, violation=(a, a))
    column = {}
    for a in range(1, window + 1):
        v = f.row(a).get(1)
        if a == 1:
            v = ring.sub(v, scalar)
        if not ring.is_zero(v):
            column[a] = v
    return CMembership(member=True, scalar=scalar, column_part=column)


def finite_column_support(f: RowFiniteMap, window: int) -> frozenset:
    """Columns holding any nonzero cell in rows 1..window.

    Window-scale stand-in for the finitely-many-nonzero-columns part of
    the F-decomposition check.
    """
    cols = set()
    for a in range(1, window + 1):
        cols |= f.row_support(a)
    return frozenset(cols)
