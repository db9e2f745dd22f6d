"""Triangular and diagonal sandwich constructions.

The block matrices A and B sandwich a diagonal matrix into any given
lower-triangular matrix; the upper/lower split decomposes an arbitrary
map; the fearing lower-embedding squeezes a finite-support-per-row
subring under the lower-triangular matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import matrices as mx
from .indexing import tri_block, tri_split
from .matrices import FinVec, RowFiniteMap
from .rings import BaseRing


class SandwichError(Exception):
    pass


def sandwich_A(ring: BaseRing) -> RowFiniteMap:
    """Row i carries a width-i block of ones at columns tri_block(i)."""

    def rowfn(i):
        return FinVec(ring, {c: ring.one for c in tri_block(i)})

    return RowFiniteMap(ring, rowfn, tag="A")


def sandwich_B(ring: BaseRing) -> RowFiniteMap:
    """Stacked identity blocks: row T(i-1)+k is e_k for 1 <= k <= i."""

    def rowfn(r):
        _, k = tri_split(r)
        return FinVec.unit(ring, k)

    return RowFiniteMap(ring, rowfn, tag="B")


def sandwich_X(Y: RowFiniteMap, window: int, verify: bool = True) -> RowFiniteMap:
    """Diagonal X with A X B = Y, for lower-triangular Y.

    Cell T(i-1)+k of the diagonal holds Y[i,k]; lower-triangularity of Y
    is checked on the window, and the sandwich identity is re-verified
    there unless `verify` is disabled.
    """
    ring = Y.ring
    for i in range(1, window + 1):
        bad = [c for c in Y.row(i).entries if c > i]
        if bad:
            raise SandwichError(f"Y is not lower-triangular: cell ({i},{bad[0]})")

    def rowfn(d):
        i, k = tri_split(d)
        v = Y.row(i).get(k)
        return FinVec(ring, {d: v})

    X = RowFiniteMap(ring, rowfn, tag="X")
    if verify:
        axb = mx.compose(mx.compose(sandwich_A(ring), X), sandwich_B(ring))
        check = mx.equal_on_window(axb, Y, window)
        if not check:
            raise SandwichError(f"AXB != Y: {check.describe()}")
    return X


def upper_lower_split(f: RowFiniteMap):
    """f = t + tbar with t lower-triangular (diagonal included), tbar strictly upper."""
    ring = f.ring

    def low(a):
        return FinVec(ring, {c: v for c, v in f.row(a).entries.items() if c <= a})

    def up(a):
        return FinVec(ring, {c: v for c, v in f.row(a).entries.items() if c > a})

    return (RowFiniteMap(ring, low, tag=f"low({f.tag})", primitive=False),
            RowFiniteMap(ring, up, tag=f"up({f.tag})", primitive=False))


# ---------------------------------------------------------------------------
# Lower-embedding of a fearing subring


@dataclass
class LowerEmbedWitness:
    g: RowFiniteMap
    f: RowFiniteMap
    targets: list  # strictly increasing l'_k, as materialized


class _TargetSequence:
    """l'_k: strictly increasing majorant of the running support maxima."""

    def __init__(self, supp_fn):
        self.supp_fn = supp_fn
        self._vals: list[int] = []

    def get(self, k: int) -> int:
        while len(self._vals) < k:
            j = len(self._vals) + 1
            supp = self.supp_fn(j)
            raw = max(supp, default=0)
            prev = self._vals[-1] if self._vals else 0
            self._vals.append(max(raw, prev + 1))
        return self._vals[k - 1]

    def invert(self, alpha: int):
        k = 1
        while True:
            v = self.get(k)
            if v == alpha:
                return k
            if v > alpha:
                return None
            k += 1


def fear_lower_embed(descriptor, ring: BaseRing,
                     verify_window: int = 0) -> LowerEmbedWitness:
    """Maps g, f with g f = 1 and f h lower-triangular for every h in S.

    Requires every per-row support bound of the descriptor to be finite.
    The raw maxima l_k may repeat; the emitted targets are their minimal
    strictly increasing majorant, which preserves lower-triangularity.
    """

    def supp_fn(a):
        supp = descriptor.supp(a)
        if not isinstance(supp, frozenset):
            raise SandwichError(
                f"descriptor {descriptor.name} is not finitely fearing at row {a}"
            )
        return supp

    seq = _TargetSequence(supp_fn)

    def f_row(alpha):
        k = seq.invert(alpha)
        return FinVec.zero(ring) if k is None else FinVec.unit(ring, k)

    f = RowFiniteMap(ring, f_row, tag="embed_f")
    g = mx.from_index_map(ring, seq.get, tag="embed_g")

    if verify_window:
        check = mx.equal_on_window(mx.compose(g, f), mx.identity_map(ring),
                                   verify_window)
        if not check:
            raise SandwichError(f"g*f != 1: {check.describe()}")
    targets = [seq.get(k) for k in range(1, (verify_window or 16) + 1)]
    return LowerEmbedWitness(g=g, f=f, targets=targets)


def is_lower_triangular_on_window(f: RowFiniteMap, n: int) -> bool:
    return all(max(f.row(a).entries, default=0) <= a for a in range(1, n + 1))
