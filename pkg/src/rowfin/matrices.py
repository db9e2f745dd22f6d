"""Finitely supported vectors and lazy row-finite matrices.

Vectors model elements of the direct sum; matrices are represented by
their row function only, act on the right, and memoize computed rows.
Zero entries are pruned at every arithmetic step so supports are exact.
"""

from __future__ import annotations

from .rings import BaseRing, RingMismatch


class MatrixError(Exception):
    pass


class _RowEvalCounter:
    """Counts row evaluations of primitive (non-derived) maps; test hook."""

    def __init__(self):
        self.count = 0

    def reset(self):
        self.count = 0


row_evals = _RowEvalCounter()


class FinVec:
    """Finitely supported map N+ -> ring payloads; zero entries never stored."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: BaseRing, entries=None):
        self.ring = ring
        pruned = {}
        if entries:
            for idx, val in entries.items():
                val = ring.canon(val)
                if not ring.is_zero(val):
                    if idx < 1:
                        raise MatrixError(f"index must be >= 1, got {idx}")
                    pruned[idx] = val
        self.entries = pruned

    @classmethod
    def unit(cls, ring: BaseRing, idx: int, value=None) -> "FinVec":
        return cls(ring, {idx: ring.one if value is None else value})

    @classmethod
    def zero(cls, ring: BaseRing) -> "FinVec":
        return cls(ring)

    def support(self) -> frozenset:
        return frozenset(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def get(self, idx: int):
        return self.entries.get(idx, self.ring.zero)

    def add(self, other: "FinVec") -> "FinVec":
        self._check(other)
        out = dict(self.entries)
        for idx, val in other.entries.items():
            s = self.ring.add(out.get(idx, self.ring.zero), val)
            if self.ring.is_zero(s):
                out.pop(idx, None)
            else:
                out[idx] = s
        vec = FinVec.__new__(FinVec)
        vec.ring = self.ring
        vec.entries = out
        return vec

    def neg(self) -> "FinVec":
        vec = FinVec.__new__(FinVec)
        vec.ring = self.ring
        vec.entries = {i: self.ring.neg(v) for i, v in self.entries.items()}
        return vec

    def scale_left(self, payload) -> "FinVec":
        """payload * self, entrywise on the left (written product order)."""
        return FinVec(self.ring,
                      {i: self.ring.mul(payload, v) for i, v in self.entries.items()})

    def apply(self, f: "RowFiniteMap") -> "FinVec":
        """Right action: self . f = sum_a self[a] * row_a(f)."""
        self._check(f)
        acc = FinVec.zero(self.ring)
        for idx, val in self.entries.items():
            acc = acc.add(f.row(idx).scale_left(val))
        return acc

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring.spec} vs {other.ring.spec}")

    def __eq__(self, other):
        return (isinstance(other, FinVec) and self.ring == other.ring
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.entries.items()))))

    def __repr__(self):
        inner = ", ".join(f"{i}:{self.ring.format_payload(v)}"
                          for i, v in sorted(self.entries.items()))
        return f"FinVec({inner})"


class RowFiniteMap:
    """Lazy, memoized row function N+ -> FinVec; immutable once built.

    The memo table is an as-if-pure cache: concurrent reads may duplicate
    work but always converge to identical rows.
    """

    __slots__ = ("ring", "_rowfn", "tag", "_memo", "_primitive")

    def __init__(self, ring: BaseRing, rowfn, tag: str = "", primitive: bool = True):
        self.ring = ring
        self._rowfn = rowfn
        self.tag = tag
        self._memo = {}
        self._primitive = primitive

    def row(self, alpha: int) -> FinVec:
        if alpha < 1:
            raise MatrixError(f"row index must be >= 1, got {alpha}")
        cached = self._memo.get(alpha)
        if cached is None:
            if self._primitive:
                row_evals.count += 1
            cached = self._rowfn(alpha)
            if cached.ring != self.ring:
                raise RingMismatch("row function returned wrong ring")
            self._memo[alpha] = cached
        return cached

    def row_support(self, alpha: int) -> frozenset:
        return self.row(alpha).support()

    def __repr__(self):
        return f"RowFiniteMap({self.tag or 'anonymous'})"


# ---------------------------------------------------------------------------
# Constructors


def zero_map(ring: BaseRing) -> RowFiniteMap:
    return RowFiniteMap(ring, lambda a: FinVec.zero(ring), tag="0")


def identity_map(ring: BaseRing) -> RowFiniteMap:
    return RowFiniteMap(ring, lambda a: FinVec.unit(ring, a), tag="1")


def scalar_map(ring: BaseRing, payload) -> RowFiniteMap:
    """Diagonal map with a constant entry."""
    payload = ring.canon(payload)
    return RowFiniteMap(ring, lambda a: FinVec(ring, {a: payload}),
                        tag=f"diag({ring.format_payload(payload)})")


def matrix_unit(ring: BaseRing, i: int, j: int) -> RowFiniteMap:
    def rowfn(a):
        return FinVec.unit(ring, j) if a == i else FinVec.zero(ring)

    return RowFiniteMap(ring, rowfn, tag=f"e{i},{j}")


def projection(ring: BaseRing, contains, tag: str = "proj") -> RowFiniteMap:
    """Projection onto the coordinates where `contains` holds.

    `contains` is a membership predicate or any object with a .contains method.
    """
    member = contains.contains if hasattr(contains, "contains") else contains

    def rowfn(a):
        return FinVec.unit(ring, a) if member(a) else FinVec.zero(ring)

    return RowFiniteMap(ring, rowfn, tag=tag)


def from_index_map(ring: BaseRing, fn, tag: str = "") -> RowFiniteMap:
    """Map sending e_a to e_{fn(a)}; fn returning None gives a zero row."""

    def rowfn(a):
        target = fn(a)
        return FinVec.zero(ring) if target is None else FinVec.unit(ring, target)

    return RowFiniteMap(ring, rowfn, tag=tag)


def from_rows(ring: BaseRing, rows: dict, tag: str = "") -> RowFiniteMap:
    """Finite-support matrix from an explicit {row: FinVec | {col: payload}} dict."""
    fixed = {}
    for idx, row in rows.items():
        fixed[idx] = row if isinstance(row, FinVec) else FinVec(ring, row)

    def rowfn(a):
        return fixed.get(a, FinVec.zero(ring))

    return RowFiniteMap(ring, rowfn, tag=tag)


# ---------------------------------------------------------------------------
# Ring structure


def _check_rings(f: RowFiniteMap, g: RowFiniteMap):
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring.spec} vs {g.ring.spec}")


def add_maps(f: RowFiniteMap, g: RowFiniteMap) -> RowFiniteMap:
    _check_rings(f, g)
    return RowFiniteMap(f.ring, lambda a: f.row(a).add(g.row(a)),
                        tag=f"({f.tag}+{g.tag})", primitive=False)


def neg_map(f: RowFiniteMap) -> RowFiniteMap:
    return RowFiniteMap(f.ring, lambda a: f.row(a).neg(),
                        tag=f"(-{f.tag})", primitive=False)


def compose(f: RowFiniteMap, g: RowFiniteMap) -> RowFiniteMap:
    """Right-action composition: row_a(fg) = row_a(f) . g."""
    _check_rings(f, g)
    return RowFiniteMap(f.ring, lambda a: f.row(a).apply(g),
                        tag=f"({f.tag}{g.tag})", primitive=False)


def compose_all(maps) -> RowFiniteMap:
    maps = list(maps)
    if not maps:
        raise MatrixError("empty composition")
    acc = maps[0]
    for m in maps[1:]:
        acc = compose(acc, m)
    return acc


def power(f: RowFiniteMap, k: int) -> RowFiniteMap:
    if k < 0:
        raise MatrixError(f"exponent must be >= 0, got {k}")
    if k == 0:
        return identity_map(f.ring)
    acc = f
    for _ in range(k - 1):
        acc = compose(acc, f)
    return acc


# ---------------------------------------------------------------------------
# Window verification and serialization


class WindowCheck:
    """Result of comparing two maps on rows 1..n; rows compared in full."""

    __slots__ = ("ok", "row", "expected", "got")

    def __init__(self, ok, row=None, expected=None, got=None):
        self.ok = ok
        self.row = row
        self.expected = expected
        self.got = got

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "equal"
        return f"row {self.row}: expected {self.expected!r}, got {self.got!r}"


def equal_on_window(f: RowFiniteMap, g: RowFiniteMap, n: int) -> WindowCheck:
    _check_rings(f, g)
    if n < 1:
        raise MatrixError(f"window must be >= 1, got {n}")
    for a in range(1, n + 1):
        rf, rg = f.row(a), g.row(a)
        if rf != rg:
            return WindowCheck(False, a, rf, rg)
    return WindowCheck(True)


def window_dense(f: RowFiniteMap, n: int) -> list:
    """Dense n x m corner, m = largest column touched by rows 1..n."""
    rows = [f.row(a) for a in range(1, n + 1)]
    m = max((max(r.entries) for r in rows if r.entries), default=0)
    return [[r.get(c) for c in range(1, m + 1)] for r in rows]


def from_sparse(ring: BaseRing, triples, tag: str = "sparse") -> RowFiniteMap:
    """Build a finite-support matrix from (row, col, element-text) triples."""
    rows: dict[int, dict] = {}
    seen = set()
    for r, c, text in triples:
        if (r, c) in seen:
            raise MatrixError(f"duplicate coordinate ({r},{c})")
        seen.add((r, c))
        rows.setdefault(r, {})[c] = ring.parse_payload(text)
    return from_rows(ring, rows, tag=tag)


def to_sparse(f: RowFiniteMap, n: int) -> list:
    """Triples (row, col, element-text) for all nonzero cells in rows 1..n."""
    out = []
    for a in range(1, n + 1):
        for c, v in sorted(f.row(a).entries.items()):
            out.append((a, c, f.ring.format_payload(v)))
    return out


def dump_sparse(f: RowFiniteMap, n: int) -> str:
    lines = [f"ring {f.ring.spec}"]
    lines += [f"{r} {c} {t}" for r, c, t in to_sparse(f, n)]
    return "\n".join(lines) + "\n"


def load_sparse(text: str):
    """Parse the sparse triple format; returns (ring, RowFiniteMap)."""
    from .rings import parse_ring_spec

    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("ring "):
        raise MatrixError("missing `ring <spec>` header")
    ring = parse_ring_spec(lines[0][5:])
    triples = []
    for ln in lines[1:]:
        parts = ln.split(None, 2)
        if len(parts) != 3:
            raise MatrixError(f"malformed triple line: {ln!r}")
        triples.append((int(parts[0]), int(parts[1]), parts[2]))
    return ring, from_sparse(ring, triples)
