"""Ring words over named generators.

Words are binary trees with leaves 0, 1, -1, or a generator name; length
is additive over sums and products.  Includes evaluation into row-finite
maps, the support-closure over-approximation of proximity balls, and the
definitional brute-force proximity oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import (FinVec, RowFiniteMap, add_maps, compose, identity_map,
                       neg_map, zero_map)


class WordError(Exception):
    pass


class OracleBudgetExceeded(WordError):
    pass


# ---------------------------------------------------------------------------
# Word trees


@dataclass(frozen=True)
class Word:
    pass


@dataclass(frozen=True)
class Gen(Word):
    name: str


@dataclass(frozen=True)
class Const(Word):
    value: int  # one of -1, 0, 1


ZERO = Const(0)
ONE = Const(1)
NEG_ONE = Const(-1)


@dataclass(frozen=True)
class Sum(Word):
    left: Word
    right: Word


@dataclass(frozen=True)
class Prod(Word):
    left: Word
    right: Word


def word_length(w: Word) -> int:
    if isinstance(w, (Gen, Const)):
        return 1
    return word_length(w.left) + word_length(w.right)


def word_generators(w: Word) -> frozenset:
    if isinstance(w, Gen):
        return frozenset({w.name})
    if isinstance(w, Const):
        return frozenset()
    return word_generators(w.left) | word_generators(w.right)


def prod_chain(factors) -> Word:
    """Left-associated product of a nonempty factor list."""
    factors = list(factors)
    if not factors:
        raise WordError("empty product")
    acc = factors[0]
    for f in factors[1:]:
        acc = Prod(acc, f)
    return acc


def format_word(w: Word) -> str:
    if isinstance(w, Const):
        return str(w.value)
    if isinstance(w, Gen):
        return w.name
    op = "+" if isinstance(w, Sum) else "*"
    return f"({format_word(w.left)} {op} {format_word(w.right)})"


def parse_word(text: str) -> Word:
    """Parse `0 | 1 | -1 | <name> | (w + w) | (w * w)`; round-trips with format_word."""
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def parse() -> Word:
        nonlocal pos
        skip_ws()
        if pos >= len(text):
            raise WordError("unexpected end of word")
        ch = text[pos]
        if ch == "(":
            pos += 1
            left = parse()
            skip_ws()
            if pos >= len(text) or text[pos] not in "+*":
                raise WordError(f"expected + or * at position {pos}")
            op = text[pos]
            pos += 1
            right = parse()
            skip_ws()
            if pos >= len(text) or text[pos] != ")":
                raise WordError(f"expected ) at position {pos}")
            pos += 1
            return Sum(left, right) if op == "+" else Prod(left, right)
        if ch == "-" and text[pos:pos + 2] == "-1":
            pos += 2
            return NEG_ONE
        if ch.isdigit():
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            val = int(text[start:pos])
            if val not in (0, 1):
                raise WordError(f"constant must be 0, 1 or -1, got {val}")
            return Const(val)
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < len(text) and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            return Gen(text[start:pos])
        raise WordError(f"unexpected character {ch!r} at position {pos}")

    w = parse()
    skip_ws()
    if pos != len(text):
        raise WordError(f"trailing input at position {pos}")
    return w


# ---------------------------------------------------------------------------
# Evaluation


def eval_word(w: Word, env: dict, ring) -> RowFiniteMap:
    """Evaluate into a lazy row-finite map; env binds generator names."""
    if isinstance(w, Const):
        if w.value == 0:
            return zero_map(ring)
        if w.value == 1:
            return identity_map(ring)
        return neg_map(identity_map(ring))
    if isinstance(w, Gen):
        try:
            m = env[w.name]
        except KeyError:
            raise WordError(f"unbound generator {w.name!r}") from None
        if m.ring != ring:
            raise WordError(f"generator {w.name!r} lives in {m.ring.spec}, not {ring.spec}")
        return m
    left = eval_word(w.left, env, ring)
    right = eval_word(w.right, env, ring)
    return add_maps(left, right) if isinstance(w, Sum) else compose(left, right)


# ---------------------------------------------------------------------------
# Support closure (the computable ball-support over-approximation)


@dataclass
class SupportBallReport:
    center: FinVec
    radius: int
    cover: frozenset
    census: dict  # generator name -> indices it contributed


class StepSupport:
    """One closure step: indices reachable in a single generator application.

    Assembled from a fearing descriptor's per-row support bound and the
    finite extra generator set U; records which generator contributed
    which new indices.
    """

    def __init__(self, supp_fn=None, u_maps=None):
        self.supp_fn = supp_fn
        self.u_maps = dict(u_maps or {})
        self.census: dict[str, set] = {}

    def __call__(self, indices: frozenset) -> frozenset:
        out = set(indices)
        for a in indices:
            if self.supp_fn is not None:
                added = set(self.supp_fn(a)) - out
                if added:
                    self.census.setdefault("S", set()).update(added)
                    out.update(added)
            for name, m in self.u_maps.items():
                added = set(m.row_support(a)) - out
                if added:
                    self.census.setdefault(name, set()).update(added)
                    out.update(added)
        return frozenset(out)


def support_closure(x: FinVec, step_support, r: int) -> SupportBallReport:
    """Iterated closure Gamma_r of support(x) under one-step reachability.

    Word values are sums of products, and sums can only shrink support, so
    the support of every vector within proximity r of x lies in Gamma_r.
    """
    cover = frozenset(x.support())
    for _ in range(r):
        cover = frozenset(step_support(cover))
    census = dict(getattr(step_support, "census", {}))
    return SupportBallReport(center=x, radius=r, cover=cover, census=census)


def descriptor_step(descriptor, u_maps: dict) -> StepSupport:
    """Step function for a fearing descriptor S plus a finite map family U."""

    def supp_fn(a):
        supp = descriptor.supp(a)
        if isinstance(supp, frozenset):
            return supp
        raise WordError(
            f"descriptor {descriptor.name} has infinite support at row {a}"
        )

    return StepSupport(supp_fn=supp_fn, u_maps=u_maps)


# ---------------------------------------------------------------------------
# Brute-force proximity oracle


@dataclass
class ProximityResult:
    found: bool
    r: int            # witness length, or the exhausted bound
    witness: Word | None
    words_tried: int


class _Cand:
    """A candidate word with its vector image and a lazily built matrix."""

    __slots__ = ("word", "vec", "_mat")

    def __init__(self, word, vec):
        self.word = word
        self.vec = vec
        self._mat = None

    def mat(self, env, ring):
        if self._mat is None:
            self._mat = eval_word(self.word, env, ring)
        return self._mat


def proximity_oracle(x1: FinVec, x2: FinVec, env: dict, r_max: int,
                     word_cap: int = 500_000) -> ProximityResult:
    """Least word length r with x2 = x1 . eval(w), by exhaustive enumeration.

    Enumeration order is by length, then tree shape, then generator,
    so results are deterministic.  Exponential in r_max; intended as a
    test oracle at small radii.
    """
    ring = x1.ring
    names = sorted(env)
    tried = 0

    leaves = [_Cand(ZERO, FinVec.zero(ring)),
              _Cand(ONE, x1),
              _Cand(NEG_ONE, x1.neg())]
    for name in names:
        leaves.append(_Cand(Gen(name), x1.apply(env[name])))

    by_length: list[list[_Cand]] = [leaves]
    for n in range(1, r_max + 1):
        if n > 1:
            level: list[_Cand] = []
            for m1 in range(1, n):
                for left in by_length[m1 - 1]:
                    for right in by_length[n - m1 - 1]:
                        level.append(_Cand(Sum(left.word, right.word),
                                           left.vec.add(right.vec)))
                        level.append(_Cand(
                            Prod(left.word, right.word),
                            left.vec.apply(right.mat(env, ring))))
                        if tried + len(level) > word_cap:
                            raise OracleBudgetExceeded(
                                f"word cap {word_cap} exceeded at length {n}"
                            )
            by_length.append(level)
        for cand in by_length[n - 1]:
            tried += 1
            if cand.vec == x2:
                return ProximityResult(True, n, cand.word, tried)
    return ProximityResult(False, r_max, None, tried)
