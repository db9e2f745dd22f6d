"""Exact-arithmetic base rings.

Every ring works on canonical payloads: plain ints for the integer-like
rings, nested tuples-of-tuples for square matrix rings.  Payloads are
hashable and canonical, so payload equality is ring equality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class RingError(Exception):
    pass


class RingMismatch(RingError):
    pass


class RingSpecError(RingError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class BaseRing:
    """Abstract ring operating on canonical payloads.

    Instances are immutable and compare equal iff their spec strings match.
    """

    spec: str

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def canon(self, a):
        raise NotImplementedError

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def size(self):
        """Number of elements, or None when infinite."""
        return None

    def elements(self):
        """Iterate every payload once (finite rings only)."""
        raise RingError(f"{self.spec} is not finite")

    def nth_element(self, index: int):
        """Deterministic enumeration; surjective for finite rings, injective otherwise."""
        raise NotImplementedError

    def random_payload(self, rng):
        raise NotImplementedError

    def format_payload(self, a) -> str:
        raise NotImplementedError

    def parse_payload(self, text: str):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def element(self, payload) -> "Element":
        return Element(self, self.canon(payload))

    def __eq__(self, other):
        return isinstance(other, BaseRing) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"<ring {self.spec}>"


class IntegerRing(BaseRing):
    spec = "Int"

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def canon(self, a):
        if not isinstance(a, int):
            raise RingError(f"not an integer payload: {a!r}")
        return a

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def nth_element(self, index):
        # 0, 1, -1, 2, -2, ...
        if index == 0:
            return 0
        half, odd = divmod(index + 1, 2)
        return half if odd else -half

    def random_payload(self, rng):
        return rng.randint(-(10**6), 10**6)

    def format_payload(self, a):
        return str(a)

    def parse_payload(self, text):
        return self.canon(int(text))


class ModularRing(BaseRing):
    """Integers mod n for n >= 2; residues canonicalized into [0, n)."""

    def __init__(self, n: int):
        if n < 2:
            raise RingSpecError(f"modulus must be >= 2, got {n}")
        self.n = n
        self.spec = f"Zmod:{n}"

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def canon(self, a):
        if not isinstance(a, int):
            raise RingError(f"not an integer payload: {a!r}")
        return a % self.n

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1 % self.n

    def size(self):
        return self.n

    def elements(self):
        return iter(range(self.n))

    def nth_element(self, index):
        return index % self.n

    def random_payload(self, rng):
        return rng.randrange(self.n)

    def format_payload(self, a):
        return str(a)

    def parse_payload(self, text):
        return self.canon(int(text))


class PrimeField(ModularRing):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise RingSpecError(f"{p} is not prime")
        super().__init__(p)
        self.spec = f"GF:{p}"


class MatrixRing(BaseRing):
    """k-by-k square matrices over a base ring; payloads are tuples of tuples."""

    def __init__(self, base: BaseRing, k: int):
        if k < 1:
            raise RingSpecError(f"matrix size must be >= 1, got {k}")
        self.base = base
        self.k = k
        self.spec = f"Mat:{k}:{base.spec}"

    def add(self, a, b):
        k = self.k
        return tuple(
            tuple(self.base.add(a[i][j], b[i][j]) for j in range(k)) for i in range(k)
        )

    def mul(self, a, b):
        k, br = self.k, self.base
        out = []
        for i in range(k):
            row = []
            for j in range(k):
                acc = br.zero
                for t in range(k):
                    acc = br.add(acc, br.mul(a[i][t], b[t][j]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def neg(self, a):
        return tuple(tuple(self.base.neg(x) for x in row) for row in a)

    def canon(self, a):
        rows = tuple(a)
        if len(rows) != self.k:
            raise RingError(f"expected {self.k} rows, got {len(rows)}")
        out = []
        for row in rows:
            row = tuple(row)
            if len(row) != self.k:
                raise RingError(f"expected {self.k} columns, got {len(row)}")
            out.append(tuple(self.base.canon(x) for x in row))
        return tuple(out)

    @property
    def zero(self):
        z = self.base.zero
        return tuple(tuple(z for _ in range(self.k)) for _ in range(self.k))

    @property
    def one(self):
        z, o = self.base.zero, self.base.one
        return tuple(
            tuple(o if i == j else z for j in range(self.k)) for i in range(self.k)
        )

    def size(self):
        b = self.base.size()
        return None if b is None else b ** (self.k * self.k)

    def elements(self):
        total = self.size()
        if total is None:
            raise RingError(f"{self.spec} is not finite")
        for index in range(total):
            yield self.nth_element(index)

    def nth_element(self, index):
        b = self.base.size()
        cells = self.k * self.k
        digits = []
        if b is None:
            # Diagonalize the index over the cells; injective but not surjective.
            for _ in range(cells):
                index, d = divmod(index, 2)
                digits.append(d)
            digits = [self.base.nth_element(d) for d in digits]
        else:
            for _ in range(cells):
                index, d = divmod(index, b)
                digits.append(self.base.nth_element(d))
        it = iter(digits)
        return tuple(tuple(next(it) for _ in range(self.k)) for _ in range(self.k))

    def random_payload(self, rng):
        return tuple(
            tuple(self.base.random_payload(rng) for _ in range(self.k))
            for _ in range(self.k)
        )

    def format_payload(self, a):
        def unpack(x, ring):
            if isinstance(ring, MatrixRing):
                return [[unpack(v, ring.base) for v in row] for row in x]
            return x

        return json.dumps(unpack(a, self), separators=(",", ":"))

    def parse_payload(self, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise RingError(f"unparsable matrix element: {text!r}") from exc
        return self.canon(data)


@dataclass(frozen=True)
class Element:
    """A ring element: a ring reference plus a canonical payload."""

    ring: BaseRing
    payload: object

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring.spec} vs {other.ring.spec}")

    def __add__(self, other):
        self._check(other)
        return Element(self.ring, self.ring.add(self.payload, other.payload))

    def __mul__(self, other):
        self._check(other)
        return Element(self.ring, self.ring.mul(self.payload, other.payload))

    def __neg__(self):
        return Element(self.ring, self.ring.neg(self.payload))

    def __sub__(self, other):
        self._check(other)
        return Element(self.ring, self.ring.sub(self.payload, other.payload))

    def is_zero(self):
        return self.ring.is_zero(self.payload)

    def __str__(self):
        return self.ring.format_payload(self.payload)


def parse_ring_spec(text: str) -> BaseRing:
    """Parse `Int | Zmod:<n> | GF:<p> | Mat:<k>:<inner-spec>`."""
    text = text.strip()
    if text == "Int":
        return IntegerRing()
    if text.startswith("Zmod:"):
        return ModularRing(_parse_int(text[5:], text))
    if text.startswith("GF:"):
        return PrimeField(_parse_int(text[3:], text))
    if text.startswith("Mat:"):
        rest = text[4:]
        head, sep, inner = rest.partition(":")
        if not sep:
            raise RingSpecError(f"malformed ring spec: {text!r}")
        return MatrixRing(parse_ring_spec(inner), _parse_int(head, text))
    raise RingSpecError(f"malformed ring spec: {text!r}")


def _parse_int(piece: str, full: str) -> int:
    try:
        return int(piece)
    except ValueError as exc:
        raise RingSpecError(f"malformed ring spec: {full!r}") from exc


def is_simple_hint(ring: BaseRing) -> bool:
    """True for prime fields and matrix rings over simple rings.

    Gates the brute-force simple-full check; not a general simplicity decider.
    """
    if isinstance(ring, PrimeField):
        return True
    if isinstance(ring, MatrixRing):
        return is_simple_hint(ring.base)
    return False


class CountableRingEnum:
    """Deterministic enumeration of a ring's elements.

    For finite rings, indices 0..size-1 list every element exactly once.
    For infinite rings the enumeration is injective.
    """

    def __init__(self, ring: BaseRing):
        self.ring = ring

    def enumerate(self, index: int):
        if index < 0:
            raise RingError("enumeration index must be >= 0")
        n = self.ring.size()
        if n is not None and index >= n:
            raise RingError(f"index {index} out of range for {self.ring.spec}")
        return Element(self.ring, self.ring.nth_element(index))


def central_payloads(ring: BaseRing):
    """The center of a finite ring by enumeration; for Int, the whole ring is central."""
    if isinstance(ring, IntegerRing):
        return None  # commutative: everything is central
    n = ring.size()
    if n is None:
        raise RingError(f"cannot enumerate center of infinite ring {ring.spec}")
    elems = list(ring.elements())
    return [s for s in elems if all(ring.mul(s, t) == ring.mul(t, s) for t in elems)]
