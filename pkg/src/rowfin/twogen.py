"""Two-generator machinery.

Builds the five-map family that packs a countable matrix family into
conjugates of a single block map, compresses those five maps into words
over two generators, and derives the countable-ring embedding that
respects central elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import matrices as mx
from .indexing import SevenPartition, ZPairing, seven_partition, z_pairing
from .matrices import RowFiniteMap, FinVec
from .rings import BaseRing, CountableRingEnum, central_payloads
from .words import Gen, Word, prod_chain


class ConstructionError(Exception):
    """A verified identity failed; construction bugs surface loudly."""


# ---------------------------------------------------------------------------
# The g-family


@dataclass
class GFamily:
    ring: BaseRing
    pairing: ZPairing
    source: dict            # materialized i -> RowFiniteMap (the u_i)
    g1: RowFiniteMap
    g2: RowFiniteMap
    g3: RowFiniteMap
    g4: RowFiniteMap
    g5: RowFiniteMap

    def sigma_contains(self, alpha: int) -> bool:
        """Membership in the central copy Sigma = {0} x N+."""
        return self.pairing.decode(alpha)[0] == 0

    def pi_sigma(self) -> RowFiniteMap:
        return mx.projection(self.ring, self.sigma_contains, tag="pi_sigma")

    def u_product(self, i: int) -> RowFiniteMap:
        """The five-factor product that must reproduce u_i."""
        up = mx.power(self.g4, i) if i >= 0 else mx.power(self.g5, -i)
        down = mx.power(self.g5, i) if i >= 0 else mx.power(self.g4, -i)
        return mx.compose_all([self.g1, up, self.g3, down, self.g2])


def build_g_family(source: dict, ring: BaseRing,
                   pairing: ZPairing | None = None,
                   verify_window: int = 20) -> GFamily:
    """Construct g1..g5 from a finite materialized family {i: u_i}.

    g1 embeds the base coordinates into Sigma, g2 is its right inverse
    (zero off Sigma), g4/g5 shift the integer layer, and g3 carries each
    u_i on the i-th layer.  Every identity u_i = g1 g4^i g3 g5^i g2 is
    verified on the window before returning.
    """
    pairing = pairing or z_pairing()
    enc, dec = pairing.encode, pairing.decode
    for u in source.values():
        if u.ring != ring:
            raise mx.MatrixError(f"source map in {u.ring.spec}, expected {ring.spec}")

    g1 = mx.from_index_map(ring, lambda k: enc(0, k), tag="g1")

    def g2_target(alpha):
        i, gamma = dec(alpha)
        return gamma if i == 0 else None

    g2 = mx.from_index_map(ring, g2_target, tag="g2")
    g4 = mx.from_index_map(ring, lambda a: enc(dec(a)[0] + 1, dec(a)[1]), tag="g4")
    g5 = mx.from_index_map(ring, lambda a: enc(dec(a)[0] - 1, dec(a)[1]), tag="g5")

    def g3_row(alpha):
        i, gamma = dec(alpha)
        u = source.get(i)
        if u is None:
            return FinVec.zero(ring)
        # Row gamma of u_i transported onto layer i.
        return FinVec(ring, {enc(i, c): v for c, v in u.row(gamma).entries.items()})

    g3 = RowFiniteMap(ring, g3_row, tag="g3")

    fam = GFamily(ring=ring, pairing=pairing, source=dict(source),
                  g1=g1, g2=g2, g3=g3, g4=g4, g5=g5)

    _require(mx.equal_on_window(mx.compose(g2, g1), fam.pi_sigma(), verify_window),
             "g2*g1 = pi_sigma")
    _require(mx.equal_on_window(mx.compose(g1, g2), mx.identity_map(ring),
                                verify_window), "g1*g2 = 1")
    _require(mx.equal_on_window(mx.compose(g4, g5), mx.identity_map(ring),
                                verify_window), "g4*g5 = 1")
    _require(mx.equal_on_window(mx.compose(g5, g4), mx.identity_map(ring),
                                verify_window), "g5*g4 = 1")
    for i, u in fam.source.items():
        _require(mx.equal_on_window(fam.u_product(i), u, verify_window),
                 f"u_{i} recovered from the g-family")
    return fam


def _require(check: mx.WindowCheck, what: str):
    if not check:
        raise ConstructionError(f"{what} failed: {check.describe()}")


# ---------------------------------------------------------------------------
# Two generators


F1 = Gen("f1")
F3 = Gen("f3")


def g_word(i: int) -> Word:
    """The word f1^6 f3 f1^i f3 (left-associated product tree)."""
    if not 1 <= i <= 5:
        raise ConstructionError(f"g-word index must be in 1..5, got {i}")
    return prod_chain([F1] * 6 + [F3] + [F1] * i + [F3])


def u_word(i: int) -> Word:
    """g1 g4^i g3 g5^i g2 with every factor replaced by its two-generator word."""
    up, down = (4, 5) if i >= 0 else (5, 4)
    k = abs(i)
    factors = ([g_word(1)] + [g_word(up)] * k + [g_word(3)]
               + [g_word(down)] * k + [g_word(2)])
    return prod_chain(factors)


@dataclass
class TwoGenWitness:
    ring: BaseRing
    f1: RowFiniteMap
    f3: RowFiniteMap
    family: GFamily
    partition: SevenPartition = field(default_factory=seven_partition)

    def env(self) -> dict:
        return {"f1": self.f1, "f3": self.f3}

    def word_for_g(self, i: int) -> Word:
        return g_word(i)

    def word_for_u(self, i: int) -> Word:
        if i not in self.family.source:
            raise ConstructionError(f"u_{i} not materialized")
        return u_word(i)


def _phi(part: SevenPartition, k: int) -> int:
    """The index action of f1: classes 1..5 advance; classes 6,7 merge into 7."""
    c = part.class_of(k)
    if c <= 5:
        j = part.piece(c).index_of(k)
        return part.piece(c + 1).nth(j)
    # Position of k among {6,7, 13,14, 20,21, ...}.
    q, r = divmod(k - 1, 7)
    j = 2 * q + (1 if r == 5 else 2)
    return 7 * j


def _phi_inv(part: SevenPartition, beta: int):
    c = part.class_of(beta)
    if c == 1:
        return None
    if c <= 6:
        j = part.piece(c).index_of(beta)
        return part.piece(c - 1).nth(j)
    j = beta // 7
    q, odd = divmod(j - 1, 2)
    return 7 * q + (6 if odd == 0 else 7)


def build_two_generators(fam: GFamily, verify_window: int = 28) -> TwoGenWitness:
    """Produce f1, f3 whose words reproduce g1..g5, with verification.

    f1 advances the mod-7 pieces (merging the last two); f3 glues the
    inverse transports so that g_i = f1^6 f3 f1^i f3 for i in 1..5.
    """
    ring = fam.ring
    part = seven_partition()
    sigma1 = part.piece(1)

    f1 = mx.from_index_map(ring, lambda k: _phi(part, k), tag="f1")
    gmaps = {1: fam.g1, 2: fam.g2, 3: fam.g3, 4: fam.g4, 5: fam.g5}

    def f3_row(alpha):
        c = part.class_of(alpha)
        if c == 1:
            return FinVec.zero(ring)
        if c <= 6:
            # Row of t_i^{-1} f2^{-1} g_i collapses to a plain row of g_i.
            j = part.piece(c).index_of(alpha)
            return gmaps[c - 1].row(j)
        # Class 7: t6^{-1} f2, i.e. undo six f1-steps then land in Sigma_1.
        k = alpha
        for _ in range(6):
            k = _phi_inv(part, k)
            if k is None:
                return FinVec.zero(ring)
        return FinVec.unit(ring, sigma1.nth(k))

    f3 = RowFiniteMap(ring, f3_row, tag="f3")

    witness = TwoGenWitness(ring=ring, f1=f1, f3=f3, family=fam, partition=part)
    env = witness.env()
    from .words import eval_word

    for i in range(1, 6):
        _require(mx.equal_on_window(eval_word(g_word(i), env, ring), gmaps[i],
                                    verify_window),
                 f"g_{i} = f1^6 f3 f1^{i} f3")
    return witness


def verify_u_words(witness: TwoGenWitness, window: int) -> None:
    """Check every materialized u_i against its two-generator word."""
    from .words import eval_word

    env = witness.env()
    for i, u in witness.family.source.items():
        got = eval_word(witness.word_for_u(i), env, witness.ring)
        _require(mx.equal_on_window(got, u, window), f"u_{i} word")


# ---------------------------------------------------------------------------
# Countable-ring embedding


@dataclass
class EmbeddingReport:
    ring: BaseRing
    count: int
    witness: TwoGenWitness
    words: dict                     # index -> Word over {f1, f3}
    elements: list                  # payloads in enumeration order
    hom_checks: int
    center_checks: int


def maltsev_embed(enum: CountableRingEnum, count: int, window: int = 16,
                  rng=None, commute_samples: int = 20) -> EmbeddingReport:
    """Embed `count` enumerated elements via their diagonal images.

    Verifies that each emitted word reproduces the diagonal image on the
    window, that the embedding is additive and multiplicative, and that
    central elements commute with the two generators and with sampled
    finite-support matrices.
    """
    import random as _random

    ring = enum.ring
    rng = rng or _random.Random(0)
    payloads = [enum.enumerate(i).payload for i in range(count)]
    source = {i: mx.scalar_map(ring, s) for i, s in enumerate(payloads)}
    fam = build_g_family(source, ring, verify_window=min(window, 20))
    witness = build_two_generators(fam, verify_window=min(window, 28))

    from .words import eval_word

    env = witness.env()
    words = {}
    for i, s in enumerate(payloads):
        w = witness.word_for_u(i)
        got = eval_word(w, env, ring)
        _require(mx.equal_on_window(got, source[i], window),
                 f"diagonal image of element {i}")
        words[i] = w

    hom_checks = 0
    for i, a in enumerate(payloads):
        for j, b in enumerate(payloads):
            prod = mx.compose(source[i], source[j])
            _require(mx.equal_on_window(prod, mx.scalar_map(ring, ring.mul(a, b)),
                                        window), f"hom mul ({i},{j})")
            total = mx.add_maps(source[i], source[j])
            _require(mx.equal_on_window(total, mx.scalar_map(ring, ring.add(a, b)),
                                        window), f"hom add ({i},{j})")
            hom_checks += 2

    centre = central_payloads(ring)
    if centre is None:
        centre = [p for p in payloads]  # Int: commutative, all central
    center_checks = 0
    samples = [witness.f1, witness.f3]
    for _ in range(commute_samples):
        n_entries = rng.randint(1, 6)
        entries = {}
        for _ in range(n_entries):
            r = rng.randint(1, window)
            c = rng.randint(1, window)
            entries.setdefault(r, {})[c] = ring.random_payload(rng)
        samples.append(mx.from_rows(ring, entries, tag="sample"))
    for s in centre:
        if s not in payloads:
            continue
        delta = mx.scalar_map(ring, s)
        for m in samples:
            _require(mx.equal_on_window(mx.compose(delta, m), mx.compose(m, delta),
                                        window), "central element commutes")
            center_checks += 1

    return EmbeddingReport(ring=ring, count=count, witness=witness, words=words,
                           elements=payloads, hom_checks=hom_checks,
                           center_checks=center_checks)
