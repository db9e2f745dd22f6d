import pytest

from rowfin import fearing as fr
from rowfin import matrices as mx
from rowfin.indexing import TailSet
from rowfin.matrices import FinVec
from rowfin.rings import parse_ring_spec
from rowfin.words import proximity_oracle

GF2 = parse_ring_spec("GF:2")
GF3 = parse_ring_spec("GF:3")


def shift(ring):
    return mx.from_index_map(ring, lambda a: a + 1, tag="s")


def test_descriptor_supports():
    assert fr.diagonal_fearing().supp(5) == {5}
    assert fr.banded_fearing(2).supp(5) == {3, 4, 5, 6, 7}
    assert fr.banded_fearing(2).supp(1) == {1, 2, 3}
    assert fr.stretch_fearing(2).supp(3) == frozenset(range(1, 7))
    assert fr.paired_fearing().supp(3) == fr.paired_fearing().supp(4) == {4}


def test_descriptor_membership_and_samples():
    for make in [fr.diagonal_fearing, lambda: fr.banded_fearing(1),
                 lambda: fr.stretch_fearing(2), fr.paired_fearing]:
        descriptor = make()
        for seed in range(5):
            h = descriptor.sample(GF3, seed)
            assert descriptor.member_on_window(h, 24)
        outside = mx.matrix_unit(GF3, 1, 20)
        if 20 not in descriptor.supp(1):
            assert not descriptor.member_on_window(outside, 24)


def test_finiteness_flags():
    assert fr.diagonal_fearing().is_pointwise_finite()
    weak = fr.supp_descriptor(
        "one-wide-row",
        lambda a: TailSet(1) if a == 1 else frozenset({a}),
        infinite_supp_indices=frozenset({1}),
    )
    assert not weak.is_pointwise_finite()
    assert weak.is_weakly_finite()


def test_split_weak_fearing_trivial_sigma():
    sigma, s_prime, s_second = fr.split_weak_fearing(fr.diagonal_fearing())
    assert sigma == frozenset()
    assert s_prime.supp(4) == {4}
    assert s_second.supp(4) == {4}


def test_split_weak_fearing_single_row():
    weak = fr.supp_descriptor(
        "one-wide-row",
        lambda a: TailSet(1) if a == 1 else frozenset({a}),
        infinite_supp_indices=frozenset({1}),
    )
    sigma, s_prime, s_second = fr.split_weak_fearing(weak)
    assert sigma == {1}
    assert s_prime.is_pointwise_finite()
    assert s_prime.supp(1) == {1}
    assert s_second.supp(2) == {2}
    assert not s_second.is_pointwise_finite()
    # A member with a wide first row lands in S'' but not S'.
    wide = mx.from_rows(GF3, {1: {1: 1, 7: 2}})
    assert weak.member_on_window(wide, 12)
    assert not s_prime.member_on_window(wide, 12)
    assert s_second.member_on_window(wide, 12)


def test_split_weak_fearing_requires_weak_finiteness():
    bad = fr.supp_descriptor("all-wide", lambda a: TailSet(1),
                             infinite_supp_indices=TailSet(1))
    with pytest.raises(fr.FearingError):
        fr.split_weak_fearing(bad)


def test_split_parts_resum():
    f = mx.from_rows(GF3, {1: {1: 1, 5: 2}, 2: {2: 1}, 3: {1: 2}})
    off, on = fr.split_parts(f, frozenset({1}))
    assert on.row(1) == f.row(1)
    assert off.row(1).is_zero()
    assert mx.equal_on_window(mx.add_maps(off, on), f, 10)


def test_fear_witness_first_block_geometry():
    witness = fr.fear_witness(fr.diagonal_fearing(), {"s": shift(GF3)}, 3, GF3)
    first = witness.pairs[0]
    assert first.x == FinVec.unit(GF3, 1)
    assert first.cover == {1, 2}
    assert first.escape == 3
    assert first.block == {1, 3}


def test_fear_witness_no_extra_maps():
    witness = fr.fear_witness(fr.diagonal_fearing(), {}, 4, GF3)
    for p in witness.pairs:
        m = min(p.block)
        assert p.cover == {m}
        assert p.escape == m + 1
    assert witness.certificates_hold()


def test_fear_witness_blocks_disjoint_and_certified():
    witness = fr.fear_witness(fr.diagonal_fearing(), {"s": shift(GF3)}, 8, GF3)
    assert witness.certificates_hold()
    seen = set()
    for p in witness.pairs:
        assert not (p.block & seen)
        seen |= p.block
        assert p.x.apply(witness.g) == p.y


def test_fear_witness_requires_pointwise_finiteness():
    weak = fr.supp_descriptor(
        "one-wide-row",
        lambda a: TailSet(1) if a == 1 else frozenset({a}),
        infinite_supp_indices=frozenset({1}),
    )
    with pytest.raises(fr.FearingError):
        fr.fear_witness(weak, {}, 2, GF3)


def test_fear_witness_oracle_confirms_certificates():
    env = {"s": shift(GF2)}
    witness = fr.fear_witness(fr.diagonal_fearing(), env, 2, GF2)
    for p in witness.pairs:
        res = proximity_oracle(p.x, p.y, env, p.j)
        assert not res.found
