import random

import pytest

from rowfin import fearing as fr
from rowfin import matrices as mx
from rowfin import triangular as tr
from rowfin.indexing import tri, tri_block
from rowfin.matrices import FinVec
from rowfin.rings import IntegerRing, parse_ring_spec

Z = IntegerRing()
GF5 = parse_ring_spec("GF:5")


def test_sandwich_A_rows():
    A = tr.sandwich_A(Z)
    for i in range(1, 20):
        assert A.row(i) == FinVec(Z, {c: 1 for c in tri_block(i)})
    assert A.row_support(4) == {7, 8, 9, 10}


def test_sandwich_B_rows():
    B = tr.sandwich_B(Z)
    rows = [B.row(r) for r in range(1, 7)]
    assert rows == [FinVec.unit(Z, k) for k in (1, 1, 2, 1, 2, 3)]


def test_AB_product_row_sums():
    # Row i of A*B collects one unit vector per block column: ones on 1..i.
    AB = mx.compose(tr.sandwich_A(Z), tr.sandwich_B(Z))
    for i in range(1, 12):
        assert AB.row(i) == FinVec(Z, {k: 1 for k in range(1, i + 1)})


def test_sandwich_X_identity():
    X = tr.sandwich_X(mx.identity_map(Z), 12)
    for i in range(1, 13):
        assert X.row(tri(i)) == FinVec.unit(Z, tri(i))
    axb = mx.compose(mx.compose(tr.sandwich_A(Z), X), tr.sandwich_B(Z))
    assert mx.equal_on_window(axb, mx.identity_map(Z), 12)


def test_sandwich_X_zero():
    X = tr.sandwich_X(mx.zero_map(Z), 10)
    for d in range(1, 40):
        assert X.row(d).is_zero()


def test_sandwich_X_random_lower_triangular():
    rng = random.Random(1)
    rows = {i: {c: rng.randrange(1, 5) for c in range(1, i + 1)
                if rng.random() < 0.6}
            for i in range(1, 15)}
    Y = mx.from_rows(GF5, {i: r for i, r in rows.items() if r})
    X = tr.sandwich_X(Y, 14)   # verifies AXB = Y internally
    assert all(X.row_support(d) <= {d} for d in range(1, tri(14) + 1))


def test_sandwich_X_rejects_upper_cell():
    Y = mx.matrix_unit(Z, 1, 2)
    with pytest.raises(tr.SandwichError):
        tr.sandwich_X(Y, 5)


def test_upper_lower_split():
    ident = mx.identity_map(Z)
    low, up = tr.upper_lower_split(ident)
    assert mx.equal_on_window(low, ident, 10)
    assert mx.equal_on_window(up, mx.zero_map(Z), 10)

    f = mx.add_maps(mx.matrix_unit(Z, 2, 1), mx.matrix_unit(Z, 1, 2))
    low, up = tr.upper_lower_split(f)
    assert mx.equal_on_window(low, mx.matrix_unit(Z, 2, 1), 10)
    assert mx.equal_on_window(up, mx.matrix_unit(Z, 1, 2), 10)
    assert mx.equal_on_window(mx.add_maps(low, up), f, 10)


def test_lower_embed_diagonal_is_identity():
    witness = tr.fear_lower_embed(fr.diagonal_fearing(), Z, verify_window=20)
    assert witness.targets == list(range(1, 21))
    assert mx.equal_on_window(witness.f, mx.identity_map(Z), 20)
    assert mx.equal_on_window(witness.g, mx.identity_map(Z), 20)


def test_lower_embed_stretch():
    witness = tr.fear_lower_embed(fr.stretch_fearing(2), Z, verify_window=16)
    assert witness.targets == [2 * k for k in range(1, 17)]
    gf = mx.compose(witness.g, witness.f)
    assert mx.equal_on_window(gf, mx.identity_map(Z), 16)


def test_lower_embed_repeated_maxima():
    # paired supp has l_1 = l_2 = 2, l_3 = l_4 = 4, ...; the emitted
    # targets must still be strictly increasing.
    witness = tr.fear_lower_embed(fr.paired_fearing(), Z, verify_window=16)
    assert witness.targets[:4] == [2, 3, 4, 5]
    for a, b in zip(witness.targets, witness.targets[1:]):
        assert a < b
    gf = mx.compose(witness.g, witness.f)
    assert mx.equal_on_window(gf, mx.identity_map(Z), 16)


@pytest.mark.parametrize("make", [lambda: fr.banded_fearing(1),
                                  lambda: fr.stretch_fearing(2),
                                  fr.paired_fearing])
def test_lower_embed_triangularizes_members(make):
    descriptor = make()
    witness = tr.fear_lower_embed(descriptor, GF5, verify_window=24)
    for seed in range(10):
        h = descriptor.sample(GF5, seed)
        assert descriptor.member_on_window(h, 24)
        fh = mx.compose(witness.f, h)
        assert tr.is_lower_triangular_on_window(fh, 24)
