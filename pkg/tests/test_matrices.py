import random

import pytest

from rowfin import matrices as mx
from rowfin.indexing import ResidueClassSet
from rowfin.matrices import FinVec, MatrixError, RowFiniteMap, row_evals
from rowfin.rings import IntegerRing, RingMismatch, parse_ring_spec
from rowfin.triangular import sandwich_A, sandwich_B

Z = IntegerRing()
GF2 = parse_ring_spec("GF:2")
GF5 = parse_ring_spec("GF:5")
Z6 = parse_ring_spec("Zmod:6")


def shift_map(ring, offset=1):
    return mx.from_index_map(ring, lambda a: a + offset, tag="s")


def random_map(ring, rng, window=16, density=0.3):
    rows = {}
    for r in range(1, window + 1):
        entries = {c: ring.random_payload(rng)
                   for c in range(1, window + 1) if rng.random() < density}
        if entries:
            rows[r] = entries
    return mx.from_rows(ring, rows)


def test_finvec_prunes_zero_entries():
    v = FinVec(Z, {2: 1, 7: 3, 9: 0})
    assert v.support() == {2, 7}
    assert v.get(9) == 0
    assert FinVec.zero(Z).support() == frozenset()
    with pytest.raises(MatrixError):
        FinVec(Z, {0: 1})


def test_finvec_char2_cancellation():
    v = FinVec.unit(GF2, 1)
    assert v.add(v).is_zero()


def test_finvec_add_neg():
    v = FinVec(Z, {1: 2, 3: -1})
    assert v.add(v.neg()).is_zero()
    assert v.add(FinVec(Z, {3: 1})).support() == {1}


def test_projection_and_matrix_unit_rows():
    evens = ResidueClassSet(2, [2])
    proj = mx.projection(Z, evens)
    assert proj.row(3).is_zero()
    assert proj.row(4) == FinVec.unit(Z, 4)
    e25 = mx.matrix_unit(Z, 2, 5)
    assert e25.row(2) == FinVec.unit(Z, 5)
    assert e25.row(1).is_zero()


def test_add_maps_inverse():
    rng = random.Random(3)
    f = random_map(Z6, rng)
    total = mx.add_maps(f, mx.neg_map(f))
    for a in range(1, 21):
        assert total.row(a).is_zero()


def test_matrix_unit_composition():
    e12 = mx.matrix_unit(Z, 1, 2)
    e23 = mx.matrix_unit(Z, 2, 3)
    e34 = mx.matrix_unit(Z, 3, 4)
    assert mx.equal_on_window(mx.compose(e12, e23), mx.matrix_unit(Z, 1, 3), 10)
    assert mx.equal_on_window(mx.compose(e12, e34), mx.zero_map(Z), 10)


def test_vector_application():
    A = sandwich_A(Z)
    assert FinVec.unit(Z, 2).apply(A) == FinVec(Z, {2: 1, 3: 1})
    assert FinVec.zero(Z).apply(A).is_zero()
    e23 = mx.matrix_unit(Z, 2, 3)
    v = FinVec(Z, {1: 1, 2: 1})
    assert v.apply(e23) == FinVec.unit(Z, 3)


def test_power_shift():
    s = shift_map(Z)
    assert mx.power(s, 3).row(1) == FinVec.unit(Z, 4)
    assert mx.equal_on_window(mx.power(s, 0), mx.identity_map(Z), 10)


def test_equal_on_window():
    ident = mx.identity_map(Z)
    assert mx.equal_on_window(ident, ident, 5)
    check = mx.equal_on_window(ident, mx.zero_map(Z), 1)
    assert not check
    assert check.row == 1
    assert "row 1" in check.describe()


def test_two_lazy_expressions_for_projection_agree():
    evens = ResidueClassSet(2, [2])
    p1 = mx.projection(Z, evens)
    p2 = mx.from_index_map(Z, lambda a: a if a % 2 == 0 else None)
    assert mx.equal_on_window(p1, p2, 50)


def test_window_dense_identity():
    grid = mx.window_dense(mx.identity_map(Z), 3)
    assert grid == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_window_dense_block_matrices():
    grid = mx.window_dense(sandwich_A(Z), 3)
    assert grid == [
        [1, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0],
        [0, 0, 0, 1, 1, 1],
    ]
    B = sandwich_B(Z)
    rows = [B.row(r) for r in range(1, 7)]
    assert rows == [FinVec.unit(Z, k) for k in (1, 1, 2, 1, 2, 3)]


def test_sparse_roundtrip():
    assert mx.equal_on_window(mx.from_sparse(Z, [(1, 2, "1")]),
                              mx.matrix_unit(Z, 1, 2), 5)
    assert mx.equal_on_window(mx.from_sparse(Z, []), mx.zero_map(Z), 5)
    A = sandwich_A(Z)
    triples = mx.to_sparse(A, 10)
    again = mx.from_sparse(Z, triples)
    assert mx.to_sparse(again, 10) == triples
    with pytest.raises(MatrixError):
        mx.from_sparse(Z, [(1, 1, "1"), (1, 1, "2")])


def test_sparse_text_format():
    f = mx.from_sparse(GF5, [(1, 2, "3"), (4, 1, "2")])
    text = mx.dump_sparse(f, 5)
    ring, g = mx.load_sparse(text)
    assert ring == GF5
    assert mx.equal_on_window(f, g, 5)
    with pytest.raises(MatrixError):
        mx.load_sparse("1 2 3\n")


def test_ring_mismatch_rejected():
    with pytest.raises(RingMismatch):
        mx.compose(mx.identity_map(Z), mx.identity_map(GF5))
    with pytest.raises(RingMismatch):
        FinVec.unit(Z, 1).apply(mx.identity_map(GF5))


@pytest.mark.parametrize("ring", [Z6, GF5])
def test_map_ring_axioms_on_window(ring):
    rng = random.Random(11)
    f, g, h = (random_map(ring, rng) for _ in range(3))
    w = 16
    assert mx.equal_on_window(mx.add_maps(mx.add_maps(f, g), h),
                              mx.add_maps(f, mx.add_maps(g, h)), w)
    assert mx.equal_on_window(mx.add_maps(f, g), mx.add_maps(g, f), w)
    assert mx.equal_on_window(mx.compose(mx.compose(f, g), h),
                              mx.compose(f, mx.compose(g, h)), w)
    assert mx.equal_on_window(mx.compose(f, mx.add_maps(g, h)),
                              mx.add_maps(mx.compose(f, g), mx.compose(f, h)), w)
    assert mx.equal_on_window(mx.compose(mx.add_maps(f, g), h),
                              mx.add_maps(mx.compose(f, h), mx.compose(g, h)), w)
    ident = mx.identity_map(ring)
    assert mx.equal_on_window(mx.compose(f, ident), f, w)
    assert mx.equal_on_window(mx.compose(ident, f), f, w)


def test_apply_is_linear():
    rng = random.Random(5)
    f = random_map(GF5, rng)
    for _ in range(20):
        u = FinVec(GF5, {rng.randint(1, 16): rng.randrange(5) for _ in range(3)})
        v = FinVec(GF5, {rng.randint(1, 16): rng.randrange(5) for _ in range(3)})
        assert u.add(v).apply(f) == u.apply(f).add(v.apply(f))
        c = rng.randrange(5)
        assert u.scale_left(c).apply(f) == u.apply(f).scale_left(c)


def test_composition_is_lazy():
    k = 12
    shifts = [shift_map(Z) for _ in range(k)]
    chain = mx.compose_all(shifts)
    row_evals.reset()
    assert chain.row(1) == FinVec.unit(Z, k + 1)
    assert row_evals.count <= k + 1


def test_row_memoization_is_pure():
    calls = []

    def rowfn(a):
        calls.append(a)
        return FinVec.unit(Z, a)

    f = RowFiniteMap(Z, rowfn)
    first = f.row(4)
    second = f.row(4)
    assert first is second
    assert calls == [4]
