import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vpas.algebra import (
    BsgsTable,
    G1Elem,
    G2Elem,
    GTElem,
    GroupScalar,
    NotInRange,
    bsgs_dlog,
    bsgs_table,
    fixed_base_mul,
    g1_product,
    hash_to_scalar,
    msm,
    multi_pairing,
    pairing,
)
from vpas.backend.params import R

scalars = st.integers(min_value=0, max_value=R - 1)


@given(scalars, scalars)
def test_scalar_field_laws(a, b):
    x, y = GroupScalar(a), GroupScalar(b)
    assert (x + y).value == (a + b) % R
    assert (x - y).value == (a - b) % R
    assert (x * y).value == a * b % R
    assert (-x).value == (R - a) % R
    if a != 0:
        assert (x * x.inverse()).value == 1


@given(scalars)
def test_scalar_bytes_round_trip(a):
    s = GroupScalar(a)
    assert GroupScalar.from_bytes(s.to_bytes()) == s


def test_scalar_bytes_rejects_out_of_range():
    with pytest.raises(ValueError):
        GroupScalar.from_bytes(R.to_bytes(32, "big"))
    with pytest.raises(ValueError):
        GroupScalar.from_bytes(b"\x00")


@settings(deadline=None, max_examples=20)
@given(scalars, scalars)
def test_g1_group_laws(a, b):
    g = G1Elem.generator()
    assert (g ** a) * (g ** b) == g ** ((a + b) % R)
    assert (g ** a) ** b == g ** (a * b % R)
    assert (g ** a) * (g ** a).inverse() == G1Elem.identity()


@settings(deadline=None, max_examples=10)
@given(scalars, scalars)
def test_g2_group_laws(a, b):
    h = G2Elem.generator()
    assert (h ** a) * (h ** b) == h ** ((a + b) % R)
    assert (h ** a) * (h ** a).inverse() == G2Elem.identity()


def test_point_serialization_round_trip(rng):
    for _ in range(10):
        k = rng.randrange(R)
        p = G1Elem.generator() ** k
        assert len(p.to_bytes()) == 48
        assert G1Elem.from_bytes(p.to_bytes()) == p
        q = G2Elem.generator() ** k
        assert len(q.to_bytes()) == 96
        assert G2Elem.from_bytes(q.to_bytes()) == q
    assert G1Elem.from_bytes(G1Elem.identity().to_bytes()).is_identity()
    assert G2Elem.from_bytes(G2Elem.identity().to_bytes()).is_identity()


def test_point_deserialization_rejects_garbage():
    with pytest.raises(ValueError):
        G1Elem.from_bytes(b"\xff" * 48)
    with pytest.raises(ValueError):
        G1Elem.from_bytes(b"\x00" * 47)


def test_pairing_bilinearity(rng):
    g, h = G1Elem.generator(), G2Elem.generator()
    a, b = rng.randrange(1, R), rng.randrange(1, R)
    assert pairing(g ** a, h ** b) == pairing(g, h) ** (a * b % R)
    assert pairing(g ** a, h) == pairing(g, h ** a)
    assert pairing(g, h) != GTElem.identity()


def test_multi_pairing_is_product(rng):
    g, h = G1Elem.generator(), G2Elem.generator()
    pairs = [
        (g ** rng.randrange(1, R), h ** rng.randrange(1, R)) for _ in range(3)
    ]
    prod = GTElem.identity()
    for a, b in pairs:
        prod = prod * pairing(a, b)
    assert multi_pairing(pairs) == prod


def test_multi_pairing_cancellation(rng):
    g, h = G1Elem.generator(), G2Elem.generator()
    a = rng.randrange(1, R)
    assert multi_pairing([(g ** a, h), ((g ** a).inverse(), h)]) == GTElem.identity()


def test_msm_matches_naive(rng):
    g = G1Elem.generator()
    points = [g ** rng.randrange(1, R) for _ in range(20)]
    ks = [rng.randrange(R) for _ in range(20)]
    naive = G1Elem.identity()
    for p, k in zip(points, ks):
        naive = naive * p ** k
    assert msm(points, ks) == naive
    assert g1_product(points) == msm(points, [1] * len(points))


def test_fixed_base_matches_pow(rng):
    g = G1Elem.generator()
    base = g ** rng.randrange(1, R)
    ks = [rng.randrange(R) for _ in range(8)] + [0, 1, R - 1]
    assert fixed_base_mul(base, ks) == [base ** k for k in ks]


def test_hash_to_scalar_domain_separation():
    a = hash_to_scalar("tag-a", b"data")
    b = hash_to_scalar("tag-b", b"data")
    c = hash_to_scalar("tag-a", b"data")
    assert a != b
    assert a == c
    assert 0 <= a.value < R
    # length prefix prevents tag/data boundary ambiguity
    assert hash_to_scalar("ab", b"c") != hash_to_scalar("a", b"bc")


def test_bsgs_recovers_exponents(rng):
    base = G1Elem.generator() ** rng.randrange(1, R)
    table = bsgs_table(base, 16)
    for k in [0, 1, 2, 255, 256, (1 << 16) - 1]:
        assert bsgs_dlog(table, base ** k) == k
    for _ in range(20):
        k = rng.randrange(1 << 16)
        assert bsgs_dlog(table, base ** k) == k


def test_bsgs_out_of_range_raises(rng):
    base = G1Elem.generator() ** rng.randrange(1, R)
    table = bsgs_table(base, 8)
    with pytest.raises(NotInRange):
        bsgs_dlog(table, base ** (1 << 8))
    with pytest.raises(NotInRange):
        bsgs_dlog(table, base ** (R - 1))


def test_bsgs_table_cached_per_base_and_bits(rng):
    base = G1Elem.generator() ** rng.randrange(1, R)
    assert bsgs_table(base, 8) is bsgs_table(base, 8)
    assert bsgs_table(base, 8) is not bsgs_table(base, 10)


def test_bsgs_table_rejects_odd_bits():
    with pytest.raises(ValueError):
        BsgsTable(G1Elem.generator(), 7)
