import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vpas import mont_gadgets as mg

CURVE = mg.default_curve()
GEN = mg.default_generator(CURVE)
ORDER = CURVE.subgroup_order


def _rand_point(rng):
    return mg.double_and_add_reference(rng.randrange(1, ORDER), GEN, CURVE)


def test_curve_parameters_validated():
    assert CURVE.is_on_curve(GEN)
    assert mg.double_and_add_reference(ORDER, GEN, CURVE).infinity
    with pytest.raises(ValueError):
        mg.MontCurve(a=2, b=0, prime=CURVE.prime, subgroup_order=ORDER)


def test_mont_add_matches_weierstrass_oracle(rng):
    for _ in range(50):
        p, q = _rand_point(rng), _rand_point(rng)
        if p.x == q.x:
            continue
        direct = mg.mont_add(p, q, CURVE)
        via_w = mg.from_weierstrass(
            mg.weierstrass_add(
                mg.to_weierstrass(p, CURVE), mg.to_weierstrass(q, CURVE), CURVE
            ),
            CURVE,
        )
        assert direct == via_w
        assert CURVE.is_on_curve(direct)


def test_mont_add_rejects_equal_x(rng):
    p = _rand_point(rng)
    with pytest.raises(mg.DegenerateStep):
        mg.mont_add(p, p, CURVE)
    with pytest.raises(mg.DegenerateStep):
        mg.mont_add(p, p.neg(CURVE), CURVE)


def test_mont_double_matches_oracle(rng):
    for _ in range(3):
        p = _rand_point(rng)
        doubled = mg.mont_double(p, CURVE)
        via_w = mg.from_weierstrass(
            mg.weierstrass_add(
                mg.to_weierstrass(p, CURVE), mg.to_weierstrass(p, CURVE), CURVE
            ),
            CURVE,
        )
        assert doubled == via_w


def test_identity_decompose_round_trip(rng):
    for _ in range(100):
        r = _rand_point(rng)
        if r.x == 0 or (r.x + CURVE.a) % CURVE.prime == 0:
            continue
        p, q = mg.identity_decompose(r, CURVE)
        assert mg.mont_add(p, q, CURVE) == r


def test_identity_decompose_symmetry(rng):
    r = _rand_point(rng)
    p, q = mg.identity_decompose(r, CURVE)
    pn, qn = mg.identity_decompose(r.neg(CURVE), CURVE)
    assert pn == p.neg(CURVE) and qn == q.neg(CURVE)


def test_identity_decompose_degenerate_inputs():
    y = 123
    with pytest.raises(mg.DegenerateStep):
        mg.identity_decompose(mg.MontPoint(0, y), CURVE)
    with pytest.raises(mg.DegenerateStep):
        mg.identity_decompose(
            mg.MontPoint((-CURVE.a) % CURVE.prime, y), CURVE
        )
    with pytest.raises(mg.DegenerateStep):
        mg.identity_decompose(mg.MontPoint.at_infinity(), CURVE)


def test_reference_small_scalars():
    assert mg.double_and_add_reference(1, GEN, CURVE) == GEN
    assert mg.double_and_add_reference(2, GEN, CURVE) == mg.mont_double(GEN, CURVE)
    assert mg.double_and_add_reference(0, GEN, CURVE).infinity


def test_condition_free_equals_reference_random(rng):
    for _ in range(200):
        k = rng.randrange(1, ORDER)
        assert mg.double_and_add_condition_free(k, GEN, CURVE) == \
            mg.double_and_add_reference(k, GEN, CURVE)


def test_condition_free_structured_scalars():
    ks = [1, 2, 3, ORDER - 1] + [1 << j for j in range(1, 128, 7)]
    for k in ks:
        assert mg.double_and_add_condition_free(k, GEN, CURVE) == \
            mg.double_and_add_reference(k, GEN, CURVE), k


def test_condition_free_rejects_nonpositive():
    with pytest.raises(ValueError):
        mg.double_and_add_condition_free(0, GEN, CURVE)


def test_condition_free_strict_reports_degenerate_step():
    # order-1 drives the accumulator through the point at infinity,
    # which the chord-only circuit form cannot represent
    with pytest.raises(mg.DegenerateStep) as exc:
        mg.double_and_add_condition_free(ORDER - 1, GEN, CURVE, strict=True)
    assert exc.value.step is not None
    # the non-strict walk recovers and matches the reference
    assert mg.double_and_add_condition_free(ORDER - 1, GEN, CURVE) == \
        mg.double_and_add_reference(ORDER - 1, GEN, CURVE)


@settings(deadline=None, max_examples=30)
@given(st.integers(min_value=1, max_value=ORDER - 1))
def test_condition_free_property(k):
    assert mg.double_and_add_condition_free(k, GEN, CURVE) == \
        mg.double_and_add_reference(k, GEN, CURVE)


def test_fixed_base_table_and_mul(rng):
    table = mg.build_double_table(GEN, CURVE)
    assert len(table) == ORDER.bit_length()
    assert mg.fixed_base_mul(1, table, CURVE) == GEN
    for _ in range(25):
        k = rng.randrange(1, ORDER)
        assert mg.fixed_base_mul(k, table, CURVE) == \
            mg.double_and_add_reference(k, GEN, CURVE)
    with pytest.raises(ValueError):
        mg.fixed_base_mul(1 << len(table), table, CURVE)
    with pytest.raises(ValueError):
        mg.fixed_base_mul(0, table, CURVE)
