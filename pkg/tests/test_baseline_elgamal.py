import pytest

from vpas.algebra import G1Elem, NotInRange
from vpas.baseline_elgamal import (
    add,
    combine_reenc,
    decrypt,
    dkg,
    encrypt,
    reenc_share,
)


def test_dkg_product_of_keys(rng):
    pk_alpha, keypairs = dkg(3, rng)
    acc = G1Elem.identity()
    for kp in keypairs:
        acc = acc * kp.pk
        assert kp.pk == G1Elem.generator() ** kp.sk
    assert pk_alpha == acc


def test_dkg_single_party(rng):
    pk_alpha, keypairs = dkg(1, rng)
    assert pk_alpha == keypairs[0].pk


def test_dkg_rejects_zero_parties(rng):
    with pytest.raises(ValueError):
        dkg(0, rng)


def test_encrypt_decrypt_round_trip(rng):
    pk_alpha, keypairs = dkg(1, rng)
    sk = keypairs[0].sk
    for bits in (4, 8, 16):
        for _ in range(10):
            m = rng.randrange(1 << bits)
            ct = encrypt(m, pk_alpha, bits, rng)
            combined = combine_reenc(
                ct, [reenc_share(ct, sk, keypairs[0].pk, rng)]
            )
            assert decrypt(sk, combined, bits) == m


def test_encrypt_range_check(rng):
    pk_alpha, _ = dkg(1, rng)
    with pytest.raises(ValueError):
        encrypt(16, pk_alpha, 4, rng)
    with pytest.raises(ValueError):
        encrypt(-1, pk_alpha, 4, rng)


def test_encrypt_is_randomized(rng):
    pk_alpha, _ = dkg(1, rng)
    a = encrypt(5, pk_alpha, 8, rng)
    b = encrypt(5, pk_alpha, 8, rng)
    assert a.c1 != b.c1 and a.c2 != b.c2


def test_homomorphic_add(rng):
    pk_alpha, keypairs = dkg(2, rng)
    cts = [encrypt(m, pk_alpha, 8, rng) for m in (3, 4)]
    total = add(cts[0], cts[1])
    sk_beta = keypairs[0].sk  # reuse as collector key for the test
    shares = [reenc_share(total, kp.sk, keypairs[0].pk, rng) for kp in keypairs]
    combined = combine_reenc(total, shares)
    assert decrypt(sk_beta, combined, 8) == 7


def test_homomorphism_many(rng):
    pk_alpha, keypairs = dkg(1, rng)
    values = [rng.randrange(8) for _ in range(16)]
    acc = encrypt(values[0], pk_alpha, 8, rng)
    for v in values[1:]:
        acc = add(acc, encrypt(v, pk_alpha, 8, rng))
    shares = [reenc_share(acc, keypairs[0].sk, keypairs[0].pk, rng)]
    combined = combine_reenc(acc, shares)
    assert decrypt(keypairs[0].sk, combined, 8) == sum(values)


def test_reenc_to_fresh_key(rng):
    from vpas.algebra import GroupScalar
    from vpas.backend.params import R

    pk_alpha, keypairs = dkg(3, rng)
    sk_beta = GroupScalar(rng.randrange(1, R))
    pk_beta = G1Elem.generator() ** sk_beta
    m = 42
    ct = encrypt(m, pk_alpha, 8, rng)
    shares = [reenc_share(ct, kp.sk, pk_beta, rng) for kp in keypairs]
    combined = combine_reenc(ct, shares)
    assert decrypt(sk_beta, combined, 8) == m
    # shares commute
    combined2 = combine_reenc(ct, list(reversed(shares)))
    assert decrypt(sk_beta, combined2, 8) == m


def test_missing_share_breaks_decryption(rng):
    from vpas.algebra import GroupScalar
    from vpas.backend.params import R

    pk_alpha, keypairs = dkg(3, rng)
    sk_beta = GroupScalar(rng.randrange(1, R))
    pk_beta = G1Elem.generator() ** sk_beta
    ct = encrypt(9, pk_alpha, 8, rng)
    shares = [reenc_share(ct, kp.sk, pk_beta, rng) for kp in keypairs]
    partial = combine_reenc(ct, shares[:2])
    with pytest.raises(NotInRange):
        decrypt(sk_beta, partial, 8)
    duplicated = combine_reenc(ct, shares + shares[:1])
    with pytest.raises(NotInRange):
        decrypt(sk_beta, duplicated, 8)


def test_combine_rejects_empty(rng):
    pk_alpha, _ = dkg(1, rng)
    ct = encrypt(0, pk_alpha, 4, rng)
    with pytest.raises(ValueError):
        combine_reenc(ct, [])


def test_sum_of_eight_clients(rng):
    pk_alpha, keypairs = dkg(8, rng)
    values = [rng.randrange(256) for _ in range(8)]
    acc = None
    for v in values:
        ct = encrypt(v, pk_alpha, 16, rng)
        acc = ct if acc is None else add(acc, ct)
    pk_beta = keypairs[0].pk
    shares = [reenc_share(acc, kp.sk, pk_beta, rng) for kp in keypairs]
    combined = combine_reenc(acc, shares)
    assert decrypt(keypairs[0].sk, combined, 16) == sum(values)
