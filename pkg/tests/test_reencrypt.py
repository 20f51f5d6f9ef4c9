import random

import pytest

from vpas.algebra import G1Elem, GroupScalar
from vpas.backend.params import R
from vpas.dve import dkg_combine, dkg_finalize, dkg_p1_share, dkg_partial, dve_enc
from vpas.reencrypt import (
    PokProof,
    PokPublics,
    PokRejected,
    ReencShare,
    collector_decrypt,
    gen_share,
    pok_prove,
    pok_verify,
    reenc,
)
from vpas.snark import passthrough_assignment

N_CHUNKS = 8
CHUNK_BITS = 8


@pytest.fixture(scope="module")
def pipeline(crs_for):
    rng = random.Random(77)
    crs = crs_for("passthrough", N_CHUNKS)
    sks, pks = zip(*[dkg_partial(crs, N_CHUNKS, rng) for _ in range(3)])
    combined = dkg_combine(crs, list(pks))
    pk_alpha = dkg_finalize(combined, [dkg_p1_share(sk, combined) for sk in sks])
    msgs = [[rng.randrange(30) for _ in range(N_CHUNKS)] for _ in range(3)]
    cts = []
    for m in msgs:
        _, witness = passthrough_assignment(N_CHUNKS, m)
        _, ct = dve_enc(crs, pk_alpha, m, [], witness, CHUNK_BITS, rng)
        cts.append(ct)
    from vpas.aggregate import agg

    total = agg(cts)
    sk_beta = GroupScalar(rng.randrange(1, R))
    pk_beta = G1Elem.generator() ** sk_beta
    return crs, list(sks), list(pks), total, msgs, sk_beta, pk_beta, rng


def test_end_to_end_reencryption(pipeline):
    crs, sks, pks, total, msgs, sk_beta, pk_beta, rng = pipeline
    shares = [gen_share(total, pk, sk, pk_beta, rng) for pk, sk in zip(pks, sks)]
    out_ct = reenc(total, shares, pk_beta, pks)
    out = collector_decrypt(out_ct, sk_beta, CHUNK_BITS, crs.message_bases[:N_CHUNKS])
    assert out == [sum(m[i] for m in msgs) for i in range(N_CHUNKS)]


def test_pok_verifies_and_binds_transcript(pipeline):
    crs, sks, pks, total, _, _, pk_beta, rng = pipeline
    share = gen_share(total, pks[0], sks[0], pk_beta, rng)
    publics = PokPublics(pks[0].x0, pks[0].x, pk_beta, total.c0, share.w1, share.w2)
    assert pok_verify(share.proof, publics)
    # different statement (another client's key) must not verify
    wrong = PokPublics(pks[1].x0, pks[1].x, pk_beta, total.c0, share.w1, share.w2)
    assert not pok_verify(share.proof, wrong)
    # tampered response must not verify
    bad = PokProof(
        share.proof.commit_x,
        share.proof.commit_w1,
        share.proof.commit_rel,
        share.proof.challenge,
        [share.proof.resp_s[0] + GroupScalar(1)] + share.proof.resp_s[1:],
        share.proof.resp_z,
    )
    assert not pok_verify(bad, publics)


def test_forged_share_rejected_with_index(pipeline):
    crs, sks, pks, total, _, _, pk_beta, rng = pipeline
    shares = [gen_share(total, pk, sk, pk_beta, rng) for pk, sk in zip(pks, sks)]
    forged = ReencShare(shares[0].w1, shares[0].w2, shares[1].proof)
    with pytest.raises(PokRejected) as exc:
        reenc(total, [shares[0], forged, shares[2]], pk_beta, pks)
    assert exc.value.client_index == 1


def test_share_count_mismatch(pipeline):
    crs, sks, pks, total, _, _, pk_beta, rng = pipeline
    shares = [gen_share(total, pk, sk, pk_beta, rng) for pk, sk in zip(pks, sks)]
    with pytest.raises(ValueError):
        reenc(total, shares[:2], pk_beta, pks)


def test_share_serialization_round_trip(pipeline):
    crs, sks, pks, total, _, _, pk_beta, rng = pipeline
    share = gen_share(total, pks[0], sks[0], pk_beta, rng)
    assert len(share.w1_bytes()) == 48
    assert len(share.w2_bytes()) == 8 + 48 * N_CHUNKS
    data = share.to_bytes()
    parsed = ReencShare.from_bytes(data)
    assert parsed.to_bytes() == data
    proof_data = share.proof.to_bytes()
    assert PokProof.from_bytes(proof_data).to_bytes() == proof_data
    with pytest.raises(ValueError):
        PokProof.from_bytes(proof_data + b"\x00")


def test_missing_share_leaves_garbage(pipeline):
    from vpas.algebra import NotInRange

    crs, sks, pks, total, _, sk_beta, pk_beta, rng = pipeline
    shares = [gen_share(total, pk, sk, pk_beta, rng) for pk, sk in zip(pks, sks)]
    partial_ct = reenc(total, shares[:2], pk_beta, pks[:2])
    with pytest.raises(NotInRange):
        collector_decrypt(
            partial_ct, sk_beta, CHUNK_BITS, crs.message_bases[:N_CHUNKS]
        )
