import json
import random

import pytest

from vpas import protocol as P
from vpas.aggregate import AggregationRecord
from vpas.dve import ChunkedCiphertext
from vpas.ledger import Ledger
from vpas.reencrypt import PokRejected, ReencShare


def _small_config(n_clients=2, relation="passthrough", merkle_depth=0):
    return P.ProtocolConfig(
        n_clients=n_clients,
        chunk_bits=8,
        message_bits=64,
        relation=relation,
        merkle_depth=merkle_depth,
        max_per_client_value=20,
    )


def _inputs(cfg, rng):
    return [
        [rng.randrange(cfg.max_per_client_value + 1) for _ in range(cfg.n_chunks)]
        for _ in range(cfg.n_clients)
    ]


@pytest.fixture(scope="module")
def honest_run(crs_for, tmp_path_factory):
    rng = random.Random(5150)
    cfg = _small_config(3)
    crs = crs_for("passthrough", cfg.n_chunks)
    inputs = _inputs(cfg, rng)
    state = P.run(cfg, inputs, rng, crs=crs)
    path = tmp_path_factory.mktemp("ledger") / "honest.jsonl"
    state.ledger.save(path)
    return cfg, inputs, state, path


def test_released_equals_plaintext_sums(honest_run):
    cfg, inputs, state, _ = honest_run
    expected = [sum(v[i] for v in inputs) for i in range(cfg.n_chunks)]
    assert state.released == expected


def test_config_invariants():
    with pytest.raises(ValueError):
        P.ProtocolConfig(n_clients=0, chunk_bits=8)
    with pytest.raises(ValueError):
        P.ProtocolConfig(n_clients=1, chunk_bits=5)
    with pytest.raises(ValueError):
        P.ProtocolConfig(n_clients=1, chunk_bits=8, message_bits=60)
    with pytest.raises(ValueError):
        P.ProtocolConfig(n_clients=2, chunk_bits=4, max_per_client_value=8)
    with pytest.raises(ValueError):
        P.ProtocolConfig(n_clients=1, chunk_bits=8, relation="snp")


def test_dkg_round_and_message_count(honest_run):
    cfg, _, state, _ = honest_run
    assert state.dkg_broadcast_rounds == 2
    assert state.dkg_broadcast_messages == 2 * cfg.n_clients


def test_ledger_entry_counts(honest_run):
    cfg, _, state, _ = honest_run
    led = state.ledger
    assert len(led.query(kind="CrsDigest")) == 1
    assert len(led.query(kind="PartialKey")) == cfg.n_clients
    assert len(led.query(kind="CollectiveKey")) == 1
    assert len(led.query(kind="Query")) == 1
    assert len(led.query(kind="DveProof")) == cfg.n_clients
    assert len(led.query(kind="AggRecord")) == 1
    assert len(led.query(kind="VreShareProof")) == cfg.n_clients
    assert len(led.query(kind="ReleaseRecord")) == 1


def test_phase_byte_accounting(honest_run):
    cfg, _, state, _ = honest_run
    n, N = cfg.n_chunks, cfg.n_clients
    pk_i = 192 * n + 192 + 24
    ct = (n + 2) * 48 + 8
    pi_vre = 8 + (2 * n + 1) * 48 + (n + 2) * 32
    assert state.phase_bytes["dkg"] == N * pk_i + N * 48
    assert state.phase_bytes["dve"] == N * (ct + 192)
    assert state.phase_bytes["va"] == ct
    assert state.phase_bytes["vre"] == N * (48 + (8 + 48 * n)) + N * pi_vre


def test_tampered_ciphertext_rejected_at_submit(crs_for, rng):
    cfg = _small_config(2)
    crs = crs_for("passthrough", cfg.n_chunks)
    state = P.run_setup(cfg, rng, crs=crs)
    good = P.make_submission(state, [1] * cfg.n_chunks, rng)
    from vpas.algebra import G1Elem

    bad_ct = ChunkedCiphertext(
        good.ct.c0,
        [good.ct.chunks[0] * G1Elem.generator()] + good.ct.chunks[1:],
        good.ct.psi,
    )
    bad = P.Submission(bad_ct, good.proof, good.aux)
    with pytest.raises(P.SubmissionRejected) as exc:
        P.run_submit(state, [[0] * cfg.n_chunks, bad], rng)
    assert exc.value.client_index == 1


def test_replayed_ciphertext_rejected(crs_for, rng):
    cfg = _small_config(2)
    crs = crs_for("passthrough", cfg.n_chunks)
    state = P.run_setup(cfg, rng, crs=crs)
    a = P.make_submission(state, [1] * cfg.n_chunks, rng)
    b = P.make_submission(state, [1] * cfg.n_chunks, rng)
    # client 1 replays client 0's ciphertext with its own proof
    frankenstein = P.Submission(a.ct, b.proof, b.aux)
    with pytest.raises(P.SubmissionRejected) as exc:
        P.run_submit(state, [a, frankenstein], rng)
    assert exc.value.client_index == 1


def test_malicious_aggregator_rejected(crs_for, rng):
    cfg = _small_config(2)
    crs = crs_for("passthrough", cfg.n_chunks)
    state = P.run_setup(cfg, rng, crs=crs)
    P.run_submit(state, _inputs(cfg, rng), rng)
    from vpas.aggregate import make_record

    record = make_record([s.ct for s in state.submissions])
    forged = AggregationRecord(record.input_digests, state.submissions[0].ct)
    with pytest.raises(P.AggregationRejected):
        P.run_aggregate(state, record=forged)


def test_forged_vre_share_aborts_release(crs_for, rng):
    cfg = _small_config(2)
    crs = crs_for("passthrough", cfg.n_chunks)
    state = P.run_setup(cfg, rng, crs=crs)
    P.run_submit(state, _inputs(cfg, rng), rng)
    P.run_aggregate(state)
    from vpas.reencrypt import gen_share

    shares = [
        gen_share(state.agg_record.result, state.partial_keys[i],
                  state.secret_keys[i], state.pk_beta, rng)
        for i in range(2)
    ]
    forged = ReencShare(shares[0].w1, shares[0].w2, shares[1].proof)
    with pytest.raises(PokRejected) as exc:
        P.run_release(state, rng, shares=[forged, shares[1]])
    assert exc.value.client_index == 0


def test_audit_accepts_honest_ledger(honest_run):
    _, _, _, path = honest_run
    report = P.audit(path)
    assert report.ok, report.to_dict()
    assert report.chain_ok and report.agg_ok and report.release_ok
    assert all(report.dve_verdicts) and all(report.vre_verdicts)


def test_audit_rejects_any_single_mutation(honest_run, tmp_path):
    _, _, _, path = honest_run
    lines = path.read_text().splitlines()
    for target in range(len(lines)):
        d = json.loads(lines[target])
        payload = bytearray(bytes.fromhex(d["payload"])) or bytearray(b"\x00")
        payload[len(payload) // 2] ^= 1
        d["payload"] = bytes(payload).hex()
        mutated = lines[:target] + [json.dumps(d, separators=(",", ":"))] + lines[target + 1:]
        bad_path = tmp_path / f"mutated_{target}.jsonl"
        bad_path.write_text("\n".join(mutated) + "\n")
        report = P.audit(bad_path)
        assert not report.ok
        assert report.first_bad_index == target


def test_audit_rejects_rechained_semantic_mutation(honest_run, tmp_path):
    """Mutations with correctly recomputed hashes are caught semantically."""
    _, _, state, path = honest_run
    original = Ledger.load(path)
    for target_kind in ("DveProof", "AggRecord", "VreShareProof", "ReleaseRecord"):
        rebuilt = Ledger()
        for e in original.entries:
            payload = e.payload
            if e.kind == target_kind and not rebuilt.query(kind=target_kind):
                if target_kind == "ReleaseRecord":
                    d = json.loads(payload)
                    d["result"] = [v + 1 for v in d["result"]][: len(d["result"]) - 1]
                    payload = json.dumps(d, sort_keys=True).encode()
                else:
                    payload = bytes([payload[0] ^ 1]) + payload[1:]
            rebuilt.append(e.kind, payload, e.author)
        bad_path = tmp_path / f"rechained_{target_kind}.jsonl"
        rebuilt.save(bad_path)
        report = P.audit(bad_path)
        assert report.chain_ok, target_kind
        assert not report.ok, target_kind
        assert report.offending, target_kind


def test_audit_truncated_prefix_reports_missing_phase(honest_run, tmp_path):
    _, _, _, path = honest_run
    lines = path.read_text().splitlines()
    short = tmp_path / "short.jsonl"
    short.write_text("\n".join(lines[:3]) + "\n")
    report = P.audit(short)
    assert report.chain_ok
    assert report.missing_phases
    assert not report.ok


def test_snp_relation_end_to_end(crs_for, rng):
    cfg = P.ProtocolConfig(
        n_clients=2, chunk_bits=8, message_bits=64,
        relation="snp", merkle_depth=2, max_per_client_value=4,
    )
    crs = crs_for("snp", cfg.n_chunks, 2)
    inputs = [
        [(rng.randrange(3), rng.randrange(2)) for _ in range(4)]
        for _ in range(2)
    ]
    state = P.run(cfg, inputs, rng, crs=crs)
    from vpas import gwas

    records = [
        gwas.SnpRecord(gwas.GENOTYPES[x], "case" if pop else "control")
        for client in inputs
        for x, pop in client
    ]
    case, control = gwas.tally(records)
    assert state.released == gwas.pack_message(case, control, cfg.chunk_bits)


def test_single_client_run(crs_for, rng):
    cfg = P.ProtocolConfig(n_clients=1, chunk_bits=8, message_bits=64,
                           max_per_client_value=100)
    crs = crs_for("passthrough", cfg.n_chunks)
    values = [[rng.randrange(101) for _ in range(cfg.n_chunks)]]
    state = P.run(cfg, values, rng, crs=crs)
    assert state.released == values[0]
