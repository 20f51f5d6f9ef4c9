"""Six-phase aggregation protocol over the ledger.

Setup (CRS + two-round DKG), Query, Submit (verifiable encryption),
Aggregate, Release (verifiable re-encryption and decryption), and an
offline Audit that replays every public check from the ledger file
alone.  Parties are simulated in-process; every public artifact flows
through the ledger, and per-phase byte counts track exactly what a
networked deployment would transfer.
"""

import hashlib
import json
import secrets
import struct
import time
from dataclasses import dataclass, field

from .aggregate import AggregationRecord, agg, ciphertext_digest, make_record, verify_agg
from .algebra import G1Elem, GroupScalar
from .backend.params import R
from .dve import (
    ChunkedCiphertext,
    DveCollectiveKey,
    DvePartialKey,
    dkg_combine,
    dkg_finalize,
    dkg_p1_share,
    dkg_partial,
    dve_enc,
    dve_setup,
    dve_verify_enc,
)
from .ledger import Ledger, verify_chain
from .reencrypt import PokPublics, PokRejected, ReencShare, collector_decrypt, gen_share, pok_verify, reenc
from .snark import (
    SnarkProof,
    VerifyingKey,
    build_passthrough_circuit,
    build_valid_snp_circuit,
    passthrough_assignment,
    snp_assignment,
)

VALID_CHUNK_BITS = (4, 8, 16, 32)


class ProtocolError(Exception):
    pass


class SubmissionRejected(ProtocolError):
    def __init__(self, client_index):
        super().__init__(f"submission from client {client_index} failed verification")
        self.client_index = client_index


class AggregationRejected(ProtocolError):
    def __init__(self):
        super().__init__("aggregation record failed client re-verification")


@dataclass
class ProtocolConfig:
    n_clients: int
    chunk_bits: int
    message_bits: int = 256
    merkle_depth: int = 0
    relation: str = "passthrough"  # or "snp"
    max_per_client_value: int = 1

    def __post_init__(self):
        if self.n_clients < 1:
            raise ValueError("need at least one client")
        if self.chunk_bits not in VALID_CHUNK_BITS:
            raise ValueError(f"chunk_bits must be one of {VALID_CHUNK_BITS}")
        if self.message_bits % self.chunk_bits != 0:
            raise ValueError("message_bits must be a multiple of chunk_bits")
        if self.relation not in ("passthrough", "snp"):
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.relation == "snp" and self.merkle_depth < 1:
            raise ValueError("snp relation needs a positive merkle_depth")
        if self.n_clients * self.max_per_client_value >= 1 << self.chunk_bits:
            raise ValueError("per-client bound overflows the chunk width")

    @property
    def n_chunks(self):
        return self.message_bits // self.chunk_bits


@dataclass
class Submission:
    ct: ChunkedCiphertext
    proof: SnarkProof
    aux: list  # public statement values beyond the message chunks


@dataclass
class ProtocolState:
    config: ProtocolConfig
    ledger: Ledger
    crs: object = None
    pk_alpha: DveCollectiveKey = None
    partial_keys: list = field(default_factory=list)
    secret_keys: list = field(default_factory=list)  # client-held
    sk_beta: GroupScalar = None  # collector-held
    pk_beta: G1Elem = None
    submissions: list = field(default_factory=list)
    agg_record: AggregationRecord = None
    released: list = None
    dkg_broadcast_rounds: int = 0
    dkg_broadcast_messages: int = 0
    phase_bytes: dict = field(default_factory=dict)
    phase_seconds: dict = field(default_factory=dict)


def _client_id(i):
    return f"client-{i}"


def _build_relation(config):
    if config.relation == "snp":
        return build_valid_snp_circuit(config.n_chunks, config.merkle_depth)
    return build_passthrough_circuit(config.n_chunks)


def run_setup(config, rng=None, ledger=None, crs=None):
    """Setup phase.  A pre-generated CRS for the same relation may be
    passed in to reuse an earlier trusted setup across runs."""
    rng = rng or secrets.SystemRandom()
    state = ProtocolState(config, ledger if ledger is not None else Ledger())
    t0 = time.perf_counter()
    state.crs = crs if crs is not None else dve_setup(_build_relation(config), rng)
    state.ledger.append("CrsDigest", state.crs.digest_bytes(), "aggregator")

    # DKG round 1: every client broadcasts its partial key.
    n_bytes = 0
    partials = []
    for i in range(config.n_clients):
        sk, pk = dkg_partial(state.crs, config.n_chunks, rng)
        state.secret_keys.append(sk)
        partials.append(pk)
        payload = pk.to_bytes()
        n_bytes += len(payload)
        state.ledger.append("PartialKey", payload, _client_id(i))
    state.dkg_broadcast_rounds += 1
    state.dkg_broadcast_messages += config.n_clients
    state.partial_keys = partials
    combined = dkg_combine(state.crs, partials)

    # DKG round 2: every client broadcasts its P1 share.
    shares = []
    for i in range(config.n_clients):
        share = dkg_p1_share(state.secret_keys[i], combined)
        shares.append(share)
        n_bytes += len(share.to_bytes())
    state.dkg_broadcast_rounds += 1
    state.dkg_broadcast_messages += config.n_clients
    state.pk_alpha = dkg_finalize(combined, shares)
    state.ledger.append("CollectiveKey", state.pk_alpha.to_bytes(), "aggregator")

    # Query: the collector announces the aggregation function and its key.
    state.sk_beta = GroupScalar(rng.randrange(R))
    state.pk_beta = G1Elem.generator() ** state.sk_beta
    query = {
        "function": "sum",
        "pk_beta": state.pk_beta.to_bytes().hex(),
        "n_clients": config.n_clients,
        "chunk_bits": config.chunk_bits,
        "message_bits": config.message_bits,
        "relation": config.relation,
        "merkle_depth": config.merkle_depth,
    }
    state.ledger.append("Query", json.dumps(query, sort_keys=True).encode(), "collector")
    state.phase_bytes["dkg"] = n_bytes
    state.phase_seconds["setup"] = time.perf_counter() - t0
    return state


def make_submission(state, client_input, rng=None):
    """A client's local work: witness, proof, and verifiable ciphertext."""
    rng = rng or secrets.SystemRandom()
    config = state.config
    if config.relation == "snp":
        public, witness = snp_assignment(
            config.n_chunks, config.merkle_depth, client_input
        )
    else:
        public, witness = passthrough_assignment(config.n_chunks, client_input)
    chunks = public[: config.n_chunks]
    aux = public[config.n_chunks :]
    proof, ct = dve_enc(
        state.crs, state.pk_alpha, chunks, aux, witness, config.chunk_bits, rng
    )
    return Submission(ct, proof, aux)


def _submission_payload(sub):
    head = struct.pack(">Q", len(sub.aux))
    aux = b"".join(int(v).to_bytes(32, "big") for v in sub.aux)
    return head + aux + sub.ct.to_bytes()


def _parse_submission_payload(data):
    (n_aux,) = struct.unpack(">Q", data[:8])
    off = 8
    if off + 32 * n_aux > len(data):
        raise ValueError("truncated statement values")
    aux = []
    for _ in range(n_aux):
        aux.append(int.from_bytes(data[off : off + 32], "big"))
        off += 32
    return aux, ChunkedCiphertext.from_bytes(data[off:])


def run_submit(state, client_inputs, rng=None):
    """Submit phase: each input is raw client data or a prebuilt Submission.

    The aggregator accepts a submission only if its encryption proof
    verifies; by default the run aborts on the first rejection, since
    release needs every client anyway.
    """
    rng = rng or secrets.SystemRandom()
    config = state.config
    if len(client_inputs) != config.n_clients:
        raise ValueError("one input per client required")
    t0 = time.perf_counter()
    n_bytes = 0
    for i, item in enumerate(client_inputs):
        sub = item if isinstance(item, Submission) else make_submission(state, item, rng)
        if not dve_verify_enc(state.crs, state.pk_alpha, sub.proof, sub.ct, sub.aux):
            raise SubmissionRejected(i)
        ct_bytes = sub.ct.to_bytes()
        proof_bytes = sub.proof.to_bytes()
        n_bytes += len(ct_bytes) + len(proof_bytes)
        state.ledger.append("CiphertextDigest", _submission_payload(sub), _client_id(i))
        state.ledger.append("DveProof", proof_bytes, _client_id(i))
        state.submissions.append(sub)
    state.phase_bytes["dve"] = n_bytes
    state.phase_seconds["submit"] = time.perf_counter() - t0
    return state


def run_aggregate(state, record=None):
    t0 = time.perf_counter()
    cts = [sub.ct for sub in state.submissions]
    if record is None:
        record = make_record(cts)
    # every client re-verifies the aggregation before accepting it
    for _ in range(state.config.n_clients):
        if not verify_agg(record, cts):
            raise AggregationRejected()
    state.agg_record = record
    state.ledger.append("AggRecord", record.to_bytes(), "aggregator")
    state.phase_bytes["va"] = len(record.result.to_bytes())
    state.phase_seconds["aggregate"] = time.perf_counter() - t0
    return state


def run_release(state, rng=None, shares=None):
    rng = rng or secrets.SystemRandom()
    config = state.config
    t0 = time.perf_counter()
    total = state.agg_record.result
    if shares is None:
        shares = [
            gen_share(total, state.partial_keys[i], state.secret_keys[i],
                      state.pk_beta, rng)
            for i in range(config.n_clients)
        ]
    n_bytes = 0
    for i, share in enumerate(shares):
        n_bytes += len(share.w1_bytes()) + len(share.w2_bytes())
        n_bytes += len(share.proof.to_bytes())
        state.ledger.append("VreShareProof", share.to_bytes(), _client_id(i))
    reenc_ct = reenc(total, shares, state.pk_beta, state.partial_keys)
    bases = state.crs.message_bases[: config.n_chunks]
    state.released = collector_decrypt(
        reenc_ct, state.sk_beta, config.chunk_bits, bases
    )
    release = {
        "result": state.released,
        "c1": reenc_ct.c1.to_bytes().hex(),
        "chunks": [c.to_bytes().hex() for c in reenc_ct.chunks],
    }
    state.ledger.append(
        "ReleaseRecord", json.dumps(release, sort_keys=True).encode(), "collector"
    )
    state.phase_bytes["vre"] = n_bytes
    state.phase_seconds["release"] = time.perf_counter() - t0
    return state


def run(config, client_inputs, rng=None, ledger=None, crs=None):
    """Full pipeline; returns the final state with `released` filled in."""
    rng = rng or secrets.SystemRandom()
    state = run_setup(config, rng, ledger, crs)
    run_submit(state, client_inputs, rng)
    run_aggregate(state)
    run_release(state, rng)
    return state


# ---------------------------------------------------------------------------
# Audit: replay every public check from the ledger file alone.

_REQUIRED_KINDS = (
    "CrsDigest", "PartialKey", "CollectiveKey", "Query",
    "CiphertextDigest", "DveProof", "AggRecord", "VreShareProof",
    "ReleaseRecord",
)


@dataclass
class AuditReport:
    chain_ok: bool = False
    first_bad_index: int = None
    missing_phases: list = field(default_factory=list)
    dve_verdicts: list = field(default_factory=list)
    agg_ok: bool = False
    vre_verdicts: list = field(default_factory=list)
    release_ok: bool = False
    offending: list = field(default_factory=list)  # (entry index, reason)

    @property
    def ok(self):
        return (
            self.chain_ok
            and not self.missing_phases
            and not self.offending
            and all(self.dve_verdicts)
            and self.agg_ok
            and all(self.vre_verdicts)
            and self.release_ok
        )

    def to_dict(self):
        return {
            "ok": self.ok,
            "chain_ok": self.chain_ok,
            "first_bad_index": self.first_bad_index,
            "missing_phases": self.missing_phases,
            "dve_verdicts": self.dve_verdicts,
            "agg_ok": self.agg_ok,
            "vre_verdicts": self.vre_verdicts,
            "release_ok": self.release_ok,
            "offending": self.offending,
        }


def audit(ledger_path):
    report = AuditReport()
    ledger = Ledger.load(ledger_path)
    entries = ledger.entries
    report.chain_ok, report.first_bad_index = verify_chain(entries)
    if not report.chain_ok:
        report.offending.append((report.first_bad_index, "hash chain broken"))

    by_kind = {}
    for e in entries:
        by_kind.setdefault(e.kind, []).append(e)
    report.missing_phases = [k for k in _REQUIRED_KINDS if k not in by_kind]
    if report.missing_phases:
        return report

    def fail(entry, reason):
        report.offending.append((entry.index, reason))

    try:
        vk = VerifyingKey.from_bytes(by_kind["CrsDigest"][0].payload)
    except ValueError:
        fail(by_kind["CrsDigest"][0], "unparseable verifying key")
        return report
    try:
        pk_alpha = DveCollectiveKey.from_bytes(by_kind["CollectiveKey"][0].payload)
    except ValueError:
        fail(by_kind["CollectiveKey"][0], "unparseable collective key")
        return report
    q_entry = by_kind["Query"][0]
    try:
        query = json.loads(q_entry.payload)
        pk_beta = G1Elem.from_bytes(bytes.fromhex(query["pk_beta"]))
        n_chunks = query["message_bits"] // query["chunk_bits"]
    except (ValueError, KeyError, TypeError):
        fail(q_entry, "unparseable query")
        return report

    partials = {}
    for e in by_kind["PartialKey"]:
        try:
            partials[e.author] = DvePartialKey.from_bytes(e.payload)
        except ValueError:
            fail(e, "unparseable partial key")

    # each client's verifiable ciphertext
    cts = []
    proofs = {e.author: e for e in by_kind["DveProof"]}
    for e in by_kind["CiphertextDigest"]:
        try:
            aux, ct = _parse_submission_payload(e.payload)
        except (ValueError, struct.error):
            fail(e, "unparseable submission")
            continue
        p_entry = proofs.get(e.author)
        if p_entry is None:
            fail(e, "missing encryption proof")
            continue
        try:
            proof = SnarkProof.from_bytes(p_entry.payload)
        except ValueError:
            fail(p_entry, f"unparseable encryption proof of {e.author}")
            report.dve_verdicts.append(False)
            continue
        cts.append(ct)
        verdict = dve_verify_enc(vk, pk_alpha, proof, ct, aux)
        report.dve_verdicts.append(verdict)
        if not verdict:
            fail(e, f"encryption proof of {e.author} rejected")

    # aggregation record
    agg_entry = by_kind["AggRecord"][0]
    record = None
    try:
        record = AggregationRecord.from_bytes(agg_entry.payload)
        report.agg_ok = verify_agg(record, cts)
    except (ValueError, struct.error):
        fail(agg_entry, "unparseable aggregation record")
    if not report.agg_ok:
        fail(agg_entry, "aggregation record rejected")
        return report

    # re-encryption shares
    shares = []
    for e in by_kind["VreShareProof"]:
        try:
            share = ReencShare.from_bytes(e.payload)
            partial = partials[e.author]
        except (ValueError, KeyError, struct.error):
            fail(e, "unparseable re-encryption share")
            continue
        shares.append(share)
        publics = PokPublics(
            partial.x0, partial.x, pk_beta, record.result.c0, share.w1, share.w2
        )
        verdict = pok_verify(share.proof, publics)
        report.vre_verdicts.append(verdict)
        if not verdict:
            fail(e, f"re-encryption share proof of {e.author} rejected")

    # release record consistency against the shares and aggregate
    rel_entry = by_kind["ReleaseRecord"][0]
    try:
        release = json.loads(rel_entry.payload)
        if not isinstance(release.get("result"), list):
            raise ValueError("malformed release record")
    except ValueError:
        fail(rel_entry, "unparseable release record")
        return report
    c1 = G1Elem.identity()
    for share in shares:
        c1 = c1 * share.w1
    chunks = []
    for i, ci in enumerate(record.result.chunks):
        acc = ci
        for share in shares:
            acc = acc * share.w2[i]
        chunks.append(acc)
    report.release_ok = (
        release["c1"] == c1.to_bytes().hex()
        and release["chunks"] == [c.to_bytes().hex() for c in chunks]
        and len(release["result"]) == n_chunks
    )
    if not report.release_ok:
        fail(rel_entry, "release record inconsistent with shares")
    return report
