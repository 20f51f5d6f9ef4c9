"""Verifiable re-encryption to the collector's key.

Each client publishes a share (w1, w2) that strips its own key
contribution from the aggregate ciphertext and adds the collector's,
plus a Fiat-Shamir sigma proof that the share uses the same secret
exponents as the client's published key.  The collector combines the
shares and recovers each chunk with a BSGS discrete-log search.
"""

import secrets
import struct
from dataclasses import dataclass

from .algebra import G1Elem, GroupScalar, bsgs_dlog, bsgs_table, hash_to_scalar
from .backend.params import R


class PokRejected(Exception):
    def __init__(self, client_index):
        super().__init__(f"re-encryption share proof rejected for client {client_index}")
        self.client_index = client_index


@dataclass
class PokPublics:
    x0: G1Elem
    x: list
    pk_beta: G1Elem
    c1: G1Elem
    w1: G1Elem
    w2: list


@dataclass
class PokProof:
    commit_x: list
    commit_w1: G1Elem
    commit_rel: list
    challenge: GroupScalar
    resp_s: list
    resp_z: GroupScalar

    def to_bytes(self):
        n = len(self.commit_x)
        parts = [struct.pack(">Q", n)]
        parts += [p.to_bytes() for p in self.commit_x]
        parts.append(self.commit_w1.to_bytes())
        parts += [p.to_bytes() for p in self.commit_rel]
        parts.append(self.challenge.to_bytes())
        parts += [v.to_bytes() for v in self.resp_s]
        parts.append(self.resp_z.to_bytes())
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data):
        (n,) = struct.unpack(">Q", data[:8])
        off = 8

        def g1():
            nonlocal off
            p = G1Elem.from_bytes(data[off : off + 48])
            off += 48
            return p

        def scalar():
            nonlocal off
            v = GroupScalar.from_bytes(data[off : off + 32])
            off += 32
            return v

        commit_x = [g1() for _ in range(n)]
        commit_w1 = g1()
        commit_rel = [g1() for _ in range(n)]
        challenge = scalar()
        resp_s = [scalar() for _ in range(n)]
        resp_z = scalar()
        if off != len(data):
            raise ValueError("trailing bytes in proof encoding")
        return cls(commit_x, commit_w1, commit_rel, challenge, resp_s, resp_z)


@dataclass
class ReencShare:
    w1: G1Elem
    w2: list
    proof: PokProof

    def w1_bytes(self):
        return self.w1.to_bytes()

    def w2_bytes(self):
        return struct.pack(">Q", len(self.w2)) + b"".join(
            p.to_bytes() for p in self.w2
        )

    def to_bytes(self):
        return self.w1_bytes() + self.w2_bytes() + self.proof.to_bytes()

    @classmethod
    def from_bytes(cls, data):
        w1 = G1Elem.from_bytes(data[:48])
        (n,) = struct.unpack(">Q", data[48:56])
        off = 56
        w2 = []
        for _ in range(n):
            w2.append(G1Elem.from_bytes(data[off : off + 48]))
            off += 48
        return cls(w1, w2, PokProof.from_bytes(data[off:]))


@dataclass
class ReencCiphertext:
    c1: G1Elem
    chunks: list


def _transcript_challenge(publics, commit_x, commit_w1, commit_rel):
    parts = [publics.x0.to_bytes()]
    parts += [p.to_bytes() for p in publics.x]
    parts += [publics.pk_beta.to_bytes(), publics.c1.to_bytes(), publics.w1.to_bytes()]
    parts += [p.to_bytes() for p in publics.w2]
    parts += [p.to_bytes() for p in commit_x]
    parts.append(commit_w1.to_bytes())
    parts += [p.to_bytes() for p in commit_rel]
    return hash_to_scalar("vpas-pok", b"".join(parts))


def pok_prove(s, z, publics, rng=None):
    rng = rng or secrets.SystemRandom()
    n = len(s)
    g = G1Elem.generator()
    k = [GroupScalar(rng.randrange(R)) for _ in range(n)]
    k_z = GroupScalar(rng.randrange(R))
    commit_x = [publics.x0 ** ki for ki in k]
    commit_w1 = g ** k_z
    commit_rel = [
        (publics.c1 ** (-ki)) * (publics.pk_beta ** k_z) for ki in k
    ]
    c = _transcript_challenge(publics, commit_x, commit_w1, commit_rel)
    resp_s = [ki + c * si for ki, si in zip(k, s)]
    resp_z = k_z + c * z
    return PokProof(commit_x, commit_w1, commit_rel, c, resp_s, resp_z)


def pok_verify(proof, publics):
    n = len(publics.x)
    if (
        len(proof.commit_x) != n
        or len(proof.commit_rel) != n
        or len(proof.resp_s) != n
        or len(publics.w2) != n
    ):
        return False
    c = _transcript_challenge(
        publics, proof.commit_x, proof.commit_w1, proof.commit_rel
    )
    if c != proof.challenge:
        return False
    g = G1Elem.generator()
    if g ** proof.resp_z != proof.commit_w1 * publics.w1 ** c:
        return False
    for i in range(n):
        if publics.x0 ** proof.resp_s[i] != proof.commit_x[i] * publics.x[i] ** c:
            return False
        lhs = (publics.c1 ** (-proof.resp_s[i])) * (publics.pk_beta ** proof.resp_z)
        if lhs != proof.commit_rel[i] * publics.w2[i] ** c:
            return False
    return True


def gen_share(ct, pk_partial, sk, pk_beta, rng=None):
    rng = rng or secrets.SystemRandom()
    if len(sk.s) != pk_partial.n_chunks:
        raise ValueError("key shape mismatch")
    if len(ct.chunks) != pk_partial.n_chunks:
        raise ValueError("ciphertext shape mismatch")
    g = G1Elem.generator()
    z = GroupScalar(rng.randrange(R))
    w1 = g ** z
    w2 = [(ct.c0 ** (-si)) * (pk_beta ** z) for si in sk.s]
    publics = PokPublics(pk_partial.x0, pk_partial.x, pk_beta, ct.c0, w1, w2)
    return ReencShare(w1, w2, pok_prove(sk.s, z, publics, rng))


def reenc(ct, shares, pk_beta, partials):
    if len(shares) != len(partials):
        raise ValueError("share count mismatch")
    for idx, (share, partial) in enumerate(zip(shares, partials)):
        publics = PokPublics(
            partial.x0, partial.x, pk_beta, ct.c0, share.w1, share.w2
        )
        if not pok_verify(share.proof, publics):
            raise PokRejected(idx)
    c1 = G1Elem.identity()
    for share in shares:
        c1 = c1 * share.w1
    chunks = []
    for i, ci in enumerate(ct.chunks):
        acc = ci
        for share in shares:
            acc = acc * share.w2[i]
        chunks.append(acc)
    return ReencCiphertext(c1, chunks)


def collector_decrypt(reenc_ct, sk_beta, chunk_bits, message_bases):
    if len(message_bases) < len(reenc_ct.chunks):
        raise ValueError("not enough message bases")
    blind = reenc_ct.c1 ** (-sk_beta)
    out = []
    for ci, base in zip(reenc_ct.chunks, message_bases):
        table = bsgs_table(base, chunk_bits)
        out.append(bsgs_dlog(table, ci * blind))
    return out
