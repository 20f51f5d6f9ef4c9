"""Distributed verifiable encryption.

Chunked exponential ElGamal whose ciphertext carries a proof that the
plaintext chunks satisfy a public relation, under a key generated
jointly by all clients in two broadcast rounds.  The proof's C element
is blinded by P2^r, which binds it to the ciphertext randomness.
"""

import secrets
import struct
from dataclasses import dataclass

from .algebra import G1Elem, G2Elem, GTElem, GroupScalar, g1_product, multi_pairing, pairing
from .backend.params import R
from .snark import SnarkProof, prove, setup

_PK_MAGIC = b"VPASPK1\x00"
_CT_FLAGS = 0


@dataclass
class DveSecretKey:
    s: list  # n scalars
    t: list  # n+1 scalars, index 0 pairs with X0


@dataclass
class DvePartialKey:
    x0: G1Elem
    x: list
    y: list
    z: list  # n+1 G2 elements
    p2: G1Elem

    @property
    def n_chunks(self):
        return len(self.x)

    def to_bytes(self):
        head = _PK_MAGIC + struct.pack(">QQ", self.n_chunks, 0)
        body = [self.x0.to_bytes()]
        body += [p.to_bytes() for p in self.x]
        body += [p.to_bytes() for p in self.y]
        body += [p.to_bytes() for p in self.z]
        body.append(self.p2.to_bytes())
        return head + b"".join(body)

    @classmethod
    def from_bytes(cls, data):
        n, off = _parse_pk_head(data)
        x0, off = _take_g1(data, off)
        x, off = _take_g1_list(data, off, n)
        y, off = _take_g1_list(data, off, n)
        z, off = _take_g2_list(data, off, n + 1)
        p2, off = _take_g1(data, off)
        _expect_end(data, off)
        return cls(x0, x, y, z, p2)


@dataclass
class DveCollectiveKey:
    x0: G1Elem
    x: list
    y: list
    z: list
    p1: G1Elem
    p2: G1Elem

    @property
    def n_chunks(self):
        return len(self.x)

    def to_bytes(self):
        head = _PK_MAGIC + struct.pack(">QQ", self.n_chunks, 1)
        body = [self.x0.to_bytes()]
        body += [p.to_bytes() for p in self.x]
        body += [p.to_bytes() for p in self.y]
        body += [p.to_bytes() for p in self.z]
        body.append(self.p1.to_bytes())
        body.append(self.p2.to_bytes())
        return head + b"".join(body)

    @classmethod
    def from_bytes(cls, data):
        n, off = _parse_pk_head(data)
        x0, off = _take_g1(data, off)
        x, off = _take_g1_list(data, off, n)
        y, off = _take_g1_list(data, off, n)
        z, off = _take_g2_list(data, off, n + 1)
        p1, off = _take_g1(data, off)
        p2, off = _take_g1(data, off)
        _expect_end(data, off)
        return cls(x0, x, y, z, p1, p2)


@dataclass
class ChunkedCiphertext:
    c0: G1Elem
    chunks: list
    psi: G1Elem

    def to_bytes(self):
        head = struct.pack(">Q", len(self.chunks))
        body = [self.c0.to_bytes()]
        body += [c.to_bytes() for c in self.chunks]
        body.append(self.psi.to_bytes())
        return head + b"".join(body)

    @classmethod
    def from_bytes(cls, data):
        if len(data) < 8:
            raise ValueError("truncated ciphertext")
        (n,) = struct.unpack(">Q", data[:8])
        c0, off = _take_g1(data, 8)
        chunks, off = _take_g1_list(data, off, n)
        psi, off = _take_g1(data, off)
        _expect_end(data, off)
        return cls(c0, chunks, psi)


def _parse_pk_head(data):
    if data[:8] != _PK_MAGIC:
        raise ValueError("bad key header")
    n, _flags = struct.unpack(">QQ", data[8:24])
    return n, 24


def _take_g1(data, off):
    return G1Elem.from_bytes(data[off : off + 48]), off + 48


def _take_g1_list(data, off, count):
    out = []
    for _ in range(count):
        p, off = _take_g1(data, off)
        out.append(p)
    return out, off


def _take_g2_list(data, off, count):
    out = []
    for _ in range(count):
        out.append(G2Elem.from_bytes(data[off : off + 96]))
        off += 96
    return out, off


def _expect_end(data, off):
    if off != len(data):
        raise ValueError("trailing bytes in encoding")


def dve_setup(r1cs, rng=None):
    """Groth16 CRS for the relation, augmented with G^{-gamma}."""
    if r1cs.num_public == 0:
        raise ValueError("relation must expose the message chunks as public inputs")
    return setup(r1cs, rng)


def dkg_partial(crs, n_chunks, rng=None):
    if n_chunks > crs.num_public:
        raise ValueError("relation has fewer public inputs than chunks")
    rng = rng or secrets.SystemRandom()
    bases = crs.message_bases[:n_chunks]
    s = [GroupScalar(rng.randrange(R)) for _ in range(n_chunks)]
    t = [GroupScalar(rng.randrange(R)) for _ in range(n_chunks + 1)]
    x0 = crs.delta_g1
    h = G2Elem.generator()
    sum_s = GroupScalar(sum(v.value for v in s))
    pk = DvePartialKey(
        x0=x0,
        x=[x0 ** v for v in s],
        y=[g ** v for g, v in zip(bases, t[1:])],
        z=[h ** v for v in t],
        p2=crs.gamma_neg_g1 ** sum_s,
    )
    return DveSecretKey(s, t), pk


def dkg_combine(crs, partials):
    if not partials:
        raise ValueError("no partial keys")
    n = partials[0].n_chunks
    if any(p.n_chunks != n for p in partials):
        raise ValueError("partial key shape mismatch")
    x = [g1_product([p.x[i] for p in partials]) for i in range(n)]
    y = [g1_product([p.y[i] for p in partials]) for i in range(n)]
    z = []
    for i in range(n + 1):
        acc = G2Elem.identity()
        for p in partials:
            acc = acc * p.z[i]
        z.append(acc)
    p2 = crs.gamma_neg_g1 * g1_product([p.p2 for p in partials])
    return DvePartialKey(partials[0].x0, x, y, z, p2)


def dkg_p1_share(sk, combined):
    """P1 share against the combined X values (second broadcast round)."""
    if len(sk.s) != combined.n_chunks:
        raise ValueError("key shape mismatch")
    acc = combined.x0 ** sk.t[0]
    for xi, ti in zip(combined.x, sk.t[1:]):
        acc = acc * xi ** ti
    return acc


def dkg_finalize(combined, p1_shares):
    if not p1_shares:
        raise ValueError("no P1 shares")
    return DveCollectiveKey(
        combined.x0, combined.x, combined.y, combined.z,
        g1_product(p1_shares), combined.p2,
    )


def dve_enc(crs, pk_alpha, chunks, statement_aux, witness, chunk_bits,
            rng=None):
    rng = rng or secrets.SystemRandom()
    n = pk_alpha.n_chunks
    if len(chunks) != n:
        raise ValueError("chunk count mismatch")
    for m in chunks:
        if not 0 <= m < 1 << chunk_bits:
            raise ValueError(f"chunk {m} out of range for {chunk_bits} bits")
    public = list(chunks) + list(statement_aux)
    inner = prove(crs, public, witness, rng)

    bases = crs.message_bases[:n]
    r = rng.randrange(R)
    c0 = pk_alpha.x0 ** r
    cts = [
        (xi ** r) * (g ** m)
        for xi, g, m in zip(pk_alpha.x, bases, chunks)
    ]
    psi = pk_alpha.p1 ** r
    for yi, m in zip(pk_alpha.y, chunks):
        psi = psi * yi ** m
    proof = SnarkProof(inner.a, inner.b, inner.c * pk_alpha.p2 ** r)
    return proof, ChunkedCiphertext(c0, cts, psi)


def dve_verify_enc(crs, pk_alpha, proof, ct, statement_aux):
    n = pk_alpha.n_chunks
    if len(ct.chunks) != n or len(pk_alpha.z) != n + 1:
        return False
    h = G2Elem.generator()
    lhs = multi_pairing(
        [(ct.c0, pk_alpha.z[0])]
        + list(zip(ct.chunks, pk_alpha.z[1:]))
        + [(ct.psi.inverse(), h)]
    )
    if lhs != GTElem.identity():
        return False

    if len(statement_aux) != crs.num_public - n:
        return False
    # c0 participates too: it cancels the lone G^{-gamma} factor that
    # dkg_combine folds into P2
    acc = crs.ic[0] * ct.c0
    for c in ct.chunks:
        acc = acc * c
    for base, phi in zip(crs.message_bases[n:], statement_aux):
        v = phi.value if isinstance(phi, GroupScalar) else phi % R
        acc = acc * base ** v
    lhs = multi_pairing([
        (proof.a, proof.b),
        (acc.inverse(), crs.gamma_g2),
        (proof.c.inverse(), crs.delta_g2),
    ])
    return lhs == crs.e_alpha_beta
