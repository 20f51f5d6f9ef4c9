"""Threshold exponential ElGamal, the privacy-only baseline.

Every client contributes a key share; encryption targets the combined
key, and each client later publishes a re-encryption share that swaps
its own contribution for the collector's key.  Nothing here is
verifiable -- that is the point of the comparison with the full
protocol.
"""

import secrets
from dataclasses import dataclass

from .algebra import G1Elem, GroupScalar, bsgs_dlog, bsgs_table
from .backend.params import R


@dataclass
class ElgamalKeypair:
    sk: GroupScalar
    pk: G1Elem


@dataclass
class ElgamalCiphertext:
    c1: G1Elem
    c2: G1Elem


def dkg(n, rng=None):
    if n < 1:
        raise ValueError("need at least one client")
    rng = rng or secrets.SystemRandom()
    g = G1Elem.generator()
    keypairs = []
    pk_alpha = G1Elem.identity()
    for _ in range(n):
        sk = GroupScalar(rng.randrange(R))
        pk = g ** sk
        keypairs.append(ElgamalKeypair(sk, pk))
        pk_alpha = pk_alpha * pk
    return pk_alpha, keypairs


def encrypt(m, pk_alpha, chunk_bits, rng=None):
    if not 0 <= m < 1 << chunk_bits:
        raise ValueError(f"message {m} out of range for {chunk_bits} bits")
    rng = rng or secrets.SystemRandom()
    g = G1Elem.generator()
    r = rng.randrange(R)
    return ElgamalCiphertext(g ** r, (g ** m) * (pk_alpha ** r))


def add(a, b):
    return ElgamalCiphertext(a.c1 * b.c1, a.c2 * b.c2)


def reenc_share(ct, sk_i, pk_beta, rng=None):
    rng = rng or secrets.SystemRandom()
    g = G1Elem.generator()
    z = GroupScalar(rng.randrange(R))
    return g ** z, (ct.c1 ** (-sk_i)) * (pk_beta ** z)


def combine_reenc(ct, shares):
    if not shares:
        raise ValueError("no re-encryption shares")
    c1 = G1Elem.identity()
    c2 = ct.c2
    for w1, w2 in shares:
        c1 = c1 * w1
        c2 = c2 * w2
    return ElgamalCiphertext(c1, c2)


def decrypt(sk_beta, ct, chunk_bits):
    g = G1Elem.generator()
    table = bsgs_table(g, chunk_bits)
    return bsgs_dlog(table, ct.c2 * ct.c1 ** (-sk_beta))
