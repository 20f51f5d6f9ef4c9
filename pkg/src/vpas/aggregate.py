"""Verifiable aggregation: homomorphic products of chunked ciphertexts.

The aggregation "proof" is a record of input-ciphertext digests plus
the claimed product; verification is deterministic recomputation, since
all inputs are already public on the ledger.
"""

import hashlib
import struct
from dataclasses import dataclass

from .dve import ChunkedCiphertext


def ciphertext_digest(ct):
    return hashlib.sha256(ct.to_bytes()).digest()


@dataclass
class AggregationRecord:
    input_digests: list
    result: ChunkedCiphertext

    def to_bytes(self):
        head = struct.pack(">Q", len(self.input_digests))
        return head + b"".join(self.input_digests) + self.result.to_bytes()

    @classmethod
    def from_bytes(cls, data):
        (k,) = struct.unpack(">Q", data[:8])
        off = 8
        if off + 32 * k > len(data):
            raise ValueError("truncated digest list")
        digests = [data[off + 32 * i : off + 32 * (i + 1)] for i in range(k)]
        off += 32 * k
        return cls(digests, ChunkedCiphertext.from_bytes(data[off:]))


def agg(cts):
    if not cts:
        raise ValueError("nothing to aggregate")
    n = len(cts[0].chunks)
    if any(len(ct.chunks) != n for ct in cts):
        raise ValueError("chunk count mismatch")
    c0 = cts[0].c0
    chunks = list(cts[0].chunks)
    psi = cts[0].psi
    for ct in cts[1:]:
        c0 = c0 * ct.c0
        chunks = [a * b for a, b in zip(chunks, ct.chunks)]
        psi = psi * ct.psi
    return ChunkedCiphertext(c0, chunks, psi)


def make_record(cts):
    return AggregationRecord([ciphertext_digest(ct) for ct in cts], agg(cts))


def verify_agg(record, cts):
    if len(record.input_digests) != len(cts):
        return False
    for digest, ct in zip(record.input_digests, cts):
        if digest != ciphertext_digest(ct):
            return False
    expected = agg(cts)
    return (
        record.result.c0 == expected.c0
        and record.result.psi == expected.psi
        and len(record.result.chunks) == len(expected.chunks)
        and all(a == b for a, b in zip(record.result.chunks, expected.chunks))
    )
