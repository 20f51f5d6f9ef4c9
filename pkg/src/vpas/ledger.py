"""Append-only hash-chained bulletin board.

A JSON-lines file, one entry per line, each entry committing to its
predecessor by hash.  The protocol publishes keys, ciphertext digests
and proofs here, and the auditor replays the whole run from this file
alone.  A real distributed ledger is deliberately out of scope; any
bulletin with tamper-evidence would do.
"""

import hashlib
import json
from dataclasses import dataclass

KINDS = frozenset({
    "CrsDigest",
    "CollectiveKey",
    "PartialKey",
    "Query",
    "DveProof",
    "CiphertextDigest",
    "AggRecord",
    "VreShareProof",
    "ReleaseRecord",
})

_GENESIS_PREV = b"\x00" * 32


def _entry_hash(index, kind, payload, author, prev_hash):
    h = hashlib.sha256()
    h.update(index.to_bytes(8, "big"))
    h.update(kind.encode())
    h.update(payload)
    h.update(author.encode())
    h.update(prev_hash)
    return h.digest()


@dataclass(frozen=True)
class LedgerEntry:
    index: int
    kind: str
    author: str
    payload: bytes
    prev_hash: bytes
    entry_hash: bytes

    def to_json(self):
        return json.dumps(
            {
                "index": self.index,
                "kind": self.kind,
                "author": self.author,
                "payload": self.payload.hex(),
                "prev_hash": self.prev_hash.hex(),
                "entry_hash": self.entry_hash.hex(),
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line):
        d = json.loads(line)
        return cls(
            index=d["index"],
            kind=d["kind"],
            author=d["author"],
            payload=bytes.fromhex(d["payload"]),
            prev_hash=bytes.fromhex(d["prev_hash"]),
            entry_hash=bytes.fromhex(d["entry_hash"]),
        )


class Ledger:
    def __init__(self, entries=None):
        self.entries = list(entries or [])

    def append(self, kind, payload, author):
        if kind not in KINDS:
            raise ValueError(f"unknown entry kind {kind!r}")
        index = len(self.entries)
        prev = self.entries[-1].entry_hash if self.entries else _GENESIS_PREV
        entry = LedgerEntry(
            index, kind, author, bytes(payload), prev,
            _entry_hash(index, kind, bytes(payload), author, prev),
        )
        self.entries.append(entry)
        return index

    def query(self, kind=None, author=None):
        return [
            e
            for e in self.entries
            if (kind is None or e.kind == kind)
            and (author is None or e.author == author)
        ]

    def save(self, path):
        with open(path, "w") as fh:
            for entry in self.entries:
                fh.write(entry.to_json() + "\n")

    @classmethod
    def load(cls, path):
        entries = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    entries.append(LedgerEntry.from_json(line))
        return cls(entries)


def verify_chain(entries):
    """Recompute every hash link; returns (ok, first_bad_index)."""
    prev = _GENESIS_PREV
    for i, entry in enumerate(entries):
        if (
            entry.index != i
            or entry.prev_hash != prev
            or entry.entry_hash
            != _entry_hash(i, entry.kind, entry.payload, entry.author, prev)
        ):
            return False, i
        prev = entry.entry_hash
    return True, None
