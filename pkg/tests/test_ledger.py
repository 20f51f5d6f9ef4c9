import json

import pytest

from vpas.ledger import Ledger, LedgerEntry, verify_chain


def test_genesis_entry():
    led = Ledger()
    idx = led.append("Query", b"hello", "collector")
    assert idx == 0
    entry = led.entries[0]
    assert entry.prev_hash == b"\x00" * 32
    assert entry.index == 0


def test_chaining():
    led = Ledger()
    led.append("Query", b"a", "x")
    led.append("DveProof", b"b", "y")
    assert led.entries[1].prev_hash == led.entries[0].entry_hash
    ok, bad = verify_chain(led.entries)
    assert ok and bad is None


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        Ledger().append("NotAKind", b"", "x")


def test_persistence_round_trip(tmp_path):
    led = Ledger()
    led.append("CrsDigest", b"\x01\x02", "aggregator")
    led.append("PartialKey", b"\x03" * 100, "client-0")
    path = tmp_path / "ledger.jsonl"
    led.save(path)
    reloaded = Ledger.load(path)
    assert [e.entry_hash for e in reloaded.entries] == \
        [e.entry_hash for e in led.entries]
    # re-serialization is byte-identical
    path2 = tmp_path / "ledger2.jsonl"
    reloaded.save(path2)
    assert path.read_bytes() == path2.read_bytes()


def test_single_byte_tamper_detected(tmp_path):
    led = Ledger()
    for i in range(5):
        led.append("Query", bytes([i]) * 8, f"client-{i}")
    entries = led.entries
    for target in range(5):
        e = entries[target]
        mutated = LedgerEntry(
            e.index, e.kind, e.author,
            bytes([e.payload[0] ^ 1]) + e.payload[1:],
            e.prev_hash, e.entry_hash,
        )
        seq = entries[:target] + [mutated] + entries[target + 1 :]
        ok, bad = verify_chain(seq)
        assert not ok and bad == target


def test_truncated_prefix_verifies():
    led = Ledger()
    for i in range(6):
        led.append("Query", bytes([i]), "a")
    ok, bad = verify_chain(led.entries[:3])
    assert ok and bad is None


def test_reordered_entries_detected():
    led = Ledger()
    for i in range(3):
        led.append("Query", bytes([i]), "a")
    ok, bad = verify_chain([led.entries[1], led.entries[0], led.entries[2]])
    assert not ok and bad == 0


def test_query_filters():
    led = Ledger()
    led.append("Query", b"q", "collector")
    led.append("DveProof", b"p0", "client-0")
    led.append("DveProof", b"p1", "client-1")
    led.append("AggRecord", b"r", "aggregator")
    assert [e.author for e in led.query(kind="DveProof")] == ["client-0", "client-1"]
    assert len(led.query(author="client-1")) == 1
    assert led.query(kind="DveProof", author="client-1")[0].payload == b"p1"
    assert Ledger().query() == []


def test_json_format(tmp_path):
    led = Ledger()
    led.append("Query", b"\xde\xad", "collector")
    path = tmp_path / "l.jsonl"
    led.save(path)
    line = path.read_text().strip()
    d = json.loads(line)
    assert set(d) == {"index", "kind", "author", "payload", "prev_hash", "entry_hash"}
    assert d["payload"] == "dead"
