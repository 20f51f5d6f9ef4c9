import json

import pytest

from vpas import cli as vpas_cli


def _run(args):
    return vpas_cli.main(args)


def test_run_succeeds_and_writes_manifest(tmp_path, capsys):
    ledger = tmp_path / "ledger.jsonl"
    manifest = tmp_path / "manifest.json"
    code = _run([
        "run", "--clients", "2", "--chunk-bits", "8", "--message-bits", "64",
        "--seed", "11", "--ledger", str(ledger), "--manifest", str(manifest),
    ])
    assert code == 0
    data = json.loads(manifest.read_text())
    assert data["audit_ok"] is True
    assert data["released_matches_plaintext_sum"] is True
    assert data["dkg_broadcast_rounds"] == 2
    assert data["enc_prove_vs_plain_encrypt_ratio"] > 1.0
    assert set(data["phase_bytes"]) == {"dkg", "dve", "va", "vre"}
    assert ledger.exists()


def test_run_deterministic_under_seed(tmp_path, capsys):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    for path in (a, b):
        code = _run([
            "run", "--clients", "2", "--chunk-bits", "8",
            "--message-bits", "32", "--seed", "77", "--ledger", str(path),
        ])
        assert code == 0
        capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_run_different_seeds_differ(tmp_path, capsys):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    for path, seed in ((a, "1"), (b, "2")):
        assert _run([
            "run", "--clients", "1", "--chunk-bits", "8",
            "--message-bits", "32", "--seed", seed, "--ledger", str(path),
        ]) == 0
        capsys.readouterr()
    assert a.read_bytes() != b.read_bytes()


def test_run_usage_error(tmp_path, capsys):
    code = _run([
        "run", "--clients", "2", "--chunk-bits", "5",
        "--ledger", str(tmp_path / "l.jsonl"),
    ])
    assert code == 4


def test_audit_honest_and_tampered(tmp_path, capsys):
    ledger = tmp_path / "ledger.jsonl"
    assert _run([
        "run", "--clients", "1", "--chunk-bits", "8", "--message-bits", "32",
        "--seed", "3", "--ledger", str(ledger),
    ]) == 0
    capsys.readouterr()
    assert _run(["audit", "--ledger", str(ledger)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] is True

    lines = ledger.read_text().splitlines()
    d = json.loads(lines[1])
    flipped = bytearray(bytes.fromhex(d["payload"]))
    flipped[0] ^= 1
    d["payload"] = bytes(flipped).hex()
    lines[1] = json.dumps(d, separators=(",", ":"))
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join(lines) + "\n")
    assert _run(["audit", "--ledger", str(bad)]) == 3
    out = json.loads(capsys.readouterr().out)
    assert out["first_bad_index"] == 1


def test_audit_missing_file(tmp_path, capsys):
    assert _run(["audit", "--ledger", str(tmp_path / "nope.jsonl")]) == 4


def test_gwas_report_matches_oracle(tmp_path, capsys):
    from vpas import gwas

    csv_path = tmp_path / "geno.csv"
    csv_path.write_text(
        "sample_id,snp_1,population\n"
        "s0,AA,case\n"
        "s1,Aa,case\n"
        "s2,aa,control\n"
        "s3,Aa,control\n"
        "s4,AA,case\n"
        "s5,aa,control\n"
    )
    out_path = tmp_path / "report.json"
    code = _run([
        "gwas", "--input", str(csv_path), "--clients", "2",
        "--merkle-depth", "2", "--chunk-bits", "8", "--seed", "9",
        "--output", str(out_path),
    ])
    assert code == 0
    report = json.loads(out_path.read_text())
    with open(csv_path) as fh:
        _, per_snp, _ = gwas.parse_csv(fh)
    mc, mct, chi = gwas.gwas_oracle(per_snp["snp_1"])
    assert report["snp_1"]["maf_case"] == gwas.format_fraction(mc)
    assert report["snp_1"]["maf_control"] == gwas.format_fraction(mct)
    assert report["snp_1"]["chi2"] == gwas.format_fraction(chi)


def test_gwas_bad_genotype_is_usage_error(tmp_path, capsys):
    csv_path = tmp_path / "geno.csv"
    csv_path.write_text("sample_id,snp_1,population\ns0,AG,case\n")
    assert _run(["gwas", "--input", str(csv_path), "--clients", "1"]) == 4


def test_gwas_capacity_check(tmp_path, capsys):
    rows = ["sample_id,snp_1,population"] + [
        f"s{i},AA,case" for i in range(5)
    ]
    csv_path = tmp_path / "geno.csv"
    csv_path.write_text("\n".join(rows) + "\n")
    assert _run([
        "gwas", "--input", str(csv_path), "--clients", "1",
        "--merkle-depth", "2",
    ]) == 4


def test_bench_sizes_table(capsys):
    assert _run(["bench-sizes", "--chunk-bits", "16,32",
                 "--message-bits", "64"]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if l.strip()]
    assert "pi_dve" in lines[0]
    rows = [l.split() for l in lines[1:]]
    # CT strictly decreasing in chunk width, proof size constant at 192
    assert int(rows[0][5]) > int(rows[1][5])
    assert all(r[8] == "192" for r in rows)
