"""Command-line front door: simulations, GWAS runs, audits, size tables.

Exit codes: 0 success, 2 validation rejection, 3 audit failure,
4 usage error.
"""

import json
import random
import secrets
import sys
import time

import click

from . import baseline_elgamal, gwas, protocol
from .reencrypt import PokRejected, gen_share

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_AUDIT_FAILED = 3
EXIT_USAGE = 4


@click.group()
def cli():
    """Verifiable privacy-preserving aggregate statistics simulator."""


def _rng(seed):
    return random.Random(seed) if seed is not None else secrets.SystemRandom()


def _write_manifest(path, manifest):
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _encrypt_overhead_ratio(state, rng):
    """Measured enc+prove time vs plain exponential-ElGamal encryption."""
    cfg = state.config
    chunks = [0] * cfg.n_chunks
    t0 = time.perf_counter()
    protocol.make_submission(state, chunks, rng)
    verifiable = time.perf_counter() - t0
    pk, _ = baseline_elgamal.dkg(1, rng)
    t0 = time.perf_counter()
    for m in chunks:
        baseline_elgamal.encrypt(m, pk, cfg.chunk_bits, rng)
    plain = time.perf_counter() - t0
    return verifiable / plain if plain > 0 else float("inf")


@cli.command("run")
@click.option("--clients", type=int, default=2, show_default=True)
@click.option("--chunk-bits", type=int, default=8, show_default=True)
@click.option("--message-bits", type=int, default=256, show_default=True)
@click.option("--seed", type=int, default=None, help="deterministic test mode")
@click.option("--ledger", "ledger_path", type=click.Path(), required=True)
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
def cmd_run(clients, chunk_bits, message_bits, seed, ledger_path, manifest_path):
    """Full pipeline on synthetic inputs."""
    try:
        max_value = ((1 << chunk_bits) - 1) // clients
        config = protocol.ProtocolConfig(
            n_clients=clients,
            chunk_bits=chunk_bits,
            message_bits=message_bits,
            max_per_client_value=max_value,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rng = _rng(seed)
    inputs = [
        [rng.randrange(max_value + 1) for _ in range(config.n_chunks)]
        for _ in range(clients)
    ]
    try:
        state = protocol.run(config, inputs, rng)
    except (protocol.ProtocolError, PokRejected) as exc:
        click.echo(f"run aborted: {exc}", err=True)
        sys.exit(EXIT_REJECTED)
    state.ledger.save(ledger_path)
    report = protocol.audit(ledger_path)
    expected = [sum(v[i] for v in inputs) for i in range(config.n_chunks)]
    manifest = {
        "config": {
            "n_clients": clients,
            "chunk_bits": chunk_bits,
            "message_bits": message_bits,
            "relation": config.relation,
            "max_per_client_value": max_value,
            "seed": seed,
        },
        "ledger": ledger_path,
        "phase_seconds": state.phase_seconds,
        "phase_bytes": state.phase_bytes,
        "dkg_broadcast_rounds": state.dkg_broadcast_rounds,
        "dkg_broadcast_messages": state.dkg_broadcast_messages,
        "released": state.released,
        "released_matches_plaintext_sum": state.released == expected,
        "audit_ok": report.ok,
        "enc_prove_vs_plain_encrypt_ratio": _encrypt_overhead_ratio(state, rng),
    }
    if manifest_path:
        _write_manifest(manifest_path, manifest)
    click.echo(json.dumps(manifest, indent=2, sort_keys=True))
    if not report.ok:
        sys.exit(EXIT_AUDIT_FAILED)
    sys.exit(EXIT_OK)


@cli.command("gwas")
@click.option("--input", "input_path", type=click.Path(exists=True), required=True)
@click.option("--clients", type=int, default=2, show_default=True)
@click.option("--merkle-depth", type=int, default=3, show_default=True)
@click.option("--chunk-bits", type=int, default=32, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--ledger", "ledger_path", type=click.Path(), default=None)
@click.option("--output", "output_path", type=click.Path(), default=None)
def cmd_gwas(input_path, clients, merkle_depth, chunk_bits, seed, ledger_path,
             output_path):
    """Run the aggregation pipeline over a genotype CSV, one SNP at a time."""
    try:
        with open(input_path) as fh:
            snp_names, per_snp, samples = gwas.parse_csv(fh)
    except gwas.CsvError as exc:
        raise click.UsageError(str(exc))
    per_client = [samples[i::clients] for i in range(clients)]
    capacity = 1 << merkle_depth
    for i, part in enumerate(per_client):
        if len(part) > capacity:
            raise click.UsageError(
                f"client {i} holds {len(part)} samples but depth "
                f"{merkle_depth} fits only {capacity}"
            )
    try:
        config = protocol.ProtocolConfig(
            n_clients=clients,
            chunk_bits=chunk_bits,
            message_bits=8 * chunk_bits,
            relation="snp",
            merkle_depth=merkle_depth,
            max_per_client_value=capacity,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rng = _rng(seed)
    report = {}
    for si, name in enumerate(snp_names):
        inputs = [
            [(values[si], 1 if pop == "case" else 0) for values, pop in part]
            for part in per_client
        ]
        try:
            state = protocol.run(config, inputs, rng)
        except (protocol.ProtocolError, PokRejected) as exc:
            click.echo(f"gwas aborted on {name}: {exc}", err=True)
            sys.exit(EXIT_REJECTED)
        case, control = gwas.unpack_message(state.released)
        report[name] = {
            "counts": state.released[:8],
            "maf_case": gwas.format_fraction(gwas.maf(case)),
            "maf_control": gwas.format_fraction(gwas.maf(control)),
            "chi2": gwas.format_fraction(
                gwas.chi_squared(
                    gwas.allele_counts(case), gwas.allele_counts(control)
                )
            ),
        }
        if ledger_path:
            state.ledger.save(f"{ledger_path}.{name}")
    text = json.dumps(report, indent=2, sort_keys=True)
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(text + "\n")
    click.echo(text)
    sys.exit(EXIT_OK)


@cli.command("audit")
@click.option("--ledger", "ledger_path", type=click.Path(exists=True), required=True)
def cmd_audit(ledger_path):
    """Replay all public verifications from a ledger file."""
    report = protocol.audit(ledger_path)
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    sys.exit(EXIT_OK if report.ok else EXIT_AUDIT_FAILED)


@cli.command("bench-sizes")
@click.option("--chunk-bits", "chunk_bits_list", default="4,8,16,32",
              show_default=True)
@click.option("--message-bits", type=int, default=256, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_bench_sizes(chunk_bits_list, message_bits, seed):
    """Measure serialized artifact sizes per chunk width."""
    try:
        widths = [int(v) for v in chunk_bits_list.split(",")]
    except ValueError:
        raise click.UsageError("--chunk-bits wants a comma-separated int list")
    rng = _rng(seed)
    header = f"{'bits':>5} {'n':>4} {'pk_i':>7} {'P1':>4} {'pk_a':>7} " \
             f"{'CT':>6} {'W1':>4} {'W2':>6} {'pi_dve':>7} {'pi_vre':>7}"
    click.echo(header)
    for bits in widths:
        config = protocol.ProtocolConfig(
            n_clients=1, chunk_bits=bits, message_bits=message_bits,
            max_per_client_value=1,
        )
        state = protocol.run_setup(config, rng)
        sub = protocol.make_submission(state, [0] * config.n_chunks, rng)
        share = gen_share(sub.ct, state.partial_keys[0], state.secret_keys[0],
                          state.pk_beta, rng)
        row = (
            bits, config.n_chunks,
            len(state.partial_keys[0].to_bytes()),
            len(state.pk_alpha.p1.to_bytes()),
            len(state.pk_alpha.to_bytes()),
            len(sub.ct.to_bytes()),
            len(share.w1_bytes()),
            len(share.w2_bytes()),
            len(sub.proof.to_bytes()),
            len(share.proof.to_bytes()),
        )
        click.echo(
            f"{row[0]:>5} {row[1]:>4} {row[2]:>7} {row[3]:>4} {row[4]:>7} "
            f"{row[5]:>6} {row[6]:>4} {row[7]:>6} {row[8]:>7} {row[9]:>7}"
        )
    sys.exit(EXIT_OK)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except SystemExit as exc:
        return exc.code or 0
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
