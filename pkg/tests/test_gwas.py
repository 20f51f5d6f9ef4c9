import io
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vpas import gwas


def test_encode_snp_one_hot():
    assert gwas.encode_snp("AA") == (1, 0, 0)
    assert gwas.encode_snp("Aa") == (0, 1, 0)
    assert gwas.encode_snp("aa") == (0, 0, 1)
    with pytest.raises(ValueError):
        gwas.encode_snp("AG")


def test_tally_hand_example():
    records = [
        gwas.SnpRecord("AA", "case"),
        gwas.SnpRecord("Aa", "case"),
        gwas.SnpRecord("aa", "control"),
    ]
    case, control = gwas.tally(records)
    assert (case.n_aa, case.n_het, case.n_rec, case.n) == (1, 1, 0, 2)
    assert (control.n_aa, control.n_het, control.n_rec, control.n) == (0, 0, 1, 1)


def test_tally_empty():
    case, control = gwas.tally([])
    assert case.n == 0 and control.n == 0


genotypes = st.sampled_from(gwas.GENOTYPES)
populations = st.sampled_from(gwas.POPULATIONS)


@given(st.lists(st.tuples(genotypes, populations), max_size=50))
def test_tally_counts_sum(pairs):
    records = [gwas.SnpRecord(g, p) for g, p in pairs]
    case, control = gwas.tally(records)
    for counts in (case, control):
        assert counts.n_aa + counts.n_het + counts.n_rec == counts.n
    assert case.n + control.n == len(records)


def test_allele_counts_fixture():
    counts = gwas.ContingencyCounts(3, 2, 5, 10)
    assert gwas.allele_counts(counts) == (8, 12)
    all_aa = gwas.ContingencyCounts(7, 0, 0, 7)
    assert gwas.allele_counts(all_aa) == (14, 0)


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_allele_sum_identity(a, b, c):
    counts = gwas.ContingencyCounts(a, b, c, a + b + c)
    n_a, n_b = gwas.allele_counts(counts)
    assert n_a + n_b == 2 * counts.n


def test_maf_fixtures():
    # hand-checked value required by the acceptance suite
    assert gwas.maf(gwas.ContingencyCounts(3, 2, 5, 10)) == Fraction(2, 5)
    assert float(gwas.maf(gwas.ContingencyCounts(3, 2, 5, 10))) == 0.4
    assert gwas.maf(gwas.ContingencyCounts(0, 6, 0, 6)) == Fraction(1, 2)
    assert gwas.maf(gwas.ContingencyCounts(4, 0, 0, 4)) == 0
    with pytest.raises(ValueError):
        gwas.maf(gwas.ContingencyCounts(0, 0, 0, 0))


def test_chi_squared_fixtures():
    # hand-checked value required by the acceptance suite
    assert gwas.chi_squared((10, 6), (8, 8)) == Fraction(1)
    assert gwas.chi_squared((5, 5), (5, 5)) == 0
    with pytest.raises(ValueError):
        gwas.chi_squared((1, 1), (2, 0))


def test_pack_unpack_round_trip():
    case = gwas.ContingencyCounts(1, 2, 3, 6)
    control = gwas.ContingencyCounts(4, 5, 6, 15)
    chunks = gwas.pack_message(case, control, 8)
    assert chunks == [1, 2, 3, 6, 4, 5, 6, 15]
    assert gwas.unpack_message(chunks) == (case, control)
    zeros = gwas.pack_message(
        gwas.ContingencyCounts(0, 0, 0, 0), gwas.ContingencyCounts(0, 0, 0, 0), 4
    )
    assert zeros == [0] * 8


def test_pack_overflow_rejected():
    case = gwas.ContingencyCounts(16, 0, 0, 16)
    control = gwas.ContingencyCounts(0, 0, 0, 0)
    with pytest.raises(ValueError):
        gwas.pack_message(case, control, 4)


def test_oracle_single_record():
    mc, mct, chi = gwas.gwas_oracle(
        [gwas.SnpRecord("Aa", "case"), gwas.SnpRecord("Aa", "control")]
    )
    assert mc == Fraction(1, 2) and mct == Fraction(1, 2) and chi == 0


def test_oracle_empty_control_errors():
    with pytest.raises(ValueError):
        gwas.gwas_oracle([gwas.SnpRecord("AA", "case")])


def _csv(text):
    return io.StringIO(text)


def test_parse_csv_round_trip():
    names, per_snp, samples = gwas.parse_csv(_csv(
        "sample_id,snp_1,snp_2,population\n"
        "s0,AA,aa,case\n"
        "s1,Aa,Aa,control\n"
    ))
    assert names == ["snp_1", "snp_2"]
    assert [r.genotype for r in per_snp["snp_1"]] == ["AA", "Aa"]
    assert samples == [([0, 2], "case"), ([1, 1], "control")]


def test_parse_csv_errors_name_the_cell():
    with pytest.raises(gwas.CsvError, match="row 2, column snp_1"):
        gwas.parse_csv(_csv("sample_id,snp_1,population\ns0,AG,case\n"))
    with pytest.raises(gwas.CsvError, match="population"):
        gwas.parse_csv(_csv("sample_id,snp_1,population\ns0,AA,maybe\n"))
    with pytest.raises(gwas.CsvError, match="header"):
        gwas.parse_csv(_csv("id,snp_1,population\n"))
    with pytest.raises(gwas.CsvError):
        gwas.parse_csv(_csv(""))
