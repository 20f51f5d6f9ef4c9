"""GWAS case study: SNP encoding, tallies, MAF and chi-squared.

Clients encode biallelic genotypes one-hot, tally them into a packed
8-chunk contingency message, and the collector computes minor-allele
frequency and the allelic chi-squared statistic from the released
integer counts.  All statistics use exact rational arithmetic; only
the final report renders decimals.
"""

import csv
from dataclasses import dataclass
from fractions import Fraction

GENOTYPES = ("AA", "Aa", "aa")
POPULATIONS = ("case", "control")

#: chunk order of a packed contingency message
PACKED_FIELDS = (
    "n_aa_case", "n_het_case", "n_rec_case", "n_case",
    "n_aa_control", "n_het_control", "n_rec_control", "n_control",
)


@dataclass(frozen=True)
class SnpRecord:
    genotype: str  # one of GENOTYPES
    population: str  # one of POPULATIONS

    def __post_init__(self):
        if self.genotype not in GENOTYPES:
            raise ValueError(f"unknown genotype {self.genotype!r}")
        if self.population not in POPULATIONS:
            raise ValueError(f"unknown population {self.population!r}")

    @property
    def value(self):
        """Genotype encoded as x in {0,1,2}: AA->0, Aa->1, aa->2."""
        return GENOTYPES.index(self.genotype)


@dataclass(frozen=True)
class ContingencyCounts:
    n_aa: int  # homozygous major, AA
    n_het: int  # heterozygous, Aa
    n_rec: int  # homozygous minor, aa
    n: int

    def __post_init__(self):
        if self.n_aa + self.n_het + self.n_rec != self.n:
            raise ValueError("genotype counts do not sum to the population size")


def encode_snp(genotype):
    """One-hot triple (c0, c1, c2) for a genotype symbol."""
    if genotype not in GENOTYPES:
        raise ValueError(f"unknown genotype {genotype!r}")
    x = GENOTYPES.index(genotype)
    return tuple(int(x == i) for i in range(3))


def tally(records):
    counts = {pop: [0, 0, 0] for pop in POPULATIONS}
    for rec in records:
        counts[rec.population][rec.value] += 1
    out = []
    for pop in POPULATIONS:
        c = counts[pop]
        out.append(ContingencyCounts(c[0], c[1], c[2], sum(c)))
    return tuple(out)


def allele_counts(counts):
    """(N_A, N_a): major allele twice per AA, once per Aa; dually for a."""
    return counts.n_het + 2 * counts.n_aa, counts.n_het + 2 * counts.n_rec


def maf(counts):
    if counts.n == 0:
        raise ValueError("empty population has no allele frequency")
    n_a, n_b = allele_counts(counts)
    return Fraction(min(n_a, n_b), 2 * counts.n)


def chi_squared(case_alleles, control_alleles):
    """Allelic chi-squared: sum over alleles of (case-control)^2/control."""
    total = Fraction(0)
    for case_n, control_n in zip(case_alleles, control_alleles):
        if control_n == 0:
            raise ValueError("zero control allele count")
        beta = case_n - control_n
        total += Fraction(beta * beta, control_n)
    return total


def pack_message(case, control, chunk_bits):
    chunks = [
        case.n_aa, case.n_het, case.n_rec, case.n,
        control.n_aa, control.n_het, control.n_rec, control.n,
    ]
    bound = 1 << chunk_bits
    for name, value in zip(PACKED_FIELDS, chunks):
        if not 0 <= value < bound:
            raise ValueError(f"count {name}={value} overflows {chunk_bits} bits")
    return chunks


def unpack_message(chunks):
    if len(chunks) < 8:
        raise ValueError("packed message needs 8 chunks")
    case = ContingencyCounts(*chunks[0:4])
    control = ContingencyCounts(*chunks[4:8])
    return case, control


def gwas_oracle(records):
    """Plaintext statistics, bypassing all cryptography.

    Returns (maf_case, maf_control, chi2) as exact rationals.
    """
    case, control = tally(records)
    return (
        maf(case),
        maf(control),
        chi_squared(allele_counts(case), allele_counts(control)),
    )


class CsvError(ValueError):
    pass


def parse_csv(lines):
    """Parse (sample_id, snp_*, population) rows into per-SNP records.

    Returns (snp_names, per_snp_records, per_row_samples) where
    per_snp_records maps each SNP name to a list of SnpRecord and
    per_row_samples is the row-major list of (values, population)
    pairs used to drive per-client circuit witnesses.
    """
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvError("empty input") from None
    header = [h.strip() for h in header]
    if len(header) < 3 or header[0] != "sample_id" or header[-1] != "population":
        raise CsvError(
            "header must be sample_id, one or more snp_* columns, population"
        )
    snp_names = header[1:-1]
    for name in snp_names:
        if not name.startswith("snp_"):
            raise CsvError(f"unexpected column {name!r}")
    per_snp = {name: [] for name in snp_names}
    samples = []
    for row_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise CsvError(f"row {row_no}: expected {len(header)} cells")
        pop = row[-1].strip()
        if pop not in POPULATIONS:
            raise CsvError(f"row {row_no}, column population: bad label {pop!r}")
        values = []
        for name, cell in zip(snp_names, row[1:-1]):
            geno = cell.strip()
            if geno not in GENOTYPES:
                raise CsvError(
                    f"row {row_no}, column {name}: genotype {geno!r} is not "
                    "one of AA/Aa/aa (biallelic, normalized to A/a)"
                )
            per_snp[name].append(SnpRecord(geno, pop))
            values.append(GENOTYPES.index(geno))
        samples.append((values, pop))
    return snp_names, per_snp, samples


def format_fraction(value, places=6):
    return f"{float(value):.{places}f}"
