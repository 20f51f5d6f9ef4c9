"""Constraint systems, the proof system, and the built-in circuits.

Contains the R1CS representation and builder, a Groth16-style
setup/prove/verify implementation over the package's pairing backend,
the circuit-friendly algebraic hash, Merkle trees over that hash, and
the SNP-validity circuit used by the aggregation protocol.
"""

import math
import secrets
import struct
from dataclasses import dataclass

from .algebra import (
    G1Elem,
    G2Elem,
    GroupScalar,
    fixed_base_mul,
    fixed_base_mul_g2,
    hash_to_scalar,
    msm,
    msm_g2,
    multi_pairing,
    pairing,
)
from .backend import impl
from .backend.params import FR_2ADIC_ROOT, FR_MULT_GEN, FR_TWO_ADICITY, R

# ---------------------------------------------------------------------------
# Algebraic hash: 91 substitution rounds x -> (x + key + c_i)^e

HASH_ROUNDS = 91


def _hash_exponent():
    e = 3
    while math.gcd(e, R - 1) != 1:
        e += 1
    return e


HASH_EXPONENT = _hash_exponent()
HASH_CONSTANTS = [
    hash_to_scalar("vpas-hash", i.to_bytes(8, "big")).value
    for i in range(HASH_ROUNDS)
]


def _permute(x, key):
    for c in HASH_CONSTANTS:
        x = pow((x + key + c) % R, HASH_EXPONENT, R)
    return x


def hash_two(a, b):
    """2-to-1 compression: keyed permutation with feed-forward."""
    return (_permute(b, a) + a + b) % R


def algebraic_hash(inputs):
    if not inputs:
        raise ValueError("algebraic_hash: empty input")
    state = 0
    for v in inputs:
        state = hash_two(state, v.value if isinstance(v, GroupScalar) else v % R)
    return GroupScalar(state)


# ---------------------------------------------------------------------------
# Merkle tree

@dataclass
class MerkleProof:
    leaf_index: int
    siblings: list  # scalar ints, leaf level first


class MerkleTree:
    """Fixed-depth binary tree over hash_two; empty leaves are 0."""

    def __init__(self, depth):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.depth = depth
        self.leaves = []

    def insert(self, value):
        if len(self.leaves) >= 1 << self.depth:
            raise ValueError("tree full")
        self.leaves.append(
            value.value if isinstance(value, GroupScalar) else value % R
        )
        return len(self.leaves) - 1

    def _levels(self):
        level = self.leaves + [0] * ((1 << self.depth) - len(self.leaves))
        levels = [level]
        while len(level) > 1:
            level = [
                hash_two(level[2 * i], level[2 * i + 1])
                for i in range(len(level) // 2)
            ]
            levels.append(level)
        return levels

    def root(self):
        return GroupScalar(self._levels()[-1][0])

    def prove(self, index):
        if not 0 <= index < len(self.leaves):
            raise IndexError("no such leaf")
        levels = self._levels()
        siblings = []
        pos = index
        for lvl in levels[:-1]:
            siblings.append(lvl[pos ^ 1])
            pos >>= 1
        return MerkleProof(index, siblings)


def merkle_verify(value, root, proof):
    cur = value.value if isinstance(value, GroupScalar) else value % R
    pos = proof.leaf_index
    for sib in proof.siblings:
        cur = hash_two(cur, sib) if pos & 1 == 0 else hash_two(sib, cur)
        pos >>= 1
    return cur == root.value


# ---------------------------------------------------------------------------
# R1CS and circuit builder

@dataclass
class R1cs:
    num_public: int
    num_witness: int
    constraints: list  # (A, B, C) dicts mapping wire index -> coefficient

    @property
    def num_wires(self):
        return 1 + self.num_public + self.num_witness


class CircuitBuilder:
    """Builds an R1CS; optionally tracks concrete wire values alongside.

    Wire 0 is the constant 1.  All public wires must be allocated before
    the first witness wire.  Linear combinations are plain dicts mapping
    wire index to coefficient.
    """

    def __init__(self):
        self.values = [1]
        self.num_public = 0
        self.num_witness = 0
        self.constraints = []

    def new_public(self, value=None):
        if self.num_witness:
            raise ValueError("public wires must precede witness wires")
        self.num_public += 1
        self.values.append(None if value is None else value % R)
        return len(self.values) - 1

    def new_witness(self, value=None):
        self.num_witness += 1
        self.values.append(None if value is None else value % R)
        return len(self.values) - 1

    def set_value(self, wire, value):
        self.values[wire] = value % R

    def eval_lc(self, lc):
        total = 0
        for w, coeff in lc.items():
            v = self.values[w]
            if v is None:
                return None
            total += coeff * v
        return total % R

    def enforce(self, a, b, c):
        self.constraints.append((dict(a), dict(b), dict(c)))

    def enforce_eq(self, lc_a, lc_b):
        diff = dict(lc_a)
        for w, coeff in lc_b.items():
            diff[w] = diff.get(w, 0) - coeff
        self.enforce(diff, {0: 1}, {})

    def enforce_bool(self, lc):
        minus_one = dict(lc)
        minus_one[0] = minus_one.get(0, 0) - 1
        self.enforce(lc, minus_one, {})

    def mul(self, lc_a, lc_b):
        va, vb = self.eval_lc(lc_a), self.eval_lc(lc_b)
        value = None if va is None or vb is None else va * vb % R
        w = self.new_witness(value)
        self.enforce(lc_a, lc_b, {w: 1})
        return w

    def build(self):
        return R1cs(self.num_public, self.num_witness, self.constraints)

    def assignment(self):
        pub = self.values[1 : 1 + self.num_public]
        wit = self.values[1 + self.num_public :]
        if any(v is None for v in pub) or any(v is None for v in wit):
            raise ValueError("assignment incomplete")
        return pub, wit


def _lc_add(*lcs):
    out = {}
    for lc in lcs:
        for w, coeff in lc.items():
            out[w] = out.get(w, 0) + coeff
    return out


def _lc_scale(lc, k):
    return {w: coeff * k for w, coeff in lc.items()}


def hash_two_gadget(builder, key_lc, input_lc):
    """In-circuit hash_two; returns the output linear combination."""
    x = input_lc
    for c in HASH_CONSTANTS:
        t = _lc_add(x, key_lc, {0: c})
        x2 = builder.mul(t, t)
        x4 = builder.mul({x2: 1}, {x2: 1})
        x5 = builder.mul({x4: 1}, t)
        x = {x5: 1}
    return _lc_add(x, key_lc, input_lc)


# ---------------------------------------------------------------------------
# Groth16-style proof system

@dataclass
class SnarkProof:
    a: G1Elem
    b: G2Elem
    c: G1Elem

    def to_bytes(self):
        return self.a.to_bytes() + self.b.to_bytes() + self.c.to_bytes()

    @classmethod
    def from_bytes(cls, data):
        if len(data) != 192:
            raise ValueError("proof encoding must be 192 bytes")
        return cls(
            G1Elem.from_bytes(data[:48]),
            G2Elem.from_bytes(data[48:144]),
            G1Elem.from_bytes(data[144:]),
        )


class Crs:
    """Proving and verifying key material for one relation."""

    def __init__(self, r1cs, domain, alpha_g1, beta_g1, delta_g1, a_query,
                 b1_query, b2_query, l_query, h_query, beta_g2, gamma_g2,
                 delta_g2, gamma_neg_g1, ic, e_alpha_beta):
        self.r1cs = r1cs
        self.domain = domain
        self.alpha_g1 = alpha_g1
        self.beta_g1 = beta_g1
        self.delta_g1 = delta_g1
        self.a_query = a_query
        self.b1_query = b1_query
        self.b2_query = b2_query
        self.l_query = l_query
        self.h_query = h_query
        self.beta_g2 = beta_g2
        self.gamma_g2 = gamma_g2
        self.delta_g2 = delta_g2
        self.gamma_neg_g1 = gamma_neg_g1
        self.ic = ic
        self.e_alpha_beta = e_alpha_beta

    @property
    def num_public(self):
        return self.r1cs.num_public

    @property
    def message_bases(self):
        """Public-input bases G_1..G_l (excludes the constant base G_0)."""
        return self.ic[1:]

    @property
    def verifying_key(self):
        return VerifyingKey(
            self.alpha_g1, self.beta_g2, self.gamma_g2, self.delta_g2,
            self.gamma_neg_g1, list(self.ic), self.e_alpha_beta,
        )

    def digest_bytes(self):
        return self.verifying_key.to_bytes()


class VerifyingKey:
    """The public verification material of a Crs, detached and portable.

    Carries everything a third party needs to check proofs and
    verifiable ciphertexts: no proving-key queries, no relation matrix.
    """

    def __init__(self, alpha_g1, beta_g2, gamma_g2, delta_g2, gamma_neg_g1,
                 ic, e_alpha_beta=None):
        self.alpha_g1 = alpha_g1
        self.beta_g2 = beta_g2
        self.gamma_g2 = gamma_g2
        self.delta_g2 = delta_g2
        self.gamma_neg_g1 = gamma_neg_g1
        self.ic = ic
        self.e_alpha_beta = (
            e_alpha_beta
            if e_alpha_beta is not None
            else pairing(alpha_g1, beta_g2)
        )

    @property
    def num_public(self):
        return len(self.ic) - 1

    @property
    def message_bases(self):
        return self.ic[1:]

    def to_bytes(self):
        parts = [struct.pack(">Q", len(self.ic))]
        parts.append(self.alpha_g1.to_bytes())
        parts.append(self.beta_g2.to_bytes())
        parts.append(self.gamma_g2.to_bytes())
        parts.append(self.delta_g2.to_bytes())
        parts.append(self.gamma_neg_g1.to_bytes())
        parts += [p.to_bytes() for p in self.ic]
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data):
        (n_ic,) = struct.unpack(">Q", data[:8])
        off = 8
        alpha = G1Elem.from_bytes(data[off : off + 48]); off += 48
        beta2 = G2Elem.from_bytes(data[off : off + 96]); off += 96
        gamma2 = G2Elem.from_bytes(data[off : off + 96]); off += 96
        delta2 = G2Elem.from_bytes(data[off : off + 96]); off += 96
        gneg = G1Elem.from_bytes(data[off : off + 48]); off += 48
        ic = []
        for _ in range(n_ic):
            ic.append(G1Elem.from_bytes(data[off : off + 48]))
            off += 48
        if off != len(data):
            raise ValueError("trailing bytes in verifying key")
        return cls(alpha, beta2, gamma2, delta2, gneg, ic)


def _padded_rows(r1cs):
    # one extra row per statement wire keeps their A-polynomials
    # independent (standard input-consistency padding)
    return r1cs.constraints + [
        ({i: 1}, {}, {}) for i in range(r1cs.num_public + 1)
    ]


def _domain_size(n_rows):
    return max(2, 1 << (n_rows - 1).bit_length())


def _domain_root(d):
    return pow(FR_2ADIC_ROOT, 1 << (FR_TWO_ADICITY - d.bit_length() + 1), R)


def _batch_inverse(values):
    n = len(values)
    prefix = [1] * (n + 1)
    for i, v in enumerate(values):
        prefix[i + 1] = prefix[i] * v % R
    inv = pow(prefix[n], -1, R)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = prefix[i] * inv % R
        inv = inv * values[i] % R
    return out


def setup(r1cs, rng=None):
    if not r1cs.constraints:
        raise ValueError("empty constraint system")
    rng = rng or secrets.SystemRandom()
    rows = _padded_rows(r1cs)
    d = _domain_size(len(rows))
    omega = _domain_root(d)
    while True:
        tau = rng.randrange(1, R)
        z_tau = (pow(tau, d, R) - 1) % R
        if z_tau != 0:
            break
    alpha = rng.randrange(1, R)
    beta = rng.randrange(1, R)
    gamma = rng.randrange(1, R)
    delta = rng.randrange(1, R)

    # Lagrange evaluations L_q(tau) = Z(tau) * w^q / (d * (tau - w^q))
    omega_pows = [1] * d
    for q in range(1, d):
        omega_pows[q] = omega_pows[q - 1] * omega % R
    denoms = [d * (tau - wq) % R for wq in omega_pows]
    inv_denoms = _batch_inverse(denoms)
    lag = [z_tau * wq % R * invd % R for wq, invd in zip(omega_pows, inv_denoms)]

    n_wires = r1cs.num_wires
    a_vals = [0] * n_wires
    b_vals = [0] * n_wires
    c_vals = [0] * n_wires
    for q, (ra, rb, rc) in enumerate(rows):
        lq = lag[q]
        for w, coeff in ra.items():
            a_vals[w] = (a_vals[w] + coeff * lq) % R
        for w, coeff in rb.items():
            b_vals[w] = (b_vals[w] + coeff * lq) % R
        for w, coeff in rc.items():
            c_vals[w] = (c_vals[w] + coeff * lq) % R

    l = r1cs.num_public
    delta_inv = pow(delta, -1, R)
    gamma_inv = pow(gamma, -1, R)
    combined = [
        (beta * a_vals[i] + alpha * b_vals[i] + c_vals[i]) % R
        for i in range(n_wires)
    ]
    l_scalars = [combined[i] * delta_inv % R for i in range(l + 1, n_wires)]
    ic_scalars = [combined[i] * gamma_inv % R for i in range(l + 1)]
    h_scalars = []
    t_pow = z_tau * delta_inv % R
    for _ in range(d - 1):
        h_scalars.append(t_pow)
        t_pow = t_pow * tau % R

    g = G1Elem.generator()
    g1_scalars = (
        a_vals + b_vals + l_scalars + ic_scalars + h_scalars
        + [alpha, beta, delta, (-gamma) % R]
    )
    g1_pts = fixed_base_mul(g, g1_scalars)
    pos = 0
    a_query = g1_pts[pos : pos + n_wires]; pos += n_wires
    b1_query = g1_pts[pos : pos + n_wires]; pos += n_wires
    l_query = g1_pts[pos : pos + len(l_scalars)]; pos += len(l_scalars)
    ic = g1_pts[pos : pos + l + 1]; pos += l + 1
    h_query = g1_pts[pos : pos + d - 1]; pos += d - 1
    alpha_g1, beta_g1, delta_g1, gamma_neg_g1 = g1_pts[pos : pos + 4]

    h = G2Elem.generator()
    g2_pts = fixed_base_mul_g2(h, b_vals + [beta, gamma, delta])
    b2_query = g2_pts[:n_wires]
    beta_g2, gamma_g2, delta_g2 = g2_pts[n_wires:]

    return Crs(
        r1cs, d, alpha_g1, beta_g1, delta_g1, a_query, b1_query, b2_query,
        l_query, h_query, beta_g2, gamma_g2, delta_g2, gamma_neg_g1, ic,
        pairing(alpha_g1, beta_g2),
    )


def _assignment_ints(values):
    return [v.value if isinstance(v, GroupScalar) else v % R for v in values]


def _h_coefficients(crs, z):
    rows = _padded_rows(crs.r1cs)
    d = crs.domain
    omega = _domain_root(d)

    def evals(select):
        out = [0] * d
        for q, row in enumerate(rows):
            out[q] = sum(coeff * z[w] for w, coeff in select(row).items()) % R
        return out

    a_e = evals(lambda row: row[0])
    b_e = evals(lambda row: row[1])
    c_e = evals(lambda row: row[2])
    for q in range(len(crs.r1cs.constraints)):
        if (a_e[q] * b_e[q] - c_e[q]) % R != 0:
            raise ValueError(f"unsatisfied constraint at index {q}")

    shift = FR_MULT_GEN
    shift_pows = [1] * d
    for j in range(1, d):
        shift_pows[j] = shift_pows[j - 1] * shift % R

    def to_coset(e):
        coeffs = impl.ntt(e, omega, invert=True)
        return impl.ntt([c * s % R for c, s in zip(coeffs, shift_pows)], omega)

    a_cos = to_coset(a_e)
    b_cos = to_coset(b_e)
    c_cos = to_coset(c_e)
    z_inv = pow(pow(shift, d, R) - 1, -1, R)
    h_cos = [(a * b - c) % R * z_inv % R for a, b, c in zip(a_cos, b_cos, c_cos)]
    h_shift = impl.ntt(h_cos, omega, invert=True)
    shift_inv = pow(shift, -1, R)
    inv_pows = [1] * d
    for j in range(1, d):
        inv_pows[j] = inv_pows[j - 1] * shift_inv % R
    return [c * s % R for c, s in zip(h_shift, inv_pows)][: d - 1]


def prove(crs, public, witness, rng=None):
    r1cs = crs.r1cs
    public = _assignment_ints(public)
    witness = _assignment_ints(witness)
    if len(public) != r1cs.num_public or len(witness) != r1cs.num_witness:
        raise ValueError("assignment length mismatch")
    z = [1] + public + witness
    h_coef = _h_coefficients(crs, z)

    rng = rng or secrets.SystemRandom()
    r_blind = rng.randrange(R)
    s_blind = rng.randrange(R)

    a = crs.alpha_g1 * msm(crs.a_query, z) * crs.delta_g1 ** r_blind
    b2 = crs.beta_g2 * msm_g2(crs.b2_query, z) * crs.delta_g2 ** s_blind
    b1 = crs.beta_g1 * msm(crs.b1_query, z) * crs.delta_g1 ** s_blind
    c = (
        msm(crs.l_query, witness)
        * msm(crs.h_query, h_coef)
        * a ** s_blind
        * b1 ** r_blind
        * crs.delta_g1 ** (-r_blind * s_blind % R)
    )
    return SnarkProof(a, b2, c)


def verify(crs, public, proof):
    public = _assignment_ints(public)
    if len(public) != crs.num_public:
        return False
    ic_acc = crs.ic[0] * msm(crs.ic[1:], public)
    lhs = multi_pairing([
        (proof.a, proof.b),
        (ic_acc.inverse(), crs.gamma_g2),
        (proof.c.inverse(), crs.delta_g2),
    ])
    return lhs == crs.e_alpha_beta


# ---------------------------------------------------------------------------
# Built-in circuits

def _snp_circuit(n_chunks, merkle_depth, samples):
    """One circuit construction pass, symbolic or concrete.

    samples: None, or a list of (snp_value, population) pairs with
    population 1 for case and 0 for control.
    """
    if n_chunks < 8:
        raise ValueError("SNP relation needs at least 8 message chunks")
    concrete = samples is not None
    b = CircuitBuilder()
    chunk_wires = [b.new_public() for _ in range(n_chunks)]
    root_wire = b.new_public()

    n_leaves = 1 << merkle_depth
    if concrete:
        if len(samples) > n_leaves:
            raise ValueError("too many samples for the Merkle depth")
        rows = list(samples) + [None] * (n_leaves - len(samples))
    else:
        rows = [None] * n_leaves

    leaf_lcs = []
    tallies = [0] * 8  # AA/Aa/aa/N for case then control
    sums = [dict() for _ in range(8)]
    for j in range(n_leaves):
        if concrete:
            if rows[j] is None:
                x, pop, act = 0, 0, 0
            else:
                x, pop = rows[j]
                act = 1
            one_hot = [int(act and x == 0), int(x == 1), int(x == 2)]
            xw = b.new_witness(x)
            actw = b.new_witness(act)
            popw = b.new_witness(pop)
            cw = [b.new_witness(v) for v in one_hot]
        else:
            xw = b.new_witness()
            actw = b.new_witness()
            popw = b.new_witness()
            cw = [b.new_witness() for _ in range(3)]
        b.enforce_bool({actw: 1})
        b.enforce_bool({popw: 1})
        for w in cw:
            b.enforce_bool({w: 1})
        # x in {0,1,2}: x(x-1)(x-2) = 0
        u = b.mul({xw: 1}, {xw: 1, 0: -1})
        b.enforce({u: 1}, {xw: 1, 0: -2}, {})
        b.enforce_eq({cw[0]: 1, cw[1]: 1, cw[2]: 1}, {actw: 1})
        b.enforce_eq({cw[1]: 1, cw[2]: 2}, {xw: 1})
        case_c = [b.mul({popw: 1}, {w: 1}) for w in cw]
        case_act = b.mul({popw: 1}, {actw: 1})
        if concrete and rows[j] is not None:
            tallies[0 + x] += pop
            tallies[4 + x] += 1 - pop
            tallies[3] += pop
            tallies[7] += 1 - pop
        for k in range(3):
            sums[k] = _lc_add(sums[k], {case_c[k]: 1})
            sums[4 + k] = _lc_add(sums[4 + k], {cw[k]: 1, case_c[k]: -1})
        sums[3] = _lc_add(sums[3], {case_act: 1})
        sums[7] = _lc_add(sums[7], {actw: 1, case_act: -1})
        leaf_lcs.append({xw: 1})

    if concrete:
        for k in range(8):
            b.set_value(chunk_wires[k], tallies[k])
        for k in range(8, n_chunks):
            b.set_value(chunk_wires[k], 0)
    for k in range(8):
        b.enforce_eq(sums[k], {chunk_wires[k]: 1})
    for k in range(8, n_chunks):
        b.enforce_eq({chunk_wires[k]: 1}, {})

    level = leaf_lcs
    while len(level) > 1:
        level = [
            hash_two_gadget(b, level[2 * i], level[2 * i + 1])
            for i in range(len(level) // 2)
        ]
    if concrete:
        b.set_value(root_wire, b.eval_lc(level[0]))
    b.enforce_eq(level[0], {root_wire: 1})
    return b


def build_valid_snp_circuit(n_chunks, merkle_depth):
    """Relation: public chunks are correct tallies of committed SNPs.

    Public inputs: n_chunks message chunks first, then the Merkle root.
    The circuit recomputes the full tree from all leaf values, which
    proves inclusion of every committed value at once.
    """
    return _snp_circuit(n_chunks, merkle_depth, None).build()


def snp_assignment(n_chunks, merkle_depth, samples):
    """(public, witness) for build_valid_snp_circuit on concrete samples."""
    return _snp_circuit(n_chunks, merkle_depth, samples).assignment()


def build_passthrough_circuit(n_chunks):
    """Minimal relation: chunks are unconstrained, one dummy constraint."""
    b = CircuitBuilder()
    for _ in range(n_chunks):
        b.new_public()
    w = b.new_witness()
    b.enforce({w: 1}, {w: 1}, {w: 1})  # w in {0, 1}
    return b.build()


def passthrough_assignment(n_chunks, chunks):
    if len(chunks) != n_chunks:
        raise ValueError("chunk count mismatch")
    return [c % R for c in chunks], [1]
