"""Plain-integer reference backend.

Implements the whole group/pairing API with Python integers and affine
coordinates.  It is the fallback selected by ``VPAS_BACKEND=pure`` and
the differential reference for the compiled backend.  Handles:

* G1: ``(x, y)`` affine ints, or ``None`` for the identity
* G2: ``((x0, x1), (y0, y1))`` with Fp2 components, or ``None``
* GT: flat tuple of 12 ints (Fp12 coefficients, tower order)

The pairing is the optimal ate pairing cubed: the final exponentiation
uses the addition-chain identity (x-1)^2 (x+p) (x^2+p^2-1) + 3 =
3 * (p^4 - p^2 + 1)/r, which is a consistent, still-bilinear and
non-degenerate variant (cubing is injective in the order-r subgroup).
"""

import numpy as np

from .params import (
    BLS_X,
    B_COEFF,
    B_TWIST,
    G1_GEN,
    G2_GEN,
    P,
    R,
    fp2_inv,
    fp2_mul,
    fp2_sqr,
)

NAME = "pure"

# ---------------------------------------------------------------------------
# G1

def g1_generator():
    return G1_GEN


def g1_identity():
    return None


def g1_is_identity(p):
    return p is None


def g1_eq(a, b):
    return a == b


def g1_neg(p):
    if p is None:
        return None
    return (p[0], (-p[1]) % P)


def g1_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return None
        lam = 3 * x1 * x1 * pow(2 * y1, -1, P) % P
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, P) % P
    x3 = (lam * lam - x1 - x2) % P
    return (x3, (lam * (x1 - x3) - y1) % P)


def g1_mul(p, k):
    k %= R
    acc = None
    add = p
    while k > 0:
        if k & 1:
            acc = g1_add(acc, add)
        add = g1_add(add, add)
        k >>= 1
    return acc


def g1_product(points):
    acc = None
    for p in points:
        acc = g1_add(acc, p)
    return acc


def g1_msm(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("msm: length mismatch")
    return g1_product(g1_mul(p, k) for p, k in zip(points, scalars))


def g1_to_affine_ints(p):
    return p


def g1_from_affine_ints(x, y):
    if (y * y - (x * x * x + B_COEFF)) % P != 0:
        raise ValueError("point not on curve")
    pt = (x % P, y % P)
    if g1_mul(pt, R) is not None:
        raise ValueError("point not in prime-order subgroup")
    return pt


# ---------------------------------------------------------------------------
# G2

def g2_generator():
    return G2_GEN


def g2_identity():
    return None


def g2_is_identity(p):
    return p is None


def g2_eq(a, b):
    return a == b


def g2_neg(p):
    if p is None:
        return None
    return (p[0], ((-p[1][0]) % P, (-p[1][1]) % P))


def _fp2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def _fp2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def g2_add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if _fp2_add(y1, y2) == (0, 0):
            return None
        lam = fp2_mul(fp2_mul((3, 0), fp2_sqr(x1)), fp2_inv(_fp2_add(y1, y1)))
    else:
        lam = fp2_mul(_fp2_sub(y2, y1), fp2_inv(_fp2_sub(x2, x1)))
    x3 = _fp2_sub(_fp2_sub(fp2_sqr(lam), x1), x2)
    y3 = _fp2_sub(fp2_mul(lam, _fp2_sub(x1, x3)), y1)
    return (x3, y3)


def g2_mul(p, k):
    k %= R
    acc = None
    add = p
    while k > 0:
        if k & 1:
            acc = g2_add(acc, add)
        add = g2_add(add, add)
        k >>= 1
    return acc


def g2_product(points):
    acc = None
    for p in points:
        acc = g2_add(acc, p)
    return acc


def g2_msm(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("msm: length mismatch")
    return g2_product(g2_mul(p, k) for p, k in zip(points, scalars))


def g2_to_affine_ints(p):
    return p


def g2_from_affine_ints(x, y):
    rhs = fp2_mul(fp2_sqr(x), x)
    rhs = ((rhs[0] + B_TWIST[0]) % P, (rhs[1] + B_TWIST[1]) % P)
    if fp2_sqr(y) != rhs:
        raise ValueError("point not on twist")
    pt = ((x[0] % P, x[1] % P), (y[0] % P, y[1] % P))
    if g2_mul(pt, R) is not None:
        raise ValueError("point not in prime-order subgroup")
    return pt


# ---------------------------------------------------------------------------
# Fp6 / Fp12 tower.  Fp6 = Fp2[v]/(v^3 - xi), xi = 1 + u;
# Fp12 = Fp6[w]/(w^2 - v).

XI = (1, 1)

FP2_ZERO = (0, 0)
FP2_ONE = (1, 0)
FP6_ZERO = (FP2_ZERO, FP2_ZERO, FP2_ZERO)
FP6_ONE = (FP2_ONE, FP2_ZERO, FP2_ZERO)
FP12_ZERO = (FP6_ZERO, FP6_ZERO)
FP12_ONE = (FP6_ONE, FP6_ZERO)


def _fp2_pow(a, e):
    acc = FP2_ONE
    base = a
    while e > 0:
        if e & 1:
            acc = fp2_mul(acc, base)
        base = fp2_sqr(base)
        e >>= 1
    return acc


def _fp6_add(a, b):
    return tuple(_fp2_add(x, y) for x, y in zip(a, b))


def _fp6_sub(a, b):
    return tuple(_fp2_sub(x, y) for x, y in zip(a, b))


def _fp6_neg(a):
    return tuple(((-x[0]) % P, (-x[1]) % P) for x in a)


def _mul_xi(a):
    # (a0 + a1 u) * (1 + u) = (a0 - a1) + (a0 + a1) u
    return ((a[0] - a[1]) % P, (a[0] + a[1]) % P)


def _fp6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = fp2_mul(a0, b0)
    t1 = fp2_mul(a1, b1)
    t2 = fp2_mul(a2, b2)
    c0 = _fp2_add(t0, _mul_xi(_fp2_sub(fp2_mul(_fp2_add(a1, a2), _fp2_add(b1, b2)), _fp2_add(t1, t2))))
    c1 = _fp2_add(_fp2_sub(fp2_mul(_fp2_add(a0, a1), _fp2_add(b0, b1)), _fp2_add(t0, t1)), _mul_xi(t2))
    c2 = _fp2_add(_fp2_sub(fp2_mul(_fp2_add(a0, a2), _fp2_add(b0, b2)), _fp2_add(t0, t2)), t1)
    return (c0, c1, c2)


def _fp6_mul_by_v(a):
    return (_mul_xi(a[2]), a[0], a[1])


def _fp6_inv(a):
    a0, a1, a2 = a
    c0 = _fp2_sub(fp2_sqr(a0), _mul_xi(fp2_mul(a1, a2)))
    c1 = _fp2_sub(_mul_xi(fp2_sqr(a2)), fp2_mul(a0, a1))
    c2 = _fp2_sub(fp2_sqr(a1), fp2_mul(a0, a2))
    t = _fp2_add(fp2_mul(a2, _mul_xi(c1)), _fp2_add(fp2_mul(a0, c0), _mul_xi(fp2_mul(a1, c2))))
    t_inv = fp2_inv(t)
    return (fp2_mul(c0, t_inv), fp2_mul(c1, t_inv), fp2_mul(c2, t_inv))


def _fp12_add(a, b):
    return (_fp6_add(a[0], b[0]), _fp6_add(a[1], b[1]))


def _fp12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = _fp6_mul(a0, b0)
    t1 = _fp6_mul(a1, b1)
    c0 = _fp6_add(t0, _fp6_mul_by_v(t1))
    c1 = _fp6_sub(_fp6_mul(_fp6_add(a0, a1), _fp6_add(b0, b1)), _fp6_add(t0, t1))
    return (c0, c1)


def _fp12_sqr(a):
    return _fp12_mul(a, a)


def _fp12_conj(a):
    return (a[0], _fp6_neg(a[1]))


def _fp12_inv(a):
    a0, a1 = a
    t = _fp6_inv(_fp6_sub(_fp6_mul(a0, a0), _fp6_mul_by_v(_fp6_mul(a1, a1))))
    return (_fp6_mul(a0, t), _fp6_neg(_fp6_mul(a1, t)))


def _fp12_pow(a, e):
    if e < 0:
        return _fp12_pow(_fp12_inv(a), -e)
    acc = FP12_ONE
    base = a
    while e > 0:
        if e & 1:
            acc = _fp12_mul(acc, base)
        base = _fp12_sqr(base)
        e >>= 1
    return acc


# Frobenius constants: gamma_{k,i} = xi^(i*(p^k - 1)/6) for w-power slots.
_FROB_GAMMA1 = [_fp2_pow(XI, i * (P - 1) // 6) for i in range(6)]


def _fp2_frob(a):
    return (a[0], (-a[1]) % P)


def _fp12_frob(a):
    """Frobenius endomorphism c -> c^p on the 1, w, ..., w^5 slot view."""
    c0, c1 = a
    # slots: c0 = (s0, s2, s4) over v-powers, c1 = (s1, s3, s5)
    s = [c0[0], c1[0], c0[1], c1[1], c0[2], c1[2]]
    s = [fp2_mul(_fp2_frob(x), _FROB_GAMMA1[i]) for i, x in enumerate(s)]
    return ((s[0], s[2], s[4]), (s[1], s[3], s[5]))


def _fp12_frob_k(a, k):
    for _ in range(k):
        a = _fp12_frob(a)
    return a


# ---------------------------------------------------------------------------
# Pairing

def _untwist_line(lam, x2, y2, px, py):
    """Sparse Fp12 value of the line through twist points, evaluated at P.

    With untwist (x, y) -> (x/w^2, y/w^3) and the whole line scaled by
    xi (an Fp2 constant, killed by the final exponentiation), the value
    is  xi*yP  -  lam*xP * v^2 w  +  (lam*x2 - y2) * v w.
    """
    c0_slot0 = ((XI[0] * py) % P, (XI[1] * py) % P)
    cw_v1 = _fp2_sub(fp2_mul(lam, x2), y2)
    cw_v2 = ((-lam[0] * px) % P, (-lam[1] * px) % P)
    return ((c0_slot0, FP2_ZERO, FP2_ZERO), (FP2_ZERO, cw_v1, cw_v2))


def _miller_loop(pairs):
    """Product of Miller loops over [(G1 affine, G2 affine), ...]."""
    f = FP12_ONE
    state = [(q, q, p) for p, q in pairs]  # (T, Q, P)
    loop = -BLS_X
    bits = bin(loop)[3:]
    for bit in bits:
        f = _fp12_sqr(f)
        for idx, (t, q, pt) in enumerate(state):
            x1, y1 = t
            lam = fp2_mul(fp2_mul((3, 0), fp2_sqr(x1)), fp2_inv(_fp2_add(y1, y1)))
            f = _fp12_mul(f, _untwist_line(lam, x1, y1, pt[0], pt[1]))
            t2 = g2_add(t, t)
            if bit == "1":
                x1, y1 = t2
                x2, y2 = q
                if x1 == x2:
                    lam = fp2_mul(fp2_mul((3, 0), fp2_sqr(x1)), fp2_inv(_fp2_add(y1, y1)))
                else:
                    lam = fp2_mul(_fp2_sub(y2, y1), fp2_inv(_fp2_sub(x2, x1)))
                f = _fp12_mul(f, _untwist_line(lam, x2, y2, pt[0], pt[1]))
                t2 = g2_add(t2, q)
            state[idx] = (t2, q, pt)
    # BLS parameter is negative: conjugate the accumulated value.
    return _fp12_conj(f)


def _cyclotomic_exp_abs_x(a):
    return _fp12_conj(_fp12_pow(a, -BLS_X))  # a^x with x negative


def _final_exp(f):
    # easy part: f^((p^6 - 1)(p^2 + 1))
    f = _fp12_mul(_fp12_conj(f), _fp12_inv(f))
    f = _fp12_mul(_fp12_frob_k(f, 2), f)
    # hard part (times 3): m^((x-1)^2 (x+p) (x^2+p^2-1) + 3)
    m = f
    t = _fp12_pow(m, BLS_X - 1)
    t = _fp12_pow(t, BLS_X - 1)
    t = _fp12_mul(_fp12_pow(t, BLS_X), _fp12_frob(t))
    t = _fp12_mul(
        _fp12_mul(_fp12_pow(t, BLS_X * BLS_X), _fp12_frob_k(t, 2)),
        _fp12_inv(t),
    )
    return _fp12_mul(t, _fp12_mul(m, _fp12_sqr(m)))


def _gt_flatten(a):
    out = []
    for c6 in a:
        for c2 in c6:
            out.extend(c2)
    return tuple(out)


def _gt_nest(flat):
    it = list(flat)
    return (
        ((it[0], it[1]), (it[2], it[3]), (it[4], it[5])),
        ((it[6], it[7]), (it[8], it[9]), (it[10], it[11])),
    )


def pairing(p, q):
    return multi_pairing([(p, q)])


def multi_pairing(pairs):
    live = [(p, q) for p, q in pairs if p is not None and q is not None]
    if not live:
        return _gt_flatten(FP12_ONE)
    return _gt_flatten(_final_exp(_miller_loop(live)))


def gt_identity():
    return _gt_flatten(FP12_ONE)


def gt_eq(a, b):
    return tuple(a) == tuple(b)


def gt_mul(a, b):
    return _gt_flatten(_fp12_mul(_gt_nest(a), _gt_nest(b)))


def gt_inv(a):
    return _gt_flatten(_fp12_conj(_gt_nest(a)))  # cyclotomic subgroup


def gt_pow(a, k):
    k %= R
    return _gt_flatten(_fp12_pow(_gt_nest(a), k))


def gt_to_ints(a):
    return tuple(a)


# ---------------------------------------------------------------------------
# Scalar-field NTT (reference radix-2)

def ntt(values, root, invert=False):
    n = len(values)
    assert n & (n - 1) == 0
    if invert:
        root = pow(root, -1, R)
    out = list(v % R for v in values)
    # bit-reversal permutation
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            out[i], out[j] = out[j], out[i]
    length = 2
    while length <= n:
        w_len = pow(root, n // length, R)
        for start in range(0, n, length):
            w = 1
            half = length >> 1
            for k in range(start, start + half):
                u, v = out[k], out[k + half] * w % R
                out[k] = (u + v) % R
                out[k + half] = (u - v) % R
                w = w * w_len % R
        length <<= 1
    if invert:
        n_inv = pow(n, -1, R)
        out = [v * n_inv % R for v in out]
    return out


# ---------------------------------------------------------------------------
# Fixed-base helper and BSGS scanning

def g1_fixed_base_mul(base, scalars):
    return [g1_mul(base, k) for k in scalars]


def g2_fixed_base_mul(base, scalars):
    return [g2_mul(base, k) for k in scalars]


def g1_baby_hashes(base, count):
    """uint64 fingerprints (x mod 2^64) of i*base for i in 0..count-1.

    Index 0 (the identity) gets the reserved fingerprint 0.
    """
    out = np.zeros(count, dtype=np.uint64)
    acc = None
    for i in range(1, count):
        acc = g1_add(acc, base)
        out[i] = acc[0] & 0xFFFFFFFFFFFFFFFF
    return out


def g1_bsgs_scan(target, step, max_steps, sorted_hashes, sorted_idx):
    """Yield candidate (giant_j, baby_i) pairs walking target + j*step."""
    cur = target
    cands = []
    for j in range(max_steps):
        if cur is None:
            cands.append((j, 0))
        else:
            fp = np.uint64(cur[0] & 0xFFFFFFFFFFFFFFFF)
            lo = int(np.searchsorted(sorted_hashes, fp, side="left"))
            hi = int(np.searchsorted(sorted_hashes, fp, side="right"))
            for t in range(lo, hi):
                cands.append((j, int(sorted_idx[t])))
        if len(cands) >= 16:
            break
        cur = g1_add(cur, step)
    return cands
