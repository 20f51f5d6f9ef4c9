"""BLS12-381 curve parameters and generator derivation.

Everything here is plain-integer arithmetic shared by both backends.
The curve is pinned by the single parameter ``BLS_X``; the field moduli
are recomputed from it at import time so a typo in the hex constants
cannot survive.
"""

# Curve family parameter (negative for BLS12-381).
BLS_X = -0xD201000000010000

# Base field modulus and scalar field modulus.
P = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB
R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001

# Consistency of the pinned constants with the BLS12 polynomial family.
assert R == BLS_X**4 - BLS_X**2 + 1
assert P == (BLS_X - 1) ** 2 * R // 3 + BLS_X

# Short Weierstrass coefficient of E: y^2 = x^3 + 4, and of the sextic
# twist E': y^2 = x^3 + 4*(u+1) over Fp2 = Fp[u]/(u^2+1).
B_COEFF = 4
B_TWIST = (4, 4)  # 4*(1+u)

# Cofactors.  h1 is exact; h2 comes from the BLS12 twist cofactor
# polynomial and is validated by the subgroup checks in the test suite.
H1 = (BLS_X - 1) ** 2 // 3
H2 = (
    BLS_X**8
    - 4 * BLS_X**7
    + 5 * BLS_X**6
    - 4 * BLS_X**4
    + 6 * BLS_X**3
    - 4 * BLS_X**2
    - 4 * BLS_X
    + 13
) // 9

# Two-adicity of the scalar field and a generator of its 2-Sylow
# subgroup, used for NTT domains.  7 generates Fr*.
FR_TWO_ADICITY = 32
FR_MULT_GEN = 7
FR_2ADIC_ROOT = pow(FR_MULT_GEN, (R - 1) >> FR_TWO_ADICITY, R)
assert pow(FR_2ADIC_ROOT, 1 << FR_TWO_ADICITY, R) == 1
assert pow(FR_2ADIC_ROOT, 1 << (FR_TWO_ADICITY - 1), R) != 1


def fp_sqrt(a):
    """Square root in Fp (p = 3 mod 4); returns None for non-residues."""
    a %= P
    root = pow(a, (P + 1) // 4, P)
    return root if root * root % P == a else None


def fp2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    return ((a0 * b0 - a1 * b1) % P, (a0 * b1 + a1 * b0) % P)


def fp2_sqr(a):
    return fp2_mul(a, a)


def fp2_inv(a):
    a0, a1 = a
    norm_inv = pow(a0 * a0 + a1 * a1, -1, P)
    return (a0 * norm_inv % P, -a1 * norm_inv % P)


def fp2_sqrt(a):
    """Square root in Fp2 via the norm trick; returns None for non-residues."""
    a0, a1 = a[0] % P, a[1] % P
    if a1 == 0:
        root = fp_sqrt(a0)
        if root is not None:
            return (root, 0)
        # sqrt(a0) = x*u with x^2 = -a0
        root = fp_sqrt(-a0 % P)
        return None if root is None else (0, root)
    norm_root = fp_sqrt(a0 * a0 + a1 * a1)
    if norm_root is None:
        return None
    inv2 = pow(2, -1, P)
    for lam in (norm_root, -norm_root % P):
        x = fp_sqrt((a0 + lam) * inv2 % P)
        if x is None or x == 0:
            continue
        y = a1 * pow(2 * x, -1, P) % P
        cand = (x, y)
        if fp2_sqr(cand) == (a0, a1):
            return cand
    return None


def _derive_g1_generator():
    x = 0
    while True:
        x += 1
        y = fp_sqrt(x * x * x + B_COEFF)
        if y is None:
            continue
        px, py = _g1_int_mul(H1, (x, min(y, P - y)))
        if px is not None and _g1_int_mul(R, (px, py))[0] is None:
            return (px, py)


def _g1_int_add(p, q):
    if p[0] is None:
        return q
    if q[0] is None:
        return p
    x1, y1 = p
    x2, y2 = q
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return (None, None)
        lam = 3 * x1 * x1 * pow(2 * y1, -1, P) % P
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, P) % P
    x3 = (lam * lam - x1 - x2) % P
    return (x3, (lam * (x1 - x3) - y1) % P)


def _g1_int_mul(k, p):
    acc = (None, None)
    add = p
    while k > 0:
        if k & 1:
            acc = _g1_int_add(acc, add)
        add = _g1_int_add(add, add)
        k >>= 1
    return acc


def _g2_int_add(p, q):
    if p is None:
        return q
    if q is None:
        return p
    x1, y1 = p
    x2, y2 = q
    if x1 == x2:
        if (y1[0] + y2[0]) % P == 0 and (y1[1] + y2[1]) % P == 0:
            return None
        lam = fp2_mul(fp2_mul((3, 0), fp2_sqr(x1)), fp2_inv((2 * y1[0], 2 * y1[1])))
    else:
        lam = fp2_mul(
            ((y2[0] - y1[0]) % P, (y2[1] - y1[1]) % P),
            fp2_inv(((x2[0] - x1[0]) % P, (x2[1] - x1[1]) % P)),
        )
    x3 = fp2_sqr(lam)
    x3 = ((x3[0] - x1[0] - x2[0]) % P, (x3[1] - x1[1] - x2[1]) % P)
    y3 = fp2_mul(lam, ((x1[0] - x3[0]) % P, (x1[1] - x3[1]) % P))
    return (x3, ((y3[0] - y1[0]) % P, (y3[1] - y1[1]) % P))


def _g2_int_mul(k, p):
    acc = None
    add = p
    while k > 0:
        if k & 1:
            acc = _g2_int_add(acc, add)
        add = _g2_int_add(add, add)
        k >>= 1
    return acc


def _derive_g2_generator():
    x1 = 0
    while True:
        x1 += 1
        x = (x1, 1)
        rhs = fp2_mul(fp2_sqr(x), x)
        rhs = ((rhs[0] + B_TWIST[0]) % P, (rhs[1] + B_TWIST[1]) % P)
        y = fp2_sqrt(rhs)
        if y is None:
            continue
        pt = _g2_int_mul(H2, (x, y))
        if pt is not None and _g2_int_mul(R, pt) is None:
            return pt


G1_GEN = _derive_g1_generator()
G2_GEN = _derive_g2_generator()
