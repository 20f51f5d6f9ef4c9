"""Compiled arithmetic kernels (numba) for the fast backend.

All field elements travel as little-endian uint64 limb arrays in
Montgomery form (6 limbs for the base field, 4 for the scalar field).
Curve points are Jacobian coordinate triples flattened into one array:
18 limbs for G1, 36 for G2 (Fp2 components are limb pairs back to back).
Z = 0 encodes the identity; an all-zero affine row does too.

The wide multiply and carry primitives are emitted directly as 128-bit
LLVM ops, which is what makes 64-bit limbs practical under numba.
"""

import numpy as np
from llvmlite import ir
from numba import njit, types, uint64
from numba.extending import intrinsic

from .limbs import (
    P_MINUS_2,
    P_MOD,
    P_N0,
    P_ONE,
    P_R2,
    R_MINUS_2,
    R_MOD,
    R_N0,
    R_ONE,
    R_R2,
)

_I64 = ir.IntType(64)
_I128 = ir.IntType(128)


@intrinsic
def _umul128(typingctx, a, b):
    sig = types.UniTuple(types.uint64, 2)(types.uint64, types.uint64)

    def codegen(context, builder, signature, args):
        prod = builder.mul(
            builder.zext(args[0], _I128), builder.zext(args[1], _I128)
        )
        lo = builder.trunc(prod, _I64)
        hi = builder.trunc(builder.lshr(prod, ir.Constant(_I128, 64)), _I64)
        return context.make_tuple(builder, signature.return_type, [lo, hi])

    return sig, codegen


@intrinsic
def _addc(typingctx, a, b, c):
    # (sum, carry) of a + b + c with c in {0, 1}
    sig = types.UniTuple(types.uint64, 2)(
        types.uint64, types.uint64, types.uint64
    )

    def codegen(context, builder, signature, args):
        s = builder.add(
            builder.add(
                builder.zext(args[0], _I128), builder.zext(args[1], _I128)
            ),
            builder.zext(args[2], _I128),
        )
        lo = builder.trunc(s, _I64)
        hi = builder.trunc(builder.lshr(s, ir.Constant(_I128, 64)), _I64)
        return context.make_tuple(builder, signature.return_type, [lo, hi])

    return sig, codegen


@intrinsic
def _subb(typingctx, a, b, c):
    # (diff, borrow) of a - b - c with c in {0, 1}
    sig = types.UniTuple(types.uint64, 2)(
        types.uint64, types.uint64, types.uint64
    )

    def codegen(context, builder, signature, args):
        base = builder.add(
            builder.zext(args[0], _I128), ir.Constant(_I128, 1 << 64)
        )
        t = builder.sub(
            builder.sub(base, builder.zext(args[1], _I128)),
            builder.zext(args[2], _I128),
        )
        lo = builder.trunc(t, _I64)
        carry = builder.trunc(builder.lshr(t, ir.Constant(_I128, 64)), _I64)
        borrow = builder.sub(ir.Constant(_I64, 1), carry)
        return context.make_tuple(builder, signature.return_type, [lo, borrow])

    return sig, codegen


# ---------------------------------------------------------------------------
# Generic Montgomery field arithmetic (modulus passed as a limb array)

@njit(cache=True)
def _is_zero(a, lo, n):
    for j in range(n):
        if a[lo + j] != uint64(0):
            return False
    return True


@njit(cache=True)
def _mont_mul(a, ai, b, bi, out, oi, mod, n0):
    """out[oi:oi+n] = a[ai:] * b[bi:] * 2^(-64n), CIOS reduction."""
    n = mod.shape[0]
    t = np.zeros(8, dtype=np.uint64)
    for i in range(n):
        x = a[ai + i]
        carry = uint64(0)
        for j in range(n):
            lo, hi = _umul128(x, b[bi + j])
            s, c1 = _addc(t[j], lo, uint64(0))
            s, c2 = _addc(s, carry, uint64(0))
            t[j] = s
            carry = hi + c1 + c2
        s, c1 = _addc(t[n], carry, uint64(0))
        t[n] = s
        t[n + 1] += c1
        m = t[0] * n0
        lo, hi = _umul128(m, mod[0])
        s, c1 = _addc(t[0], lo, uint64(0))
        carry = hi + c1
        for j in range(1, n):
            lo, hi = _umul128(m, mod[j])
            s, c1 = _addc(t[j], lo, uint64(0))
            s, c2 = _addc(s, carry, uint64(0))
            t[j - 1] = s
            carry = hi + c1 + c2
        s, c1 = _addc(t[n], carry, uint64(0))
        t[n - 1] = s
        t[n] = t[n + 1] + c1
        t[n + 1] = uint64(0)
    ge = True
    if t[n] == uint64(0):
        for j in range(n - 1, -1, -1):
            if t[j] > mod[j]:
                break
            if t[j] < mod[j]:
                ge = False
                break
    if ge:
        borrow = uint64(0)
        for j in range(n):
            d, borrow = _subb(t[j], mod[j], borrow)
            out[oi + j] = d
    else:
        for j in range(n):
            out[oi + j] = t[j]


@njit(cache=True)
def _add_mod(a, ai, b, bi, out, oi, mod):
    n = mod.shape[0]
    t = np.empty(8, dtype=np.uint64)
    carry = uint64(0)
    for j in range(n):
        s, carry = _addc(a[ai + j], b[bi + j], carry)
        t[j] = s
    ge = True
    if carry == uint64(0):
        for j in range(n - 1, -1, -1):
            if t[j] > mod[j]:
                break
            if t[j] < mod[j]:
                ge = False
                break
    if ge:
        borrow = uint64(0)
        for j in range(n):
            d, borrow = _subb(t[j], mod[j], borrow)
            out[oi + j] = d
    else:
        for j in range(n):
            out[oi + j] = t[j]


@njit(cache=True)
def _sub_mod(a, ai, b, bi, out, oi, mod):
    n = mod.shape[0]
    t = np.empty(8, dtype=np.uint64)
    borrow = uint64(0)
    for j in range(n):
        d, borrow = _subb(a[ai + j], b[bi + j], borrow)
        t[j] = d
    if borrow != uint64(0):
        carry = uint64(0)
        for j in range(n):
            s, carry = _addc(t[j], mod[j], carry)
            out[oi + j] = s
    else:
        for j in range(n):
            out[oi + j] = t[j]


@njit(cache=True)
def _mont_pow(a, ai, e, out, oi, mod, n0, one):
    """out = a^e (Montgomery base and result, plain-integer exponent limbs)."""
    n = mod.shape[0]
    acc = np.empty(8, dtype=np.uint64)
    for j in range(n):
        acc[j] = one[j]
    started = False
    for w in range(e.shape[0] - 1, -1, -1):
        limb = e[w]
        for bit in range(63, -1, -1):
            if started:
                _mont_mul(acc, 0, acc, 0, acc, 0, mod, n0)
            if (limb >> uint64(bit)) & uint64(1) != uint64(0):
                _mont_mul(acc, 0, a, ai, acc, 0, mod, n0)
                started = True
    for j in range(n):
        out[oi + j] = acc[j]


# ---------------------------------------------------------------------------
# Fp2 arithmetic on 12-limb arrays (c0 | c1)

@njit(cache=True)
def _fp2_add(a, ai, b, bi, out, oi):
    _add_mod(a, ai, b, bi, out, oi, P_MOD)
    _add_mod(a, ai + 6, b, bi + 6, out, oi + 6, P_MOD)


@njit(cache=True)
def _fp2_sub(a, ai, b, bi, out, oi):
    _sub_mod(a, ai, b, bi, out, oi, P_MOD)
    _sub_mod(a, ai + 6, b, bi + 6, out, oi + 6, P_MOD)


@njit(cache=True)
def _fp2_mul(a, ai, b, bi, out, oi):
    t0 = np.empty(6, dtype=np.uint64)
    t1 = np.empty(6, dtype=np.uint64)
    t2 = np.empty(6, dtype=np.uint64)
    s0 = np.empty(6, dtype=np.uint64)
    s1 = np.empty(6, dtype=np.uint64)
    _mont_mul(a, ai, b, bi, t0, 0, P_MOD, P_N0)
    _mont_mul(a, ai + 6, b, bi + 6, t1, 0, P_MOD, P_N0)
    _add_mod(a, ai, a, ai + 6, s0, 0, P_MOD)
    _add_mod(b, bi, b, bi + 6, s1, 0, P_MOD)
    _mont_mul(s0, 0, s1, 0, t2, 0, P_MOD, P_N0)
    _sub_mod(t0, 0, t1, 0, out, oi, P_MOD)
    _sub_mod(t2, 0, t0, 0, t2, 0, P_MOD)
    _sub_mod(t2, 0, t1, 0, out, oi + 6, P_MOD)


@njit(cache=True)
def _fp2_sqr(a, ai, out, oi):
    t0 = np.empty(6, dtype=np.uint64)
    t1 = np.empty(6, dtype=np.uint64)
    t2 = np.empty(6, dtype=np.uint64)
    _add_mod(a, ai, a, ai + 6, t0, 0, P_MOD)
    _sub_mod(a, ai, a, ai + 6, t1, 0, P_MOD)
    _mont_mul(a, ai, a, ai + 6, t2, 0, P_MOD, P_N0)
    _mont_mul(t0, 0, t1, 0, out, oi, P_MOD, P_N0)
    _add_mod(t2, 0, t2, 0, out, oi + 6, P_MOD)


# ---------------------------------------------------------------------------
# G1 Jacobian arithmetic (18-limb points, 12-limb affine rows)

@njit(cache=True)
def _g1_set_identity(out, oi):
    for j in range(18):
        out[oi + j] = uint64(0)


@njit(cache=True)
def _g1_dbl(p, pi, out, oi):
    if _is_zero(p, pi + 12, 6):
        _g1_set_identity(out, oi)
        return
    A = np.empty(6, dtype=np.uint64)
    B = np.empty(6, dtype=np.uint64)
    C = np.empty(6, dtype=np.uint64)
    D = np.empty(6, dtype=np.uint64)
    E = np.empty(6, dtype=np.uint64)
    F = np.empty(6, dtype=np.uint64)
    t = np.empty(6, dtype=np.uint64)
    _mont_mul(p, pi, p, pi, A, 0, P_MOD, P_N0)            # A = X^2
    _mont_mul(p, pi + 6, p, pi + 6, B, 0, P_MOD, P_N0)    # B = Y^2
    _mont_mul(B, 0, B, 0, C, 0, P_MOD, P_N0)              # C = B^2
    _add_mod(p, pi, B, 0, t, 0, P_MOD)
    _mont_mul(t, 0, t, 0, D, 0, P_MOD, P_N0)
    _sub_mod(D, 0, A, 0, D, 0, P_MOD)
    _sub_mod(D, 0, C, 0, D, 0, P_MOD)
    _add_mod(D, 0, D, 0, D, 0, P_MOD)                     # D = 2((X+B)^2-A-C)
    _add_mod(A, 0, A, 0, E, 0, P_MOD)
    _add_mod(E, 0, A, 0, E, 0, P_MOD)                     # E = 3A
    _mont_mul(E, 0, E, 0, F, 0, P_MOD, P_N0)              # F = E^2
    _mont_mul(p, pi + 6, p, pi + 12, t, 0, P_MOD, P_N0)
    _add_mod(t, 0, t, 0, out, oi + 12, P_MOD)             # Z3 = 2YZ
    _sub_mod(F, 0, D, 0, F, 0, P_MOD)
    _sub_mod(F, 0, D, 0, out, oi, P_MOD)                  # X3 = F - 2D
    _sub_mod(D, 0, out, oi, D, 0, P_MOD)
    _mont_mul(E, 0, D, 0, D, 0, P_MOD, P_N0)
    _add_mod(C, 0, C, 0, C, 0, P_MOD)
    _add_mod(C, 0, C, 0, C, 0, P_MOD)
    _add_mod(C, 0, C, 0, C, 0, P_MOD)
    _sub_mod(D, 0, C, 0, out, oi + 6, P_MOD)              # Y3 = E(D-X3) - 8C


@njit(cache=True)
def _g1_add(p, pi, q, qi, out, oi):
    if _is_zero(p, pi + 12, 6):
        for j in range(18):
            out[oi + j] = q[qi + j]
        return
    if _is_zero(q, qi + 12, 6):
        for j in range(18):
            out[oi + j] = p[pi + j]
        return
    Z1Z1 = np.empty(6, dtype=np.uint64)
    Z2Z2 = np.empty(6, dtype=np.uint64)
    U1 = np.empty(6, dtype=np.uint64)
    U2 = np.empty(6, dtype=np.uint64)
    S1 = np.empty(6, dtype=np.uint64)
    S2 = np.empty(6, dtype=np.uint64)
    H = np.empty(6, dtype=np.uint64)
    I = np.empty(6, dtype=np.uint64)
    J = np.empty(6, dtype=np.uint64)
    r = np.empty(6, dtype=np.uint64)
    V = np.empty(6, dtype=np.uint64)
    t = np.empty(6, dtype=np.uint64)
    _mont_mul(p, pi + 12, p, pi + 12, Z1Z1, 0, P_MOD, P_N0)
    _mont_mul(q, qi + 12, q, qi + 12, Z2Z2, 0, P_MOD, P_N0)
    _mont_mul(p, pi, Z2Z2, 0, U1, 0, P_MOD, P_N0)
    _mont_mul(q, qi, Z1Z1, 0, U2, 0, P_MOD, P_N0)
    _mont_mul(q, qi + 12, Z2Z2, 0, t, 0, P_MOD, P_N0)
    _mont_mul(p, pi + 6, t, 0, S1, 0, P_MOD, P_N0)
    _mont_mul(p, pi + 12, Z1Z1, 0, t, 0, P_MOD, P_N0)
    _mont_mul(q, qi + 6, t, 0, S2, 0, P_MOD, P_N0)
    _sub_mod(U2, 0, U1, 0, H, 0, P_MOD)
    _sub_mod(S2, 0, S1, 0, r, 0, P_MOD)
    if _is_zero(H, 0, 6):
        if _is_zero(r, 0, 6):
            _g1_dbl(p, pi, out, oi)
        else:
            _g1_set_identity(out, oi)
        return
    _add_mod(r, 0, r, 0, r, 0, P_MOD)
    _add_mod(H, 0, H, 0, t, 0, P_MOD)
    _mont_mul(t, 0, t, 0, I, 0, P_MOD, P_N0)
    _mont_mul(H, 0, I, 0, J, 0, P_MOD, P_N0)
    _mont_mul(U1, 0, I, 0, V, 0, P_MOD, P_N0)
    _add_mod(p, pi + 12, q, qi + 12, t, 0, P_MOD)
    _mont_mul(t, 0, t, 0, t, 0, P_MOD, P_N0)
    _sub_mod(t, 0, Z1Z1, 0, t, 0, P_MOD)
    _sub_mod(t, 0, Z2Z2, 0, t, 0, P_MOD)
    _mont_mul(t, 0, H, 0, out, oi + 12, P_MOD, P_N0)      # Z3
    _mont_mul(r, 0, r, 0, t, 0, P_MOD, P_N0)
    _sub_mod(t, 0, J, 0, t, 0, P_MOD)
    _sub_mod(t, 0, V, 0, t, 0, P_MOD)
    _sub_mod(t, 0, V, 0, out, oi, P_MOD)                  # X3
    _sub_mod(V, 0, out, oi, V, 0, P_MOD)
    _mont_mul(r, 0, V, 0, V, 0, P_MOD, P_N0)
    _mont_mul(S1, 0, J, 0, t, 0, P_MOD, P_N0)
    _add_mod(t, 0, t, 0, t, 0, P_MOD)
    _sub_mod(V, 0, t, 0, out, oi + 6, P_MOD)              # Y3


@njit(cache=True)
def _g1_madd(p, pi, q, qi, out, oi):
    """out = p (Jacobian) + q (affine row; all-zero row = identity)."""
    if _is_zero(q, qi, 12):
        for j in range(18):
            out[oi + j] = p[pi + j]
        return
    if _is_zero(p, pi + 12, 6):
        for j in range(12):
            out[oi + j] = q[qi + j]
        for j in range(6):
            out[oi + 12 + j] = P_ONE[j]
        return
    Z1Z1 = np.empty(6, dtype=np.uint64)
    U2 = np.empty(6, dtype=np.uint64)
    S2 = np.empty(6, dtype=np.uint64)
    H = np.empty(6, dtype=np.uint64)
    HH = np.empty(6, dtype=np.uint64)
    I = np.empty(6, dtype=np.uint64)
    J = np.empty(6, dtype=np.uint64)
    r = np.empty(6, dtype=np.uint64)
    V = np.empty(6, dtype=np.uint64)
    t = np.empty(6, dtype=np.uint64)
    _mont_mul(p, pi + 12, p, pi + 12, Z1Z1, 0, P_MOD, P_N0)
    _mont_mul(q, qi, Z1Z1, 0, U2, 0, P_MOD, P_N0)
    _mont_mul(p, pi + 12, Z1Z1, 0, t, 0, P_MOD, P_N0)
    _mont_mul(q, qi + 6, t, 0, S2, 0, P_MOD, P_N0)
    _sub_mod(U2, 0, p, pi, H, 0, P_MOD)
    _sub_mod(S2, 0, p, pi + 6, r, 0, P_MOD)
    if _is_zero(H, 0, 6):
        if _is_zero(r, 0, 6):
            _g1_dbl(p, pi, out, oi)
        else:
            _g1_set_identity(out, oi)
        return
    _mont_mul(H, 0, H, 0, HH, 0, P_MOD, P_N0)
    _add_mod(HH, 0, HH, 0, I, 0, P_MOD)
    _add_mod(I, 0, I, 0, I, 0, P_MOD)                     # I = 4*HH
    _mont_mul(H, 0, I, 0, J, 0, P_MOD, P_N0)
    _add_mod(r, 0, r, 0, r, 0, P_MOD)
    _mont_mul(p, pi, I, 0, V, 0, P_MOD, P_N0)
    _add_mod(p, pi + 12, H, 0, t, 0, P_MOD)
    _mont_mul(t, 0, t, 0, t, 0, P_MOD, P_N0)
    _sub_mod(t, 0, Z1Z1, 0, t, 0, P_MOD)
    _sub_mod(t, 0, HH, 0, out, oi + 12, P_MOD)            # Z3
    _mont_mul(r, 0, r, 0, t, 0, P_MOD, P_N0)
    _sub_mod(t, 0, J, 0, t, 0, P_MOD)
    _sub_mod(t, 0, V, 0, t, 0, P_MOD)
    _sub_mod(t, 0, V, 0, out, oi, P_MOD)                  # X3
    _sub_mod(V, 0, out, oi, V, 0, P_MOD)
    _mont_mul(r, 0, V, 0, V, 0, P_MOD, P_N0)
    _mont_mul(p, pi + 6, J, 0, t, 0, P_MOD, P_N0)
    _add_mod(t, 0, t, 0, t, 0, P_MOD)
    _sub_mod(V, 0, t, 0, out, oi + 6, P_MOD)              # Y3


@njit(cache=True)
def g1_mul_jac(p, k, out):
    """out (18,) = k (4 plain limbs) * p (18-limb Jacobian point)."""
    _g1_set_identity(out, 0)
    started = False
    for w in range(3, -1, -1):
        limb = k[w]
        for bit in range(63, -1, -1):
            if started:
                _g1_dbl(out, 0, out, 0)
            if (limb >> uint64(bit)) & uint64(1) != uint64(0):
                _g1_add(out, 0, p, 0, out, 0)
                started = True


@njit(cache=True)
def g1_normalize(pts, out):
    """Batch Jacobian (n,18) -> Montgomery affine (n,12) with one inversion."""
    n = pts.shape[0]
    prods = np.empty((n, 6), dtype=np.uint64)
    acc = P_ONE.copy()
    for i in range(n):
        for j in range(6):
            prods[i, j] = acc[j]
        if not _is_zero(pts[i], 12, 6):
            _mont_mul(acc, 0, pts[i], 12, acc, 0, P_MOD, P_N0)
    inv = np.empty(6, dtype=np.uint64)
    _mont_pow(acc, 0, P_MINUS_2, inv, 0, P_MOD, P_N0, P_ONE)
    zinv = np.empty(6, dtype=np.uint64)
    z2 = np.empty(6, dtype=np.uint64)
    for i in range(n - 1, -1, -1):
        if _is_zero(pts[i], 12, 6):
            for j in range(12):
                out[i, j] = uint64(0)
            continue
        _mont_mul(inv, 0, prods[i], 0, zinv, 0, P_MOD, P_N0)
        _mont_mul(inv, 0, pts[i], 12, inv, 0, P_MOD, P_N0)
        _mont_mul(zinv, 0, zinv, 0, z2, 0, P_MOD, P_N0)
        _mont_mul(pts[i], 0, z2, 0, out[i], 0, P_MOD, P_N0)
        _mont_mul(z2, 0, zinv, 0, z2, 0, P_MOD, P_N0)
        _mont_mul(pts[i], 6, z2, 0, out[i], 6, P_MOD, P_N0)


@njit(cache=True)
def _window_digit(scal, i, pos, c):
    limb = pos >> 6
    off = uint64(pos & 63)
    m = scal[i, limb] >> off
    if int(off) + c > 64 and limb < scal.shape[1] - 1:
        m |= scal[i, limb + 1] << (uint64(64) - off)
    return m & uint64((1 << c) - 1)


@njit(cache=True)
def g1_msm(aff, scal, c, out):
    """Pippenger MSM: aff (n,12) Montgomery affine, scal (n,4) plain ints."""
    n = aff.shape[0]
    nb = 1 << c
    windows = (256 + c - 1) // c
    buckets = np.zeros((nb, 18), dtype=np.uint64)
    acc = np.empty(18, dtype=np.uint64)
    run = np.empty(18, dtype=np.uint64)
    _g1_set_identity(out, 0)
    for w in range(windows - 1, -1, -1):
        for _ in range(c):
            _g1_dbl(out, 0, out, 0)
        buckets[:, :] = uint64(0)
        pos = w * c
        for i in range(n):
            m = _window_digit(scal, i, pos, c)
            if m != uint64(0):
                _g1_madd(buckets[int(m)], 0, aff[i], 0, buckets[int(m)], 0)
        _g1_set_identity(acc, 0)
        _g1_set_identity(run, 0)
        for b in range(nb - 1, 0, -1):
            _g1_add(acc, 0, buckets[b], 0, acc, 0)
            _g1_add(run, 0, acc, 0, run, 0)
        _g1_add(out, 0, run, 0, out, 0)


@njit(cache=True)
def g1_fixed_base(base_aff, scalars, out):
    """Windowed fixed-base multiply: out (m,18) = scalars (m,4) * base."""
    tblj = np.zeros((64 * 15, 18), dtype=np.uint64)
    cur = np.zeros(18, dtype=np.uint64)
    _g1_madd(cur, 0, base_aff, 0, cur, 0)
    for w in range(64):
        row = w * 15
        for j in range(18):
            tblj[row, j] = cur[j]
        for d in range(1, 15):
            _g1_add(tblj[row + d - 1], 0, cur, 0, tblj[row + d], 0)
        for _ in range(4):
            _g1_dbl(cur, 0, cur, 0)
    tbl = np.empty((64 * 15, 12), dtype=np.uint64)
    g1_normalize(tblj, tbl)
    for i in range(scalars.shape[0]):
        _g1_set_identity(out[i], 0)
        for w in range(64):
            d = int((scalars[i, w >> 4] >> uint64((w & 15) * 4)) & uint64(15))
            if d != 0:
                _g1_madd(out[i], 0, tbl[w * 15 + d - 1], 0, out[i], 0)


# ---------------------------------------------------------------------------
# G2 Jacobian arithmetic (36-limb points, 24-limb affine rows)

@njit(cache=True)
def _g2_set_identity(out, oi):
    for j in range(36):
        out[oi + j] = uint64(0)


@njit(cache=True)
def _g2_dbl(p, pi, out, oi):
    if _is_zero(p, pi + 24, 12):
        _g2_set_identity(out, oi)
        return
    A = np.empty(12, dtype=np.uint64)
    B = np.empty(12, dtype=np.uint64)
    C = np.empty(12, dtype=np.uint64)
    D = np.empty(12, dtype=np.uint64)
    E = np.empty(12, dtype=np.uint64)
    F = np.empty(12, dtype=np.uint64)
    t = np.empty(12, dtype=np.uint64)
    _fp2_sqr(p, pi, A, 0)
    _fp2_sqr(p, pi + 12, B, 0)
    _fp2_sqr(B, 0, C, 0)
    _fp2_add(p, pi, B, 0, t, 0)
    _fp2_sqr(t, 0, D, 0)
    _fp2_sub(D, 0, A, 0, D, 0)
    _fp2_sub(D, 0, C, 0, D, 0)
    _fp2_add(D, 0, D, 0, D, 0)
    _fp2_add(A, 0, A, 0, E, 0)
    _fp2_add(E, 0, A, 0, E, 0)
    _fp2_sqr(E, 0, F, 0)
    _fp2_mul(p, pi + 12, p, pi + 24, t, 0)
    _fp2_add(t, 0, t, 0, out, oi + 24)
    _fp2_sub(F, 0, D, 0, F, 0)
    _fp2_sub(F, 0, D, 0, out, oi)
    _fp2_sub(D, 0, out, oi, D, 0)
    _fp2_mul(E, 0, D, 0, D, 0)
    _fp2_add(C, 0, C, 0, C, 0)
    _fp2_add(C, 0, C, 0, C, 0)
    _fp2_add(C, 0, C, 0, C, 0)
    _fp2_sub(D, 0, C, 0, out, oi + 12)


@njit(cache=True)
def _g2_add(p, pi, q, qi, out, oi):
    if _is_zero(p, pi + 24, 12):
        for j in range(36):
            out[oi + j] = q[qi + j]
        return
    if _is_zero(q, qi + 24, 12):
        for j in range(36):
            out[oi + j] = p[pi + j]
        return
    Z1Z1 = np.empty(12, dtype=np.uint64)
    Z2Z2 = np.empty(12, dtype=np.uint64)
    U1 = np.empty(12, dtype=np.uint64)
    U2 = np.empty(12, dtype=np.uint64)
    S1 = np.empty(12, dtype=np.uint64)
    S2 = np.empty(12, dtype=np.uint64)
    H = np.empty(12, dtype=np.uint64)
    I = np.empty(12, dtype=np.uint64)
    J = np.empty(12, dtype=np.uint64)
    r = np.empty(12, dtype=np.uint64)
    V = np.empty(12, dtype=np.uint64)
    t = np.empty(12, dtype=np.uint64)
    _fp2_sqr(p, pi + 24, Z1Z1, 0)
    _fp2_sqr(q, qi + 24, Z2Z2, 0)
    _fp2_mul(p, pi, Z2Z2, 0, U1, 0)
    _fp2_mul(q, qi, Z1Z1, 0, U2, 0)
    _fp2_mul(q, qi + 24, Z2Z2, 0, t, 0)
    _fp2_mul(p, pi + 12, t, 0, S1, 0)
    _fp2_mul(p, pi + 24, Z1Z1, 0, t, 0)
    _fp2_mul(q, qi + 12, t, 0, S2, 0)
    _fp2_sub(U2, 0, U1, 0, H, 0)
    _fp2_sub(S2, 0, S1, 0, r, 0)
    if _is_zero(H, 0, 12):
        if _is_zero(r, 0, 12):
            _g2_dbl(p, pi, out, oi)
        else:
            _g2_set_identity(out, oi)
        return
    _fp2_add(r, 0, r, 0, r, 0)
    _fp2_add(H, 0, H, 0, t, 0)
    _fp2_sqr(t, 0, I, 0)
    _fp2_mul(H, 0, I, 0, J, 0)
    _fp2_mul(U1, 0, I, 0, V, 0)
    _fp2_add(p, pi + 24, q, qi + 24, t, 0)
    _fp2_sqr(t, 0, t, 0)
    _fp2_sub(t, 0, Z1Z1, 0, t, 0)
    _fp2_sub(t, 0, Z2Z2, 0, t, 0)
    _fp2_mul(t, 0, H, 0, out, oi + 24)
    _fp2_sqr(r, 0, t, 0)
    _fp2_sub(t, 0, J, 0, t, 0)
    _fp2_sub(t, 0, V, 0, t, 0)
    _fp2_sub(t, 0, V, 0, out, oi)
    _fp2_sub(V, 0, out, oi, V, 0)
    _fp2_mul(r, 0, V, 0, V, 0)
    _fp2_mul(S1, 0, J, 0, t, 0)
    _fp2_add(t, 0, t, 0, t, 0)
    _fp2_sub(V, 0, t, 0, out, oi + 12)


@njit(cache=True)
def _g2_madd(p, pi, q, qi, out, oi):
    if _is_zero(q, qi, 24):
        for j in range(36):
            out[oi + j] = p[pi + j]
        return
    if _is_zero(p, pi + 24, 12):
        for j in range(24):
            out[oi + j] = q[qi + j]
        for j in range(6):
            out[oi + 24 + j] = P_ONE[j]
        for j in range(6):
            out[oi + 30 + j] = uint64(0)
        return
    Z1Z1 = np.empty(12, dtype=np.uint64)
    U2 = np.empty(12, dtype=np.uint64)
    S2 = np.empty(12, dtype=np.uint64)
    H = np.empty(12, dtype=np.uint64)
    HH = np.empty(12, dtype=np.uint64)
    I = np.empty(12, dtype=np.uint64)
    J = np.empty(12, dtype=np.uint64)
    r = np.empty(12, dtype=np.uint64)
    V = np.empty(12, dtype=np.uint64)
    t = np.empty(12, dtype=np.uint64)
    _fp2_sqr(p, pi + 24, Z1Z1, 0)
    _fp2_mul(q, qi, Z1Z1, 0, U2, 0)
    _fp2_mul(p, pi + 24, Z1Z1, 0, t, 0)
    _fp2_mul(q, qi + 12, t, 0, S2, 0)
    _fp2_sub(U2, 0, p, pi, H, 0)
    _fp2_sub(S2, 0, p, pi + 12, r, 0)
    if _is_zero(H, 0, 12):
        if _is_zero(r, 0, 12):
            _g2_dbl(p, pi, out, oi)
        else:
            _g2_set_identity(out, oi)
        return
    _fp2_sqr(H, 0, HH, 0)
    _fp2_add(HH, 0, HH, 0, I, 0)
    _fp2_add(I, 0, I, 0, I, 0)
    _fp2_mul(H, 0, I, 0, J, 0)
    _fp2_add(r, 0, r, 0, r, 0)
    _fp2_mul(p, pi, I, 0, V, 0)
    _fp2_add(p, pi + 24, H, 0, t, 0)
    _fp2_sqr(t, 0, t, 0)
    _fp2_sub(t, 0, Z1Z1, 0, t, 0)
    _fp2_sub(t, 0, HH, 0, out, oi + 24)
    _fp2_sqr(r, 0, t, 0)
    _fp2_sub(t, 0, J, 0, t, 0)
    _fp2_sub(t, 0, V, 0, t, 0)
    _fp2_sub(t, 0, V, 0, out, oi)
    _fp2_sub(V, 0, out, oi, V, 0)
    _fp2_mul(r, 0, V, 0, V, 0)
    _fp2_mul(p, pi + 12, J, 0, t, 0)
    _fp2_add(t, 0, t, 0, t, 0)
    _fp2_sub(V, 0, t, 0, out, oi + 12)


@njit(cache=True)
def g2_mul_jac(p, k, out):
    _g2_set_identity(out, 0)
    started = False
    for w in range(3, -1, -1):
        limb = k[w]
        for bit in range(63, -1, -1):
            if started:
                _g2_dbl(out, 0, out, 0)
            if (limb >> uint64(bit)) & uint64(1) != uint64(0):
                _g2_add(out, 0, p, 0, out, 0)
                started = True


@njit(cache=True)
def g2_normalize(pts, out):
    n = pts.shape[0]
    prods = np.empty((n, 12), dtype=np.uint64)
    acc = np.zeros(12, dtype=np.uint64)
    for j in range(6):
        acc[j] = P_ONE[j]
    for i in range(n):
        for j in range(12):
            prods[i, j] = acc[j]
        if not _is_zero(pts[i], 24, 12):
            _fp2_mul(acc, 0, pts[i], 24, acc, 0)
    # invert acc via the Fp2 norm trick
    n0f = np.empty(6, dtype=np.uint64)
    n1f = np.empty(6, dtype=np.uint64)
    inv = np.empty(12, dtype=np.uint64)
    _mont_mul(acc, 0, acc, 0, n0f, 0, P_MOD, P_N0)
    _mont_mul(acc, 6, acc, 6, n1f, 0, P_MOD, P_N0)
    _add_mod(n0f, 0, n1f, 0, n0f, 0, P_MOD)
    _mont_pow(n0f, 0, P_MINUS_2, n1f, 0, P_MOD, P_N0, P_ONE)
    _mont_mul(acc, 0, n1f, 0, inv, 0, P_MOD, P_N0)
    _mont_mul(acc, 6, n1f, 0, inv, 6, P_MOD, P_N0)
    zero = np.zeros(6, dtype=np.uint64)
    _sub_mod(zero, 0, inv, 6, inv, 6, P_MOD)
    zinv = np.empty(12, dtype=np.uint64)
    z2 = np.empty(12, dtype=np.uint64)
    for i in range(n - 1, -1, -1):
        if _is_zero(pts[i], 24, 12):
            for j in range(24):
                out[i, j] = uint64(0)
            continue
        _fp2_mul(inv, 0, prods[i], 0, zinv, 0)
        _fp2_mul(inv, 0, pts[i], 24, inv, 0)
        _fp2_sqr(zinv, 0, z2, 0)
        _fp2_mul(pts[i], 0, z2, 0, out[i], 0)
        _fp2_mul(z2, 0, zinv, 0, z2, 0)
        _fp2_mul(pts[i], 12, z2, 0, out[i], 12)


@njit(cache=True)
def g2_fixed_base(base_aff, scalars, out):
    tblj = np.zeros((64 * 15, 36), dtype=np.uint64)
    cur = np.zeros(36, dtype=np.uint64)
    _g2_madd(cur, 0, base_aff, 0, cur, 0)
    for w in range(64):
        row = w * 15
        for j in range(36):
            tblj[row, j] = cur[j]
        for d in range(1, 15):
            _g2_add(tblj[row + d - 1], 0, cur, 0, tblj[row + d], 0)
        for _ in range(4):
            _g2_dbl(cur, 0, cur, 0)
    tbl = np.empty((64 * 15, 24), dtype=np.uint64)
    g2_normalize(tblj, tbl)
    for i in range(scalars.shape[0]):
        _g2_set_identity(out[i], 0)
        for w in range(64):
            d = int((scalars[i, w >> 4] >> uint64((w & 15) * 4)) & uint64(15))
            if d != 0:
                _g2_madd(out[i], 0, tbl[w * 15 + d - 1], 0, out[i], 0)


@njit(cache=True)
def g2_msm(aff, scal, c, out):
    n = aff.shape[0]
    nb = 1 << c
    windows = (256 + c - 1) // c
    buckets = np.zeros((nb, 36), dtype=np.uint64)
    acc = np.empty(36, dtype=np.uint64)
    run = np.empty(36, dtype=np.uint64)
    _g2_set_identity(out, 0)
    for w in range(windows - 1, -1, -1):
        for _ in range(c):
            _g2_dbl(out, 0, out, 0)
        buckets[:, :] = uint64(0)
        pos = w * c
        for i in range(n):
            m = _window_digit(scal, i, pos, c)
            if m != uint64(0):
                _g2_madd(buckets[int(m)], 0, aff[i], 0, buckets[int(m)], 0)
        _g2_set_identity(acc, 0)
        _g2_set_identity(run, 0)
        for b in range(nb - 1, 0, -1):
            _g2_add(acc, 0, buckets[b], 0, acc, 0)
            _g2_add(run, 0, acc, 0, run, 0)
        _g2_add(out, 0, run, 0, out, 0)


@njit(cache=True)
def g1_eq_jac(a, b):
    """Jacobian equality via cross-multiplication."""
    az = _is_zero(a, 12, 6)
    bz = _is_zero(b, 12, 6)
    if az or bz:
        return az and bz
    za = np.empty(6, dtype=np.uint64)
    zb = np.empty(6, dtype=np.uint64)
    l = np.empty(6, dtype=np.uint64)
    r = np.empty(6, dtype=np.uint64)
    _mont_mul(a, 12, a, 12, za, 0, P_MOD, P_N0)
    _mont_mul(b, 12, b, 12, zb, 0, P_MOD, P_N0)
    _mont_mul(a, 0, zb, 0, l, 0, P_MOD, P_N0)
    _mont_mul(b, 0, za, 0, r, 0, P_MOD, P_N0)
    for j in range(6):
        if l[j] != r[j]:
            return False
    _mont_mul(za, 0, a, 12, za, 0, P_MOD, P_N0)
    _mont_mul(zb, 0, b, 12, zb, 0, P_MOD, P_N0)
    _mont_mul(a, 6, zb, 0, l, 0, P_MOD, P_N0)
    _mont_mul(b, 6, za, 0, r, 0, P_MOD, P_N0)
    for j in range(6):
        if l[j] != r[j]:
            return False
    return True


@njit(cache=True)
def g2_eq_jac(a, b):
    az = _is_zero(a, 24, 12)
    bz = _is_zero(b, 24, 12)
    if az or bz:
        return az and bz
    za = np.empty(12, dtype=np.uint64)
    zb = np.empty(12, dtype=np.uint64)
    l = np.empty(12, dtype=np.uint64)
    r = np.empty(12, dtype=np.uint64)
    _fp2_sqr(a, 24, za, 0)
    _fp2_sqr(b, 24, zb, 0)
    _fp2_mul(a, 0, zb, 0, l, 0)
    _fp2_mul(b, 0, za, 0, r, 0)
    for j in range(12):
        if l[j] != r[j]:
            return False
    _fp2_mul(za, 0, a, 24, za, 0)
    _fp2_mul(zb, 0, b, 24, zb, 0)
    _fp2_mul(a, 12, zb, 0, l, 0)
    _fp2_mul(b, 12, za, 0, r, 0)
    for j in range(12):
        if l[j] != r[j]:
            return False
    return True


# ---------------------------------------------------------------------------
# Scalar-field NTT and vector helpers (values in Montgomery form)

@njit(cache=True)
def ntt_fr(vals, root):
    """In-place radix-2 NTT over the scalar field; vals (n,4), root (4,)."""
    n = vals.shape[0]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            for t in range(4):
                tmp = vals[i, t]
                vals[i, t] = vals[j, t]
                vals[j, t] = tmp
    stages = 0
    while (1 << (stages + 1)) <= n:
        stages += 1
    sroots = np.empty((stages, 4), dtype=np.uint64)
    cur = root.copy()
    for s in range(stages - 1, -1, -1):
        for t in range(4):
            sroots[s, t] = cur[t]
        _mont_mul(cur, 0, cur, 0, cur, 0, R_MOD, R_N0)
    u = np.empty(4, dtype=np.uint64)
    v = np.empty(4, dtype=np.uint64)
    w = np.empty(4, dtype=np.uint64)
    for s in range(stages):
        length = 1 << (s + 1)
        half = length >> 1
        for start in range(0, n, length):
            for t in range(4):
                w[t] = R_ONE[t]
            for k in range(start, start + half):
                _mont_mul(vals[k + half], 0, w, 0, v, 0, R_MOD, R_N0)
                for t in range(4):
                    u[t] = vals[k, t]
                _add_mod(u, 0, v, 0, vals[k], 0, R_MOD)
                _sub_mod(u, 0, v, 0, vals[k + half], 0, R_MOD)
                _mont_mul(w, 0, sroots[s], 0, w, 0, R_MOD, R_N0)


@njit(cache=True)
def fr_vec_mul(a, b, out):
    for i in range(a.shape[0]):
        _mont_mul(a[i], 0, b[i], 0, out[i], 0, R_MOD, R_N0)


@njit(cache=True)
def fr_vec_scale(a, s, out):
    for i in range(a.shape[0]):
        _mont_mul(a[i], 0, s, 0, out[i], 0, R_MOD, R_N0)


@njit(cache=True)
def fr_vec_add(a, b, out):
    for i in range(a.shape[0]):
        _add_mod(a[i], 0, b[i], 0, out[i], 0, R_MOD)


@njit(cache=True)
def fr_vec_sub(a, b, out):
    for i in range(a.shape[0]):
        _sub_mod(a[i], 0, b[i], 0, out[i], 0, R_MOD)


# ---------------------------------------------------------------------------
# BSGS kernels

_P_ONE_RAW = np.zeros(6, dtype=np.uint64)
_P_ONE_RAW[0] = 1


@njit(cache=True)
def g1_baby_hashes(base_aff, count, out_hash):
    """out_hash[i] = low 64 bits of the plain affine x of i*base (0 at i=0)."""
    pts = np.zeros((count, 18), dtype=np.uint64)
    acc = np.zeros(18, dtype=np.uint64)
    for i in range(1, count):
        _g1_madd(acc, 0, base_aff, 0, acc, 0)
        for j in range(18):
            pts[i, j] = acc[j]
    aff = np.empty((count, 12), dtype=np.uint64)
    g1_normalize(pts, aff)
    x = np.empty(6, dtype=np.uint64)
    out_hash[0] = uint64(0)
    for i in range(1, count):
        _mont_mul(aff[i], 0, _P_ONE_RAW, 0, x, 0, P_MOD, P_N0)
        out_hash[i] = x[0]


@njit(cache=True)
def g1_bsgs_scan(target, step_aff, max_steps, sorted_hashes, sorted_idx,
                 out_pairs):
    """Walk target + j*step, report up to 16 fingerprint hits as (j, i)."""
    block = 1024
    jac = np.empty((block, 18), dtype=np.uint64)
    aff = np.empty((block, 12), dtype=np.uint64)
    x = np.empty(6, dtype=np.uint64)
    cur = target.copy()
    cnt = 0
    j_base = 0
    while j_base < max_steps and cnt < 16:
        bs = min(block, max_steps - j_base)
        for t in range(bs):
            for j in range(18):
                jac[t, j] = cur[j]
            _g1_madd(cur, 0, step_aff, 0, cur, 0)
        g1_normalize(jac[:bs], aff[:bs])
        for t in range(bs):
            jj = j_base + t
            if _is_zero(jac[t], 12, 6):
                out_pairs[cnt, 0] = jj
                out_pairs[cnt, 1] = 0
                cnt += 1
            else:
                _mont_mul(aff[t], 0, _P_ONE_RAW, 0, x, 0, P_MOD, P_N0)
                fp = x[0]
                lo = np.searchsorted(sorted_hashes, fp, side="left")
                hi = np.searchsorted(sorted_hashes, fp, side="right")
                for pos in range(lo, hi):
                    if cnt < 16:
                        out_pairs[cnt, 0] = jj
                        out_pairs[cnt, 1] = sorted_idx[pos]
                        cnt += 1
            if cnt >= 16:
                break
        j_base += bs
    return cnt


# ---------------------------------------------------------------------------
# Montgomery-form conversions

@njit(cache=True)
def fp_to_mont(a, out):
    _mont_mul(a, 0, P_R2, 0, out, 0, P_MOD, P_N0)


@njit(cache=True)
def fp_from_mont(a, out):
    _mont_mul(a, 0, _P_ONE_RAW, 0, out, 0, P_MOD, P_N0)


_R_ONE_RAW = np.zeros(4, dtype=np.uint64)
_R_ONE_RAW[0] = 1


@njit(cache=True)
def fr_vec_to_mont(a, out):
    for i in range(a.shape[0]):
        _mont_mul(a[i], 0, R_R2, 0, out[i], 0, R_MOD, R_N0)


@njit(cache=True)
def fr_vec_from_mont(a, out):
    for i in range(a.shape[0]):
        _mont_mul(a[i], 0, _R_ONE_RAW, 0, out[i], 0, R_MOD, R_N0)
