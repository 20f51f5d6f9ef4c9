"""Compiled backend built on the numba limb kernels.

Handles:

* G1: uint64 array of 18 limbs (Jacobian X|Y|Z, Montgomery form; Z=0 is
  the identity)
* G2: uint64 array of 36 limbs (same layout with Fp2 components)
* GT: the reference backend's flat 12-int tuples

Group operations, multi-scalar multiplication, NTTs and BSGS scans run
in compiled kernels.  Pairings and GT arithmetic are delegated to the
reference backend: they only appear on verification paths, where a few
tens of milliseconds per pairing product is not the bottleneck.
"""

import numpy as np

from . import kernels as _k
from . import pure as _pure
from .limbs import (
    FP_LIMBS,
    FR_LIMBS,
    P_ONE,
    from_limbs,
    ints_to_limbs,
    limbs_to_ints,
    to_limbs,
)
from .params import B_COEFF, B_TWIST, G1_GEN, G2_GEN, P, R, fp2_mul, fp2_sqr

NAME = "numba"

_R_LIMBS_ARR = to_limbs(R, FR_LIMBS)


def _fp_to_mont(x):
    out = np.empty(FP_LIMBS, dtype=np.uint64)
    _k.fp_to_mont(to_limbs(x % P, FP_LIMBS), out)
    return out


def _fp_from_mont(a):
    out = np.empty(FP_LIMBS, dtype=np.uint64)
    _k.fp_from_mont(a, out)
    return from_limbs(out)


def _scalar_limbs(k):
    return to_limbs(k % R, FR_LIMBS)


def _scalars_matrix(scalars):
    return ints_to_limbs([k % R for k in scalars], FR_LIMBS)


def _msm_window(n):
    if n < 8:
        return 3
    return min(16, max(4, int(n).bit_length() - 3))


# ---------------------------------------------------------------------------
# G1

def _g1_handle(x, y):
    out = np.zeros(18, dtype=np.uint64)
    out[0:6] = _fp_to_mont(x)
    out[6:12] = _fp_to_mont(y)
    out[12:18] = P_ONE
    return out


def g1_generator():
    return _G1_GEN_HANDLE.copy()


def g1_identity():
    return np.zeros(18, dtype=np.uint64)


def g1_is_identity(p):
    return not p[12:18].any()


def g1_eq(a, b):
    return bool(_k.g1_eq_jac(a, b))


def g1_neg(p):
    if g1_is_identity(p):
        return g1_identity()
    out = p.copy()
    _k._sub_mod(np.zeros(6, dtype=np.uint64), 0, p, 6, out, 6, _k.P_MOD)
    return out


def g1_add(a, b):
    out = np.empty(18, dtype=np.uint64)
    _k._g1_add(a, 0, b, 0, out, 0)
    return out


def g1_mul(p, k):
    out = np.empty(18, dtype=np.uint64)
    _k.g1_mul_jac(p, _scalar_limbs(k), out)
    return out


def g1_product(points):
    acc = g1_identity()
    for p in points:
        _k._g1_add(acc, 0, p, 0, acc, 0)
    return acc


def _g1_affine_rows(points):
    n = len(points)
    jac = np.stack(points) if n else np.zeros((0, 18), dtype=np.uint64)
    aff = np.empty((n, 12), dtype=np.uint64)
    _k.g1_normalize(jac, aff)
    return aff


def g1_msm(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("msm: length mismatch")
    if not points:
        return g1_identity()
    out = np.empty(18, dtype=np.uint64)
    _k.g1_msm(
        _g1_affine_rows(points), _scalars_matrix(scalars),
        _msm_window(len(points)), out,
    )
    return out


def g1_to_affine_ints(p):
    if g1_is_identity(p):
        return None
    aff = _g1_affine_rows([p])
    return (_fp_from_mont(aff[0, 0:6]), _fp_from_mont(aff[0, 6:12]))


def g1_from_affine_ints(x, y):
    if (y * y - (x * x * x + B_COEFF)) % P != 0:
        raise ValueError("point not on curve")
    pt = _g1_handle(x % P, y % P)
    out = np.empty(18, dtype=np.uint64)
    _k.g1_mul_jac(pt, _R_LIMBS_ARR, out)
    if out[12:18].any():
        raise ValueError("point not in prime-order subgroup")
    return pt


# ---------------------------------------------------------------------------
# G2

def _g2_handle(x, y):
    out = np.zeros(36, dtype=np.uint64)
    out[0:6] = _fp_to_mont(x[0])
    out[6:12] = _fp_to_mont(x[1])
    out[12:18] = _fp_to_mont(y[0])
    out[18:24] = _fp_to_mont(y[1])
    out[24:30] = P_ONE
    return out


def g2_generator():
    return _G2_GEN_HANDLE.copy()


def g2_identity():
    return np.zeros(36, dtype=np.uint64)


def g2_is_identity(p):
    return not p[24:36].any()


def g2_eq(a, b):
    return bool(_k.g2_eq_jac(a, b))


def g2_neg(p):
    if g2_is_identity(p):
        return g2_identity()
    out = p.copy()
    zero = np.zeros(6, dtype=np.uint64)
    _k._sub_mod(zero, 0, p, 12, out, 12, _k.P_MOD)
    _k._sub_mod(zero, 0, p, 18, out, 18, _k.P_MOD)
    return out


def g2_add(a, b):
    out = np.empty(36, dtype=np.uint64)
    _k._g2_add(a, 0, b, 0, out, 0)
    return out


def g2_mul(p, k):
    out = np.empty(36, dtype=np.uint64)
    _k.g2_mul_jac(p, _scalar_limbs(k), out)
    return out


def g2_product(points):
    acc = g2_identity()
    for p in points:
        _k._g2_add(acc, 0, p, 0, acc, 0)
    return acc


def _g2_affine_rows(points):
    n = len(points)
    jac = np.stack(points) if n else np.zeros((0, 36), dtype=np.uint64)
    aff = np.empty((n, 24), dtype=np.uint64)
    _k.g2_normalize(jac, aff)
    return aff


def g2_msm(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("msm: length mismatch")
    if not points:
        return g2_identity()
    out = np.empty(36, dtype=np.uint64)
    _k.g2_msm(
        _g2_affine_rows(points), _scalars_matrix(scalars),
        _msm_window(len(points)), out,
    )
    return out


def g2_to_affine_ints(p):
    if g2_is_identity(p):
        return None
    aff = _g2_affine_rows([p])
    x = (_fp_from_mont(aff[0, 0:6]), _fp_from_mont(aff[0, 6:12]))
    y = (_fp_from_mont(aff[0, 12:18]), _fp_from_mont(aff[0, 18:24]))
    return (x, y)


def g2_from_affine_ints(x, y):
    x = (x[0] % P, x[1] % P)
    y = (y[0] % P, y[1] % P)
    rhs = fp2_mul(fp2_sqr(x), x)
    rhs = ((rhs[0] + B_TWIST[0]) % P, (rhs[1] + B_TWIST[1]) % P)
    if fp2_sqr(y) != rhs:
        raise ValueError("point not on curve")
    pt = _g2_handle(x, y)
    out = np.empty(36, dtype=np.uint64)
    _k.g2_mul_jac(pt, _R_LIMBS_ARR, out)
    if out[24:36].any():
        raise ValueError("point not in prime-order subgroup")
    return pt


_G1_GEN_HANDLE = _g1_handle(*G1_GEN)
_G2_GEN_HANDLE = _g2_handle(*G2_GEN)


# ---------------------------------------------------------------------------
# Pairing and GT (delegated to the reference backend)

def _g1_ref(p):
    return g1_to_affine_ints(p)


def _g2_ref(p):
    return g2_to_affine_ints(p)


def pairing(p, q):
    return _pure.pairing(_g1_ref(p), _g2_ref(q))


def multi_pairing(pairs):
    return _pure.multi_pairing([(_g1_ref(p), _g2_ref(q)) for p, q in pairs])


gt_identity = _pure.gt_identity
gt_eq = _pure.gt_eq
gt_mul = _pure.gt_mul
gt_inv = _pure.gt_inv
gt_pow = _pure.gt_pow
gt_to_ints = _pure.gt_to_ints


# ---------------------------------------------------------------------------
# Scalar-field NTT

def ntt(values, root, invert=False):
    n = len(values)
    assert n & (n - 1) == 0
    if invert:
        root = pow(root, -1, R)
    arr = ints_to_limbs([v % R for v in values], FR_LIMBS)
    mont = np.empty_like(arr)
    _k.fr_vec_to_mont(arr, mont)
    root_mont = np.empty(FR_LIMBS, dtype=np.uint64)
    _k.fr_vec_to_mont(
        to_limbs(root % R, FR_LIMBS).reshape(1, FR_LIMBS),
        root_mont.reshape(1, FR_LIMBS),
    )
    _k.ntt_fr(mont, root_mont)
    if invert:
        n_inv = np.empty(FR_LIMBS, dtype=np.uint64)
        _k.fr_vec_to_mont(
            to_limbs(pow(n, -1, R), FR_LIMBS).reshape(1, FR_LIMBS),
            n_inv.reshape(1, FR_LIMBS),
        )
        _k.fr_vec_scale(mont, n_inv, mont)
    _k.fr_vec_from_mont(mont, arr)
    return limbs_to_ints(arr)


# ---------------------------------------------------------------------------
# Fixed-base helper and BSGS scanning

def g1_fixed_base_mul(base, scalars):
    if not scalars:
        return []
    aff = _g1_affine_rows([base])[0]
    out = np.empty((len(scalars), 18), dtype=np.uint64)
    _k.g1_fixed_base(aff, _scalars_matrix(scalars), out)
    return [out[i].copy() for i in range(len(scalars))]


def g2_fixed_base_mul(base, scalars):
    if not scalars:
        return []
    aff = _g2_affine_rows([base])[0]
    out = np.empty((len(scalars), 36), dtype=np.uint64)
    _k.g2_fixed_base(aff, _scalars_matrix(scalars), out)
    return [out[i].copy() for i in range(len(scalars))]


def g1_baby_hashes(base, count):
    aff = _g1_affine_rows([base])[0]
    out = np.zeros(count, dtype=np.uint64)
    _k.g1_baby_hashes(aff, count, out)
    return out


def g1_bsgs_scan(target, step, max_steps, sorted_hashes, sorted_idx):
    step_aff = _g1_affine_rows([step])[0]
    out_pairs = np.zeros((16, 2), dtype=np.int64)
    cnt = _k.g1_bsgs_scan(
        np.ascontiguousarray(target), step_aff, max_steps,
        sorted_hashes, sorted_idx.astype(np.int64), out_pairs,
    )
    return [(int(out_pairs[t, 0]), int(out_pairs[t, 1])) for t in range(cnt)]
