"""Limb-array codecs and Montgomery constants for the compiled backend.

Field elements are little-endian arrays of 64-bit limbs: 6 limbs for the
base field, 4 for the scalar field.  Kernel arithmetic keeps values in
Montgomery form (x * 2^(64*n) mod m).
"""

import numpy as np

from .params import P, R

FP_LIMBS = 6
FR_LIMBS = 4

_MASK = (1 << 64) - 1


def to_limbs(x, n):
    out = np.empty(n, dtype=np.uint64)
    for i in range(n):
        out[i] = x & _MASK
        x >>= 64
    return out


def from_limbs(a):
    x = 0
    for i in range(len(a) - 1, -1, -1):
        x = (x << 64) | int(a[i])
    return x


def ints_to_limbs(values, n):
    """Bulk int -> (len, n) limb conversion through a byte buffer."""
    width = 8 * n
    buf = b"".join(v.to_bytes(width, "little") for v in values)
    return np.frombuffer(buf, dtype=np.uint64).reshape(len(values), n).copy()


def limbs_to_ints(arr):
    n = arr.shape[1]
    raw = np.ascontiguousarray(arr, dtype=np.uint64).tobytes()
    width = 8 * n
    return [
        int.from_bytes(raw[i * width : (i + 1) * width], "little")
        for i in range(arr.shape[0])
    ]


def _mont_constants(mod, n):
    n0 = np.uint64((-pow(mod, -1, 1 << 64)) % (1 << 64))
    r2 = to_limbs(pow(2, 2 * 64 * n, mod), n)
    one = to_limbs(pow(2, 64 * n, mod), n)
    return to_limbs(mod, n), n0, r2, one


P_MOD, P_N0, P_R2, P_ONE = _mont_constants(P, FP_LIMBS)
R_MOD, R_N0, R_R2, R_ONE = _mont_constants(R, FR_LIMBS)

# Fermat exponents for field inversion inside kernels.
P_MINUS_2 = to_limbs(P - 2, FP_LIMBS)
R_MINUS_2 = to_limbs(R - 2, FR_LIMBS)
