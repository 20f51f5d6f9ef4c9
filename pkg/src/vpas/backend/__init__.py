"""Backend selection and the shared compressed-point codec.

``VPAS_BACKEND=pure`` forces the plain-integer reference backend;
``VPAS_BACKEND=numba`` (or ``fast``) requires the compiled one.  By
default the compiled backend is used when numba imports cleanly and the
reference backend otherwise.

Points serialize to 48 (G1) / 96 (G2) bytes, compressed, with the usual
three flag bits in the top of the first byte: compressed, infinity, and
the sign of y.  Deserialization rejects anything off the curve or
outside the prime-order subgroup.
"""

import os

from . import params, pure
from .params import P, R, fp2_sqrt, fp_sqrt

_requested = os.environ.get("VPAS_BACKEND", "").strip().lower()
if _requested == "pure":
    impl = pure
elif _requested in ("", "numba", "fast"):
    try:
        from . import fast as impl
    except ImportError:
        if _requested:
            raise
        impl = pure
else:
    raise ValueError(f"unknown VPAS_BACKEND value: {_requested!r}")

_FLAG_COMPRESSED = 0x80
_FLAG_INFINITY = 0x40
_FLAG_SIGN = 0x20
_HALF_P = (P - 1) // 2


def g1_to_bytes(p):
    aff = impl.g1_to_affine_ints(p)
    if aff is None:
        return bytes([_FLAG_COMPRESSED | _FLAG_INFINITY]) + b"\x00" * 47
    x, y = aff
    flags = _FLAG_COMPRESSED | (_FLAG_SIGN if y > _HALF_P else 0)
    raw = bytearray(x.to_bytes(48, "big"))
    raw[0] |= flags
    return bytes(raw)


def g1_from_bytes(data):
    if len(data) != 48:
        raise ValueError("G1 encoding must be 48 bytes")
    flags = data[0] & 0xE0
    if not flags & _FLAG_COMPRESSED:
        raise ValueError("uncompressed G1 encoding not supported")
    body = bytes([data[0] & 0x1F]) + data[1:]
    if flags & _FLAG_INFINITY:
        if any(body):
            raise ValueError("nonzero payload in infinity encoding")
        return impl.g1_identity()
    x = int.from_bytes(body, "big")
    if x >= P:
        raise ValueError("x coordinate out of range")
    y = fp_sqrt((x * x * x + params.B_COEFF) % P)
    if y is None:
        raise ValueError("x is not on the curve")
    if bool(y > _HALF_P) != bool(flags & _FLAG_SIGN):
        y = P - y
    return impl.g1_from_affine_ints(x, y)


def _fp2_sign(y):
    y0, y1 = y
    return y1 > _HALF_P if y1 != 0 else y0 > _HALF_P


def g2_to_bytes(p):
    aff = impl.g2_to_affine_ints(p)
    if aff is None:
        return bytes([_FLAG_COMPRESSED | _FLAG_INFINITY]) + b"\x00" * 95
    x, y = aff
    flags = _FLAG_COMPRESSED | (_FLAG_SIGN if _fp2_sign(y) else 0)
    raw = bytearray(x[1].to_bytes(48, "big") + x[0].to_bytes(48, "big"))
    raw[0] |= flags
    return bytes(raw)


def g2_from_bytes(data):
    if len(data) != 96:
        raise ValueError("G2 encoding must be 96 bytes")
    flags = data[0] & 0xE0
    if not flags & _FLAG_COMPRESSED:
        raise ValueError("uncompressed G2 encoding not supported")
    body = bytes([data[0] & 0x1F]) + data[1:]
    if flags & _FLAG_INFINITY:
        if any(body):
            raise ValueError("nonzero payload in infinity encoding")
        return impl.g2_identity()
    x1 = int.from_bytes(body[:48], "big")
    x0 = int.from_bytes(body[48:], "big")
    if x0 >= P or x1 >= P:
        raise ValueError("x coordinate out of range")
    x = (x0, x1)
    rhs = params.fp2_mul(params.fp2_sqr(x), x)
    rhs = ((rhs[0] + params.B_TWIST[0]) % P, (rhs[1] + params.B_TWIST[1]) % P)
    y = fp2_sqrt(rhs)
    if y is None:
        raise ValueError("x is not on the curve")
    if _fp2_sign(y) != bool(flags & _FLAG_SIGN):
        y = ((P - y[0]) % P, (P - y[1]) % P)
    return impl.g2_from_affine_ints(x, y)
