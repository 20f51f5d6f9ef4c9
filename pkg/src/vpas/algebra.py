"""Group abstraction: scalars, curve elements, pairings, MSM and BSGS.

Wraps the selected arithmetic backend in small immutable value types.
Group operations use multiplicative notation (``*`` combines elements,
``**`` exponentiates by a scalar), matching how ciphertexts like
X_i^r * G_i^{m_i} are written everywhere else in the package.
"""

import hashlib

import numpy as np

from .backend import g1_from_bytes, g1_to_bytes, g2_from_bytes, g2_to_bytes, impl
from .backend.params import R as GROUP_ORDER


class NotInRange(Exception):
    """BSGS search exhausted its range without finding the exponent."""


class GroupScalar:
    """An element of the scalar field, the exponent group of the curve."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value % GROUP_ORDER

    def __add__(self, other):
        return GroupScalar(self.value + other.value)

    def __sub__(self, other):
        return GroupScalar(self.value - other.value)

    def __mul__(self, other):
        return GroupScalar(self.value * other.value)

    def __neg__(self):
        return GroupScalar(-self.value)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("scalar 0 has no inverse")
        return GroupScalar(pow(self.value, -1, GROUP_ORDER))

    def __eq__(self, other):
        return isinstance(other, GroupScalar) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"GroupScalar({self.value})"

    def to_bytes(self):
        return self.value.to_bytes(32, "big")

    @classmethod
    def from_bytes(cls, data):
        if len(data) != 32:
            raise ValueError("scalar encoding must be 32 bytes")
        v = int.from_bytes(data, "big")
        if v >= GROUP_ORDER:
            raise ValueError("scalar out of range")
        return cls(v)


def _scalar_int(k):
    return k.value if isinstance(k, GroupScalar) else k % GROUP_ORDER


class G1Elem:
    __slots__ = ("h",)
    ENCODED_SIZE = 48

    def __init__(self, h):
        self.h = h

    @classmethod
    def generator(cls):
        return cls(impl.g1_generator())

    @classmethod
    def identity(cls):
        return cls(impl.g1_identity())

    def is_identity(self):
        return impl.g1_is_identity(self.h)

    def __mul__(self, other):
        return G1Elem(impl.g1_add(self.h, other.h))

    def __pow__(self, k):
        return G1Elem(impl.g1_mul(self.h, _scalar_int(k)))

    def inverse(self):
        return G1Elem(impl.g1_neg(self.h))

    def __eq__(self, other):
        return isinstance(other, G1Elem) and impl.g1_eq(self.h, other.h)

    def __hash__(self):
        return hash(self.to_bytes())

    def to_bytes(self):
        return g1_to_bytes(self.h)

    @classmethod
    def from_bytes(cls, data):
        return cls(g1_from_bytes(data))


class G2Elem:
    __slots__ = ("h",)
    ENCODED_SIZE = 96

    def __init__(self, h):
        self.h = h

    @classmethod
    def generator(cls):
        return cls(impl.g2_generator())

    @classmethod
    def identity(cls):
        return cls(impl.g2_identity())

    def is_identity(self):
        return impl.g2_is_identity(self.h)

    def __mul__(self, other):
        return G2Elem(impl.g2_add(self.h, other.h))

    def __pow__(self, k):
        return G2Elem(impl.g2_mul(self.h, _scalar_int(k)))

    def inverse(self):
        return G2Elem(impl.g2_neg(self.h))

    def __eq__(self, other):
        return isinstance(other, G2Elem) and impl.g2_eq(self.h, other.h)

    def __hash__(self):
        return hash(self.to_bytes())

    def to_bytes(self):
        return g2_to_bytes(self.h)

    @classmethod
    def from_bytes(cls, data):
        return cls(g2_from_bytes(data))


class GTElem:
    __slots__ = ("h",)
    ENCODED_SIZE = 576

    def __init__(self, h):
        self.h = h

    @classmethod
    def identity(cls):
        return cls(impl.gt_identity())

    def __mul__(self, other):
        return GTElem(impl.gt_mul(self.h, other.h))

    def __pow__(self, k):
        return GTElem(impl.gt_pow(self.h, _scalar_int(k)))

    def inverse(self):
        return GTElem(impl.gt_inv(self.h))

    def __eq__(self, other):
        return isinstance(other, GTElem) and impl.gt_eq(self.h, other.h)

    def to_bytes(self):
        return b"".join(c.to_bytes(48, "big") for c in impl.gt_to_ints(self.h))


def pairing(a, b):
    return GTElem(impl.pairing(a.h, b.h))


def multi_pairing(pairs):
    """Product of pairings, sharing one final exponentiation."""
    return GTElem(impl.multi_pairing([(a.h, b.h) for a, b in pairs]))


def hash_to_scalar(domain_tag, data):
    """Deterministic scalar from (tag length-prefix || tag || data)."""
    if isinstance(domain_tag, str):
        domain_tag = domain_tag.encode()
    if isinstance(data, str):
        data = data.encode()
    h = hashlib.sha256()
    h.update(len(domain_tag).to_bytes(8, "big"))
    h.update(domain_tag)
    h.update(data)
    return GroupScalar(int.from_bytes(h.digest(), "big"))


def msm(points, scalars):
    """Multi-scalar product: prod points[i] ** scalars[i]."""
    if len(points) != len(scalars):
        raise ValueError("msm: length mismatch")
    return G1Elem(
        impl.g1_msm([p.h for p in points], [_scalar_int(k) for k in scalars])
    )


def msm_g2(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("msm: length mismatch")
    return G2Elem(
        impl.g2_msm([p.h for p in points], [_scalar_int(k) for k in scalars])
    )


def g1_product(points):
    return G1Elem(impl.g1_product([p.h for p in points]))


def fixed_base_mul(base, scalars):
    """Many exponentiations of one base, amortizing the window table."""
    return [
        G1Elem(h)
        for h in impl.g1_fixed_base_mul(base.h, [_scalar_int(k) for k in scalars])
    ]


def fixed_base_mul_g2(base, scalars):
    return [
        G2Elem(h)
        for h in impl.g2_fixed_base_mul(base.h, [_scalar_int(k) for k in scalars])
    ]


class BsgsTable:
    """Baby-step table over [0, 2^max_bits) for a fixed G1 base.

    Baby steps are stored as sorted 64-bit x-coordinate fingerprints;
    candidate hits are confirmed by exponentiation before being
    returned, so fingerprint collisions cannot produce wrong answers.
    """

    def __init__(self, base, max_bits):
        if max_bits % 2 != 0 or max_bits <= 0:
            raise ValueError("max_bits must be even and positive")
        self.base = base
        self.max_bits = max_bits
        self.stride = 1 << (max_bits // 2)
        hashes = impl.g1_baby_hashes(base.h, self.stride)
        self._sorted_idx = np.argsort(hashes, kind="stable").astype(np.int64)
        self._sorted_hashes = hashes[self._sorted_idx]
        self._neg_stride = impl.g1_neg(impl.g1_mul(base.h, self.stride))


_table_cache = {}


def bsgs_table(base, max_bits):
    key = (base.to_bytes(), max_bits)
    if key not in _table_cache:
        _table_cache[key] = BsgsTable(base, max_bits)
    return _table_cache[key]


def bsgs_dlog(table, target):
    """Recover k with base^k = target, k in [0, 2^max_bits)."""
    seen = 0
    cur = np.ascontiguousarray(target.h)
    while seen < table.stride:
        cands = impl.g1_bsgs_scan(
            cur, table._neg_stride, table.stride - seen,
            table._sorted_hashes, table._sorted_idx,
        )
        if not cands:
            break
        for j, i in cands:
            k = (seen + j) * table.stride + i
            if impl.g1_eq(impl.g1_mul(table.base.h, k), target.h):
                return k
        # all candidates were fingerprint collisions; resume past them
        last = cands[-1][0]
        seen += last + 1
        cur = impl.g1_add(
            cur, impl.g1_mul(table._neg_stride, last + 1)
        )
    raise NotInRange(
        f"no exponent below 2^{table.max_bits} matches the target"
    )
