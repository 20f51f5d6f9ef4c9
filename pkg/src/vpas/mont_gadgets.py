"""Montgomery-curve gadget algebra for the in-circuit encryption path.

Implements the circuit-shaped algorithms -- distinct-x Montgomery
addition, the identity-free decomposition trick P=(-x-A,-y), Q=(0,-y)
with P+Q=R, and the condition-free double-and-add walk -- over an
embedded curve whose base field is the SNARK scalar field, and checks
them against a plain short-Weierstrass group law.

The default curve is the Montgomery form of the curve embedded in the
pairing group's scalar field (B*y^2 = x^3 + A*x^2 + x with A = 40962,
B = 1); its prime-subgroup order is validated at import time.
"""

from dataclasses import dataclass

from .backend.params import R as FIELD_MOD


class DegenerateStep(Exception):
    """A gadget hit an input its circuit shape cannot represent."""

    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"{message} (step {step})")
        self.step = step


@dataclass(frozen=True)
class MontCurve:
    a: int
    b: int
    prime: int
    subgroup_order: int

    def __post_init__(self):
        if self.b * (self.a * self.a - 4) % self.prime == 0:
            raise ValueError("singular Montgomery curve")

    def is_on_curve(self, pt):
        if pt.infinity:
            return True
        p = self.prime
        lhs = self.b * pt.y * pt.y % p
        rhs = (pt.x * pt.x * pt.x + self.a * pt.x * pt.x + pt.x) % p
        return lhs == rhs


@dataclass(frozen=True)
class MontPoint:
    x: int
    y: int
    infinity: bool = False

    @classmethod
    def at_infinity(cls):
        return cls(0, 0, True)

    def neg(self, curve):
        if self.infinity:
            return self
        return MontPoint(self.x, (-self.y) % curve.prime)

    def __eq__(self, other):
        if not isinstance(other, MontPoint):
            return NotImplemented
        if self.infinity or other.infinity:
            return self.infinity and other.infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y, self.infinity))


def mont_add(p, q, curve):
    """Distinct-x chord addition; the shape the circuit uses."""
    if p.infinity or q.infinity:
        raise DegenerateStep("chord addition is undefined at infinity")
    m = curve.prime
    if p.x == q.x:
        raise DegenerateStep("equal x-coordinates: doubling or inverse pair")
    lam = (q.y - p.y) * pow(q.x - p.x, -1, m) % m
    x3 = (curve.b * lam * lam - curve.a - p.x - q.x) % m
    y3 = (lam * (p.x - x3) - p.y) % m
    return MontPoint(x3, y3)


def mont_double(p, curve):
    if p.infinity:
        raise DegenerateStep("cannot double the point at infinity")
    if p.y == 0:
        raise DegenerateStep("tangent is vertical: point of order two")
    m = curve.prime
    lam = (3 * p.x * p.x + 2 * curve.a * p.x + 1) * pow(
        2 * curve.b * p.y, -1, m
    ) % m
    x3 = (curve.b * lam * lam - curve.a - 2 * p.x) % m
    y3 = (lam * (p.x - x3) - p.y) % m
    return MontPoint(x3, y3)


def _full_add(p, q, curve):
    """Complete group law (reference only; not circuit-shaped)."""
    if p.infinity:
        return q
    if q.infinity:
        return p
    if p.x == q.x:
        if (p.y + q.y) % curve.prime == 0:
            return MontPoint.at_infinity()
        return mont_double(p, curve)
    return mont_add(p, q, curve)


def identity_decompose(r, curve):
    """Split R into (P, Q) with mont_add(P, Q) = R and neither special.

    Used where the circuit must "add the identity": instead of adding
    O (which Montgomery chord addition cannot express) it re-adds R
    from the pair P=(-x-A, -y), Q=(0, -y).
    """
    if r.infinity:
        raise DegenerateStep("cannot decompose the point at infinity")
    m = curve.prime
    if r.x % m == 0:
        raise DegenerateStep("x = 0 is a fixed point of the decomposition")
    if (r.x + curve.a) % m == 0:
        raise DegenerateStep("x = -A collides the two summands")
    p = MontPoint((-r.x - curve.a) % m, (-r.y) % m)
    q = MontPoint(0, (-r.y) % m)
    return p, q


def double_and_add_reference(k, p, curve):
    if k < 0:
        raise ValueError("scalar must be non-negative")
    r = MontPoint.at_infinity()
    acc = p
    while k > 0:
        if k & 1:
            r = _full_add(r, acc, curve)
        k >>= 1
        if k:
            acc = _full_add(acc, acc, curve)
    return r


def double_and_add_condition_free(k, p, curve, strict=False):
    """Scalar multiplication using only chord additions.

    Walks the bits of k exactly as the arithmetised circuit does: R
    starts at P (as if the low bit were set), every later bit either
    adds the running power of two or re-adds R through
    identity_decompose, and a final correction subtracts P when the
    low bit was actually clear.

    Some scalars drive the walk through states the chord formula
    cannot express (equal x-coordinates, or an intermediate sum equal
    to the point at infinity).  With strict=True these are reported as
    DegenerateStep with the offending step index, mirroring what the
    circuit form would do; by default the walk recovers through the
    complete group law so the result always equals the reference.
    """
    if k <= 0:
        raise ValueError("scalar must be positive")

    def checked_add(a, b, step, what):
        degenerate = a.infinity or b.infinity or a.x == b.x
        if degenerate and strict:
            raise DegenerateStep(f"{what} is not chord-representable", step)
        return _full_add(a, b, curve) if degenerate else mont_add(a, b, curve)

    r = MontPoint(p.x, p.y)
    first_bit = k & 1
    base = p
    k >>= 1
    step = 0
    while k > 0:
        base = mont_double(base, curve)
        if k & 1:
            r = checked_add(r, base, step, "accumulator plus addend")
        elif r.infinity:
            if strict:
                raise DegenerateStep("identity accumulator", step)
            # adding the identity to the identity: nothing to do
        else:
            u, v = identity_decompose(r, curve)
            r = mont_add(u, v, curve)
        k >>= 1
        step += 1
    if first_bit == 0:
        r = checked_add(r, p.neg(curve), step, "final correction")
    return r


def build_double_table(p, curve, bits=None):
    """Doubles of a fixed generator: table[i] = [2^i]P."""
    if bits is None:
        bits = curve.subgroup_order.bit_length()
    table = [p]
    for _ in range(bits - 1):
        table.append(mont_double(table[-1], curve))
    return table


def fixed_base_mul(k, table, curve):
    if k <= 0:
        raise ValueError("scalar must be positive")
    if k.bit_length() > len(table):
        raise ValueError("scalar exceeds the precomputed table width")
    r = MontPoint.at_infinity()
    i = 0
    while k > 0:
        if k & 1:
            r = _full_add(r, table[i], curve)
        k >>= 1
        i += 1
    return r


def to_weierstrass(p, curve):
    """Map to short Weierstrass coordinates (reference oracle)."""
    if p.infinity:
        return None
    m = curve.prime
    inv_b = pow(curve.b, -1, m)
    inv_3b = pow(3 * curve.b, -1, m)
    return (p.x * inv_b + curve.a * inv_3b) % m, p.y * inv_b % m


def weierstrass_params(curve):
    m = curve.prime
    a2 = curve.a * curve.a % m
    wa = (3 - a2) * pow(3 * curve.b * curve.b, -1, m) % m
    wb = (
        (2 * curve.a * a2 - 9 * curve.a)
        * pow(27 * curve.b * curve.b * curve.b, -1, m)
    ) % m
    return wa, wb


def from_weierstrass(pt, curve):
    if pt is None:
        return MontPoint.at_infinity()
    m = curve.prime
    u, v = pt
    x = (u - curve.a * pow(3, -1, m)) * curve.b % m
    return MontPoint(x, v * curve.b % m)


def weierstrass_add(p, q, curve):
    """Group law in short Weierstrass form (reference oracle)."""
    if p is None:
        return q
    if q is None:
        return p
    m = curve.prime
    wa, _ = weierstrass_params(curve)
    (x1, y1), (x2, y2) = p, q
    if x1 == x2:
        if (y1 + y2) % m == 0:
            return None
        lam = (3 * x1 * x1 + wa) * pow(2 * y1, -1, m) % m
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, m) % m
    x3 = (lam * lam - x1 - x2) % m
    return x3, (lam * (x1 - x3) - y1) % m


def _sqrt_mod(n, m):
    """Tonelli-Shanks square root, or None if n is a non-residue."""
    n %= m
    if n == 0:
        return 0
    if pow(n, (m - 1) // 2, m) != 1:
        return None
    q, s = m - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (m - 1) // 2, m) != m - 1:
        z += 1
    c = pow(z, q, m)
    t = pow(n, q, m)
    r = pow(n, (q + 1) // 2, m)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % m
            i += 1
        b = pow(c, 1 << (s - i - 1), m)
        r = r * b % m
        c = b * b % m
        t = t * c % m
        s = i
    return r


_JUBJUB_SUBGROUP_ORDER = (
    6554484396890773809930967563523245729705921265872317281365359162392183254199
)


def _derive_generator(curve, cofactor):
    x = 1
    while True:
        rhs = (x * x * x + curve.a * x * x + x) % curve.prime
        y = _sqrt_mod(rhs * pow(curve.b, -1, curve.prime), curve.prime)
        if y is not None and y != 0:
            cand = double_and_add_reference(
                cofactor, MontPoint(x, min(y, curve.prime - y)), curve
            )
            if not cand.infinity:
                return cand
        x += 1


def default_curve():
    """The embedded Montgomery curve over the SNARK scalar field."""
    curve = MontCurve(
        a=40962, b=1, prime=FIELD_MOD, subgroup_order=_JUBJUB_SUBGROUP_ORDER
    )
    return curve


def default_generator(curve=None):
    curve = curve or default_curve()
    g = _derive_generator(curve, 8)
    if not curve.is_on_curve(g):
        raise RuntimeError("derived generator is off-curve")
    if not double_and_add_reference(curve.subgroup_order, g, curve).infinity:
        raise RuntimeError("pinned subgroup order does not annihilate the generator")
    return g
