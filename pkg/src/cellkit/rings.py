"""Exact coefficient arithmetic over Z, Q, F_p and Z/m.

A :class:`RingSpec` names one of the four supported coefficient rings and
knows how to normalize, combine and (where possible) invert raw values.
Raw values are plain ``int`` (Z, F_p, Z/m: canonical residue in ``[0, m)``)
or ``fractions.Fraction`` in lowest terms (Q).  :class:`Scalar` is the
user-facing wrapper pairing a raw value with its ring; equality is
representation equality, which is sound because normalization is canonical.

All arithmetic is arbitrary precision; nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .errors import NoCanonicalMap, NotPrime, WrongRing

RawValue = Union[int, Fraction]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for all integers)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # This witness set is deterministic for n < 3.3 * 10^24, far beyond any
    # modulus cellkit will meet; larger n would need a BPSW fallback.
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> tuple[int, ...]:
    """Prime divisors of n >= 2 in increasing order, by trial division."""
    if n < 2:
        raise ValueError(f"prime_factors needs n >= 2, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def is_squarefree(n: int) -> bool:
    if n < 1:
        raise ValueError(f"is_squarefree needs n >= 1, got {n}")
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1 if p == 2 else 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of the supported coefficient rings.

    ``kind`` is ``"Z"``, ``"Q"``, ``"Fp"`` or ``"Zm"``; ``modulus`` is set for
    the last two.  Use the module-level constructors (:func:`integers`,
    :func:`rationals`, :func:`prime_field`, :func:`integers_mod`) rather than
    instantiating directly, so the invariants are checked.
    """

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind in ("Z", "Q"):
            if self.modulus is not None:
                raise ValueError(f"{self.kind} takes no modulus")
        elif self.kind == "Fp":
            if not isinstance(self.modulus, int) or not is_prime(self.modulus):
                raise NotPrime(f"PrimeField needs a prime modulus, got {self.modulus}")
        elif self.kind == "Zm":
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise ValueError(f"IntegersMod needs modulus >= 2, got {self.modulus}")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    # -- structure queries ------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "Fp")

    @property
    def is_modular(self) -> bool:
        return self.kind in ("Fp", "Zm")

    def has_field_arithmetic(self) -> bool:
        """True when elimination with inverse pivots is valid (Z/p included)."""
        return self.kind in ("Q", "Fp") or (
            self.kind == "Zm" and is_prime(self.modulus)
        )

    def characteristic(self) -> int:
        return self.modulus if self.is_modular else 0

    # -- raw-value arithmetic ---------------------------------------------

    def normalize(self, value) -> RawValue:
        if self.kind == "Q":
            return value if isinstance(value, Fraction) else Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise WrongRing(f"{value} is not integral over {self}")
            value = value.numerator
        value = int(value)
        return value % self.modulus if self.is_modular else value

    def zero(self) -> RawValue:
        return Fraction(0) if self.kind == "Q" else 0

    def one(self) -> RawValue:
        return Fraction(1) if self.kind == "Q" else 1

    def add(self, a: RawValue, b: RawValue) -> RawValue:
        c = a + b
        return c % self.modulus if self.is_modular else c

    def sub(self, a: RawValue, b: RawValue) -> RawValue:
        c = a - b
        return c % self.modulus if self.is_modular else c

    def mul(self, a: RawValue, b: RawValue) -> RawValue:
        c = a * b
        return c % self.modulus if self.is_modular else c

    def neg(self, a: RawValue) -> RawValue:
        return (-a) % self.modulus if self.is_modular else -a

    def invert(self, a: RawValue) -> RawValue:
        """Multiplicative inverse; raises WrongRing when a is not a unit."""
        if self.kind == "Q":
            if a == 0:
                raise ZeroDivisionError("division by zero in Q")
            return Fraction(1) / a
        if self.kind == "Z":
            if a in (1, -1):
                return a
            raise WrongRing(f"{a} is not a unit in Z")
        try:
            return pow(a, -1, self.modulus)
        except ValueError:
            raise WrongRing(f"{a} is not a unit mod {self.modulus}") from None

    def div(self, a: RawValue, b: RawValue) -> RawValue:
        """Exact division a/b; over Z only when b divides a."""
        if self.kind == "Z":
            if b == 0:
                raise ZeroDivisionError("division by zero in Z")
            q, r = divmod(a, b)
            if r:
                raise WrongRing(f"{b} does not divide {a} in Z")
            return q
        return self.mul(a, self.invert(b))

    def scalar(self, value) -> "Scalar":
        return Scalar(self, self.normalize(value))

    def __str__(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "Q":
            return "Q"
        if self.kind == "Fp":
            return f"F{self.modulus}"
        return f"Z/{self.modulus}"


def integers() -> RingSpec:
    return RingSpec("Z")


def rationals() -> RingSpec:
    return RingSpec("Q")


def prime_field(p: int) -> RingSpec:
    return RingSpec("Fp", p)


def integers_mod(m: int) -> RingSpec:
    """Z/m with canonical residues; prime m still yields the Zm variant."""
    return RingSpec("Zm", m)


@dataclass(frozen=True)
class Scalar:
    """A ring element in canonical form.  Immutable; equality is exact."""

    ring: RingSpec
    value: RawValue

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.normalize(self.value))

    def _coerce(self, other) -> RawValue:
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise WrongRing(f"mixed rings {self.ring} and {other.ring}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.ring.normalize(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.ring, self.ring.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.ring, self.ring.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.ring, self.ring.sub(v, self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.ring, self.ring.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Scalar(self.ring, self.ring.div(self.value, v))

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers go through invert()")
        out = self.ring.one()
        base = self.value
        e = exponent
        while e:
            if e & 1:
                out = self.ring.mul(out, base)
            base = self.ring.mul(base, base)
            e >>= 1
        return Scalar(self.ring, out)

    def is_zero(self) -> bool:
        return self.value == self.ring.zero()

    def __str__(self):
        return str(self.value)


def canonical_reduction(source: RingSpec, target: RingSpec) -> Callable[[RawValue], RawValue]:
    """The canonical coefficient map source -> target on raw values.

    Supported: identity, Z -> Q, Z -> F_p, Z -> Z/m, and Z/m -> F_p for p | m.
    Anything else raises :class:`NoCanonicalMap`.
    """
    if source == target:
        return lambda v: v
    if source.kind == "Z":
        if target.kind == "Q":
            return Fraction
        if target.is_modular:
            m = target.modulus
            return lambda v: v % m
    if source.kind == "Zm" and target.kind == "Fp":
        p = target.modulus
        if source.modulus % p == 0:
            return lambda v: v % p
    raise NoCanonicalMap(f"no canonical map {source} -> {target}")
