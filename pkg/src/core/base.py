"""
Base Rings

Coefficient rings for every polynomial, series and matrix in the package:
Q, F_p, Z_(p) (the integers localized at a prime), Z, and Z[1/m].
Values are stored as fully reduced Fractions; F_p values are integers in
[0, p-1].
"""

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Tuple, Union

from sympy import isprime, primefactors

from .errors import NotInBase, NotInvertible, NotLocalBase, UsageError

Scalar = Union[int, Fraction, str, "BaseElem"]

_NAME_RE = re.compile(r"^(?:(Q)|F(\d+)|Z\((\d+)\)|(Z)|Z\[1/(\d+)\])$")


class BaseKind(str, enum.Enum):
    """Kinds of admitted coefficient rings"""
    RATIONAL = "rational"
    PRIME_FIELD = "prime_field"
    LOCALIZED = "localized"
    INTEGERS = "integers"
    INVERTED = "inverted"


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    """Parse an exact "num/den" string (or int) into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or "." in text or "e" in text.lower():
        raise UsageError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text.strip())
    except ValueError as exc:
        raise UsageError(f"not an exact rational: {text!r}") from exc


def format_fraction(value: Fraction) -> str:
    """Canonical "num/den" string; integers are written as "num"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class LocalBase:
    """
    Descriptor of a coefficient ring

    kind selects the ring; p is the prime for F_p and Z_(p), the inverted
    integer m for Z[1/m], and 0 otherwise.
    """
    kind: BaseKind
    p: int = 0

    def __post_init__(self):
        if self.kind in (BaseKind.PRIME_FIELD, BaseKind.LOCALIZED) and not isprime(self.p):
            raise UsageError(f"{self.kind.value} requires a prime, got {self.p}")
        if self.kind == BaseKind.INVERTED and self.p < 2:
            raise UsageError(f"Z[1/m] requires m >= 2, got {self.p}")

    # ── constructors ──────────────────────────────────────────────────────

    @classmethod
    def rational(cls) -> "LocalBase":
        return cls(BaseKind.RATIONAL)

    @classmethod
    def prime_field(cls, p: int) -> "LocalBase":
        return cls(BaseKind.PRIME_FIELD, p)

    @classmethod
    def localized(cls, p: int) -> "LocalBase":
        return cls(BaseKind.LOCALIZED, p)

    @classmethod
    def integers(cls) -> "LocalBase":
        return cls(BaseKind.INTEGERS)

    @classmethod
    def inverted(cls, m: int) -> "LocalBase":
        return cls(BaseKind.INVERTED, m)

    @classmethod
    def from_name(cls, name: str) -> "LocalBase":
        """Parse "Q", "F5", "Z(3)", "Z" or "Z[1/6]"."""
        match = _NAME_RE.match(name.strip())
        if not match:
            raise UsageError(f"unknown base ring: {name!r}")
        q, fp, zp, z, zm = match.groups()
        if q:
            return cls.rational()
        if fp:
            return cls.prime_field(int(fp))
        if zp:
            return cls.localized(int(zp))
        if z:
            return cls.integers()
        return cls.inverted(int(zm))

    @property
    def name(self) -> str:
        return {
            BaseKind.RATIONAL: "Q",
            BaseKind.PRIME_FIELD: f"F{self.p}",
            BaseKind.LOCALIZED: f"Z({self.p})",
            BaseKind.INTEGERS: "Z",
            BaseKind.INVERTED: f"Z[1/{self.p}]",
        }[self.kind]

    def __str__(self) -> str:
        return self.name

    # ── structure ─────────────────────────────────────────────────────────

    @property
    def is_local(self) -> bool:
        return self.kind in (BaseKind.RATIONAL, BaseKind.PRIME_FIELD, BaseKind.LOCALIZED)

    @property
    def is_field(self) -> bool:
        return self.kind in (BaseKind.RATIONAL, BaseKind.PRIME_FIELD)

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == BaseKind.PRIME_FIELD else 0

    @property
    def residue_characteristic(self) -> int:
        return self.p if self.kind in (BaseKind.PRIME_FIELD, BaseKind.LOCALIZED) else 0

    @cached_property
    def inverted_primes(self) -> Tuple[int, ...]:
        if self.kind != BaseKind.INVERTED:
            return ()
        return tuple(primefactors(self.p))

    def require_local(self, operation: str = "operation") -> None:
        if not self.is_local:
            raise NotLocalBase(f"{operation} needs a local base ring, got {self.name}")

    def residue_field(self) -> "LocalBase":
        """R/m as a base ring (Q for Q, F_p for F_p and Z_(p))."""
        self.require_local("residue_field")
        if self.kind == BaseKind.LOCALIZED:
            return LocalBase.prime_field(self.p)
        return self

    def fraction_field(self) -> "LocalBase":
        """Field used by the Groebner engine for this base."""
        return self if self.is_field else LocalBase.rational()

    # ── element arithmetic ────────────────────────────────────────────────

    def contains(self, value: Fraction) -> bool:
        den = value.denominator
        if self.kind == BaseKind.RATIONAL:
            return True
        if self.kind in (BaseKind.PRIME_FIELD, BaseKind.LOCALIZED):
            return den % self.p != 0
        if self.kind == BaseKind.INTEGERS:
            return den == 1
        for q in self.inverted_primes:
            while den % q == 0:
                den //= q
        return den == 1

    def normalize(self, value: Scalar) -> Fraction:
        """Canonical representative of value in this ring."""
        if isinstance(value, BaseElem):
            value = value.value
        x = parse_fraction(value)
        if not self.contains(x):
            raise NotInBase(f"{format_fraction(x)} is not an element of {self.name}")
        if self.kind == BaseKind.PRIME_FIELD:
            return Fraction(x.numerator * pow(x.denominator, -1, self.p) % self.p)
        return x

    def canon(self, value: Fraction) -> Fraction:
        """Fast normalization for results of ring operations on canonical values."""
        if self.kind == BaseKind.PRIME_FIELD:
            return Fraction(value.numerator * pow(value.denominator, -1, self.p) % self.p)
        return value

    def is_unit(self, value: Fraction) -> bool:
        if value == 0:
            return False
        if self.kind in (BaseKind.RATIONAL, BaseKind.PRIME_FIELD):
            return True
        if self.kind == BaseKind.LOCALIZED:
            return value.numerator % self.p != 0
        if self.kind == BaseKind.INTEGERS:
            return abs(value) == 1
        num = abs(value.numerator)
        for q in self.inverted_primes:
            while num % q == 0:
                num //= q
        return num == 1

    def in_maximal_ideal(self, value: Fraction) -> bool:
        self.require_local("maximal ideal membership")
        return not self.is_unit(value)

    def inv(self, value: Fraction) -> Fraction:
        if not self.is_unit(value):
            raise NotInvertible(f"{format_fraction(value)} is not a unit of {self.name}")
        if self.kind == BaseKind.PRIME_FIELD:
            return Fraction(pow(value.numerator, -1, self.p))
        return 1 / value

    def div(self, a: Fraction, b: Fraction) -> Fraction:
        return self.canon(a * self.inv(b))

    def residue(self, value: Fraction) -> Fraction:
        """Image of value in the residue field R/m."""
        self.require_local("residue")
        if self.kind == BaseKind.LOCALIZED:
            return Fraction(value.numerator * pow(value.denominator, -1, self.p) % self.p)
        return value

    def lift(self, value: Fraction) -> Fraction:
        """Canonical section R/m -> R ({0..p-1} for F_p; identity for fields)."""
        self.require_local("coefficient lift")
        return Fraction(value)

    def elem(self, value: Scalar) -> "BaseElem":
        return BaseElem(self, value)

    def zero(self) -> "BaseElem":
        return BaseElem(self, 0)

    def one(self) -> "BaseElem":
        return BaseElem(self, 1)

    # ── serialization ─────────────────────────────────────────────────────

    def format(self, value: Fraction) -> str:
        return format_fraction(value)

    def parse(self, text: Union[str, int]) -> Fraction:
        return self.normalize(parse_fraction(text))


class BaseElem:
    """Element of a LocalBase with ring operators"""

    __slots__ = ("base", "value")

    def __init__(self, base: LocalBase, value: Scalar):
        self.base = base
        self.value = base.normalize(value)

    def _coerce(self, other) -> Fraction:
        if isinstance(other, BaseElem):
            return other.value
        return self.base.normalize(other)

    def __add__(self, other):
        return BaseElem(self.base, self.base.canon(self.value + self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return BaseElem(self.base, self.base.canon(self.value - self._coerce(other)))

    def __rsub__(self, other):
        return BaseElem(self.base, self.base.canon(self._coerce(other) - self.value))

    def __mul__(self, other):
        return BaseElem(self.base, self.base.canon(self.value * self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return BaseElem(self.base, self.base.canon(-self.value))

    def __truediv__(self, other):
        return BaseElem(self.base, self.base.div(self.value, self._coerce(other)))

    def __eq__(self, other):
        if isinstance(other, BaseElem):
            return self.base == other.base and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.base.canon(Fraction(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.base, self.value))

    def __bool__(self):
        return self.value != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        return self.base.is_unit(self.value)

    def inverse(self) -> "BaseElem":
        return BaseElem(self.base, self.base.inv(self.value))

    def residue(self) -> "BaseElem":
        return BaseElem(self.base.residue_field(), self.base.residue(self.value))

    def __str__(self) -> str:
        return format_fraction(self.value)

    def __repr__(self) -> str:
        return f"<BaseElem({self}, base={self.base.name})>"
