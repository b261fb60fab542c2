"""
Laurent Polynomials

Finite Laurent polynomials in the single variable t over a LocalBase,
together with the one division routine of the package: division by a
monic polynomial.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple

from .base import LocalBase, format_fraction
from .errors import NotAUnit, UsageError


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    """Element of R[t, 1/t]; coeffs maps exponents to nonzero coefficients"""
    coeffs: Mapping[int, Fraction]
    base: LocalBase

    def __post_init__(self):
        clean = {}
        for e, c in self.coeffs.items():
            value = self.base.normalize(c)
            if value:
                clean[int(e)] = value
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def _make(cls, coeffs: Dict[int, Fraction], base: LocalBase) -> "LaurentPoly":
        poly = object.__new__(cls)
        object.__setattr__(poly, "coeffs", coeffs)
        object.__setattr__(poly, "base", base)
        return poly

    @classmethod
    def zero(cls, base: LocalBase) -> "LaurentPoly":
        return cls._make({}, base)

    @classmethod
    def constant(cls, value, base: LocalBase) -> "LaurentPoly":
        return cls({0: value}, base)

    @classmethod
    def monomial(cls, value, exponent: int, base: LocalBase) -> "LaurentPoly":
        return cls({exponent: value}, base)

    @classmethod
    def from_list(cls, values: Iterable, base: LocalBase, start: int = 0) -> "LaurentPoly":
        """Coefficients listed from t^start upward."""
        return cls({start + i: v for i, v in enumerate(values)}, base)

    # ── queries ───────────────────────────────────────────────────────────

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def degree(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    def coeff(self, exponent: int) -> Fraction:
        return self.coeffs.get(exponent, Fraction(0))

    def leading_coefficient(self) -> Fraction:
        return self.coeffs[max(self.coeffs)] if self.coeffs else Fraction(0)

    def lowest_coefficient(self) -> Fraction:
        return self.coeffs[min(self.coeffs)] if self.coeffs else Fraction(0)

    def is_polynomial(self) -> bool:
        """True when the element lies in R[t]."""
        return not self.coeffs or min(self.coeffs) >= 0

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.leading_coefficient() == 1

    def is_unit(self) -> bool:
        """Units of R[t, 1/t] over a domain are exactly u*t^j with u a unit of R."""
        return len(self.coeffs) == 1 and self.base.is_unit(next(iter(self.coeffs.values())))

    def is_series_unit(self) -> bool:
        """Unit of R((t)): the lowest coefficient is a unit of R."""
        return bool(self.coeffs) and self.base.is_unit(self.lowest_coefficient())

    # ── arithmetic ────────────────────────────────────────────────────────

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.base != self.base:
                raise UsageError(f"base mismatch: {self.base} vs {other.base}")
            return other
        return LaurentPoly.constant(other, self.base)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        canon = self.base.canon
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            value = canon(coeffs.get(e, 0) + c)
            if value:
                coeffs[e] = value
            else:
                coeffs.pop(e, None)
        return LaurentPoly._make(coeffs, self.base)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        canon = self.base.canon
        return LaurentPoly._make({e: canon(-c) for e, c in self.coeffs.items()}, self.base)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        canon = self.base.canon
        acc: Dict[int, Fraction] = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                acc[ea + eb] = acc.get(ea + eb, 0) + ca * cb
        coeffs = {}
        for e, c in acc.items():
            value = canon(c)
            if value:
                coeffs[e] = value
        return LaurentPoly._make(coeffs, self.base)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            return self.unit_inverse() ** (-exponent)
        result = LaurentPoly.constant(1, self.base)
        square = self
        while exponent:
            if exponent & 1:
                result = result * square
            exponent >>= 1
            if exponent:
                square = square * square
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other, self.base)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.base == other.base and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.base, frozenset(self.coeffs.items())))

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        return LaurentPoly._make({e + k: c for e, c in self.coeffs.items()}, self.base)

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise NotAUnit(f"{self} is not a unit of {self.base}[t, 1/t]")
        (e, c), = self.coeffs.items()
        return LaurentPoly._make({-e: self.base.inv(c)}, self.base)

    def truncate(self, k: int) -> "LaurentPoly":
        """Keep the terms of exponent <= k."""
        return LaurentPoly._make({e: c for e, c in self.coeffs.items() if e <= k}, self.base)

    def tail(self, k: int) -> "LaurentPoly":
        """Keep the terms of exponent > k."""
        return LaurentPoly._make({e: c for e, c in self.coeffs.items() if e > k}, self.base)

    def scale_variable(self, factor: Fraction, base: Optional[LocalBase] = None) -> "LaurentPoly":
        """Substitute t -> factor * t, optionally into another base ring."""
        factor = Fraction(factor)
        target = base or self.base
        return LaurentPoly({e: c * factor ** e for e, c in self.coeffs.items()}, target)

    def map_coefficients(self, fn: Callable[[Fraction], Fraction], base: LocalBase) -> "LaurentPoly":
        return LaurentPoly({e: fn(c) for e, c in self.coeffs.items()}, base)

    def residue(self) -> "LaurentPoly":
        """Coefficientwise image over the residue field."""
        return self.map_coefficients(self.base.residue, self.base.residue_field())

    def lift(self, base: LocalBase) -> "LaurentPoly":
        """Coefficientwise canonical lift from the residue field of base."""
        return self.map_coefficients(base.lift, base)

    def with_base(self, base: LocalBase) -> "LaurentPoly":
        return LaurentPoly(dict(self.coeffs), base)

    # ── serialization ─────────────────────────────────────────────────────

    def to_dict(self) -> Dict[str, str]:
        return {str(e): format_fraction(self.coeffs[e]) for e in sorted(self.coeffs)}

    @classmethod
    def from_dict(cls, data: Mapping[str, str], base: LocalBase) -> "LaurentPoly":
        return cls({int(e): base.parse(c) for e, c in data.items()}, base)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = format_fraction(self.coeffs[e])
            if e == 0:
                parts.append(c)
            else:
                mono = "t" if e == 1 else f"t^{e}"
                parts.append(mono if c == "1" else f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<LaurentPoly({self}, base={self.base.name})>"


def t(base: LocalBase) -> LaurentPoly:
    """The variable t."""
    return LaurentPoly.monomial(1, 1, base)


def monic_divmod(f: LaurentPoly, g: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    """
    Divide f in R[t] by a monic polynomial g

    Returns:
        (q, rem) with f = q*g + rem and deg rem < deg g
    """
    if not g.is_monic() or not g.is_polynomial():
        raise UsageError(f"divisor {g} is not a monic polynomial")
    if not f.is_polynomial():
        raise UsageError(f"dividend {f} is not a polynomial")
    base = f.base
    canon = base.canon
    n = g.degree()
    rem = dict(f.coeffs)
    quot: Dict[int, Fraction] = {}
    while rem and max(rem) >= n:
        top = max(rem)
        c = rem[top]
        shift = top - n
        quot[shift] = c
        for e, gc in g.coeffs.items():
            value = canon(rem.get(e + shift, 0) - c * gc)
            if value:
                rem[e + shift] = value
            else:
                rem.pop(e + shift, None)
    return LaurentPoly._make(quot, base), LaurentPoly._make(rem, base)


def exact_divide(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """f / g for monic g dividing f exactly."""
    q, rem = monic_divmod(f, g)
    if not rem.is_zero():
        raise UsageError(f"{g} does not divide {f}")
    return q
