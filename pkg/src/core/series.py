"""
Truncated Laurent Series

A TruncSeries is a Laurent series in t known modulo t^P. The valuation of
a series whose known window is all zero is Unknown (None): only "val >= P"
is known, and operations that consume the valuation refuse to guess.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional

from .base import LocalBase, format_fraction
from .errors import NotAUnit, PrecisionLoss, UsageError
from .laurent import LaurentPoly

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TruncSeries:
    """Series over base known modulo t^precision"""
    base: LocalBase
    precision: int
    coeffs: Mapping[int, Fraction]

    def __post_init__(self):
        clean = {}
        for e, c in self.coeffs.items():
            if e >= self.precision:
                continue
            value = self.base.normalize(c)
            if value:
                clean[int(e)] = value
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def _make(cls, base: LocalBase, precision: int, coeffs: Dict[int, Fraction]) -> "TruncSeries":
        series = object.__new__(cls)
        object.__setattr__(series, "base", base)
        object.__setattr__(series, "precision", precision)
        object.__setattr__(series, "coeffs", coeffs)
        return series

    @classmethod
    def embed(cls, f: LaurentPoly, precision: int) -> "TruncSeries":
        """View a Laurent polynomial as a series known modulo t^precision."""
        return cls._make(f.base, precision, {e: c for e, c in f.coeffs.items() if e < precision})

    @property
    def valuation(self) -> Optional[int]:
        """Lowest known exponent, or None when the known window is zero."""
        return min(self.coeffs) if self.coeffs else None

    def valuation_bound(self) -> int:
        """Lower bound for the true valuation."""
        v = self.valuation
        return self.precision if v is None else v

    def coeff(self, exponent: int) -> Fraction:
        if exponent >= self.precision:
            raise PrecisionLoss(f"coefficient of t^{exponent} unknown at precision {self.precision}")
        return self.coeffs.get(exponent, Fraction(0))

    def to_laurent(self) -> LaurentPoly:
        """The known window as a Laurent polynomial."""
        return LaurentPoly(dict(self.coeffs), self.base)

    def agrees_with(self, f: LaurentPoly) -> bool:
        """True when f and this series coincide below the precision."""
        return self.to_laurent() == f.truncate(self.precision - 1)

    # ── operators ─────────────────────────────────────────────────────────

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return series_arith(self, other, "add")

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return series_arith(self, -other, "add")

    def __neg__(self) -> "TruncSeries":
        canon = self.base.canon
        return TruncSeries._make(self.base, self.precision, {e: canon(-c) for e, c in self.coeffs.items()})

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        return series_arith(self, other, "mul")

    def shift(self, k: int) -> "TruncSeries":
        return series_arith(self, self, "shift", k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.base, self.precision, self.coeffs) == (other.base, other.precision, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.base, self.precision, frozenset(self.coeffs.items())))

    # ── serialization ─────────────────────────────────────────────────────

    def to_dict(self) -> dict:
        v = self.valuation
        return {
            "base": self.base.name,
            "precision": self.precision,
            "valuation": "unknown" if v is None else v,
            "coeffs": {str(e): format_fraction(self.coeffs[e]) for e in sorted(self.coeffs)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TruncSeries":
        base = LocalBase.from_name(data["base"])
        series = cls(base, int(data["precision"]), {int(e): base.parse(c) for e, c in data["coeffs"].items()})
        declared = data.get("valuation", "unknown")
        if declared != ("unknown" if series.valuation is None else series.valuation):
            raise UsageError(f"declared valuation {declared} does not match coefficients")
        return series

    def __str__(self) -> str:
        return f"{self.to_laurent()} + O(t^{self.precision})"

    def __repr__(self) -> str:
        return f"<TruncSeries({self}, base={self.base.name})>"


def series_arith(a: TruncSeries, b: TruncSeries, op: str, k: int = 0) -> TruncSeries:
    """
    Add, multiply or shift with precision propagation

    add: precision min(P_a, P_b); mul: min(P_a + val(b), P_b + val(a)) with an
    Unknown valuation counted as its precision; shift(k): multiply by t^k.

    Raises:
        PrecisionLoss: if the result has no known nonzero coefficient below its precision
    """
    result = _combine(a, b, op, k)
    if result.valuation_bound() >= result.precision:
        raise PrecisionLoss(f"{op} leaves no known coefficient below t^{result.precision}")
    return result


def _combine(a: TruncSeries, b: TruncSeries, op: str, k: int) -> TruncSeries:
    if op == "shift":
        return TruncSeries._make(a.base, a.precision + k, {e + k: c for e, c in a.coeffs.items()})
    if a.base != b.base:
        raise UsageError(f"base mismatch: {a.base} vs {b.base}")
    canon = a.base.canon

    if op == "add":
        precision = min(a.precision, b.precision)
        coeffs = {e: c for e, c in a.coeffs.items() if e < precision}
        for e, c in b.coeffs.items():
            if e >= precision:
                continue
            value = canon(coeffs.get(e, 0) + c)
            if value:
                coeffs[e] = value
            else:
                coeffs.pop(e, None)
        return TruncSeries._make(a.base, precision, coeffs)

    if op == "mul":
        precision = min(a.precision + b.valuation_bound(), b.precision + a.valuation_bound())
        acc: Dict[int, Fraction] = {}
        for ea, ca in a.coeffs.items():
            for eb, cb in b.coeffs.items():
                e = ea + eb
                if e < precision:
                    acc[e] = acc.get(e, 0) + ca * cb
        coeffs = {}
        for e, c in acc.items():
            value = canon(c)
            if value:
                coeffs[e] = value
        return TruncSeries._make(a.base, precision, coeffs)

    raise UsageError(f"unknown series operation {op!r}")


def series_invert(a: TruncSeries) -> TruncSeries:
    """
    Inverse of t^v * u with u(0) a unit, by the coefficient recurrence

    The result is known modulo t^(P - 2v).
    """
    v = a.valuation
    if v is None:
        raise PrecisionLoss(f"cannot invert a series with unknown valuation (precision {a.precision})")
    base = a.base
    lead = a.coeffs[v]
    if not base.is_unit(lead):
        raise NotAUnit(f"lowest coefficient {format_fraction(lead)} is not a unit of {base}")

    canon = base.canon
    length = a.precision - v
    u = [a.coeffs.get(v + i, Fraction(0)) for i in range(length)]
    lead_inv = base.inv(lead)
    inv = [lead_inv]
    for n in range(1, length):
        acc = Fraction(0)
        for i in range(1, n + 1):
            if u[i]:
                acc += u[i] * inv[n - i]
        inv.append(canon(-lead_inv * acc))
    coeffs = {i - v: c for i, c in enumerate(inv) if c}
    return TruncSeries._make(base, a.precision - 2 * v, coeffs)


def series_divide(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * series_invert(b)


def truncate_at(a: TruncSeries, k: int) -> LaurentPoly:
    """Exact Laurent polynomial of the terms with exponent <= k."""
    if k >= a.precision:
        raise PrecisionLoss(f"truncation at degree {k} needs precision > {k}, have {a.precision}")
    return LaurentPoly({e: c for e, c in a.coeffs.items() if e <= k}, a.base)


def residue_reduce(a: TruncSeries) -> TruncSeries:
    """Coefficientwise image over the residue field, same precision."""
    a.base.require_local("residue_reduce")
    residue_base = a.base.residue_field()
    return TruncSeries(residue_base, a.precision, {e: a.base.residue(c) for e, c in a.coeffs.items()})


def coefficient_lift(a: TruncSeries, base: LocalBase) -> TruncSeries:
    """Coefficientwise canonical lift from the residue field to base."""
    if a.base != base.residue_field():
        raise UsageError(f"series over {a.base} does not live over the residue field of {base}")
    return TruncSeries(base, a.precision, {e: base.lift(c) for e, c in a.coeffs.items()})
