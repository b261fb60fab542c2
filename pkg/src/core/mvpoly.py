"""
Sparse Multivariate Polynomials

Exact polynomials over a LocalBase, stored as a map from exponent vectors
to nonzero coefficients over an ordered variable list.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from .base import LocalBase, format_fraction
from .errors import UsageError

Exps = Tuple[int, ...]


def merge_variables(a: Sequence[str], b: Sequence[str]) -> Tuple[str, ...]:
    """Canonical merge: the variables of a, then the new variables of b in order."""
    seen = set(a)
    return tuple(a) + tuple(v for v in b if v not in seen and not seen.add(v))


@dataclass(frozen=True, eq=False)
class MvPoly:
    """Polynomial in named variables; zero coefficients are never stored"""
    variables: Tuple[str, ...]
    terms: Mapping[Exps, Fraction]
    base: LocalBase

    def __post_init__(self):
        width = len(self.variables)
        clean: Dict[Exps, Fraction] = {}
        for exps, coeff in self.terms.items():
            exps = tuple(exps)
            if len(exps) != width:
                raise UsageError(f"exponent vector {exps} does not match {width} variables")
            value = self.base.normalize(coeff)
            if value:
                clean[exps] = clean.get(exps, Fraction(0)) + value
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "terms", {e: self.base.canon(c) for e, c in clean.items() if self.base.canon(c)})

    @classmethod
    def _make(cls, variables: Tuple[str, ...], terms: Dict[Exps, Fraction], base: LocalBase) -> "MvPoly":
        """Build from already canonical, zero-free data."""
        poly = object.__new__(cls)
        object.__setattr__(poly, "variables", variables)
        object.__setattr__(poly, "terms", terms)
        object.__setattr__(poly, "base", base)
        return poly

    # ── constructors ──────────────────────────────────────────────────────

    @classmethod
    def zero(cls, variables: Sequence[str], base: LocalBase) -> "MvPoly":
        return cls._make(tuple(variables), {}, base)

    @classmethod
    def constant(cls, value, variables: Sequence[str], base: LocalBase) -> "MvPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value}, base)

    @classmethod
    def variable(cls, name: str, variables: Sequence[str], base: LocalBase) -> "MvPoly":
        variables = tuple(variables)
        if name not in variables:
            raise UsageError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._make(variables, {exps: Fraction(1)}, base)

    @classmethod
    def from_sympy(cls, expr, variables: Sequence[str], base: LocalBase) -> "MvPoly":
        """Convert a sympy expression (or a string parsed by sympy) over the given variables."""
        variables = tuple(variables)
        symbols = sympy.symbols(variables) if variables else ()
        if isinstance(expr, str):
            expr = sympy.sympify(expr, locals={v: s for v, s in zip(variables, symbols)})
        if not variables:
            value = sympy.Rational(expr)
            return cls.constant(Fraction(int(value.p), int(value.q)), variables, base)
        poly = sympy.Poly(expr, *symbols, domain="QQ")
        terms = {
            tuple(int(e) for e in monom): Fraction(int(c.p), int(c.q))
            for monom, c in poly.terms()
        }
        return cls(variables, terms, base)

    # ── queries ───────────────────────────────────────────────────────────

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def degree(self, grades: Optional[Sequence[int]] = None) -> int:
        """Total (weighted) degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        grades = grades or (1,) * len(self.variables)
        return max(sum(g * e for g, e in zip(grades, exps)) for exps in self.terms)

    def is_homogeneous(self, grades: Optional[Sequence[int]] = None) -> bool:
        grades = grades or (1,) * len(self.variables)
        degrees = {sum(g * e for g, e in zip(grades, exps)) for exps in self.terms}
        return len(degrees) <= 1

    def used_variables(self) -> Tuple[str, ...]:
        used = [False] * len(self.variables)
        for exps in self.terms:
            for idx, e in enumerate(exps):
                if e:
                    used[idx] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def monomials(self) -> Iterator[Tuple[Dict[str, int], Fraction]]:
        """Yield ({variable: exponent}, coefficient) in canonical order."""
        for exps in sorted(self.terms, reverse=True):
            yield {v: e for v, e in zip(self.variables, exps) if e}, self.terms[exps]

    def coefficient(self, monomial: Mapping[str, int]) -> Fraction:
        exps = tuple(monomial.get(v, 0) for v in self.variables)
        if sum(monomial.values()) != sum(exps):
            return Fraction(0)
        return self.terms.get(exps, Fraction(0))

    def support(self) -> frozenset:
        """Monomials as frozensets of (variable, exponent) pairs."""
        return frozenset(
            frozenset((v, e) for v, e in zip(self.variables, exps) if e)
            for exps in self.terms
        )

    # ── variable handling ─────────────────────────────────────────────────

    def align(self, variables: Sequence[str]) -> "MvPoly":
        """Re-express over a variable list containing every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        index = {v: i for i, v in enumerate(variables)}
        missing = [v for v in self.used_variables() if v not in index]
        if missing:
            raise UsageError(f"variables {missing} missing from target list")
        positions = [index.get(v) for v in self.variables]
        terms: Dict[Exps, Fraction] = {}
        width = len(variables)
        for exps, coeff in self.terms.items():
            new = [0] * width
            for pos, e in zip(positions, exps):
                if e:
                    new[pos] = e
            terms[tuple(new)] = coeff
        return MvPoly._make(variables, terms, self.base)

    def extend_variables(self, extra: Iterable[str]) -> "MvPoly":
        return self.align(merge_variables(self.variables, tuple(extra)))

    def _aligned(self, other: "MvPoly") -> Tuple["MvPoly", "MvPoly"]:
        if self.base != other.base:
            raise UsageError(f"base mismatch: {self.base} vs {other.base}")
        if self.variables == other.variables:
            return self, other
        merged = merge_variables(self.variables, other.variables)
        return self.align(merged), other.align(merged)

    # ── arithmetic ────────────────────────────────────────────────────────

    def _scalar(self, value) -> "MvPoly":
        return MvPoly.constant(value, self.variables, self.base)

    def __add__(self, other) -> "MvPoly":
        if not isinstance(other, MvPoly):
            other = self._scalar(other)
        a, b = self._aligned(other)
        canon = a.base.canon
        terms = dict(a.terms)
        for exps, coeff in b.terms.items():
            value = canon(terms.get(exps, 0) + coeff)
            if value:
                terms[exps] = value
            else:
                terms.pop(exps, None)
        return MvPoly._make(a.variables, terms, a.base)

    __radd__ = __add__

    def __neg__(self) -> "MvPoly":
        canon = self.base.canon
        return MvPoly._make(self.variables, {e: canon(-c) for e, c in self.terms.items()}, self.base)

    def __sub__(self, other) -> "MvPoly":
        if not isinstance(other, MvPoly):
            other = self._scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "MvPoly":
        return (-self) + other

    def __mul__(self, other) -> "MvPoly":
        canon = self.base.canon
        if not isinstance(other, MvPoly):
            value = self.base.normalize(other)
            if not value:
                return MvPoly.zero(self.variables, self.base)
            return MvPoly._make(
                self.variables,
                {e: canon(c * value) for e, c in self.terms.items() if canon(c * value)},
                self.base,
            )
        a, b = self._aligned(other)
        terms: Dict[Exps, Fraction] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                terms[exps] = terms.get(exps, 0) + ca * cb
        clean = {}
        for exps, coeff in terms.items():
            value = canon(coeff)
            if value:
                clean[exps] = value
        return MvPoly._make(a.variables, clean, a.base)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MvPoly":
        if exponent < 0:
            raise UsageError("negative powers of multivariate polynomials are not defined")
        result = self._scalar(1)
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
            return self == self._scalar(other)
        if not isinstance(other, MvPoly):
            return NotImplemented
        if self.base != other.base:
            return False
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        return hash((self.base, frozenset(
            (frozenset((v, e) for v, e in zip(self.variables, exps) if e), c)
            for exps, c in self.terms.items()
        )))

    # ── maps ──────────────────────────────────────────────────────────────

    def substitute(
        self,
        images: Mapping[str, "MvPoly"],
        target_variables: Sequence[str],
        target_base: Optional[LocalBase] = None,
    ) -> "MvPoly":
        """Ring map sending each variable to its image (missing variables go to 0)."""
        target_base = target_base or self.base
        target_variables = tuple(target_variables)
        zero = MvPoly.zero(target_variables, target_base)
        one = MvPoly.constant(1, target_variables, target_base)
        imgs = [images[v].align(target_variables) if v in images else zero for v in self.variables]
        powers: Dict[Tuple[int, int], MvPoly] = {}

        def power(idx: int, e: int) -> MvPoly:
            key = (idx, e)
            if key not in powers:
                powers[key] = imgs[idx] ** e
            return powers[key]

        result = zero
        for exps, coeff in self.terms.items():
            term = one * target_base.normalize(coeff)
            for idx, e in enumerate(exps):
                if e:
                    if imgs[idx].is_zero():
                        term = zero
                        break
                    term = term * power(idx, e)
            result = result + term
        return result

    def map_coefficients(self, fn, base: LocalBase) -> "MvPoly":
        """Apply a coefficient ring map fn: self.base -> base."""
        return MvPoly(self.variables, {e: fn(c) for e, c in self.terms.items()}, base)

    # ── interop ───────────────────────────────────────────────────────────

    def to_sympy(self):
        symbols = sympy.symbols(self.variables) if self.variables else ()
        expr = sympy.Integer(0)
        for exps, coeff in self.terms.items():
            term = sympy.Rational(coeff.numerator, coeff.denominator)
            for sym, e in zip(symbols, exps):
                if e:
                    term *= sym ** e
            expr += term
        return expr

    def to_dict(self) -> List[dict]:
        """Canonical JSON: list of {exps, coeff} sorted by exponent vector."""
        return [
            {"exps": list(exps), "coeff": format_fraction(self.terms[exps])}
            for exps in sorted(self.terms, reverse=True)
        ]

    @classmethod
    def from_dict(cls, data: List[dict], variables: Sequence[str], base: LocalBase) -> "MvPoly":
        return cls(tuple(variables), {tuple(t["exps"]): base.parse(t["coeff"]) for t in data}, base)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for monomial, coeff in self.monomials():
            factors = [v if e == 1 else f"{v}^{e}" for v, e in monomial.items()]
            if not factors:
                parts.append(format_fraction(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{format_fraction(coeff)}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<MvPoly({self}, base={self.base.name})>"


def poly_arith(a: MvPoly, b: MvPoly, op: str) -> MvPoly:
    """Add or multiply two polynomials after merging their variable lists."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise UsageError(f"unknown polynomial operation {op!r}")
