"""
Groebner Basis Engine

Buchberger's algorithm over Q and F_p with normal pair selection and the
Gebauer-Moeller criteria, normal forms, exact division, ideal quotients
by a tag variable, and Hilbert functions of homogeneous ideals.

Polynomials are handled internally as dicts {exponent tuple: coefficient}
over the fraction field of the input base; variables listed first are
the largest.
"""

import enum
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.base import LocalBase
from ..core.errors import OracleTimeout, UsageError
from ..core.mvpoly import MvPoly, merge_variables

logger = logging.getLogger(__name__)

Exps = Tuple[int, ...]
Poly = Dict[Exps, Fraction]

DEFAULT_PAIR_BUDGET = 200_000
TAG_VARIABLE = "_w"


class OrderKind(str, enum.Enum):
    """Supported monomial orders"""
    DEGREVLEX = "degrevlex"
    LEX = "lex"
    BLOCK = "block"


def _degrevlex(exps: Exps) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class MonomialOrder:
    """
    Monomial order on exponent tuples

    BLOCK compares the first `block` variables by degrevlex, then the
    rest by degrevlex; it eliminates the first block.
    """
    kind: OrderKind = OrderKind.DEGREVLEX
    block: int = 0

    @classmethod
    def from_name(cls, name: str) -> "MonomialOrder":
        try:
            return cls(OrderKind(name))
        except ValueError as exc:
            raise UsageError(f"unknown monomial order {name!r}") from exc

    def key(self, exps: Exps) -> tuple:
        """Sort key; larger key means larger monomial."""
        if self.kind == OrderKind.LEX:
            return exps
        if self.kind == OrderKind.BLOCK:
            return (_degrevlex(exps[:self.block]), _degrevlex(exps[self.block:]))
        return _degrevlex(exps)


# ── monomial helpers ───────────────────────────────────────────────────────

def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exps, b: Exps) -> Exps:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Exps, b: Exps) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _sub(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


# ── internal polynomial arithmetic ─────────────────────────────────────────

def _leading(f: Poly, order: MonomialOrder) -> Exps:
    return max(f, key=order.key)


def _add_multiple(f: Poly, g: Poly, c: Fraction, shift: Exps, field_base: LocalBase) -> None:
    """f -= c * x^shift * g, in place."""
    canon = field_base.canon
    for exps, coeff in g.items():
        m = tuple(x + y for x, y in zip(exps, shift))
        value = canon(f.get(m, 0) - c * coeff)
        if value:
            f[m] = value
        else:
            f.pop(m, None)


def _monic(f: Poly, order: MonomialOrder, field_base: LocalBase) -> Poly:
    lead_inv = field_base.inv(f[_leading(f, order)])
    return {m: field_base.canon(c * lead_inv) for m, c in f.items()}


def _reduce(
    f: Poly, basis: Sequence[Tuple[Exps, Poly]], order: MonomialOrder, field_base: LocalBase
) -> Poly:
    """Full reduction of f by monic polynomials given as (leading monomial, poly)."""
    f = dict(f)
    remainder: Poly = {}
    while f:
        m = _leading(f, order)
        c = f[m]
        for lm, g in basis:
            if _divides(lm, m):
                _add_multiple(f, g, c, _sub(m, lm), field_base)
                break
        else:
            remainder[m] = c
            del f[m]
    return remainder


# ── Groebner bases ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced monic Groebner basis of the ideal generated by `source`"""
    variables: Tuple[str, ...]
    order: MonomialOrder
    base: LocalBase
    polys: Tuple[Poly, ...]
    source: Tuple[MvPoly, ...] = ()
    degree_bound: Optional[int] = None
    pairs: int = 0
    leading: Tuple[Exps, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "leading", tuple(_leading(p, self.order) for p in self.polys))

    def _to_internal(self, f: MvPoly) -> Poly:
        if f.base.fraction_field() != self.base:
            raise UsageError(f"polynomial over {f.base} does not fit a basis over {self.base}")
        normalize = self.base.normalize
        return {m: normalize(c) for m, c in f.align(self.variables).terms.items()}

    def _to_mvpoly(self, f: Poly) -> MvPoly:
        return MvPoly(self.variables, f, self.base)

    def generators(self) -> List[MvPoly]:
        return [self._to_mvpoly(p) for p in self.polys]

    def leading_monomials(self) -> List[Exps]:
        return list(self.leading)

    def is_unit_ideal(self) -> bool:
        return any(not any(lm) for lm in self.leading)

    def normal_form(self, f: MvPoly) -> MvPoly:
        """Remainder of f; zero exactly when f lies in the ideal."""
        basis = list(zip(self.leading, self.polys))
        return self._to_mvpoly(_reduce(self._to_internal(f), basis, self.order, self.base))

    def contains(self, f: MvPoly) -> bool:
        return self.normal_form(f).is_zero()

    def to_dict(self) -> Dict:
        return {
            "vars": list(self.variables),
            "order": self.order.kind.value,
            "base": self.base.name,
            "generators": [g.to_dict() for g in self.generators()],
            "degree_bound": self.degree_bound,
            "pairs": self.pairs,
        }


def _update(
    h: int,
    active: List[int],
    pairs: List[Tuple[int, int]],
    leading: List[Exps],
) -> Tuple[List[int], List[Tuple[int, int]]]:
    """Gebauer-Moeller installation of the new basis element h."""
    lm_h = leading[h]
    candidates = [(h, g) for g in active]
    kept: List[Tuple[int, int]] = []
    while candidates:
        _, g = candidates.pop()
        lcm_hg = _lcm(lm_h, leading[g])
        if _coprime(lm_h, leading[g]) or (
            not any(_divides(_lcm(lm_h, leading[g2]), lcm_hg) for _, g2 in candidates)
            and not any(_divides(_lcm(lm_h, leading[g2]), lcm_hg) for _, g2 in kept)
        ):
            kept.append((h, g))
    new_pairs = [(h, g) for _, g in kept if not _coprime(lm_h, leading[g])]

    survivors = []
    for g1, g2 in pairs:
        lcm12 = _lcm(leading[g1], leading[g2])
        if (
            not _divides(lm_h, lcm12)
            or _lcm(leading[g1], lm_h) == lcm12
            or _lcm(lm_h, leading[g2]) == lcm12
        ):
            survivors.append((g1, g2))

    active = [g for g in active if not _divides(lm_h, leading[g])] + [h]
    return active, survivors + new_pairs


def buchberger(
    ideal: Iterable[MvPoly],
    variables: Optional[Sequence[str]] = None,
    order: Optional[MonomialOrder] = None,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    degree_bound: Optional[int] = None,
    base: Optional[LocalBase] = None,
) -> GroebnerBasis:
    """
    Reduced Groebner basis by Buchberger's algorithm

    Args:
        ideal: generators over Q, F_p, or a ring whose fraction field is Q
        variables: variable order, largest first (defaults to the merged generator variables)
        order: monomial order (degrevlex by default)
        pair_budget: maximum number of S-pairs reduced
        degree_bound: drop S-pairs whose lcm has larger total degree
        base: coefficient ring when the ideal is empty

    Raises:
        OracleTimeout: if the pair budget is exhausted
    """
    ideal = list(ideal)
    order = order or MonomialOrder()
    if variables is None:
        variables = ()
        for g in ideal:
            variables = merge_variables(variables, g.variables)
    variables = tuple(variables)
    if base is None:
        if not ideal:
            raise UsageError("an empty ideal needs an explicit base")
        base = ideal[0].base
    field_base = base.fraction_field()

    empty = GroebnerBasis(variables, order, field_base, (), tuple(ideal), degree_bound)
    inputs = [empty._to_internal(g) for g in ideal]
    inputs = [_monic(f, order, field_base) for f in inputs if f]
    inputs.sort(key=lambda f: order.key(_leading(f, order)))

    polys: List[Poly] = []
    leading: List[Exps] = []
    active: List[int] = []
    pairs: List[Tuple[int, int]] = []

    def install(f: Poly) -> None:
        nonlocal active, pairs
        h = _reduce(f, [(leading[g], polys[g]) for g in active], order, field_base)
        if not h:
            return
        h = _monic(h, order, field_base)
        polys.append(h)
        leading.append(_leading(h, order))
        active, pairs = _update(len(polys) - 1, active, pairs, leading)

    for f in inputs:
        install(f)

    def pair_key(pair):
        lcm = _lcm(leading[pair[0]], leading[pair[1]])
        return (sum(lcm), order.key(lcm), pair)

    reduced_pairs = 0
    while pairs:
        pair = min(pairs, key=pair_key)
        pairs.remove(pair)
        i, j = pair
        lcm = _lcm(leading[i], leading[j])
        if degree_bound is not None and sum(lcm) > degree_bound:
            continue
        reduced_pairs += 1
        if reduced_pairs > pair_budget:
            raise OracleTimeout(f"pair budget {pair_budget} exhausted", pairs=reduced_pairs)
        s_poly: Poly = {}
        _add_multiple(s_poly, polys[i], Fraction(-1), _sub(lcm, leading[i]), field_base)
        _add_multiple(s_poly, polys[j], Fraction(1), _sub(lcm, leading[j]), field_base)
        if s_poly:
            install(s_poly)
        if reduced_pairs % 1000 == 0:
            logger.debug(f"buchberger: {reduced_pairs} pairs reduced, {len(active)} active, {len(pairs)} queued")

    minimal = sorted(active, key=lambda g: order.key(leading[g]))
    reduced = []
    for g in minimal:
        others = [(leading[o], polys[o]) for o in minimal if o != g]
        tail = dict(polys[g])
        lm = leading[g]
        lead_coeff = tail.pop(lm)
        remainder = _reduce(tail, others, order, field_base)
        remainder[lm] = lead_coeff
        reduced.append(remainder)

    logger.debug(f"buchberger: {len(reduced)} generators after {reduced_pairs} pairs")
    return GroebnerBasis(variables, order, field_base, tuple(reduced), tuple(ideal), degree_bound, reduced_pairs)


# ── division and quotients ─────────────────────────────────────────────────

def divide(g: MvPoly, f: MvPoly, order: Optional[MonomialOrder] = None) -> MvPoly:
    """
    Exact quotient g / f

    Raises:
        UsageError: if f is zero or does not divide g
    """
    order = order or MonomialOrder()
    variables = merge_variables(g.variables, f.variables)
    field_base = g.base.fraction_field()
    gb = GroebnerBasis(variables, order, field_base, ())
    num, den = gb._to_internal(g), gb._to_internal(f)
    if not den:
        raise UsageError("division by the zero polynomial")
    lm = _leading(den, order)
    lead_inv = field_base.inv(den[lm])
    quotient: Poly = {}
    while num:
        m = _leading(num, order)
        if not _divides(lm, m):
            raise UsageError(f"{f} does not divide {g}")
        c = field_base.canon(num[m] * lead_inv)
        shift = _sub(m, lm)
        quotient[shift] = c
        _add_multiple(num, den, c, shift, field_base)
    return MvPoly(variables, quotient, field_base)


def ideal_quotient(
    ideal: Sequence[MvPoly],
    f: MvPoly,
    variables: Optional[Sequence[str]] = None,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> List[MvPoly]:
    """
    Generators of (J : f) by tag-variable elimination

    J intersected with (f) is the w-free part of a Groebner basis of
    w*J + (1 - w)*f under an order eliminating w; dividing it by f gives
    (J : f).
    """
    if f.is_zero():
        raise UsageError("ideal quotient by the zero polynomial")
    if variables is None:
        variables = f.variables
        for g in ideal:
            variables = merge_variables(variables, g.variables)
    variables = tuple(variables)
    if TAG_VARIABLE in variables:
        raise UsageError(f"variable name {TAG_VARIABLE!r} is reserved")
    tagged = (TAG_VARIABLE,) + variables
    w = MvPoly.variable(TAG_VARIABLE, tagged, f.base)
    generators = [w * g.align(tagged) for g in ideal] + [(1 - w) * f.align(tagged)]
    gb = buchberger(
        generators,
        variables=tagged,
        order=MonomialOrder(OrderKind.BLOCK, block=1),
        pair_budget=pair_budget,
        base=f.base,
    )
    intersection = [g for g, lm in zip(gb.generators(), gb.leading) if lm[0] == 0]
    quotients = [divide(g, f.align(tagged)) for g in intersection]
    return [q.align(variables) for q in quotients]


# ── Hilbert functions ──────────────────────────────────────────────────────

def hilbert_function(gb: GroebnerBasis, degree: int) -> List[int]:
    """Number of standard monomials in each degree 0..degree."""
    n = len(gb.variables)
    leading = gb.leading
    values = []
    for d in range(degree + 1):
        count = 0
        for combo in itertools.combinations_with_replacement(range(n), d):
            exps = [0] * n
            for idx in combo:
                exps[idx] += 1
            exps = tuple(exps)
            if not any(_divides(lm, exps) for lm in leading):
                count += 1
        values.append(count)
    return values


def _free_count(num_variables: int, degree: int) -> int:
    if num_variables == 0:
        return 1 if degree == 0 else 0
    return math.comb(num_variables - 1 + degree, degree)


def complete_intersection_hilbert(num_variables: int, degrees: Sequence[int], degree: int) -> List[int]:
    """Coefficients of prod(1 - T^d_i) / (1 - T)^N through T^degree."""
    numerator = [1] + [0] * degree
    for d in degrees:
        for e in range(degree, d - 1, -1):
            numerator[e] -= numerator[e - d]
    values = []
    for d in range(degree + 1):
        total = 0
        for e in range(d + 1):
            if numerator[e]:
                total += numerator[e] * _free_count(num_variables, d - e)
        values.append(total)
    return values
