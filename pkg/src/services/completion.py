"""
Row Completion and Descent

Explicit constructions around unimodular rows that need no reduction
pipeline: the 2x2 completion of a length-2 row, the complement shrinking
for rows congruent to (1, 0, ..., 0) modulo an ideal, and the rescaling
t -> s^k t that moves a row over A_S[t] down to A[t] and back.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Sequence, Tuple

from ..core.base import BaseKind, LocalBase
from ..core.errors import NotInIdealForm, NotLocalizedAtS, NotUnimodular, UsageError
from ..core.laurent import LaurentPoly
from ..core.matrix import LocalMatrix
from .groebner import buchberger
from .rows import IdealRow, RowBundle, pair_rows

logger = logging.getLogger(__name__)


# ── length 2 ───────────────────────────────────────────────────────────────

def complete_length2(bundle: RowBundle) -> LocalMatrix:
    """
    Complete (a, b) with complement (u, v) to [[a, -v], [b, u]]

    When the unit witness w = a*u + b*v is not 1 the second column is
    divided by w, so the determinant is exactly 1.

    Raises:
        NotUnimodular: if the bundle is not of length 2 or the determinant check fails
    """
    if bundle.r != 1:
        raise NotUnimodular(f"complete_length2 needs a row of length 2, got r={bundle.r}")
    base = bundle.base
    a, b = bundle.row
    u, v = bundle.complement
    scale = bundle.unit_witness.unit_inverse()
    matrix = LocalMatrix(
        ((a, -v * scale), (b, u * scale)),
        LaurentPoly.zero(base),
        LaurentPoly.constant(1, base),
    )
    if matrix.determinant() != 1:
        raise NotUnimodular(f"completion determinant is {matrix.determinant()}, not 1")
    return matrix


# ── complement shrinking ───────────────────────────────────────────────────

def _multinomial(alpha: Sequence[int]) -> int:
    total = math.factorial(sum(alpha))
    for e in alpha:
        total //= math.factorial(e)
    return total


def shrink_complement(row: Sequence[Any], complement: Sequence[Any], one: Any) -> Tuple[Any, ...]:
    """
    Complement b with b_j = a_j * b'_j from the expansion of (sum a_i*c_i)^(r+2)

    Works for any commutative ring elements supporting + and *. Each
    monomial of the expansion is charged to the first index whose exponent
    is at least 2.
    """
    n = len(row)
    products = [a * c for a, c in zip(row, complement)]
    zero = one - one
    shrunk = [zero] * n
    for combo in itertools.combinations_with_replacement(range(n), n + 1):
        alpha = [0] * n
        for idx in combo:
            alpha[idx] += 1
        j = next(idx for idx, e in enumerate(alpha) if e >= 2)
        term = one * _multinomial(alpha)
        for idx, e in enumerate(alpha):
            if idx == j:
                # a_j^(e-1) * c_j^e: one factor of a_j stays outside
                term = term * row[idx] ** (e - 1) * complement[idx] ** e
            elif e:
                term = term * products[idx] ** e
        shrunk[j] = shrunk[j] + term
    return tuple(shrunk)


def shrink_to_ideal_row(ideal_row: IdealRow) -> IdealRow:
    """
    Replace the complement by one congruent to (1, 0, ..., 0) modulo I

    Membership in I is decided by normal forms against a Groebner basis
    of I over the fraction field of the base.

    Raises:
        NotUnimodular: if sum a_i*c_i != 1
        NotInIdealForm: if the row is not (1, 0, ..., 0) modulo I
    """
    row, complement = ideal_row.row, ideal_row.complement
    if ideal_row.pairing() != 1:
        raise NotUnimodular("sum a_i*c_i is not 1")
    variables = ideal_row.variables or row[0].variables
    gb = buchberger([g.align(variables) for g in ideal_row.ideal], variables=variables)

    def congruent(values) -> bool:
        targets = [1] + [0] * (len(values) - 1)
        return all(gb.normal_form(x - target).is_zero() for x, target in zip(values, targets))

    if not congruent(row):
        raise NotInIdealForm("row is not congruent to (1, 0, ..., 0) modulo the ideal")

    one = row[0] * 0 + 1
    shrunk = shrink_complement(row, complement, one)
    if pair_rows(row, shrunk) != 1:
        raise NotUnimodular("shrunk complement does not pair to 1")
    if not congruent(shrunk):
        raise NotInIdealForm("shrunk complement is not congruent to (1, 0, ..., 0)")
    logger.debug(f"shrunk complement of an r={len(row) - 1} ideal row")
    return IdealRow(row, shrunk, ideal_row.ideal, variables)


# ── descent along t -> s^k t ──────────────────────────────────────────────

@dataclass(frozen=True)
class Descent:
    """Row over A[t] obtained from a row over A_S[t] by t -> s^k t"""
    row: Tuple[LaurentPoly, ...]
    complement: Tuple[LaurentPoly, ...]
    s: int
    k: int

    def verify(self) -> None:
        if pair_rows(self.row, self.complement) != 1:
            raise NotUnimodular(f"sum a_i(t)*c_i(s^{self.k} t) is not 1")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "v1/Descent",
            "base": "Z",
            "row": [x.to_dict() for x in self.row],
            "complement": [y.to_dict() for y in self.complement],
            "s": self.s,
            "k": self.k,
        }


def _s_valuations(value: Fraction, primes: Sequence[int]) -> Dict[int, int]:
    vals = {}
    for q in primes:
        v, num, den = 0, value.numerator, value.denominator
        while num and num % q == 0:
            num //= q
            v += 1
        while den % q == 0:
            den //= q
            v -= 1
        vals[q] = v
    return vals


def _check_localized(value: Fraction, primes: Sequence[int], s: int) -> None:
    den = value.denominator
    for q in primes:
        while den % q == 0:
            den //= q
    if den != 1:
        raise NotLocalizedAtS(f"denominator of {value} is not a divisor of a power of {s}")


def _required_k(polys: Sequence[LaurentPoly], s: int) -> int:
    primes = LocalBase.inverted(s).inverted_primes
    s_vals = _s_valuations(Fraction(s), primes)
    k = 0
    for poly in polys:
        for e, c in poly.coeffs.items():
            _check_localized(c, primes, s)
            if e == 0:
                if c.denominator != 1:
                    raise NotInIdealForm(f"constant term {c} is not in A")
                continue
            for q, v in _s_valuations(c, primes).items():
                if v < 0:
                    k = max(k, -(v // (e * s_vals[q])))
    return k


def roitman_descend(row: Sequence[LaurentPoly], complement: Sequence[LaurentPoly], s: int) -> Descent:
    """
    Move a row in Um(A_S[t], (t)) with A = Z down to Z[t]

    Only A = Z is supported: inputs must live over Q or Z[1/m], and rows
    over any other base are rejected.

    If the complement has non-integral constant terms it is first shrunk
    to one congruent to (1, 0, ..., 0) modulo (t).

    Returns:
        Descent with a_i(t) = b_i(s^k t) for the smallest admissible k

    Raises:
        NotLocalizedAtS: if a denominator is prime to the primes of s
        NotInIdealForm: if the row is not (1, 0, ..., 0) modulo (t)
        UsageError: if the row is not over Q or Z[1/m]
    """
    if s < 2:
        raise UsageError(f"s must be at least 2, got {s}")
    row, complement = tuple(row), tuple(complement)
    if any(not x.is_polynomial() for x in row + complement):
        raise UsageError("roitman_descend needs polynomial rows")
    base = row[0].base
    if base.kind not in (BaseKind.RATIONAL, BaseKind.INVERTED):
        raise UsageError(f"descent input must live over Q or Z[1/m], got {base}")
    if pair_rows(row, complement) != 1:
        raise NotUnimodular("sum b_i*c_i is not 1")
    expected = [1] + [0] * (len(row) - 1)
    if [x.coeff(0) for x in row] != expected:
        raise NotInIdealForm("row is not congruent to (1, 0, ..., 0) modulo (t)")

    if any(y.coeff(0).denominator != 1 for y in complement):
        complement = shrink_complement(row, complement, LaurentPoly.constant(1, base))

    k = _required_k(row + complement, s)
    factor = Fraction(s) ** k
    integers = LocalBase.integers()
    descent = Descent(
        tuple(x.scale_variable(factor, integers) for x in row),
        tuple(y.scale_variable(factor, integers) for y in complement),
        s,
        k,
    )
    descent.verify()
    logger.info(f"descended r={len(row) - 1} row along t -> {s}^{k} t")
    return descent


def roitman_lift_matrix(matrix: LocalMatrix, s: int, k: int) -> LocalMatrix:
    """Apply t -> s^(-k) t to a matrix over Z[t]; the result lives over Z[1/s][t]."""
    target = LocalBase.inverted(s)
    factor = Fraction(1, s ** k)
    return matrix.map(
        lambda x: x.scale_variable(factor, target),
        LaurentPoly.zero(target),
        LaurentPoly.constant(1, target),
    )
