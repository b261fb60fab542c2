"""
Weierstrass Reduction Service

Carries an exactly unimodular Laurent row over a local ring to a row
(p_0, ..., p_r) with p_0 a Weierstrass polynomial, together with a GL
witness and an exact Bezout certificate sum p_i*c_i = t^k.

Pipeline:
    1. residue_normalize: elementary operations lifted from the residue
       field make the residue row (0, 1, 0, ..., 0) modulo t^P.
    2. shift both rows into R[[t]] by t^N and rescale the complement so
       that sum x_i*y_i = t^k.
    3. correction matrix M = I + y*(t*d)^T turns x into p.
    4. z = M^{-1} y, truncation, and a top-bottom certificate give c.
"""

import logging
from typing import Dict, Optional, Tuple

from ..core.base import LocalBase
from ..core.bezout import top_bottom_bezout
from ..core.errors import DegenerateRow, NotUnimodular, PrecisionLoss, RowTooShort
from ..core.laurent import LaurentPoly
from ..core.series import TruncSeries, series_invert, truncate_at
from .rows import BezoutCertificate, GLFactor, GLWitness, ReductionResult, RowBundle

logger = logging.getLogger(__name__)


class _RowState:
    """Mutable row/complement pair that records every elementary step"""

    def __init__(self, bundle: RowBundle):
        self.base = bundle.base
        self.row = list(bundle.row)
        self.complement = list(bundle.complement)
        self.witness = GLWitness.identity(len(self.row), self.base)

    def add_multiple(self, src: int, dst: int, c: LaurentPoly) -> None:
        """x_dst += c*x_src; the complement moves by the inverse factor."""
        if c.is_zero():
            return
        self.row[dst] = self.row[dst] + c * self.row[src]
        self.complement[src] = self.complement[src] - c * self.complement[dst]
        self.witness = self.witness.then(GLFactor.elementary(src, dst, c))

    def residue(self, i: int) -> LaurentPoly:
        return self.row[i].residue()


def _quotient_multiplier(
    num: LaurentPoly, den: LaurentPoly, degree: int, working: int, base: LocalBase
) -> LaurentPoly:
    """Lift of tau_{<=degree}(num/den), computed over the residue field."""
    if num.is_zero():
        return LaurentPoly.zero(base)
    quotient = TruncSeries.embed(num, working) * series_invert(TruncSeries.embed(den, working))
    return truncate_at(quotient, degree).lift(base)


def _residue_pattern_holds(row, precision: int) -> bool:
    for i, x in enumerate(row):
        target = LaurentPoly.constant(1 if i == 1 else 0, x.base.residue_field())
        error = x.residue() - target
        if not error.is_zero() and error.valuation() < precision:
            return False
    return True


def residue_normalize(bundle: RowBundle, precision: int) -> Tuple[RowBundle, GLWitness]:
    """
    Carry the residue row to (0, 1, 0, ..., 0) modulo t^precision

    The pivot is an index of minimal residue valuation (position 1 wins
    ties). It is added into position 1, every other position is cleared
    against it, and three more elementary steps make position 1 congruent
    to 1.

    Raises:
        DegenerateRow: if every residue entry vanishes
        PrecisionLoss: if the residue pattern does not hold at precision
    """
    base = bundle.base
    base.require_local("residue_normalize")
    if bundle.r < 2:
        raise RowTooShort(f"residue normalization needs r >= 2, got r={bundle.r}")

    state = _RowState(bundle)
    residues = [state.residue(i) for i in range(len(state.row))]
    candidates = [i for i, x in enumerate(residues) if not x.is_zero()]
    if not candidates:
        raise DegenerateRow("every residue entry vanishes")

    v_min = min(residues[i].valuation() for i in candidates)
    pivot = 1 if 1 in candidates and residues[1].valuation() == v_min else \
        min(i for i in candidates if residues[i].valuation() == v_min)
    if pivot != 1:
        state.add_multiple(pivot, 1, LaurentPoly.constant(1, base))

    x1 = state.residue(1)
    v = x1.valuation()
    degree = precision + 2 * abs(v) + 2
    working = degree + 2 * abs(v) + 2

    for j in range(len(state.row)):
        if j == 1:
            continue
        xj = state.residue(j)
        if xj.is_zero():
            continue
        state.add_multiple(1, j, -_quotient_multiplier(xj, x1, degree, working, base))

    if state.residue(1) != LaurentPoly.constant(1, x1.base):
        one = LaurentPoly.constant(1, x1.base)
        state.add_multiple(1, 0, _quotient_multiplier(one, x1, degree, working, base))
        state.add_multiple(0, 1, (one - state.residue(1)).lift(base))
        state.add_multiple(1, 0, -_quotient_multiplier(state.residue(0), state.residue(1), degree, working, base))

    if not _residue_pattern_holds(state.row, precision):
        raise PrecisionLoss(f"residue pattern (0, 1, 0, ...) does not hold modulo t^{precision}")

    logger.debug(f"residue_normalize used {len(state.witness.factors)} elementary steps")
    normalized = RowBundle(tuple(state.row), tuple(state.complement), bundle.unit_witness, base, bundle.seed)
    return normalized, state.witness


def _truncated_product(y: LaurentPoly, inv_det: TruncSeries, degree: int, precision: int) -> LaurentPoly:
    """tau_{<=degree}(y / det) for a power series unit det."""
    if y.is_zero() or y.valuation() > degree:
        return LaurentPoly.zero(y.base)
    return truncate_at(TruncSeries.embed(y, precision) * inv_det, degree)


def _min_valuation(polys) -> int:
    vals = [p.valuation() for p in polys if not p.is_zero()]
    return min(vals) if vals else 0


def weierstrass_reduce(bundle: RowBundle, precision: int) -> ReductionResult:
    """
    Reduce an exact unimodular Laurent row to Weierstrass form

    Args:
        bundle: exactly unimodular row with complement over a local base
        precision: working precision P for the series steps

    Returns:
        ReductionResult whose certificates have been re-verified

    Raises:
        RowTooShort: if r < 2
        PrecisionLoss: if P < k + 2 or a truncation loses information
        NotUnimodular: if a certificate fails to re-verify
    """
    base = bundle.base
    base.require_local("weierstrass_reduce")
    if bundle.r < 2:
        raise RowTooShort(f"the reduction pipeline requires r >= 2, got r={bundle.r}")

    normalized, witness = residue_normalize(bundle, precision)
    x = list(normalized.row)
    y = list(normalized.complement)

    shift = max(0, -_min_valuation(x), -_min_valuation(y))
    unit = normalized.unit_witness
    j = unit.valuation()
    k = 2 * shift + j
    if precision < k + 2:
        raise PrecisionLoss(f"precision {precision} < k + 2 = {k + 2}")

    u_inv = LaurentPoly.constant(base.inv(unit.coeff(j)), base)
    x = [xi.shift(shift) for xi in x]
    y = [(yi * u_inv).shift(shift) for yi in y]
    if shift:
        witness = witness.then(GLFactor.power(shift))

    one = LaurentPoly.constant(1, base)
    d = []
    for i, xi in enumerate(x):
        tail = xi.tail(k).shift(-(k + 1))
        d.append(one - tail if i == 0 else -tail)
    p = [x[0].truncate(k) + LaurentPoly.monomial(1, k + 1, base)] + [xi.truncate(k) for xi in x[1:]]

    correction = GLFactor.correction(y, d)
    witness = witness.then(correction)
    det_m = correction.determinant(len(x), base)

    inv_det = series_invert(TruncSeries.embed(det_m, precision))
    ell = k
    z_trunc = [_truncated_product(yi, inv_det, ell + 1, precision) for yi in y]

    total = LaurentPoly.zero(base)
    for pi, zi in zip(p, z_trunc):
        total = total + pi * zi
    excess = total - LaurentPoly.monomial(1, ell, base)
    if not excess.is_zero() and excess.valuation() <= ell:
        raise NotUnimodular(f"sum p_i*z_i is not t^{ell} modulo t^{ell + 1}")
    f = one + excess.shift(-ell)

    u, v = top_bottom_bezout(f, p[0], base)
    cofactors = [u * zi for zi in z_trunc]
    cofactors[0] = cofactors[0] + v.shift(ell)

    result = ReductionResult(
        source=bundle,
        weierstrass_row=tuple(p),
        gl_witness=witness,
        certificate=BezoutCertificate(tuple(cofactors), ell),
        k=k,
        shift=shift,
        precision=precision,
    )
    result.verify()
    logger.info(f"reduced r={bundle.r} row over {base}: k={k}, N={shift}, deg p0={p[0].degree()}")
    return result


def verify_reduction(bundle: RowBundle, result: ReductionResult) -> None:
    """Re-verify a stored result against its input bundle."""
    if result.source != bundle:
        raise NotUnimodular("reduction result was computed for a different input bundle")
    result.verify()


def constant_normalize(bundle: RowBundle) -> Tuple[RowBundle, GLWitness]:
    """
    Constant GL change making gamma(0) = (1, 0, ..., 0)

    Input is a polynomial row over R[t] with R local; the output lies in
    Um(R[t], (t)).
    """
    base = bundle.base
    base.require_local("constant_normalize")
    if any(not x.is_polynomial() for x in bundle.row):
        raise NotUnimodular("constant_normalize needs a row over R[t]")
    state = _RowState(bundle)
    constants = [x.coeff(0) for x in state.row]
    pivot = next((i for i, c in enumerate(constants) if base.is_unit(c)), None)
    if pivot is None:
        raise DegenerateRow("no constant coefficient is a unit")
    if pivot != 0:
        state.add_multiple(pivot, 0, LaurentPoly.constant(1, base))
    lead = state.row[0].coeff(0)
    for i in range(1, len(state.row)):
        c = state.row[i].coeff(0)
        if c:
            state.add_multiple(0, i, LaurentPoly.constant(base.canon(-c * base.inv(lead)), base))

    scale = LaurentPoly.constant(base.inv(lead), base)
    ones = [scale] + [LaurentPoly.constant(1, base)] * bundle.r
    state.row[0] = state.row[0] * scale
    state.complement[0] = state.complement[0] * LaurentPoly.constant(lead, base)
    witness = state.witness.then(GLFactor.diagonal(ones))
    normalized = RowBundle(tuple(state.row), tuple(state.complement), bundle.unit_witness, base, bundle.seed)
    return normalized, witness


class ReductionService:
    """Runs and re-verifies reductions at a configured precision"""

    def __init__(self, config: Optional[Dict] = None):
        """
        Initialize reduction service

        Args:
            config: the "reduction" config section
        """
        self.precision = int((config or {}).get("precision", 64))

    def reduce(self, bundle: RowBundle, precision: Optional[int] = None) -> ReductionResult:
        precision = precision or self.precision
        logger.info(f"Reducing r={bundle.r} bundle over {bundle.base} at precision {precision}")
        return weierstrass_reduce(bundle, precision)

    def verify(self, bundle: RowBundle, result: ReductionResult) -> None:
        verify_reduction(bundle, result)
        logger.info("Reduction certificates re-verified")
