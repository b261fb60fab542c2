"""
Comaximality Certificates

Weierstrass polynomials and exact Bezout identities u*f + v*g = 1 in R[t]
for f with unit constant term and g a Weierstrass polynomial.
"""

import logging
from typing import Tuple

from .base import LocalBase
from .errors import NonUnitConstantTerm, NotInvertible, NotWeierstrass, UsageError
from .laurent import LaurentPoly, exact_divide, monic_divmod
from .matrix import LocalMatrix

logger = logging.getLogger(__name__)


def weierstrass_test(f: LaurentPoly, base: LocalBase) -> bool:
    """Monic polynomial in R[t] whose lower coefficients all lie in m."""
    base.require_local("weierstrass_test")
    if f.is_zero() or not f.is_polynomial() or not f.is_monic():
        return False
    top = f.degree()
    return all(base.in_maximal_ideal(c) for e, c in f.coeffs.items() if e != top)


def multiplication_matrix(f: LaurentPoly, g: LaurentPoly) -> LocalMatrix:
    """Matrix of multiplication by f on R[t]/(g) in the basis 1, t, ..., t^(n-1); column j is t^j*f."""
    base = f.base
    n = g.degree()
    _, current = monic_divmod(f, g)
    columns = []
    for _ in range(n):
        columns.append([base.elem(current.coeff(i)) for i in range(n)])
        _, current = monic_divmod(current.shift(1), g)
    rows = tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))
    return LocalMatrix(rows, base.zero(), base.one())


def invert_mod_monic(f: LaurentPoly, g: LaurentPoly, base: LocalBase) -> LaurentPoly:
    """
    Inverse of f modulo a monic g of degree n >= 1

    Solves M*u = e_0 for the multiplication matrix M of f; M is inverted over
    the local base, which requires det(M) to be a unit.

    Raises:
        NotInvertible: if det(M) is not a unit
    """
    base.require_local("invert_mod_monic")
    if not g.is_monic() or not g.is_polynomial() or g.degree() < 1:
        raise UsageError(f"modulus {g} must be monic of degree >= 1")
    matrix = multiplication_matrix(f, g)
    inverse, det = matrix.inverse_with_determinant()
    if not det.is_unit():
        raise NotInvertible(f"{f} is not invertible modulo {g}")
    first_column = inverse.column(0)
    return LaurentPoly({i: c.value for i, c in enumerate(first_column)}, base)


def top_bottom_bezout(f: LaurentPoly, g: LaurentPoly, base: LocalBase) -> Tuple[LaurentPoly, LaurentPoly]:
    """
    Bezout cofactors for f with unit constant term and a Weierstrass g

    Returns:
        (u, v) with u*f + v*g = 1 exactly in R[t]
    """
    if not weierstrass_test(g, base):
        raise NotWeierstrass(f"{g} is not a Weierstrass polynomial over {base}")
    if not f.is_polynomial() or not base.is_unit(f.coeff(0)):
        raise NonUnitConstantTerm(f"constant term of {f} is not a unit of {base}")

    u = invert_mod_monic(f, g, base)
    v = exact_divide(LaurentPoly.constant(1, base) - u * f, g)
    if u * f + v * g != 1:
        raise NotInvertible(f"Bezout identity failed to re-verify for ({f}, {g})")
    logger.debug(f"top-bottom certificate: u={u}, v={v}")
    return u, v
