"""
Test-Data Generators

Seeded random unimodular rows: Laurent rows over a local base built from
elementary matrices, and polynomial rows in Um(A, I) for the ideal-row
algorithms. All randomness comes from random.Random(seed).
"""

import logging
import random
from typing import Optional, Sequence, Tuple

from ..core.base import LocalBase
from ..core.errors import RowTooShort, UsageError
from ..core.laurent import LaurentPoly
from ..core.mvpoly import MvPoly
from .rows import GLFactor, GLWitness, IdealRow, RowBundle

logger = logging.getLogger(__name__)


def random_laurent(
    rng: random.Random,
    base: LocalBase,
    degree_range: Tuple[int, int] = (-2, 2),
    coefficient_bound: int = 2,
) -> LaurentPoly:
    """Nonzero Laurent polynomial with exponents in degree_range and small integer coefficients."""
    low, high = degree_range
    while True:
        coeffs = {}
        for e in range(low, high + 1):
            if rng.random() < 0.5:
                coeffs[e] = rng.randint(-coefficient_bound, coefficient_bound)
        poly = LaurentPoly(coeffs, base)
        if not poly.is_zero():
            return poly


def gen_example(
    r: int,
    base: LocalBase,
    seed: int,
    steps: int,
    degree_range: Tuple[int, int] = (-2, 2),
    coefficient_bound: int = 2,
) -> Tuple[RowBundle, GLWitness]:
    """
    Apply `steps` random elementary matrices to (1, 0, ..., 0)

    The complement is transformed by the inverse of each factor, so the
    result is exactly unimodular with unit witness 1.

    Returns:
        (bundle, witness) with bundle.row = (1, 0, ..., 0) * witness.matrix
    """
    if r < 1:
        raise RowTooShort(f"r must be >= 1, got {r}")
    base.require_local("gen_example")
    rng = random.Random(seed)
    n = r + 1
    zero = LaurentPoly.zero(base)
    one = LaurentPoly.constant(1, base)
    row = [one] + [zero] * r
    complement = [one] + [zero] * r
    witness = GLWitness.identity(n, base)

    for _ in range(steps):
        src, dst = rng.sample(range(n), 2)
        c = random_laurent(rng, base, degree_range, coefficient_bound)
        row[dst] = row[dst] + c * row[src]
        complement[src] = complement[src] - c * complement[dst]
        witness = witness.then(GLFactor.elementary(src, dst, c))

    logger.debug(f"generated r={r} row over {base} with seed={seed}, steps={steps}")
    return RowBundle(tuple(row), tuple(complement), one, base, seed=seed), witness


def random_poly(
    rng: random.Random,
    variables: Sequence[str],
    base: LocalBase,
    max_degree: int = 1,
    coefficient_bound: int = 2,
    terms: int = 2,
) -> MvPoly:
    """Small random polynomial in the given variables (possibly zero)."""
    width = len(variables)
    coeffs = {}
    for _ in range(terms):
        exps = [0] * width
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(width)] += 1
        coeffs[tuple(exps)] = rng.randint(-coefficient_bound, coefficient_bound)
    return MvPoly(tuple(variables), coeffs, base)


def gen_ideal_row(
    r: int,
    base: LocalBase,
    variables: Sequence[str],
    ideal: Sequence[MvPoly],
    seed: int,
    steps: int,
    max_degree: int = 1,
    coefficient_bound: int = 2,
) -> IdealRow:
    """
    Random row in Um(A, I) with a complement, A = base[variables]

    Elementary operations preserve the form (1, 0, ..., 0) mod I as long as
    the multiplier moving position 0 into another position lies in I.
    """
    if r < 1:
        raise RowTooShort(f"r must be >= 1, got {r}")
    if not ideal:
        raise UsageError("gen_ideal_row needs at least one ideal generator")
    rng = random.Random(seed)
    variables = tuple(variables)
    n = r + 1
    zero = MvPoly.zero(variables, base)
    one = MvPoly.constant(1, variables, base)
    row = [one] + [zero] * r
    complement = [one] + [zero] * r

    for _ in range(steps):
        src, dst = rng.sample(range(n), 2)
        c = random_poly(rng, variables, base, max_degree, coefficient_bound)
        if src == 0:
            c = c * rng.choice(list(ideal)).align(variables)
        if c.is_zero():
            continue
        row[dst] = row[dst] + c * row[src]
        complement[src] = complement[src] - c * complement[dst]

    return IdealRow(tuple(row), tuple(complement), tuple(g.align(variables) for g in ideal), variables)


def gen_length2(base: LocalBase, seed: int, steps: int, **kwargs) -> RowBundle:
    """Certified r = 1 bundle."""
    bundle, _ = gen_example(1, base, seed, steps, **kwargs)
    return bundle


def default_seed(seed: Optional[int]) -> int:
    return 0 if seed is None else int(seed) & 0xFFFFFFFFFFFFFFFF
