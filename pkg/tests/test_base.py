import itertools
import random
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from src.core.base import BaseKind, LocalBase, format_fraction, parse_fraction
from src.core.bezout import invert_mod_monic, top_bottom_bezout, weierstrass_test
from src.core.errors import (
    NonUnitConstantTerm,
    NotAUnit,
    NotInBase,
    NotInvertible,
    NotLocalBase,
    NotWeierstrass,
    UsageError,
)
from src.core.laurent import LaurentPoly, exact_divide, monic_divmod
from src.core.matrix import LocalMatrix
from src.core.mvpoly import MvPoly
from src.core.series import TruncSeries

Q = LocalBase.rational()
Z2 = LocalBase.localized(2)
Z3 = LocalBase.localized(3)
F5 = LocalBase.prime_field(5)


def make_poly(base, *coeffs, start=0):
    return LaurentPoly.from_list(coeffs, base, start)


def make_matrix(base, rows):
    return LocalMatrix(
        tuple(tuple(base.elem(x) for x in row) for row in rows),
        base.zero(),
        base.one(),
    )


# ── base rings ─────────────────────────────────────────────────────────────

@pytest.mark.parametrize("name,kind,p", [
    ("Q", BaseKind.RATIONAL, 0),
    ("F5", BaseKind.PRIME_FIELD, 5),
    ("Z(3)", BaseKind.LOCALIZED, 3),
    ("Z", BaseKind.INTEGERS, 0),
    ("Z[1/6]", BaseKind.INVERTED, 6),
])
def test_from_name_parses_every_kind(name, kind, p):
    base = LocalBase.from_name(name)
    assert base.kind == kind
    assert base.p == p
    assert base.name == name


def test_from_name_rejects_unknown_rings():
    with pytest.raises(UsageError):
        LocalBase.from_name("R")
    with pytest.raises(UsageError):
        LocalBase.from_name("F4")


def test_localized_membership_follows_denominators():
    assert Z2.contains(Fraction(1, 3))
    assert not Z2.contains(Fraction(1, 2))
    with pytest.raises(NotInBase):
        Z2.normalize("1/4")


def test_localized_units_and_residues():
    assert Z2.is_unit(Fraction(3, 5))
    assert not Z2.is_unit(Fraction(6))
    assert Z2.in_maximal_ideal(Fraction(2, 3))
    assert Z3.residue(Fraction(1, 2)) == 2
    assert Z3.residue_field() == LocalBase.prime_field(3)


def test_prime_field_normalizes_into_range():
    assert F5.normalize(-1) == 4
    assert F5.normalize("1/2") == 3
    assert F5.inv(Fraction(2)) == 3


def test_inverted_ring_units():
    z6 = LocalBase.inverted(6)
    assert z6.inverted_primes == (2, 3)
    assert z6.is_unit(Fraction(12))
    assert not z6.is_unit(Fraction(5))
    assert z6.contains(Fraction(5, 18))
    assert not z6.contains(Fraction(1, 5))


def test_global_rings_are_not_local():
    with pytest.raises(NotLocalBase):
        LocalBase.integers().residue_field()


def test_elem_arithmetic_and_inverse():
    x = Z3.elem("1/2")
    assert (x * 2).value == 1
    assert x.inverse() == 2
    with pytest.raises(NotInvertible):
        Z3.elem(3).inverse()


def test_exact_rationals_only():
    assert parse_fraction("-3/6") == Fraction(-1, 2)
    assert format_fraction(Fraction(4, 2)) == "2"
    assert format_fraction(Fraction(-1, 2)) == "-1/2"
    with pytest.raises(UsageError):
        parse_fraction("0.5")


# ── Laurent polynomials ────────────────────────────────────────────────────

def test_laurent_arithmetic_drops_zero_terms():
    f = make_poly(Q, 1, 1)
    g = make_poly(Q, 1, -1)
    assert f * g == make_poly(Q, 1, 0, -1)
    assert (f - f).is_zero()


def test_unit_inverse_of_monomial():
    u = LaurentPoly.monomial(2, -3, Q)
    assert u.unit_inverse() == LaurentPoly.monomial(Fraction(1, 2), 3, Q)
    assert u ** -1 * u == 1
    with pytest.raises(NotAUnit):
        make_poly(Q, 1, 1).unit_inverse()


def test_truncate_and_tail_split_a_polynomial():
    f = make_poly(Q, 1, 2, 3, 4, start=-1)
    assert f.truncate(0) + f.tail(0) == f
    assert f.truncate(0) == make_poly(Q, 1, 2, start=-1)


def test_monic_divmod():
    q, rem = monic_divmod(make_poly(Q, 1, 0, 0, 1), make_poly(Q, 1, 1))
    assert q == make_poly(Q, 1, -1, 1)
    assert rem.is_zero()
    with pytest.raises(UsageError):
        exact_divide(make_poly(Q, 1, 0, 1), make_poly(Q, 1, 1))


def test_scale_variable_moves_between_bases():
    f = make_poly(Q, 1, Fraction(1, 2))
    scaled = f.scale_variable(Fraction(2), LocalBase.integers())
    assert scaled == make_poly(LocalBase.integers(), 1, 1)


def test_residue_and_lift_over_localized_base():
    f = make_poly(Z2, 2, 1, 3)
    assert f.residue() == make_poly(LocalBase.prime_field(2), 0, 1, 1)
    assert f.residue().lift(Z2) == make_poly(Z2, 0, 1, 1)


# ── matrices ───────────────────────────────────────────────────────────────

def test_determinant_and_inverse_over_localized_base():
    m = make_matrix(Z2, [[1, 2], [3, 5]])
    inverse, det = m.inverse_with_determinant()
    assert det == -1
    assert m @ inverse == LocalMatrix.identity(2, Z2.zero(), Z2.one())
    assert m.determinant() == det


def test_inverse_needs_unit_determinant():
    with pytest.raises(NotInvertible):
        make_matrix(Z2, [[2, 0], [0, 1]]).inverse()


def test_elementary_matrix_adds_multiple_of_row_entry():
    zero, one = LaurentPoly.zero(Q), LaurentPoly.constant(1, Q)
    t = LaurentPoly.monomial(1, 1, Q)
    e = LocalMatrix.elementary(2, 0, 1, t, zero, one)
    assert e.left_multiply((one, zero)) == (one, t)


# ── Weierstrass polynomials and Bezout certificates ────────────────────────

@pytest.mark.parametrize("poly,base,expected", [
    (make_poly(Z2, 2, 2, 1), Z2, True),
    (make_poly(Z2, 1, 1), Z2, False),
    (make_poly(Q, 0, 1), Q, True),
    (make_poly(Z2, 2, 1, 3), Z2, False),
])
def test_weierstrass_test(poly, base, expected):
    assert weierstrass_test(poly, base) is expected


def test_invert_mod_monic():
    g = make_poly(Z2, 2, 2, 1)
    assert invert_mod_monic(make_poly(Z2, 1), make_poly(Z2, 0, 0, 0, 1), Z2) == make_poly(Z2, 1)
    assert invert_mod_monic(make_poly(Z2, 1, 1), g, Z2) == make_poly(Z2, -1, -1)
    assert invert_mod_monic(make_poly(Z2, 1, 2), make_poly(Z2, 0, 1), Z2) == make_poly(Z2, 1)


def test_invert_mod_monic_detects_non_units():
    with pytest.raises(NotInvertible):
        invert_mod_monic(make_poly(Z2, 0, 1), make_poly(Z2, 2, 0, 1), Z2)


@pytest.mark.parametrize("f,g,u,v", [
    (make_poly(Z2, 1), make_poly(Z2, 0, 1), make_poly(Z2, 1), LaurentPoly.zero(Z2)),
    (make_poly(Z2, 1, 1), make_poly(Z2, 2, 2, 1), make_poly(Z2, -1, -1), make_poly(Z2, 1)),
    (make_poly(Z2, 3, 1), make_poly(Z2, 0, 1), make_poly(Z2, Fraction(1, 3)), make_poly(Z2, Fraction(-1, 3))),
])
def test_top_bottom_bezout(f, g, u, v):
    assert top_bottom_bezout(f, g, Z2) == (u, v)
    assert u * f + v * g == 1


def test_top_bottom_bezout_preconditions():
    with pytest.raises(NotWeierstrass):
        top_bottom_bezout(make_poly(Z2, 1), make_poly(Z2, 1, 1), Z2)
    with pytest.raises(NonUnitConstantTerm):
        top_bottom_bezout(make_poly(Z2, 2, 1), make_poly(Z2, 0, 1), Z2)


def make_bezout_pair(rng, base):
    p = base.p
    constant = rng.choice([c for c in range(-4, 5) if c % p])
    f = [constant] + [rng.randint(-4, 4) for _ in range(rng.randint(0, 5))]
    g = [p * rng.randint(-2, 2) for _ in range(rng.randint(1, 5))] + [1]
    return make_poly(base, *f), make_poly(base, *g)


@pytest.mark.parametrize("base", [Z2, Z3], ids=["Z(2)", "Z(3)"])
def test_top_bottom_bezout_on_random_pairs(base):
    rng = random.Random(base.p)
    for _ in range(100):
        f, g = make_bezout_pair(rng, base)
        assert weierstrass_test(g, base)
        u, v = top_bottom_bezout(f, g, base)
        assert u * f + v * g == 1


# ── canonical forms and units ──────────────────────────────────────────────

F3 = LocalBase.prime_field(3)


def has_inverse_in_window(p, bound):
    exponents = range(-bound, bound + 1)
    for values in itertools.product(range(3), repeat=len(exponents)):
        if p * LaurentPoly(dict(zip(exponents, values)), F3) == 1:
            return True
    return False


@settings(max_examples=30, deadline=None)
@given(coeffs=st.dictionaries(st.integers(-1, 1), st.integers(1, 2), min_size=1, max_size=3))
def test_unit_recognition_matches_exhaustive_search(coeffs):
    p = LaurentPoly(coeffs, F3)
    assert p.is_unit() == has_inverse_in_window(p, 2)


@settings(max_examples=60)
@given(value=st.builds(
    Fraction,
    st.integers(-50, 50),
    st.integers(1, 20).filter(lambda d: d % 3 and d % 5),
))
def test_normalizing_twice_equals_normalizing_once(value):
    for base in (Q, Z3, F5):
        once = base.normalize(value)
        assert base.normalize(once) == once
        poly = LaurentPoly({-1: value, 2: 2 * value}, base)
        assert LaurentPoly(poly.coeffs, base) == poly
        mv = MvPoly(("x", "y"), {(1, 0): value, (0, 2): -value}, base)
        assert MvPoly(mv.variables, mv.terms, base).terms == mv.terms
        series = TruncSeries(base, 4, {0: value, 3: value})
        assert TruncSeries(base, series.precision, series.coeffs) == series
