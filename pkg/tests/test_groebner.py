import hypothesis.strategies as st
import pytest
import sympy
from hypothesis import given, settings

from src.core.base import LocalBase
from src.core.errors import OracleTimeout, UsageError
from src.core.mvpoly import MvPoly
from src.services.groebner import (
    MonomialOrder,
    OrderKind,
    buchberger,
    complete_intersection_hilbert,
    divide,
    hilbert_function,
    ideal_quotient,
)

Q = LocalBase.rational()
F5 = LocalBase.prime_field(5)
XY = ("x", "y")
XYZW = ("x", "y", "z", "w")


def make_poly(expr, variables=XY, base=Q):
    return MvPoly.from_sympy(expr, variables, base)


def same_ideal(left, right, variables):
    a = buchberger(left, variables=variables)
    b = buchberger(right, variables=variables)
    return a.generators() == b.generators()


# ── bases ──────────────────────────────────────────────────────────────────

def test_principal_ideal_is_its_own_basis():
    gb = buchberger([make_poly("2*x")], variables=XY)
    assert gb.generators() == [make_poly("x")]


def test_s_pair_adds_missing_generator():
    gb = buchberger([make_poly("x**2 + y"), make_poly("x*y")], variables=XY)
    assert set(gb.generators()) == {make_poly("x**2 + y"), make_poly("x*y"), make_poly("y**2")}
    assert gb.contains(make_poly("y**2"))
    assert not gb.contains(make_poly("y"))
    assert gb.pairs >= 1


def test_normal_form_modulo_x():
    gb = buchberger([make_poly("x")], variables=XY)
    assert gb.normal_form(make_poly("x**2 + y")) == make_poly("y")


xy_polys = st.builds(
    lambda terms: MvPoly(XY, terms, Q),
    st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3), max_size=3),
)


@settings(max_examples=40, deadline=None)
@given(f=xy_polys, h0=xy_polys, h1=xy_polys)
def test_normal_form_ignores_explicit_combinations_of_generators(f, h0, h1):
    generators = [make_poly("x**2 + y"), make_poly("x*y - y**2")]
    gb = buchberger(generators, variables=XY)
    combination = h0 * generators[0] + h1 * generators[1]
    assert gb.normal_form(combination).is_zero()
    remainder = gb.normal_form(f)
    assert gb.normal_form(f + combination) == remainder
    assert gb.normal_form(remainder) == remainder


def test_unit_ideal():
    gb = buchberger([make_poly("x"), make_poly("x + 1")], variables=XY)
    assert gb.is_unit_ideal()
    assert gb.generators() == [make_poly("1")]


def test_basis_over_prime_field_is_monic():
    gb = buchberger([make_poly("2*x + 1", ("x",), F5)])
    assert gb.generators() == [make_poly("x + 3", ("x",), F5)]


def test_localized_inputs_use_the_fraction_field():
    gb = buchberger([make_poly("x", base=LocalBase.localized(2))], variables=XY)
    assert gb.base == Q


def test_empty_ideal_needs_a_base():
    with pytest.raises(UsageError):
        buchberger([], variables=XY)
    assert buchberger([], variables=XY, base=Q).generators() == []


def test_pair_budget_is_enforced():
    with pytest.raises(OracleTimeout) as exc:
        buchberger([make_poly("x**2 + y"), make_poly("x*y")], variables=XY, pair_budget=0)
    assert exc.value.pairs == 1


def test_monomial_orders():
    assert MonomialOrder.from_name("lex").kind == OrderKind.LEX
    with pytest.raises(UsageError):
        MonomialOrder.from_name("grlex")
    block = MonomialOrder(OrderKind.BLOCK, block=1)
    assert block.key((1, 0)) > block.key((0, 5))


# ── division and quotients ─────────────────────────────────────────────────

def test_exact_division():
    assert divide(make_poly("x**2 - y**2"), make_poly("x - y")) == make_poly("x + y")
    with pytest.raises(UsageError):
        divide(make_poly("x**2 + 1"), make_poly("x - y"))
    with pytest.raises(UsageError):
        divide(make_poly("x"), make_poly("0"))


def test_quotient_by_a_factor():
    quotient = ideal_quotient([make_poly("x*y")], make_poly("x"), variables=XY)
    assert same_ideal(quotient, [make_poly("y")], XY)


def test_quotient_of_monomial_ideal():
    quotient = ideal_quotient([make_poly("x**2*y"), make_poly("x*y**2")], make_poly("x*y"), variables=XY)
    assert same_ideal(quotient, [make_poly("x"), make_poly("y")], XY)


def test_quotient_by_a_non_zero_divisor_is_the_ideal():
    quotient = ideal_quotient([make_poly("x")], make_poly("y"), variables=XY)
    assert same_ideal(quotient, [make_poly("x")], XY)


def test_tag_variable_is_reserved():
    tagged = ("_w", "x")
    with pytest.raises(UsageError):
        ideal_quotient([make_poly("x", tagged)], make_poly("x", tagged))


# ── Hilbert functions ──────────────────────────────────────────────────────

def test_hilbert_function_of_one_quadric():
    gb = buchberger([make_poly("x*y + z*w", XYZW)], variables=XYZW)
    assert hilbert_function(gb, 3) == [1, 4, 9, 16]


def test_complete_intersection_series():
    assert complete_intersection_hilbert(4, [2], 3) == [1, 4, 9, 16]
    assert complete_intersection_hilbert(18, [2, 2], 3) == [1, 18, 169, 1104]
    assert complete_intersection_hilbert(0, [], 2) == [1, 0, 0]


# ── cross-check ────────────────────────────────────────────────────────────

@pytest.mark.parametrize("generators", [
    ["x**2 + y", "x*y"],
    ["x**3 - y*z", "y**2 - x*z", "z**2 - x**2*y"],
    ["x*y - z**2", "x**2 - y*z + w**2", "x + y + z + w"],
])
def test_reduced_basis_agrees_with_sympy(generators):
    variables = XYZW
    symbols = sympy.symbols(variables)
    ours = buchberger([make_poly(g, variables) for g in generators], variables=variables)
    theirs = sympy.groebner([sympy.sympify(g) for g in generators], *symbols, order="grevlex", domain=sympy.QQ)
    assert set(ours.generators()) == {make_poly(g.as_expr(), variables) for g in theirs.exprs}
