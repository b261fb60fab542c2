from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from src.core.base import LocalBase
from src.core.errors import UsageError
from src.core.mvpoly import MvPoly, merge_variables, poly_arith

Q = LocalBase.rational()
Z2 = LocalBase.localized(2)


def make_poly(expr, variables=("x", "y", "z", "w"), base=Q):
    return MvPoly.from_sympy(expr, variables, base)


small_polys = st.builds(
    lambda terms: MvPoly(("x", "y", "z"), terms, Q),
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
        st.integers(-3, 3),
        max_size=4,
    ),
)


# ── arithmetic ─────────────────────────────────────────────────────────────

def test_addition_cancels():
    assert poly_arith(make_poly("x + y"), make_poly("x - y"), "add") == make_poly("2*x")


def test_sum_of_two_products():
    x, y, z, w = (MvPoly.variable(v, ("x", "y", "z", "w"), Q) for v in "xyzw")
    assert poly_arith(x, y, "mul") + poly_arith(z, w, "mul") == make_poly("x*y + z*w")


def test_unit_denominators_over_localized_base():
    third_x = MvPoly(("x",), {(1,): Fraction(1, 3)}, Z2)
    assert third_x * 3 == MvPoly.variable("x", ("x",), Z2)


def test_operands_with_different_variable_lists_are_merged():
    a = MvPoly.variable("x", ("x",), Q)
    b = MvPoly.variable("y", ("y",), Q)
    total = a + b
    assert total.variables == ("x", "y")
    assert total == make_poly("x + y", ("y", "x"))


def test_unknown_operation_and_negative_power():
    x = MvPoly.variable("x", ("x",), Q)
    with pytest.raises(UsageError):
        poly_arith(x, x, "div")
    with pytest.raises(UsageError):
        x ** -1


def test_merge_variables_keeps_first_order():
    assert merge_variables(("a", "b"), ("c", "a", "d")) == ("a", "b", "c", "d")


# ── queries ────────────────────────────────────────────────────────────────

def test_degree_and_homogeneity():
    q = make_poly("x*y + z**2")
    assert q.degree() == 2
    assert q.is_homogeneous()
    assert not make_poly("x**2 - y").is_homogeneous()
    assert make_poly("x**2 - y").is_homogeneous(grades=(1, 2, 1, 1))
    assert MvPoly.zero(("x",), Q).degree() == -1


def test_coefficient_and_support():
    q = make_poly("3*x*y - z")
    assert q.coefficient({"x": 1, "y": 1}) == 3
    assert q.coefficient({"x": 1}) == 0
    assert frozenset({("z", 1)}) in q.support()
    assert q.used_variables() == ("x", "y", "z")


def test_substitute_is_a_ring_map():
    f = make_poly("x*y + 1")
    images = {"x": make_poly("z + w"), "y": make_poly("z - w")}
    assert f.substitute(images, ("x", "y", "z", "w")) == make_poly("z**2 - w**2 + 1")


def test_align_rejects_dropped_variables():
    with pytest.raises(UsageError):
        make_poly("x + y").align(("x",))


def test_sympy_round_trip():
    q = make_poly("x**2/2 - 3*y*w")
    assert MvPoly.from_sympy(q.to_sympy(), q.variables, Q) == q


def test_string_form():
    assert str(make_poly("x*y - 2*z**2")) == "x*y + -2*z^2"
    assert str(MvPoly.zero(("x",), Q)) == "0"


# ── properties ─────────────────────────────────────────────────────────────

@settings(max_examples=50)
@given(a=small_polys, b=small_polys, c=small_polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a


@settings(max_examples=50)
@given(a=small_polys, b=small_polys)
def test_substitution_respects_products(a, b):
    images = {"x": make_poly("y + z", ("x", "y", "z")), "y": make_poly("2*x", ("x", "y", "z"))}
    target = ("x", "y", "z")
    assert (a * b).substitute(images, target) == a.substitute(images, target) * b.substitute(images, target)
