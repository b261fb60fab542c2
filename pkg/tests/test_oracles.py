import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from src.core.base import LocalBase
from src.core.errors import NonHomogeneous, UnsupportedBase, UsageError
from src.core.mvpoly import MvPoly
from src.services.oracles import (
    HIGH_NAMES,
    LOW_NAMES,
    VariableReduction,
    apply_variable_reduction,
    cell_irreducibility,
    chain_audit,
    check_sequence,
    cleared_substitution,
    expected_case,
    irreducibility_precheck,
    localization_iso_verify,
    quadric_rank,
    regular_sequence_check,
    standard_reduction,
)
from src.services.presentations import select_localization_data

Q = LocalBase.rational()
TARGET = LOW_NAMES + HIGH_NAMES


def make_poly(expr, variables, base=Q):
    return MvPoly.from_sympy(expr, variables, base)


# ── quadrics ───────────────────────────────────────────────────────────────

@pytest.mark.parametrize("expr,rank", [
    ("x*y + z*w", 4),
    ("x**2", 1),
    ("x**2 + 2*x*y + y**2", 1),
    ("x*y", 2),
    ("0", 0),
])
def test_quadric_rank(expr, rank):
    assert quadric_rank(make_poly(expr, ("x", "y", "z", "w"))) == rank


def test_rank_of_mixed_form():
    q = make_poly("c0*dl + cl*d0 + e0*fl + el*f0", TARGET)
    assert quadric_rank(q) == 8


def test_rank_over_prime_field():
    f5 = LocalBase.prime_field(5)
    assert quadric_rank(make_poly("x*y", ("x", "y"), f5)) == 2
    assert quadric_rank(make_poly("x**2 + 4*y**2 + 4*x*y", ("x", "y"), f5)) == 1


def test_rank_rejects_non_quadrics_and_characteristic_two():
    with pytest.raises(NonHomogeneous):
        quadric_rank(make_poly("x**2 - y", ("x", "y")))
    with pytest.raises(UnsupportedBase):
        quadric_rank(make_poly("x*y", ("x", "y"), LocalBase.prime_field(2)))


QUADRIC_VARIABLES = ("a", "b", "c", "d")
QUADRIC_MONOMIALS = [
    tuple(int(i == u) + int(i == v) for i in range(4))
    for u in range(4)
    for v in range(u, 4)
]


@settings(max_examples=40, deadline=None)
@given(
    coeffs=st.lists(st.integers(-3, 3), min_size=10, max_size=10),
    upper=st.lists(st.integers(-2, 2), min_size=6, max_size=6),
    order=st.permutations(range(4)),
)
def test_quadric_rank_is_invariant_under_change_of_variables(coeffs, upper, order):
    q = MvPoly(QUADRIC_VARIABLES, dict(zip(QUADRIC_MONOMIALS, coeffs)), Q)
    new = [MvPoly.variable(QUADRIC_VARIABLES[j], QUADRIC_VARIABLES, Q) for j in order]
    entries = iter(upper)
    # unitriangular matrix followed by a permutation
    images = {}
    for i, name in enumerate(QUADRIC_VARIABLES):
        image = new[i]
        for j in range(i + 1, 4):
            image = image + new[j] * next(entries)
        images[name] = image
    moved = q.substitute(images, QUADRIC_VARIABLES)
    assert quadric_rank(moved) == quadric_rank(q)


# ── variable reductions ────────────────────────────────────────────────────

def test_variable_reduction_sends_missing_variables_to_zero():
    phi = VariableReduction(("x", "y", "z"), LOW_NAMES, {"x": "c0", "y": "d0"})
    image = apply_variable_reduction(phi, make_poly("x*y + z**2 + x", ("x", "y", "z")))
    assert image == make_poly("c0*d0 + c0", LOW_NAMES)


def test_variable_reduction_checks_targets():
    with pytest.raises(UsageError):
        VariableReduction(("x",), LOW_NAMES, {"x": "zz"})


def test_standard_reduction_sizes():
    assert standard_reduction(2, 2, 0).target == LOW_NAMES
    phi = standard_reduction(2, 2, 1)
    assert phi.target == TARGET
    assert phi.assignment["y2_1"] == "fl"


SOURCE_VARIABLES = ("x", "y", "z", "w")
RING_MAP = VariableReduction(SOURCE_VARIABLES, LOW_NAMES, {"x": "c0", "y": "d0", "z": "c0"})
source_polys = st.builds(
    lambda terms: MvPoly(SOURCE_VARIABLES, terms, Q),
    st.dictionaries(st.tuples(*[st.integers(0, 2)] * 4), st.integers(-3, 3), max_size=4),
)


@settings(max_examples=40, deadline=None)
@given(f=source_polys, g=source_polys)
def test_variable_reduction_is_a_ring_map(f, g):
    def phi(h):
        return apply_variable_reduction(RING_MAP, h)

    assert phi(f + g) == phi(f) + phi(g)
    assert phi(f * g) == phi(f) * phi(g)
    assert phi(MvPoly.constant(1, SOURCE_VARIABLES, Q)) == 1


# ── irreducibility ─────────────────────────────────────────────────────────

def test_precheck_needs_a_free_unit_monomial():
    variables = ("x", "y")
    g = make_poly("x*y", variables)
    phi = VariableReduction(variables, LOW_NAMES, {"x": "c0", "y": "d0"})
    report = irreducibility_precheck(g, [g], phi)
    assert not report.passed
    assert report.case is None


def test_precheck_rejects_low_rank_images():
    variables = ("x", "y", "z")
    g = make_poly("x*y + z**2", variables)
    phi = VariableReduction(variables, LOW_NAMES, {"x": "c0", "y": "d0"})
    report = irreducibility_precheck(g, [], phi)
    assert not report.passed
    assert report.unit_monomial is not None


def test_precheck_rejects_inhomogeneous_relations():
    variables = ("x", "y")
    phi = VariableReduction(variables, LOW_NAMES, {})
    with pytest.raises(NonHomogeneous):
        irreducibility_precheck(make_poly("x*y", variables), [make_poly("x - y", variables)], phi)


@pytest.mark.parametrize("k,n,ell,i,case", [
    (1, 2, 0, -1, 1),
    (1, 2, 0, 0, 1),
    (0, 1, 1, -1, 2),
    (2, 3, 1, 0, 2),
    (0, 2, 1, -1, 3),
    (0, 2, 1, 1, 3),
])
def test_cell_irreducibility_cases(k, n, ell, i, case):
    assert expected_case(k, n, ell) == case
    report = cell_irreducibility(2, k, n, ell, i, Q)
    assert report.passed, report.reason
    assert report.case == case
    assert min(report.ranks.values()) >= 3


# Hand-enumerated case per (k, l) for n = 2: l = 0 is case 1, otherwise
# case 2 when 2l = k or 2l > n, and case 3 otherwise.
BRANCH_TABLE = {
    (0, 1): 3, (0, 2): 2,
    (1, 0): 1, (1, 2): 2,
    (2, 0): 1, (2, 1): 2,
    (3, 0): 1, (3, 1): 3, (3, 2): 2,
}
IRREDUCIBILITY_CELLS = [
    (k, ell, i, case)
    for (k, ell), case in sorted(BRANCH_TABLE.items())
    for i in range(-1, ell + 1)
]


@pytest.mark.parametrize("k,ell,i,case", IRREDUCIBILITY_CELLS)
def test_cell_irreducibility_matches_branch_table(k, ell, i, case):
    assert expected_case(k, 2, ell) == case
    report = cell_irreducibility(2, k, 2, ell, i, Q)
    assert report.passed, report.reason
    assert report.case == case
    assert min(report.ranks.values()) >= 3


def test_cell_irreducibility_rejects_p_k():
    with pytest.raises(UsageError):
        cell_irreducibility(2, 1, 2, 1, 0, Q)


def test_characteristic_two_fails_the_rank_check():
    report = cell_irreducibility(2, 1, 2, 0, -1, LocalBase.prime_field(2))
    assert not report.passed
    assert report.case == 1
    assert "characteristic 2" in report.reason


# ── localization ───────────────────────────────────────────────────────────

@pytest.mark.parametrize("k,n,ell,i", [(3, 2, 2, 2), (0, 2, 1, 1), (1, 2, 0, 0), (3, 6, 2, 2)])
def test_localization_cofactors_verify(k, n, ell, i):
    data = select_localization_data(2, k, n, ell, i, Q)
    witness = localization_iso_verify(data)
    assert witness.passed
    assert len(witness.exponents) == len(data.t_names)
    assert not witness.normal_form_checked


def test_first_triangular_element_needs_one_power_of_a():
    data = select_localization_data(2, 3, 2, 2, 2, Q)
    witness = localization_iso_verify(data)
    assert witness.exponents == (1,)
    assert witness.to_dict()["r_sequence"][0]["t"] == "y0_0"


def test_localization_cross_check():
    data = select_localization_data(2, 3, 2, 2, 2, Q)
    witness = localization_iso_verify(data, cross_check=True)
    assert witness.passed
    assert witness.normal_form_checked


def test_r_sequence_kills_every_relation():
    data = select_localization_data(2, 0, 2, 1, 1, Q)
    witness = localization_iso_verify(data)
    assert witness.relations_cleared
    assert witness.to_dict()["relations_cleared"]
    for f in data.relations:
        assert cleared_substitution(f, data, witness.numerators, witness.exponents).is_zero()


def test_shifted_r_sequence_leaves_a_relation_alive():
    data = select_localization_data(2, 3, 2, 2, 2, Q)
    witness = localization_iso_verify(data)
    a = MvPoly.variable(data.a, data.variables, Q)
    # r_0 + 1 in place of r_0
    wrong = (witness.numerators[0] + a ** witness.exponents[0],) + witness.numerators[1:]
    leftovers = [cleared_substitution(f, data, wrong, witness.exponents) for f in data.relations]
    assert not all(f.is_zero() for f in leftovers)


# ── regular sequences ──────────────────────────────────────────────────────

def test_regular_sequence_single_quadric():
    report = regular_sequence_check(2, 0, 1, Q)
    assert report.passed
    assert report.details["hilbert"] == [1, 12, 77, 352]


def test_regular_sequence_by_quotients():
    assert regular_sequence_check(2, 0, 1, Q, method="quotient").passed


def test_sequence_with_a_zero_divisor_fails():
    variables = ("x", "y")
    sequence = [make_poly("x*y", variables), make_poly("x**2*y", variables)]
    assert not check_sequence(sequence, variables, method="quotient").passed
    assert not check_sequence(sequence, variables, method="hilbert").passed
    assert check_sequence([make_poly("x", variables), make_poly("y", variables)], variables, method="quotient").passed


def test_sequence_rejects_zero_and_unknown_methods():
    variables = ("x",)
    assert not check_sequence([make_poly("0", variables)], variables).passed
    with pytest.raises(UsageError):
        check_sequence([make_poly("x", variables)], variables, method="koszul")


def test_regular_sequence_needs_a_field():
    with pytest.raises(UnsupportedBase):
        regular_sequence_check(2, 0, 1, LocalBase.localized(2))


@pytest.mark.slow
def test_two_quadric_sequence_is_regular():
    report = regular_sequence_check(2, 1, 2, Q)
    assert report.passed
    assert report.details["hilbert"] == [1, 18, 169, 1104]


DESK_INSTANCES = [
    pytest.param(k, n, marks=pytest.mark.slow) if n == 2 else (k, n)
    for k, n in [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2), (3, 2)]
]
SEQUENCE_FIELDS = [Q, LocalBase.prime_field(2)]


@pytest.mark.parametrize("base", SEQUENCE_FIELDS, ids=["Q", "F2"])
@pytest.mark.parametrize("k,n", DESK_INSTANCES)
def test_hilbert_function_matches_complete_intersection(k, n, base):
    report = regular_sequence_check(2, k, n, base)
    assert report.passed
    assert report.details["hilbert"] == report.details["expected"]
    if (k, n) == (1, 2):
        assert report.details["hilbert"] == [1, 18, 169, 1104]


@pytest.mark.parametrize("base", SEQUENCE_FIELDS, ids=["Q", "F2"])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_quotient_method_passes_for_one_step_chains(k, base):
    report = regular_sequence_check(2, k, 1, base, method="quotient")
    assert report.passed
    assert all(stage["passed"] for stage in report.details["stages"])


# ── audit ──────────────────────────────────────────────────────────────────

@pytest.mark.slow
def test_chain_audit_small_grid():
    report = chain_audit(2, 1, 1, Q)
    assert report.passed
    assert {(entry["l"], entry["i"]) for entry in report.localization} == {(0, 0), (1, 0), (1, 1)}
