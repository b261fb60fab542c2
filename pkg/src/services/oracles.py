"""
Verification Oracles

Independent checks of the structural claims about the universal rings:
variable reductions and the irreducibility criterion, Gram ranks of
quadrics, the localization isomorphism of a triangular presentation,
regular sequences (Hilbert functions or ideal quotients) and an audit of
the whole grid of auxiliary quotients.

Every check returns a report; the algebra underneath raises.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from ..core.base import BaseKind, LocalBase
from ..core.errors import AlgebraError, NonHomogeneous, OracleTimeout, UnsupportedBase, UsageError
from ..core.mvpoly import MvPoly
from .groebner import (
    DEFAULT_PAIR_BUDGET,
    MonomialOrder,
    buchberger,
    complete_intersection_hilbert,
    hilbert_function,
    ideal_quotient,
)
from .presentations import (
    LocalizationData,
    a_name,
    build_presentation,
    p_ell,
    select_localization_data,
    variable_names,
    x_name,
    y_name,
)

logger = logging.getLogger(__name__)

LOW_NAMES = ("c0", "d0", "e0", "f0")
HIGH_NAMES = ("cl", "dl", "el", "fl")


# ── variable reductions ────────────────────────────────────────────────────

@dataclass(frozen=True)
class VariableReduction:
    """Map S -> T u {0}; variables missing from the assignment go to 0"""
    source: Tuple[str, ...]
    target: Tuple[str, ...]
    assignment: Mapping[str, str]

    def __post_init__(self):
        unknown = [t for t in self.assignment.values() if t not in self.target]
        if unknown:
            raise UsageError(f"reduction targets {unknown} are not target variables")

    def to_dict(self) -> Dict[str, Any]:
        return {"target": list(self.target), "assignment": dict(sorted(self.assignment.items()))}


def apply_variable_reduction(phi: VariableReduction, f: MvPoly) -> MvPoly:
    """Monomial-wise substitution along phi."""
    images = {
        s: MvPoly.variable(t, phi.target, f.base)
        for s, t in phi.assignment.items()
    }
    return f.substitute(images, phi.target)


def standard_reduction(r: int, n: int, ell: int, excluded: Sequence[str] = ()) -> VariableReduction:
    """
    Four-variable (l = 0) or eight-variable (l >= 1) reduction

    x_{1,0}, y_{1,0}, x_{2,0}, y_{2,0} go to c0, d0, e0, f0; for l >= 1
    also x_{1,l}, y_{1,l}, x_{2,l}, y_{2,l} go to cl, dl, el, fl.
    """
    excluded = set(excluded)
    source = tuple(v for v in variable_names(r, n) if v not in excluded)
    assignment = {
        x_name(1, 0): "c0", y_name(1, 0): "d0",
        x_name(2, 0): "e0", y_name(2, 0): "f0",
    }
    target = LOW_NAMES
    if ell >= 1:
        assignment.update({
            x_name(1, ell): "cl", y_name(1, ell): "dl",
            x_name(2, ell): "el", y_name(2, ell): "fl",
        })
        target = LOW_NAMES + HIGH_NAMES
    return VariableReduction(source, target, assignment)


# ── quadrics ───────────────────────────────────────────────────────────────

def _gram_entries(q: MvPoly, field_base: LocalBase) -> Tuple[List[str], List[List[Fraction]]]:
    used = list(q.used_variables())
    index = {v: i for i, v in enumerate(used)}
    gram = [[Fraction(0)] * len(used) for _ in used]
    for monomial, coeff in q.monomials():
        names = [v for v, e in monomial.items() for _ in range(e)]
        u, v = index[names[0]], index[names[1]]
        if u == v:
            gram[u][u] = field_base.canon(coeff)
        else:
            half = field_base.div(field_base.normalize(coeff), Fraction(2))
            gram[u][v] = gram[v][u] = half
    return used, gram


def quadric_rank(q: MvPoly) -> int:
    """
    Rank of the symmetric Gram matrix of a quadratic form

    Raises:
        NonHomogeneous: if q is not homogeneous of degree 2
        UnsupportedBase: in characteristic 2
    """
    if q.is_zero():
        return 0
    if not q.is_homogeneous() or q.degree() != 2:
        raise NonHomogeneous(f"{q} is not a quadratic form", relation=q)
    field_base = q.base.fraction_field()
    if field_base.characteristic == 2:
        raise UnsupportedBase("Gram ranks are not defined in characteristic 2")
    used, gram = _gram_entries(q, field_base)
    if field_base.kind == BaseKind.PRIME_FIELD:
        domain = GF(field_base.characteristic)
        matrix = DomainMatrix([[domain(int(c)) for c in row] for row in gram], (len(used), len(used)), domain)
        return int(matrix.rank())
    matrix = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in gram])
    return int(matrix.rank())


def _sum_of_products(pairs: Sequence[Tuple[str, str]], variables: Sequence[str], base: LocalBase) -> Optional[MvPoly]:
    if any(a not in variables or b not in variables for a, b in pairs):
        return None
    total = MvPoly.zero(variables, base)
    for a, b in pairs:
        total = total + MvPoly.variable(a, variables, base) * MvPoly.variable(b, variables, base)
    return total


# ── irreducibility criterion ───────────────────────────────────────────────

@dataclass
class IrreducibilityReport:
    """Outcome of the irreducibility precheck for one relation"""
    passed: bool
    case: Optional[int]
    reason: str = ""
    unit_monomial: Optional[str] = None
    image: Optional[str] = None
    ranks: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "case": self.case,
            "reason": self.reason,
            "unit_monomial": self.unit_monomial,
            "image": self.image,
            "ranks": self.ranks,
        }


def _unit_monomial(g: MvPoly, f_list: Sequence[MvPoly]) -> Optional[str]:
    taken = set()
    for f in f_list:
        taken |= f.support()
    for monomial, coeff in g.monomials():
        key = frozenset(monomial.items())
        if g.base.is_unit(coeff) and key not in taken:
            return "*".join(v if e == 1 else f"{v}^{e}" for v, e in monomial.items())
    return None


def irreducibility_precheck(g: MvPoly, f_list: Sequence[MvPoly], phi: VariableReduction) -> IrreducibilityReport:
    """
    Check the hypotheses of the irreducibility criterion for g modulo f_list

    (a) some monomial of g with a unit coefficient occurs in no f_i;
    (b) phi maps g and the f_i to one of three patterns:
        1. c0*d0 + e0*f0, every f_i to 0
        2. c0*dl + cl*d0 + e0*fl + el*f0, every f_i to 0
        3. as 2, except exactly one f_j maps to cl*dl + el*fl;
    (c) the Gram ranks of the images are at least 3.

    Raises:
        NonHomogeneous: if some f_i is not homogeneous of degree 2
    """
    for f in f_list:
        if not f.is_homogeneous() or f.degree() != 2:
            raise NonHomogeneous(f"relation {f} is not homogeneous of degree 2", relation=f)

    unit = _unit_monomial(g, f_list)
    if unit is None:
        return IrreducibilityReport(False, None, "no unit-coefficient monomial of g avoids the relations")

    base = g.base
    image = apply_variable_reduction(phi, g)
    f_images = [apply_variable_reduction(phi, f) for f in f_list]
    nonzero = [img for img in f_images if not img.is_zero()]

    low = _sum_of_products([("c0", "d0"), ("e0", "f0")], phi.target, base)
    mixed = _sum_of_products([("c0", "dl"), ("cl", "d0"), ("e0", "fl"), ("el", "f0")], phi.target, base)
    high = _sum_of_products([("cl", "dl"), ("el", "fl")], phi.target, base)

    case = None
    if low is not None and image == low and not nonzero:
        case = 1
    elif mixed is not None and image == mixed:
        if not nonzero:
            case = 2
        elif len(nonzero) == 1 and nonzero[0] == high:
            case = 3
    if case is None:
        return IrreducibilityReport(
            False, None, "reduced images match none of the three patterns", unit, str(image)
        )

    try:
        ranks = {"g": quadric_rank(image)}
        if case == 3:
            ranks["f"] = quadric_rank(nonzero[0])
    except UnsupportedBase as e:
        return IrreducibilityReport(False, case, str(e), unit, str(image))
    if min(ranks.values()) < 3:
        return IrreducibilityReport(False, case, "Gram rank below 3", unit, str(image), ranks)
    return IrreducibilityReport(True, case, "", unit, str(image), ranks)


def expected_case(k: int, n: int, ell: int) -> int:
    """Case predicted for p_l in C_{l+1,i}."""
    if ell == 0:
        return 1
    return 2 if (2 * ell == k or 2 * ell > n) else 3


def cell_irreducibility(r: int, k: int, n: int, ell: int, i: int, base: LocalBase) -> IrreducibilityReport:
    """
    Precheck for p_l in C_{l+1,i}

    The relations a_0, ..., a_i are eliminated by setting those variables
    to zero, so the remaining relations are the quadrics p_m.
    """
    if ell == k:
        raise UsageError(f"p_{k} is inverted, not a relation; pick l != k")
    if not -1 <= i <= ell <= n:
        raise UsageError(f"need -1 <= i <= l <= n, got i={i}, l={ell}, n={n}")
    zeroed = [a_name(j) for j in range(i + 1)]
    full = variable_names(r, n)
    variables = tuple(v for v in full if v not in set(zeroed))
    identity = {v: MvPoly.variable(v, variables, base) for v in variables}

    def reduce(m: int) -> MvPoly:
        return p_ell(r, m, full, base).substitute(identity, variables)

    g = reduce(ell)
    f_list = [reduce(m) for m in range(ell + 1, n + 1) if m != k]
    report = irreducibility_precheck(g, f_list, standard_reduction(r, n, ell, zeroed))
    if report.passed and report.case != expected_case(k, n, ell):
        report.passed = False
        report.reason = f"case {report.case} differs from predicted case {expected_case(k, n, ell)}"
    return report


# ── localization isomorphism ───────────────────────────────────────────────

@dataclass
class LocalizationWitness:
    """
    t_m = N_m / a^(e_m) in A[1/a], with cofactors certifying
    a^(e_m)*t_m - N_m = sum_j q_(m,j) * f_j
    """
    data: LocalizationData
    numerators: Tuple[MvPoly, ...]
    exponents: Tuple[int, ...]
    cofactors: Tuple[Tuple[MvPoly, ...], ...]
    passed: bool = False
    normal_form_checked: bool = False
    relations_cleared: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "data": self.data.to_dict(),
            "r_sequence": [
                {"t": t, "numerator": str(num), "a_power": e}
                for t, num, e in zip(self.data.t_names, self.numerators, self.exponents)
            ],
            "passed": self.passed,
            "relations_cleared": self.relations_cleared,
            "normal_form_checked": self.normal_form_checked,
        }


def _t_exponents(exps: Tuple[int, ...], positions: Sequence[int]) -> List[int]:
    return [exps[p] for p in positions]


def cleared_substitution(
    f: MvPoly,
    data: LocalizationData,
    numerators: Sequence[MvPoly],
    exponents: Sequence[int],
) -> MvPoly:
    """
    a^D * f(t_j -> N_j / a^(e_j)) as a polynomial, D the least power clearing denominators

    Zero exactly when the substitution kills f in A[1/a].
    """
    variables = data.variables
    base = data.base
    a = MvPoly.variable(data.a, variables, base)
    index = {v: idx for idx, v in enumerate(variables)}
    positions = [index[t] for t in data.t_names[: len(numerators)]]
    terms = []
    for exps, coeff in f.terms.items():
        alpha = _t_exponents(exps, positions)
        rest = [0 if idx in positions else e for idx, e in enumerate(exps)]
        weight = sum(al * e for al, e in zip(alpha, exponents))
        terms.append((MvPoly(variables, {tuple(rest): coeff}, base), alpha, weight))
    depth = max((w for _, _, w in terms), default=0)
    cleared = MvPoly.zero(variables, base)
    for monomial, alpha, weight in terms:
        term = monomial * a ** (depth - weight)
        for numerator, al in zip(numerators, alpha):
            if al:
                term = term * numerator ** al
        cleared = cleared + term
    return cleared


def localization_iso_verify(
    data: LocalizationData,
    cross_check: bool = False,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> LocalizationWitness:
    """
    Invert the triangular relations a*t_m = g_m(t_0, ..., t_(m-1)) over A[1/a]

    r_m = a^(-1) g_m(r_0, ..., r_(m-1)) is kept as N_m / a^(e_m). Substituting
    t_m -> r_m into every f_m and clearing denominators must give 0. The
    converse identity t_m = r_m in the localized quotient is certified by
    explicit cofactors expressing a^(e_m)*t_m - N_m in terms of f_0, ..., f_m,
    checked by exact expansion. With cross_check the same elements are also reduced
    against a degree-bounded Groebner basis of the relations.

    Cofactor and substitution failures are reported through `passed`.

    Raises:
        OracleTimeout: if the cross check exceeds the pair budget
    """
    variables = data.variables
    base = data.base
    a = MvPoly.variable(data.a, variables, base)
    ts = [MvPoly.variable(t, variables, base) for t in data.t_names]
    index = {v: idx for idx, v in enumerate(variables)}
    t_positions = [index[t] for t in data.t_names]
    one = MvPoly.constant(1, variables, base)

    numerators: List[MvPoly] = []
    exponents: List[int] = []
    reduced: List[MvPoly] = []  # E_j = a^(e_j)*t_j - N_j
    cofactors: List[List[MvPoly]] = []

    for m, g in enumerate(data.g_list):
        terms = []
        for exps, coeff in g.terms.items():
            alpha = _t_exponents(exps, t_positions)
            rest = [0 if idx in t_positions else e for idx, e in enumerate(exps)]
            monomial = MvPoly(variables, {tuple(rest): coeff}, base)
            weight = sum(al * exponents[j] for j, al in enumerate(alpha) if al)
            terms.append((monomial, alpha, weight))
        depth = max((w for _, _, w in terms), default=0)

        numerator = MvPoly.zero(variables, base)
        combination = [MvPoly.zero(variables, base) for _ in range(m + 1)]
        for monomial, alpha, weight in terms:
            scale = monomial * a ** (depth - weight)
            factors = [(j, al) for j, al in enumerate(alpha) if al]
            xs = [(a ** exponents[j] * ts[j]) ** al for j, al in factors]
            ys = [numerators[j] ** al for j, al in factors]
            product = one
            for y in ys:
                product = product * y
            numerator = numerator + scale * product
            # prod X - prod Y = sum_j X_<j * (X_j - Y_j) * Y_>j
            for pos, (j, al) in enumerate(factors):
                left = one
                for x in xs[:pos]:
                    left = left * x
                right = one
                for y in ys[pos + 1:]:
                    right = right * y
                lifted = a ** exponents[j] * ts[j]
                geometric = MvPoly.zero(variables, base)
                for s in range(al):
                    geometric = geometric + lifted ** s * numerators[j] ** (al - 1 - s)
                weight_j = scale * left * geometric * right
                for idx, q in enumerate(cofactors[j]):
                    combination[idx] = combination[idx] + weight_j * q
        combination[m] = combination[m] + a ** depth

        numerators.append(numerator)
        exponents.append(depth + 1)
        reduced.append(a ** (depth + 1) * ts[m] - numerator)
        cofactors.append(combination)

    passed = True
    for m, (element, combination) in enumerate(zip(reduced, cofactors)):
        expansion = MvPoly.zero(variables, base)
        for q, f in zip(combination, data.relations):
            expansion = expansion + q * f
        if expansion != element:
            logger.warning(f"cofactor check failed for t_{m} = {data.t_names[m]}")
            passed = False

    cleared = all(
        cleared_substitution(f, data, numerators, exponents).is_zero() for f in data.relations
    )
    if not cleared:
        logger.warning(f"substituting the r-sequence does not kill the relations at {data.a}")
        passed = False

    checked = False
    if passed and cross_check:
        bound = max((e.degree() for e in reduced), default=0)
        gb = buchberger(
            data.relations,
            variables=tuple(reversed(variables)),
            pair_budget=pair_budget,
            degree_bound=bound,
        )
        passed = all(gb.contains(e) for e in reduced)
        checked = True

    logger.info(
        f"localization at {data.a} for (l={data.ell}, i={data.i}): "
        f"{'verified' if passed else 'FAILED'}, a-powers {exponents}"
    )
    return LocalizationWitness(
        data,
        tuple(numerators),
        tuple(exponents),
        tuple(tuple(c) for c in cofactors),
        passed,
        checked,
        cleared,
    )


# ── regular sequences ──────────────────────────────────────────────────────

@dataclass
class SequenceReport:
    """Outcome of a regular-sequence check"""
    passed: bool
    method: str
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "method": self.method, **self.details}


def _require_field(base: LocalBase) -> None:
    if not base.is_field:
        raise UnsupportedBase(f"regular-sequence checks run over Q or F_p, not {base}")


def check_sequence(
    sequence: Sequence[MvPoly],
    variables: Sequence[str],
    method: str = "hilbert",
    degree: int = 3,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    order: Optional[MonomialOrder] = None,
) -> SequenceReport:
    """
    Decide whether a sequence of homogeneous polynomials is regular

    hilbert: the Hilbert function of the ideal agrees through `degree`
    with that of a complete intersection of the same degrees.
    quotient: (f_1, ..., f_s : f_(s+1)) = (f_1, ..., f_s) at every stage.
    """
    variables = tuple(variables)
    sequence = [f.align(variables) for f in sequence]
    if any(f.is_zero() for f in sequence):
        return SequenceReport(False, method, {"reason": "zero element"})

    if method == "hilbert":
        gb = buchberger(sequence, variables=variables, order=order, pair_budget=pair_budget, degree_bound=degree)
        observed = hilbert_function(gb, degree)
        expected = complete_intersection_hilbert(len(variables), [f.degree() for f in sequence], degree)
        return SequenceReport(
            observed == expected,
            method,
            {"degree": degree, "hilbert": observed, "expected": expected, "pairs": gb.pairs},
        )

    if method == "quotient":
        stages = []
        for s in range(1, len(sequence)):
            head, nxt = sequence[:s], sequence[s]
            quotient = ideal_quotient(head, nxt, variables=variables, pair_budget=pair_budget)
            gb = buchberger(head, variables=variables, order=order, pair_budget=pair_budget)
            ok = all(gb.contains(q) for q in quotient)
            stages.append({"stage": s, "quotient_generators": len(quotient), "passed": ok})
            if not ok:
                return SequenceReport(False, method, {"stages": stages})
        return SequenceReport(True, method, {"stages": stages})

    raise UsageError(f"unknown regular-sequence method {method!r}")


def regular_sequence_check(
    r: int,
    k: int,
    n: int,
    base: LocalBase,
    method: str = "hilbert",
    degree: int = 3,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    order: Optional[MonomialOrder] = None,
) -> SequenceReport:
    """Check p_n, ..., p_k omitted, ..., p_0 for B_{r,k,n} over a field."""
    _require_field(base)
    presentation = build_presentation(r, k, n, base)
    sequence = list(reversed(presentation.relations))
    report = check_sequence(sequence, presentation.gb_variables(), method, degree, pair_budget, order)
    report.details["instance"] = {"r": r, "k": k, "n": n, "base": base.name}
    logger.info(f"regular sequence (r={r}, k={k}, n={n}) over {base} by {method}: {report.passed}")
    return report


# ── grid audit ─────────────────────────────────────────────────────────────

@dataclass
class AuditReport:
    """Per-cell results of the grid audit"""
    passed: bool
    irreducibility: List[Dict[str, Any]]
    localization: List[Dict[str, Any]]

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "irreducibility": self.irreducibility, "localization": self.localization}


def chain_audit(
    r: int,
    k: int,
    n: int,
    base: LocalBase,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> AuditReport:
    """
    Run the irreducibility precheck for every l != k, -1 <= i <= l and the
    localization check for every 0 <= i <= l <= n
    """
    passed = True
    irreducibility = []
    for ell in range(n + 1):
        if ell == k:
            continue
        for i in range(-1, ell + 1):
            try:
                report = cell_irreducibility(r, k, n, ell, i, base).to_dict()
            except OracleTimeout:
                raise
            except AlgebraError as exc:
                report = {"passed": False, "case": None, "reason": str(exc)}
            passed = passed and report["passed"]
            irreducibility.append({"l": ell, "i": i, **report})

    localization = []
    for ell in range(n + 1):
        for i in range(ell + 1):
            try:
                data = select_localization_data(r, k, n, ell, i, base)
                witness = localization_iso_verify(data, pair_budget=pair_budget)
                entry = {"passed": witness.passed, "a": data.a, "t": list(data.t_names), "a_powers": list(witness.exponents)}
            except OracleTimeout:
                raise
            except AlgebraError as exc:
                entry = {"passed": False, "reason": str(exc)}
            passed = passed and entry["passed"]
            localization.append({"l": ell, "i": i, **entry})

    logger.info(f"chain audit (r={r}, k={k}, n={n}): {'pass' if passed else 'fail'}")
    return AuditReport(passed, irreducibility, localization)
