"""
Universal Ring Presentations

Finite stages B_{r,k,n} of the universal rings, their localizations at
p_k, the chain maps between stages, the universal homomorphism attached
to a normalized unimodular pair, the grid of auxiliary quotients C_{l,i},
and the data for the localization isomorphism of a grid cell.

Variables are named "x{i}_{j}" and "y{i}_{j}"; a_j = x0_j and b_j = y0_j.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from ..core.base import LocalBase, format_fraction
from ..core.errors import NonHomogeneous, NotNormalized, RowTooShort, TriangularityViolation, UsageError
from ..core.laurent import LaurentPoly
from ..core.mvpoly import MvPoly
from .groebner import DEFAULT_PAIR_BUDGET, buchberger
from .rows import check_schema

logger = logging.getLogger(__name__)


def x_name(i: int, j: int) -> str:
    return f"x{i}_{j}"


def y_name(i: int, j: int) -> str:
    return f"y{i}_{j}"


def a_name(j: int) -> str:
    return x_name(0, j)


def b_name(j: int) -> str:
    return y_name(0, j)


def variable_names(r: int, n: int) -> Tuple[str, ...]:
    """x_{i,j}, y_{i,j} for 0 <= i <= r, 0 <= j <= n, in presentation order."""
    names = []
    for i in range(r + 1):
        for j in range(n + 1):
            names.extend((x_name(i, j), y_name(i, j)))
    return tuple(names)


def p_ell(r: int, ell: int, variables: Sequence[str], base: LocalBase) -> MvPoly:
    """p_l = sum_i sum_{j <= l} x_{i,j} * y_{i,l-j}."""
    variables = tuple(variables)
    index = {v: idx for idx, v in enumerate(variables)}
    width = len(variables)
    terms = {}
    for i in range(r + 1):
        for j in range(ell + 1):
            exps = [0] * width
            exps[index[x_name(i, j)]] += 1
            exps[index[y_name(i, ell - j)]] += 1
            terms[tuple(exps)] = 1
    return MvPoly(variables, terms, base)


# ── presentations ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RingPresentation:
    """base[variables] / (relations), optionally localized at `inverted`"""
    base: LocalBase
    variables: Tuple[str, ...]
    relations: Tuple[MvPoly, ...] = ()
    inverted: Tuple[MvPoly, ...] = ()
    grades: Tuple[int, ...] = ()
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "relations", tuple(g.align(self.variables) for g in self.relations))
        object.__setattr__(self, "inverted", tuple(g.align(self.variables) for g in self.inverted))
        if not self.grades:
            object.__setattr__(self, "grades", (1,) * len(self.variables))

    def gb_variables(self) -> Tuple[str, ...]:
        """Variable order for Groebner computations: x0_0 is the smallest."""
        return tuple(reversed(self.variables))

    def variable(self, name: str) -> MvPoly:
        return MvPoly.variable(name, self.variables, self.base)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "v1/Presentation",
            "base": self.base.name,
            "vars": [{"name": v, "grade": g} for v, g in zip(self.variables, self.grades)],
            "relations": [g.to_dict() for g in self.relations],
            "inverted": [g.to_dict() for g in self.inverted],
            "meta": dict(self.meta),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RingPresentation":
        check_schema(data, "Presentation")
        base = LocalBase.from_name(data["base"])
        variables = tuple(v["name"] for v in data["vars"])
        return cls(
            base=base,
            variables=variables,
            relations=tuple(MvPoly.from_dict(g, variables, base) for g in data["relations"]),
            inverted=tuple(MvPoly.from_dict(g, variables, base) for g in data.get("inverted", [])),
            grades=tuple(int(v.get("grade", 1)) for v in data["vars"]),
            meta=data.get("meta", {}),
        )


def build_presentation(r: int, k: int, n: int, base: LocalBase) -> RingPresentation:
    """B_{r,k,n} = base[x_{i,j}, y_{i,j}] / (p_0, ..., p_k omitted, ..., p_n)."""
    if r < 2:
        raise RowTooShort(f"universal rings need r >= 2, got r={r}")
    if k < 0 or n < 0:
        raise UsageError(f"k and n must be non-negative, got k={k}, n={n}")
    variables = variable_names(r, n)
    relations = tuple(p_ell(r, m, variables, base) for m in range(n + 1) if m != k)
    return RingPresentation(base, variables, relations, meta={"r": r, "k": k, "n": n})


def localize(presentation: RingPresentation, elements: Sequence[MvPoly]) -> RingPresentation:
    """Presentation with the given elements inverted."""
    return RingPresentation(
        presentation.base,
        presentation.variables,
        presentation.relations,
        presentation.inverted + tuple(elements),
        presentation.grades,
        presentation.meta,
    )


def localized_presentation(r: int, k: int, n: int, base: LocalBase) -> RingPresentation:
    """A_{r,k,n}: B_{r,k,n} with p_k inverted."""
    stage = build_presentation(r, k, n, base)
    return localize(stage, [p_ell(r, k, stage.variables, base)])


def suslin_presentation(r: int, k: int, n: int) -> RingPresentation:
    """B_{r,k,n} over Z[1/r!]."""
    if r < 2:
        raise RowTooShort(f"universal rings need r >= 2, got r={r}")
    return build_presentation(r, k, n, LocalBase.inverted(math.factorial(r)))


@dataclass
class GradingReport:
    """Outcome of a grading check"""
    passed: bool
    relation_degrees: List[int]
    degree_zero: str

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "relation_degrees": self.relation_degrees, "degree_zero": self.degree_zero}


def grading_check(presentation: RingPresentation) -> GradingReport:
    """
    Check that every relation is homogeneous for the variable grades

    Raises:
        NonHomogeneous: carrying the first offending relation
    """
    degrees = []
    for relation in presentation.relations:
        if not relation.is_homogeneous(presentation.grades):
            raise NonHomogeneous(f"relation {relation} is not homogeneous", relation=relation)
        degrees.append(relation.degree(presentation.grades))
    return GradingReport(True, degrees, presentation.base.name)


# ── algebra maps ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class AlgebraMap:
    """Ring map given by the images of the source generators"""
    source: RingPresentation
    target: RingPresentation
    images: Mapping[str, MvPoly]

    def apply(self, f: MvPoly) -> MvPoly:
        return f.substitute(self.images, self.target.variables, self.target.base)

    def verify(self, pair_budget: int = DEFAULT_PAIR_BUDGET) -> bool:
        """
        Every source relation maps into the target relation ideal

        Images that are zero or literally a target relation are accepted
        directly; the rest are decided by normal forms.
        """
        target_relations = set(self.target.relations)
        pending = []
        for relation in self.source.relations:
            image = self.apply(relation)
            if image.is_zero() or image in target_relations:
                continue
            pending.append(image)
        if not pending:
            return True
        if not self.target.relations:
            return False
        gb = buchberger(
            self.target.relations,
            variables=self.target.gb_variables(),
            pair_budget=pair_budget,
        )
        return all(gb.contains(image) for image in pending)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "images": {name: self.images[name].to_dict() for name in sorted(self.images)},
        }


def chain_map(r: int, k: int, n: int, base: LocalBase) -> AlgebraMap:
    """Inclusion B_{r,k,n} -> B_{r,k,n+1} sending each variable to itself."""
    source = build_presentation(r, k, n, base)
    target = build_presentation(r, k, n + 1, base)
    images = {v: target.variable(v) for v in source.variables}
    return AlgebraMap(source, target, images)


@dataclass(frozen=True)
class UniversalMap:
    """Universal homomorphism A_{r,k} -> R of a normalized pair, at a finite stage"""
    algebra_map: AlgebraMap
    k: int
    stage: int
    relation_images: Tuple[Tuple[int, MvPoly], ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "stage": self.stage,
            "images": {
                name: format_fraction(img.constant_term()) if img.is_constant() else str(img)
                for name, img in sorted(self.algebra_map.images.items())
                if not img.is_zero()
            },
            "relation_images": {str(m): str(img) for m, img in self.relation_images},
        }


def _pairing_exponent(row: Sequence[LaurentPoly], complement: Sequence[LaurentPoly]) -> Optional[int]:
    total = row[0] * complement[0]
    for x, y in zip(row[1:], complement[1:]):
        total = total + x * y
    if len(total.coeffs) == 1 and total.leading_coefficient() == 1:
        return total.valuation()
    return None


def universal_map(
    row: Sequence[LaurentPoly],
    complement: Sequence[LaurentPoly],
    k: Optional[int] = None,
) -> UniversalMap:
    """
    Coefficient assignment x_{i,j} -> coeff_j(x_i), y_{i,j} -> coeff_j(y_i)

    The source stage is 2*D for the largest entry degree D, beyond which
    every p_m vanishes identically under the assignment.

    Raises:
        NotNormalized: if an entry has negative valuation or sum x_i*y_i != t^k
    """
    row, complement = tuple(row), tuple(complement)
    r = len(row) - 1
    base = row[0].base
    if any(not f.is_polynomial() for f in row + complement):
        raise NotNormalized("universal map needs entries in R[[t]]")
    exponent = _pairing_exponent(row, complement)
    if exponent is None or (k is not None and exponent != k):
        raise NotNormalized(f"sum x_i*y_i is not t^{k if k is not None else 'k'}")
    k = exponent

    degree = max((f.degree() for f in row + complement if not f.is_zero()), default=0)
    stage = 2 * degree
    source = localized_presentation(r, k, stage, base)
    target = RingPresentation(base, (), meta={"kind": "coefficients"})

    images = {}
    for i in range(r + 1):
        for j in range(stage + 1):
            images[x_name(i, j)] = MvPoly.constant(row[i].coeff(j), (), base)
            images[y_name(i, j)] = MvPoly.constant(complement[i].coeff(j), (), base)
    algebra_map = AlgebraMap(source, target, images)

    relation_images = []
    for m in range(stage + 1):
        image = algebra_map.apply(p_ell(r, m, source.variables, base))
        expected = 1 if m == k else 0
        if image != expected:
            raise NotNormalized(f"p_{m} maps to {image}, expected {expected}")
        relation_images.append((m, image))
    logger.debug(f"universal map verified at stage {stage} for k={k}")
    return UniversalMap(algebra_map, k, stage, tuple(relation_images))


def stabilization_index(universal: UniversalMap) -> int:
    """Largest second index j of a generator with nonzero image (0 for the zero map)."""
    index = 0
    for name, image in universal.algebra_map.images.items():
        if not image.is_zero():
            index = max(index, int(name.split("_")[1]))
    return index


# ── the C-grid ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ChainCell:
    """C_{l,i} = R[S] / (p_m for l <= m <= n, m != k; a_0, ..., a_i)"""
    ell: int
    i: int
    presentation: RingPresentation

    @property
    def p_indices(self) -> Tuple[int, ...]:
        meta = self.presentation.meta
        return tuple(m for m in range(self.ell, meta["n"] + 1) if m != meta["k"])

    def to_dict(self) -> Dict[str, Any]:
        return {"ell": self.ell, "i": self.i, "p": list(self.p_indices), "a": list(range(self.i + 1))}


@dataclass
class ChainGrid:
    """All cells C_{l,i}, -1 <= i <= l <= n, plus the top row C_{n+1,i}"""
    r: int
    k: int
    n: int
    cells: Dict[Tuple[int, int], ChainCell]
    adjacency: List[Dict[str, Any]]

    def cell(self, ell: int, i: int) -> ChainCell:
        try:
            return self.cells[(ell, i)]
        except KeyError as exc:
            raise UsageError(f"no cell C_({ell},{i}) in the grid") from exc

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "k": self.k,
            "n": self.n,
            "cells": [self.cells[key].to_dict() for key in sorted(self.cells)],
            "adjacency": self.adjacency,
        }


def cell_presentation(r: int, k: int, n: int, ell: int, i: int, base: LocalBase) -> RingPresentation:
    variables = variable_names(r, n)
    relations = [p_ell(r, m, variables, base) for m in range(ell, n + 1) if m != k]
    relations += [MvPoly.variable(a_name(j), variables, base) for j in range(i + 1)]
    return RingPresentation(base, variables, tuple(relations), meta={"r": r, "k": k, "n": n, "ell": ell, "i": i})


def cchain_build(r: int, k: int, n: int, base: LocalBase) -> ChainGrid:
    """
    Build the grid of auxiliary quotients

    Each cell is the quotient of the cell above it by p_l and of the cell
    to its left by a_i; both facts are recorded as adjacency entries.
    """
    if r < 2:
        raise RowTooShort(f"universal rings need r >= 2, got r={r}")
    cells: Dict[Tuple[int, int], ChainCell] = {}
    for ell in range(n + 1):
        for i in range(-1, ell + 1):
            cells[(ell, i)] = ChainCell(ell, i, cell_presentation(r, k, n, ell, i, base))
    for i in range(-1, n + 1):
        cells[(n + 1, i)] = ChainCell(n + 1, i, cell_presentation(r, k, n, n + 1, i, base))

    adjacency = []
    for (ell, i) in sorted(cells):
        if (ell + 1, i) in cells and ell <= n:
            adjacency.append({
                "from": [ell + 1, i], "to": [ell, i], "by": f"p_{ell}",
                "identity": ell == k,
            })
        if i >= 0:
            adjacency.append({"from": [ell, i - 1], "to": [ell, i], "by": a_name(i), "identity": False})
    return ChainGrid(r, k, n, cells, adjacency)


# ── localization data ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class LocalizationData:
    """
    Triangular presentation C_{l,i-1} = base[T][t_0, ...] / (f_0, ...)

    f_m = a*t_m - g_m with g_m free of a and of t_j for j >= m.
    """
    r: int
    k: int
    n: int
    ell: int
    i: int
    base: LocalBase
    a: str
    t_names: Tuple[str, ...]
    p_indices: Tuple[int, ...]
    relations: Tuple[MvPoly, ...]
    g_list: Tuple[MvPoly, ...]
    remaining: Tuple[str, ...]
    variables: Tuple[str, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "instance": {"r": self.r, "k": self.k, "n": self.n, "l": self.ell, "i": self.i},
            "a": self.a,
            "t": list(self.t_names),
            "f": [f"p_{m}" for m in self.p_indices],
            "T_size": len(self.remaining),
        }


def select_localization_data(
    r: int, k: int, n: int, ell: int, i: int, base: Optional[LocalBase] = None
) -> LocalizationData:
    """
    Choose t_m, f_m and a = a_i for the cell C_{l,i-1} localized at a_i

    Raises:
        TriangularityViolation: if some f_m is not of the form a*t_m - g_m
    """
    if not 0 <= i <= ell <= n:
        raise UsageError(f"need 0 <= i <= l <= n, got i={i}, l={ell}, n={n}")
    if r < 2:
        raise RowTooShort(f"universal rings need r >= 2, got r={r}")
    base = base or LocalBase.rational()

    if ell <= k <= n:
        picks = [(m, m if m < k - ell else m + 1) for m in range(n - ell)]
    else:
        picks = [(m, m) for m in range(n - ell + 1)]
    t_names = tuple(b_name(ell + offset - i) for _, offset in picks)
    p_indices = tuple(ell + offset for _, offset in picks)

    zeroed = {a_name(j) for j in range(i)}
    variables = tuple(v for v in variable_names(r, n) if v not in zeroed)
    full = variable_names(r, n)
    identity = {v: MvPoly.variable(v, variables, base) for v in variables}
    relations = tuple(p_ell(r, m, full, base).substitute(identity, variables) for m in p_indices)

    a = a_name(i)
    a_var = MvPoly.variable(a, variables, base)
    g_list = []
    for m, (f, t) in enumerate(zip(relations, t_names)):
        t_var = MvPoly.variable(t, variables, base)
        if f.coefficient({a: 1, t: 1}) != 1:
            raise TriangularityViolation(f"f_{m} does not contain {a}*{t} with coefficient 1")
        g = a_var * t_var - f
        used = set(g.used_variables())
        if a in used:
            raise TriangularityViolation(f"g_{m} involves {a}")
        late = [t_names[j] for j in range(m, len(t_names)) if t_names[j] in used]
        if late:
            raise TriangularityViolation(f"g_{m} involves {late}")
        g_list.append(g)

    remaining = tuple(v for v in variables if v not in set(t_names) and v != a)
    logger.debug(f"localization data for (r={r}, k={k}, n={n}, l={ell}, i={i}): t={t_names}")
    return LocalizationData(
        r, k, n, ell, i, base, a, t_names, p_indices, relations, tuple(g_list), remaining, variables
    )
