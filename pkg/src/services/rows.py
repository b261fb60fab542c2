"""
Row Data Types

Unimodular row bundles, GL witnesses with their factor provenance, Bezout
certificates and reduction results. Every type re-verifies its own
certificate and round-trips through the v1 JSON artifacts.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..core.base import LocalBase
from ..core.bezout import weierstrass_test
from ..core.errors import NotUnimodular, SchemaError, UsageError
from ..core.laurent import LaurentPoly
from ..core.matrix import LocalMatrix
from ..core.mvpoly import MvPoly


def pair_rows(row: Sequence[Any], complement: Sequence[Any]) -> Any:
    acc = row[0] * complement[0]
    for x, y in zip(row[1:], complement[1:]):
        acc = acc + x * y
    return acc


def check_schema(data: Dict[str, Any], name: str) -> None:
    tag = data.get("schema")
    if tag != f"v1/{name}":
        raise SchemaError(f"expected schema v1/{name}, got {tag!r}")


# ── RowBundle ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RowBundle:
    """Row over R[t, 1/t] with complement and exact unit witness sum x_i*y_i = u*t^j"""
    row: Tuple[LaurentPoly, ...]
    complement: Tuple[LaurentPoly, ...]
    unit_witness: LaurentPoly
    base: LocalBase
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "row", tuple(self.row))
        object.__setattr__(self, "complement", tuple(self.complement))
        if len(self.row) < 2:
            raise UsageError(f"row length {len(self.row)} < 2")
        if len(self.row) != len(self.complement):
            raise UsageError("row and complement differ in length")
        if not self.unit_witness.is_unit():
            raise NotUnimodular(f"unit witness {self.unit_witness} is not a unit")
        if pair_rows(self.row, self.complement) != self.unit_witness:
            raise NotUnimodular("sum row_i * complement_i does not equal the unit witness")

    @property
    def r(self) -> int:
        return len(self.row) - 1

    @property
    def witness_exponent(self) -> int:
        return self.unit_witness.valuation()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "v1/RowBundle",
            "base": self.base.name,
            "r": self.r,
            "row": [x.to_dict() for x in self.row],
            "complement": [y.to_dict() for y in self.complement],
            "unit_witness": self.unit_witness.to_dict(),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RowBundle":
        check_schema(data, "RowBundle")
        base = LocalBase.from_name(data["base"])
        return cls(
            row=tuple(LaurentPoly.from_dict(x, base) for x in data["row"]),
            complement=tuple(LaurentPoly.from_dict(y, base) for y in data["complement"]),
            unit_witness=LaurentPoly.from_dict(data["unit_witness"], base),
            base=base,
            seed=data.get("seed"),
        )


# ── GL witnesses ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GLFactor:
    """
    One structured factor of a GL witness

    kinds:
        elementary: I + c*e_{src,dst}
        power: t^exponent * I
        correction: I + y*(t*d)^T for vectors (y, d)
        diagonal: diag(values)
    """
    kind: str
    src: int = 0
    dst: int = 0
    multiplier: Optional[LaurentPoly] = None
    exponent: int = 0
    vectors: Tuple[Tuple[LaurentPoly, ...], ...] = ()

    @classmethod
    def elementary(cls, src: int, dst: int, c: LaurentPoly) -> "GLFactor":
        return cls("elementary", src=src, dst=dst, multiplier=c)

    @classmethod
    def power(cls, exponent: int) -> "GLFactor":
        return cls("power", exponent=exponent)

    @classmethod
    def correction(cls, y: Sequence[LaurentPoly], d: Sequence[LaurentPoly]) -> "GLFactor":
        return cls("correction", vectors=(tuple(y), tuple(d)))

    @classmethod
    def diagonal(cls, values: Sequence[LaurentPoly]) -> "GLFactor":
        return cls("diagonal", vectors=(tuple(values),))

    def matrix(self, n: int, base: LocalBase) -> LocalMatrix:
        zero = LaurentPoly.zero(base)
        one = LaurentPoly.constant(1, base)
        if self.kind == "elementary":
            return LocalMatrix.elementary(n, self.src, self.dst, self.multiplier, zero, one)
        if self.kind == "power":
            return LocalMatrix.diagonal([LaurentPoly.monomial(1, self.exponent, base)] * n, zero, one)
        if self.kind == "correction":
            y, d = self.vectors
            rows = tuple(
                tuple((one if i == j else zero) + y[i] * d[j].shift(1) for j in range(n))
                for i in range(n)
            )
            return LocalMatrix(rows, zero, one)
        if self.kind == "diagonal":
            return LocalMatrix.diagonal(list(self.vectors[0]), zero, one)
        raise UsageError(f"unknown GL factor kind {self.kind!r}")

    def apply(self, row: Sequence[LaurentPoly]) -> List[LaurentPoly]:
        """row * factor without building the matrix."""
        out = list(row)
        if self.kind == "elementary":
            out[self.dst] = out[self.dst] + self.multiplier * out[self.src]
        elif self.kind == "power":
            out = [x.shift(self.exponent) for x in out]
        elif self.kind == "correction":
            y, d = self.vectors
            s = pair_rows(out, y).shift(1)
            out = [x + s * dj for x, dj in zip(out, d)]
        elif self.kind == "diagonal":
            out = [x * v for x, v in zip(out, self.vectors[0])]
        else:
            raise UsageError(f"unknown GL factor kind {self.kind!r}")
        return out

    def determinant(self, n: int, base: LocalBase) -> LaurentPoly:
        one = LaurentPoly.constant(1, base)
        if self.kind == "elementary":
            return one
        if self.kind == "power":
            return LaurentPoly.monomial(1, n * self.exponent, base)
        if self.kind == "correction":
            y, d = self.vectors
            return one + pair_rows(d, y).shift(1)
        det = one
        for value in self.vectors[0]:
            det = det * value
        return det

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind}
        if self.kind == "elementary":
            data.update(src=self.src, dst=self.dst, c=self.multiplier.to_dict())
        elif self.kind == "power":
            data["exponent"] = self.exponent
        else:
            data["vectors"] = [[x.to_dict() for x in vec] for vec in self.vectors]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base: LocalBase) -> "GLFactor":
        kind = data["kind"]
        if kind == "elementary":
            return cls.elementary(data["src"], data["dst"], LaurentPoly.from_dict(data["c"], base))
        if kind == "power":
            return cls.power(int(data["exponent"]))
        vectors = tuple(tuple(LaurentPoly.from_dict(x, base) for x in vec) for vec in data["vectors"])
        return cls(kind, vectors=vectors)


@dataclass(frozen=True)
class GLWitness:
    """
    Matrix in GL_{r+1}(R((t))) as a product of recorded factors

    Only the factors and the running determinant are kept. The product
    matrix is built on first access; a witness read from a file carries
    its stored matrix, which verify() checks against the factors.
    """
    size: int
    base: LocalBase
    factors: Tuple[GLFactor, ...]
    determinant: LaurentPoly
    stored_matrix: Optional[LocalMatrix] = field(default=None, compare=False)

    @classmethod
    def identity(cls, n: int, base: LocalBase) -> "GLWitness":
        return cls(n, base, (), LaurentPoly.constant(1, base))

    def then(self, factor: GLFactor) -> "GLWitness":
        """Right-multiply by factor."""
        return GLWitness(
            self.size,
            self.base,
            self.factors + (factor,),
            self.determinant * factor.determinant(self.size, self.base),
        )

    def compose(self, other: "GLWitness") -> "GLWitness":
        witness = self
        for factor in other.factors:
            witness = witness.then(factor)
        return witness

    @cached_property
    def matrix(self) -> LocalMatrix:
        zero = LaurentPoly.zero(self.base)
        one = LaurentPoly.constant(1, self.base)
        product = LocalMatrix.identity(self.size, zero, one)
        for factor in self.factors:
            product = product @ factor.matrix(self.size, self.base)
        return product

    def apply(self, row: Sequence[LaurentPoly]) -> Tuple[LaurentPoly, ...]:
        if len(row) != self.size:
            raise UsageError(f"row of length {len(row)} against a {self.size}x{self.size} witness")
        out = list(row)
        for factor in self.factors:
            out = factor.apply(out)
        return tuple(out)

    def verify(self) -> None:
        """Re-check the determinant against the factors, and the stored matrix if any."""
        det = LaurentPoly.constant(1, self.base)
        for factor in self.factors:
            det = det * factor.determinant(self.size, self.base)
        if det != self.determinant:
            raise NotUnimodular("GL witness determinant differs from the product of its factor determinants")
        if not self.determinant.is_series_unit():
            raise NotUnimodular(f"determinant {self.determinant} is not a unit of R((t))")
        if self.stored_matrix is not None:
            if self.stored_matrix != self.matrix:
                raise NotUnimodular("GL witness matrix differs from the product of its factors")
            if self.stored_matrix.determinant() != self.determinant:
                raise NotUnimodular("GL witness determinant does not match its matrix")

    def to_dict(self) -> Dict[str, Any]:
        matrix = self.stored_matrix if self.stored_matrix is not None else self.matrix
        return {
            "size": self.size,
            "factors": [f.to_dict() for f in self.factors],
            "matrix": matrix.to_dict(LaurentPoly.to_dict),
            "determinant": self.determinant.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base: LocalBase) -> "GLWitness":
        zero = LaurentPoly.zero(base)
        one = LaurentPoly.constant(1, base)
        rows = tuple(tuple(LaurentPoly.from_dict(x, base) for x in row) for row in data["matrix"])
        return cls(
            size=int(data["size"]),
            base=base,
            factors=tuple(GLFactor.from_dict(f, base) for f in data["factors"]),
            determinant=LaurentPoly.from_dict(data["determinant"], base),
            stored_matrix=LocalMatrix(rows, zero, one),
        )


# ── certificates ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class BezoutCertificate:
    """Cofactors c with sum p_i*c_i = t^target_exponent"""
    cofactors: Tuple[LaurentPoly, ...]
    target_exponent: int

    def verify(self, row: Sequence[LaurentPoly]) -> None:
        base = row[0].base
        if pair_rows(row, self.cofactors) != LaurentPoly.monomial(1, self.target_exponent, base):
            raise NotUnimodular(f"sum p_i*c_i is not t^{self.target_exponent}")

    def to_dict(self) -> Dict[str, Any]:
        return {"cofactors": [c.to_dict() for c in self.cofactors], "target_exponent": self.target_exponent}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base: LocalBase) -> "BezoutCertificate":
        return cls(tuple(LaurentPoly.from_dict(c, base) for c in data["cofactors"]), int(data["target_exponent"]))


@dataclass(frozen=True)
class ReductionResult:
    """Weierstrass form p = x*M of an input bundle, with its certificates"""
    source: RowBundle
    weierstrass_row: Tuple[LaurentPoly, ...]
    gl_witness: GLWitness
    certificate: BezoutCertificate
    k: int
    shift: int
    precision: int

    @property
    def base(self) -> LocalBase:
        return self.source.base

    def verify(self) -> None:
        """
        Re-verify all three certificates

        Raises:
            NotUnimodular: if any check fails
        """
        p = self.weierstrass_row
        p0 = p[0]
        if not weierstrass_test(p0, self.base) or p0.degree() != self.k + 1:
            raise NotUnimodular(f"p_0 = {p0} is not a Weierstrass polynomial of degree {self.k + 1}")
        for i, pi in enumerate(p[1:], start=1):
            if not pi.is_polynomial() or (not pi.is_zero() and pi.degree() > self.k):
                raise NotUnimodular(f"p_{i} = {pi} is not a polynomial of degree <= {self.k}")
        self.certificate.verify(p)
        self.gl_witness.verify()
        if self.gl_witness.apply(self.source.row) != tuple(p):
            raise NotUnimodular("x * M does not reproduce the Weierstrass row")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "v1/ReductionResult",
            "base": self.base.name,
            "source": self.source.to_dict(),
            "weierstrass_row": [x.to_dict() for x in self.weierstrass_row],
            "gl_witness": self.gl_witness.to_dict(),
            "certificate": self.certificate.to_dict(),
            "k": self.k,
            "shift": self.shift,
            "precision": self.precision,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReductionResult":
        check_schema(data, "ReductionResult")
        base = LocalBase.from_name(data["base"])
        return cls(
            source=RowBundle.from_dict(data["source"]),
            weierstrass_row=tuple(LaurentPoly.from_dict(x, base) for x in data["weierstrass_row"]),
            gl_witness=GLWitness.from_dict(data["gl_witness"], base),
            certificate=BezoutCertificate.from_dict(data["certificate"], base),
            k=int(data["k"]),
            shift=int(data["shift"]),
            precision=int(data["precision"]),
        )


@dataclass(frozen=True)
class IdealRow:
    """Row over A = base[variables] congruent to (1, 0, ..., 0) modulo an ideal"""
    row: Tuple[MvPoly, ...]
    complement: Tuple[MvPoly, ...]
    ideal: Tuple[MvPoly, ...]
    variables: Tuple[str, ...] = field(default=())

    def pairing(self) -> MvPoly:
        return pair_rows(self.row, self.complement)

    def to_dict(self) -> Dict[str, Any]:
        variables = self.variables or self.row[0].variables
        return {
            "schema": "v1/IdealRow",
            "base": self.row[0].base.name,
            "vars": list(variables),
            "row": [x.align(variables).to_dict() for x in self.row],
            "complement": [y.align(variables).to_dict() for y in self.complement],
            "ideal": [g.align(variables).to_dict() for g in self.ideal],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IdealRow":
        check_schema(data, "IdealRow")
        base = LocalBase.from_name(data["base"])
        variables = tuple(data["vars"])

        def load(items: List[Any]) -> Tuple[MvPoly, ...]:
            return tuple(MvPoly.from_dict(x, variables, base) for x in items)

        return cls(load(data["row"]), load(data["complement"]), load(data["ideal"]), variables)
