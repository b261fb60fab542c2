"""
Matrices over Local Rings

Small dense matrices whose entries are BaseElem or LaurentPoly values.
Invertibility over a local base is certified by a unit determinant; the
inverse is computed by elimination with unit pivots only, so every step
stays inside the ring.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Sequence, Tuple

from .errors import NotInvertible, UsageError


@dataclass(frozen=True)
class LocalMatrix:
    """Rectangular matrix with explicit ring zero and one"""
    rows: Tuple[Tuple[Any, ...], ...]
    zero: Any
    one: Any

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.rows)
        if rows and len({len(row) for row in rows}) != 1:
            raise UsageError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)

    # ── constructors ──────────────────────────────────────────────────────

    @classmethod
    def identity(cls, n: int, zero: Any, one: Any) -> "LocalMatrix":
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), zero, one)

    @classmethod
    def elementary(cls, n: int, src: int, dst: int, c: Any, zero: Any, one: Any) -> "LocalMatrix":
        """I + c*e_{src,dst}: as a right factor it performs x_dst += c * x_src."""
        if src == dst:
            raise UsageError("elementary matrix needs src != dst")
        rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
        rows[src][dst] = c
        return cls(tuple(tuple(r) for r in rows), zero, one)

    @classmethod
    def diagonal(cls, values: Sequence[Any], zero: Any, one: Any) -> "LocalMatrix":
        n = len(values)
        return cls(tuple(tuple(values[i] if i == j else zero for j in range(n)) for i in range(n)), zero, one)

    # ── shape and access ──────────────────────────────────────────────────

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, index: Tuple[int, int]) -> Any:
        i, j = index
        return self.rows[i][j]

    def row(self, i: int) -> Tuple[Any, ...]:
        return self.rows[i]

    def column(self, j: int) -> Tuple[Any, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "LocalMatrix":
        n, m = self.shape
        return LocalMatrix(tuple(tuple(self.rows[i][j] for i in range(n)) for j in range(m)), self.zero, self.one)

    def map(self, fn: Callable[[Any], Any], zero: Any = None, one: Any = None) -> "LocalMatrix":
        return LocalMatrix(
            tuple(tuple(fn(x) for x in row) for row in self.rows),
            self.zero if zero is None else zero,
            self.one if one is None else one,
        )

    # ── arithmetic ────────────────────────────────────────────────────────

    def __matmul__(self, other: "LocalMatrix") -> "LocalMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise UsageError(f"shape mismatch {self.shape} @ {other.shape}")
        rows = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = self.zero
                for l in range(k):
                    a = self.rows[i][l]
                    b = other.rows[l][j]
                    if a == self.zero or b == self.zero:
                        continue
                    acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return LocalMatrix(tuple(rows), self.zero, self.one)

    def left_multiply(self, vector: Sequence[Any]) -> Tuple[Any, ...]:
        """Row vector times matrix."""
        n, m = self.shape
        if len(vector) != n:
            raise UsageError(f"vector of length {len(vector)} against {self.shape} matrix")
        out = []
        for j in range(m):
            acc = self.zero
            for i in range(n):
                if vector[i] == self.zero or self.rows[i][j] == self.zero:
                    continue
                acc = acc + vector[i] * self.rows[i][j]
            out.append(acc)
        return tuple(out)

    def right_multiply(self, vector: Sequence[Any]) -> Tuple[Any, ...]:
        """Matrix times column vector."""
        return self.transpose().left_multiply(vector)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    # ── determinant and inverse ───────────────────────────────────────────

    def determinant(self) -> Any:
        """Division-free Laplace expansion, memoized over column subsets."""
        n, m = self.shape
        if n != m:
            raise UsageError(f"determinant of non-square {self.shape} matrix")
        if n == 0:
            return self.one
        memo: Dict[Tuple[int, int], Any] = {}

        def minor(r: int, mask: int) -> Any:
            if r == n:
                return self.one
            key = (r, mask)
            if key in memo:
                return memo[key]
            acc = self.zero
            sign_index = 0
            for j in range(n):
                if mask & (1 << j):
                    continue
                entry = self.rows[r][j]
                if entry != self.zero:
                    term = entry * minor(r + 1, mask | (1 << j))
                    acc = acc - term if sign_index % 2 else acc + term
                sign_index += 1
            memo[key] = acc
            return acc

        return minor(0, 0)

    def inverse_with_determinant(self) -> Tuple["LocalMatrix", Any]:
        """
        Invert a square BaseElem matrix over a local base

        Returns:
            (inverse, determinant)

        Raises:
            NotInvertible: if the determinant is not a unit
        """
        n, m = self.shape
        if n != m:
            raise UsageError(f"inverse of non-square {self.shape} matrix")
        work: List[List[Any]] = [list(row) for row in self.rows]
        inv: List[List[Any]] = [[self.one if i == j else self.zero for j in range(n)] for i in range(n)]
        det = self.one
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col].is_unit()), None)
            if pivot is None:
                raise NotInvertible("determinant is not a unit: no unit pivot in column %d" % col)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                inv[col], inv[pivot] = inv[pivot], inv[col]
                det = -det
            p = work[col][col]
            det = det * p
            p_inv = p.inverse()
            work[col] = [x * p_inv for x in work[col]]
            inv[col] = [x * p_inv for x in inv[col]]
            for r in range(n):
                if r == col or work[r][col].is_zero():
                    continue
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
                inv[r] = [a - factor * b for a, b in zip(inv[r], inv[col])]
        return LocalMatrix(tuple(tuple(r) for r in inv), self.zero, self.one), det

    def inverse(self) -> "LocalMatrix":
        return self.inverse_with_determinant()[0]

    def adjugate(self) -> "LocalMatrix":
        """adj(A) = det(A) * A^{-1}, valid because det(A) is a unit."""
        inv, det = self.inverse_with_determinant()
        return inv.map(lambda x: x * det)

    def to_dict(self, serialize: Callable[[Any], Any]) -> List[List[Any]]:
        return [[serialize(x) for x in row] for row in self.rows]
