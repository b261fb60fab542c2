"""
Error Hierarchy

Every failure raised by the algebra kernel, the row engine and the oracles
derives from AlgebraError. The CLI maps each class to its exit code.
"""


class AlgebraError(Exception):
    """Base class for all algebraic failures"""

    exit_code = 1


class UsageError(AlgebraError):
    """Malformed input, bad flags or inconsistent arguments"""

    exit_code = 2


class SchemaError(UsageError):
    """Artifact JSON carries the wrong or an unknown schema tag"""


class UnsupportedBase(UsageError):
    """Base ring kind not admitted by the requested operation"""


class NotLocalBase(AlgebraError):
    """Operation needs a local base ring (Q, F_p or Z_(p))"""


class NotInBase(AlgebraError):
    """Value is not an element of the base ring (bad denominator)"""


class NotInvertible(AlgebraError):
    """Determinant or element is not a unit of the base ring"""


class NotWeierstrass(AlgebraError):
    """Polynomial is not a Weierstrass polynomial"""


class NonUnitConstantTerm(AlgebraError):
    """Constant coefficient is not a unit"""


class PrecisionLoss(AlgebraError):
    """Known coefficients would be lost at the available precision"""

    exit_code = 4


class NotAUnit(AlgebraError):
    """Series or Laurent polynomial is not a unit"""


class NotUnimodular(AlgebraError):
    """A unimodularity certificate failed to re-verify"""

    exit_code = 3


class DegenerateRow(AlgebraError):
    """Every residue entry vanishes, no pivot is available"""


class RowTooShort(AlgebraError):
    """Row length is below what the algorithm requires"""


class NotInIdealForm(AlgebraError):
    """Row is not congruent to (1, 0, ..., 0) modulo the ideal"""


class NotLocalizedAtS(AlgebraError):
    """A denominator is not a power of the localizing element"""


class NotNormalized(AlgebraError):
    """Row bundle does not satisfy sum x_i y_i = t^k"""


class NonHomogeneous(AlgebraError):
    """Polynomial is not homogeneous"""

    def __init__(self, message: str, relation=None):
        super().__init__(message)
        self.relation = relation


class TriangularityViolation(AlgebraError):
    """Relations are not in the triangular shape a*t_m - g_m(t_0..t_{m-1})"""


class OracleTimeout(AlgebraError):
    """Groebner computation exceeded its S-pair budget"""

    exit_code = 5

    def __init__(self, message: str, pairs: int = 0):
        super().__init__(message)
        self.pairs = pairs
