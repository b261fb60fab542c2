"""Core modules: the ring kernel, series, errors, configuration and the run ledger"""

from .base import BaseElem, BaseKind, LocalBase, format_fraction, parse_fraction
from .bezout import invert_mod_monic, multiplication_matrix, top_bottom_bezout, weierstrass_test
from .config import DEFAULT_CONFIG, load_config, merge_config
from .database import Database, get_db, init_database
from .errors import AlgebraError, OracleTimeout, PrecisionLoss, NotUnimodular, UsageError
from .laurent import LaurentPoly, exact_divide, monic_divmod
from .matrix import LocalMatrix
from .models import Base, ClaimCheck, RunRecord, Verdict
from .mvpoly import MvPoly, poly_arith
from .series import TruncSeries, series_arith, series_divide, series_invert, truncate_at

__all__ = [
    # Ring kernel
    'BaseElem',
    'BaseKind',
    'LocalBase',
    'format_fraction',
    'parse_fraction',
    'LaurentPoly',
    'monic_divmod',
    'exact_divide',
    'MvPoly',
    'poly_arith',
    'LocalMatrix',
    'weierstrass_test',
    'multiplication_matrix',
    'invert_mod_monic',
    'top_bottom_bezout',

    # Series
    'TruncSeries',
    'series_arith',
    'series_invert',
    'series_divide',
    'truncate_at',

    # Errors
    'AlgebraError',
    'UsageError',
    'NotUnimodular',
    'PrecisionLoss',
    'OracleTimeout',

    # Configuration
    'DEFAULT_CONFIG',
    'load_config',
    'merge_config',

    # Database
    'Database',
    'init_database',
    'get_db',

    # Models
    'Base',
    'RunRecord',
    'ClaimCheck',
    'Verdict',
]
