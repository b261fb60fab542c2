"""Row engine, universal rings and oracle services"""

from .check_service import CheckService
from .completion import complete_length2, roitman_descend, shrink_complement, shrink_to_ideal_row
from .generator import gen_example, gen_ideal_row
from .groebner import GroebnerBasis, MonomialOrder, buchberger, hilbert_function, ideal_quotient
from .oracles import (
    chain_audit,
    irreducibility_precheck,
    localization_iso_verify,
    quadric_rank,
    regular_sequence_check,
)
from .presentations import (
    RingPresentation,
    build_presentation,
    cchain_build,
    grading_check,
    select_localization_data,
    universal_map,
)
from .reduction_service import ReductionService, residue_normalize, weierstrass_reduce
from .rows import BezoutCertificate, GLWitness, IdealRow, ReductionResult, RowBundle

__all__ = [
    'CheckService',
    'ReductionService',

    # Row engine
    'RowBundle',
    'GLWitness',
    'BezoutCertificate',
    'ReductionResult',
    'IdealRow',
    'residue_normalize',
    'weierstrass_reduce',
    'complete_length2',
    'shrink_complement',
    'shrink_to_ideal_row',
    'roitman_descend',
    'gen_example',
    'gen_ideal_row',

    # Universal rings
    'RingPresentation',
    'build_presentation',
    'grading_check',
    'universal_map',
    'cchain_build',
    'select_localization_data',

    # Groebner oracles
    'GroebnerBasis',
    'MonomialOrder',
    'buchberger',
    'hilbert_function',
    'ideal_quotient',
    'quadric_rank',
    'irreducibility_precheck',
    'localization_iso_verify',
    'regular_sequence_check',
    'chain_audit',
]
