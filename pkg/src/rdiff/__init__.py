"""Related-differential analysis of linear diffusion layers over GF(2^m)."""

from .analysis import AnalysisReport, analyze
from .core import (
    Method,
    RelatedTriplet,
    Witness,
    is_related_differences,
    is_related_differential_pair,
    search_bounded,
    search_full,
    transform_witness_diag,
    transform_witness_inverse,
    transform_witness_perm,
    verify_witness,
)
from .construct import (
    CirculantPoly,
    construct_circulant_witness,
    construct_nonmds_witness,
    construct_symmetric_odd_witness,
)
from .enumeration import EnumResult, closed_form_mds, enumerate3, spot_check
from .gf import Field, field_new, get_field
from .linalg import Mat
from .rd3 import conditions15, decompose, rd_status_3x3, witness_from_condition

__version__ = "0.1.0"
