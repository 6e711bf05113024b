"""Exact detection of finite domination over Laurent polynomial rings.

The package decides, for a bounded based chain complex over
F[x_1^{\\pm1}, ..., x_n^{\\pm1}], whether it is finitely dominated over the
coefficient field, by certifying acyclicity over the Novikov rings
R_{j-1}((x_j^{\\pm1})) with exact chain-contraction certificates.
"""

from .fields import QQ, PrimeField, RationalFunctionField
from .rings import (
    Direction,
    LaurentPoly,
    LaurentRing,
    Localized,
    LocalizedRing,
    is_direction_unit,
    make_localized,
    novikov_expand,
)
from .matrices import Matrix
from .complexes import (
    BasedComplex,
    ChainHomotopy,
    ChainMap,
    TwofoldComplex,
    base_change,
    direct_sum,
    identity_map,
    is_chain_map,
    is_homotopy,
    permute_basis,
    poly_map,
    suspend,
    totalize,
    validate,
    zero_map,
)
from .constructions import (
    attach_elementary,
    cone,
    cone_vs_coker,
    double_cone,
    gamma,
    gamma_diagonal,
    mapping_torus,
    mather,
    ses_elements,
    torus_homotopy_iso,
    torus_map,
    torus_self_homotopy,
)
from .homology import (
    char_poly_action,
    generic_ranks,
    homology_field,
    homology_pid,
    is_acyclic,
    is_quasi_iso,
    snf,
)
from .novikov import (
    Contraction,
    Decision,
    Verdict,
    acyclicity_decide,
    novikov_complex,
    verify_contraction,
)
from .detector import (
    FDReport,
    FDVerdict,
    field_findom,
    findom_all_orders,
    findom_main,
    ranicki_1var,
)
from .corpus import Profile, example_square, random_known

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "PrimeField",
    "RationalFunctionField",
    "Direction",
    "LaurentPoly",
    "LaurentRing",
    "Localized",
    "LocalizedRing",
    "is_direction_unit",
    "make_localized",
    "novikov_expand",
    "Matrix",
    "BasedComplex",
    "ChainHomotopy",
    "ChainMap",
    "TwofoldComplex",
    "base_change",
    "direct_sum",
    "identity_map",
    "is_chain_map",
    "is_homotopy",
    "permute_basis",
    "poly_map",
    "suspend",
    "totalize",
    "validate",
    "zero_map",
    "attach_elementary",
    "cone",
    "cone_vs_coker",
    "double_cone",
    "gamma",
    "gamma_diagonal",
    "mapping_torus",
    "mather",
    "ses_elements",
    "torus_homotopy_iso",
    "torus_map",
    "torus_self_homotopy",
    "char_poly_action",
    "generic_ranks",
    "homology_field",
    "homology_pid",
    "is_acyclic",
    "is_quasi_iso",
    "snf",
    "Contraction",
    "Decision",
    "Verdict",
    "acyclicity_decide",
    "novikov_complex",
    "verify_contraction",
    "FDReport",
    "FDVerdict",
    "field_findom",
    "findom_all_orders",
    "findom_main",
    "ranicki_1var",
    "Profile",
    "example_square",
    "random_known",
]
