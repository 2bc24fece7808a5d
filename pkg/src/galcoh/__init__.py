"""Exact Tate cohomology, fundamental-group coinvariants and local-global invariants."""

__version__ = "0.1.0"

from ._kernel import BACKEND
from .cohomology import (
    Cochain,
    Limits,
    ShortExactSequence,
    carry_cocycle,
    connecting_map,
    cup_with_2cocycle,
    syzygy_shift,
    tate_cohomology,
    tate_group,
)
from .errors import (
    CocycleError,
    CrossCheckError,
    GalcohError,
    GroupLawError,
    RootDatumError,
    ScenarioError,
    SizeGuardError,
    UnsupportedDegreeError,
    WellDefinednessError,
)
from .fundgroup import FundamentalGroup, RootDatumInput, catalog, fundamental_group, local_basic_classes, local_h1
from .gmodule import (
    GModule,
    coinvariants,
    invariants_part,
    norm_endomorphism,
    permutation_module,
    regular_module,
    restriction,
)
from .groups import FiniteGroup
from .local_global import (
    GlobalScenario,
    PlaceSet,
    check_in_image,
    degree_zero_module,
    divisor_module,
    global_A,
    global_h1,
    localize,
    sum_to_global,
    tower_compare,
    transition_p,
)
from .tn_triple import TNReport, TNTripleCandidate, check_rigidity, check_weak_tn, cyclic_triple
from .zlattice import AbHom, FgAbGroup, IntMatrix, cokernel, image, kernel, smith_normal_form, torsion_subgroup

__all__ = [
    "__version__",
    "BACKEND",
    "Cochain",
    "Limits",
    "ShortExactSequence",
    "carry_cocycle",
    "connecting_map",
    "cup_with_2cocycle",
    "syzygy_shift",
    "tate_cohomology",
    "tate_group",
    "CocycleError",
    "CrossCheckError",
    "GalcohError",
    "GroupLawError",
    "RootDatumError",
    "ScenarioError",
    "SizeGuardError",
    "UnsupportedDegreeError",
    "WellDefinednessError",
    "FundamentalGroup",
    "RootDatumInput",
    "catalog",
    "fundamental_group",
    "local_basic_classes",
    "local_h1",
    "GModule",
    "coinvariants",
    "invariants_part",
    "norm_endomorphism",
    "permutation_module",
    "regular_module",
    "restriction",
    "FiniteGroup",
    "GlobalScenario",
    "PlaceSet",
    "check_in_image",
    "degree_zero_module",
    "divisor_module",
    "global_A",
    "global_h1",
    "localize",
    "sum_to_global",
    "tower_compare",
    "transition_p",
    "TNReport",
    "TNTripleCandidate",
    "check_rigidity",
    "check_weak_tn",
    "cyclic_triple",
    "AbHom",
    "FgAbGroup",
    "IntMatrix",
    "cokernel",
    "image",
    "kernel",
    "smith_normal_form",
    "torsion_subgroup",
]
