"""E8 Kochen-Specker ray system: rays, bases, symmetries, parity proofs."""
from __future__ import annotations

from .census import FamilyCensus, enumerate_family_proofs
from .coloring import Assignment, brute_force_colorable, colorable, verify_assignment
from .errors import (
    AmbiguousPairing,
    BudgetExceeded,
    CollisionError,
    DegreeAnomaly,
    E8KSError,
    ExtensionFailure,
    FixtureCorrupt,
    InsufficientPairs,
    NonOrthogonalRequired,
    RealizationMismatch,
    TimeoutExceeded,
)
from .families import Family, classify_table, family_for_selector, profile
from .proofs import (
    CriticalityReport,
    ParityProof,
    RefinedSymbol,
    is_critical,
    is_parity_proof,
    multiplicities,
    noncontextuality_gap,
    parse_refined,
    proof_symbol,
    rank2_pairs,
    rank2_refine,
)
from .rays import RaySystem, build_rays, inner_product
from .structure import (
    BasisTable,
    OrthogonalityGraph,
    SystemSymbol,
    build_graph,
    check_saturation,
    enumerate_bases,
    parse_symbol,
    system_symbol,
)
from .subsystems import (
    KPSet,
    SubSystem,
    build_kp_sets,
    extract_E6,
    extract_E7,
    is_saturated,
    kp_parity_proofs,
    kp_report,
)
from .symmetry import (
    LabeledTable,
    RayPermutation,
    generate_labeled_table,
    load_generators,
    load_seed_block,
    symmetry_group_order,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BasisTable",
    "BudgetExceeded",
    "CollisionError",
    "CriticalityReport",
    "DegreeAnomaly",
    "E8KSError",
    "AmbiguousPairing",
    "ExtensionFailure",
    "Family",
    "FamilyCensus",
    "FixtureCorrupt",
    "InsufficientPairs",
    "KPSet",
    "LabeledTable",
    "NonOrthogonalRequired",
    "OrthogonalityGraph",
    "ParityProof",
    "RayPermutation",
    "RaySystem",
    "RealizationMismatch",
    "RefinedSymbol",
    "SubSystem",
    "SystemSymbol",
    "TimeoutExceeded",
    "brute_force_colorable",
    "build_graph",
    "build_kp_sets",
    "build_rays",
    "check_saturation",
    "classify_table",
    "colorable",
    "enumerate_bases",
    "enumerate_family_proofs",
    "extract_E6",
    "extract_E7",
    "family_for_selector",
    "generate_labeled_table",
    "inner_product",
    "is_critical",
    "is_parity_proof",
    "is_saturated",
    "kp_parity_proofs",
    "kp_report",
    "load_generators",
    "load_seed_block",
    "multiplicities",
    "noncontextuality_gap",
    "parse_refined",
    "parse_symbol",
    "profile",
    "proof_symbol",
    "rank2_pairs",
    "rank2_refine",
    "system_symbol",
    "verify_assignment",
    "__version__",
]
