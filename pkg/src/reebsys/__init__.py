"""Invariant contact forms on circle bundles over orbifold surfaces.

The library reduces an invariant contact form to a family of potential
functions, enumerates closed orbits exactly, computes systole / volume /
systolic ratio, verifies the systolic inequality and its supporting
analytic lemmas by property testing, and searches parametrized potential
families for extremal ratios.
"""

from .analysis import (
    GenerationError,
    LemmaReport,
    generate_admissible,
    generate_lemma_5_2_instance,
    lemma_trial,
    sieve_rational,
    verify_lemma_5_1,
    verify_lemma_5_2,
    verify_prop_5_3,
)
from .graph import ContactGraph, GraphError, Vertex, build_graph, connected_sum, is_bipartite, lutz_twist
from .kernels import BACKEND
from .model import (
    BoundaryOrbit,
    BoundReport,
    Component,
    ContactModel,
    ModelError,
    SystoleCertificate,
    SystoleResult,
    ValidationReport,
    Violation,
    ZollBesseResult,
    check_theorem_bound,
    systole,
    systolic_bound,
    systolic_ratio,
    validate,
    volume,
    zoll_besse_evaluate,
)
from .modelio import ModelIOError, load_model, parse_model, save_model, serialize_model
from .optimizer import (
    CandidateResult,
    OptimizationReport,
    PotentialFamily,
    TheoremViolationError,
    evaluate_candidate,
    family_from_file,
    maximize_ratio,
    sharpness_probe,
    zoll_family,
)
from .potentials import (
    CheckResult,
    DegeneratePotentialError,
    OrbitRecord,
    Potential,
    PotentialError,
    check_C1,
    check_C2,
    check_C3,
    closed_orbits,
    min_orbit_period,
    polynomial_potential,
    return_time,
    tau_min,
    volume_contribution,
)
from .seifert import SurgeryData, SurgeryDataError, equivalent, euler_number, normalize

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundReport",
    "BoundaryOrbit",
    "CandidateResult",
    "CheckResult",
    "Component",
    "ContactGraph",
    "ContactModel",
    "DegeneratePotentialError",
    "GenerationError",
    "GraphError",
    "LemmaReport",
    "ModelError",
    "ModelIOError",
    "OptimizationReport",
    "OrbitRecord",
    "Potential",
    "PotentialError",
    "PotentialFamily",
    "SurgeryData",
    "SurgeryDataError",
    "SystoleCertificate",
    "SystoleResult",
    "TheoremViolationError",
    "ValidationReport",
    "Vertex",
    "Violation",
    "ZollBesseResult",
    "build_graph",
    "check_C1",
    "check_C2",
    "check_C3",
    "check_theorem_bound",
    "closed_orbits",
    "connected_sum",
    "equivalent",
    "euler_number",
    "evaluate_candidate",
    "family_from_file",
    "generate_admissible",
    "generate_lemma_5_2_instance",
    "is_bipartite",
    "lemma_trial",
    "load_model",
    "lutz_twist",
    "maximize_ratio",
    "min_orbit_period",
    "normalize",
    "parse_model",
    "polynomial_potential",
    "return_time",
    "save_model",
    "serialize_model",
    "sharpness_probe",
    "sieve_rational",
    "systole",
    "systolic_bound",
    "systolic_ratio",
    "tau_min",
    "validate",
    "verify_lemma_5_1",
    "verify_lemma_5_2",
    "verify_prop_5_3",
    "volume",
    "volume_contribution",
    "zoll_besse_evaluate",
    "zoll_family",
]
