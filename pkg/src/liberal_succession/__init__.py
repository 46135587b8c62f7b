"""Pareto improvement versus liberal succession for communities with interdependent preferences."""

from .core import (
    AgentSpec,
    BudgetExceeded,
    Community,
    StateGrid,
    enumerate_states,
    make_state,
    relation,
)
from .expr import EvaluationError, ExprSyntaxError, evaluate, parse, to_text
from .relations import (
    coincidence_report,
    liberal_successor,
    liberal_successor_permissive,
    pareto_superior,
)
from .axioms import CheckResult, ScanMode, detect_support, recheck
from .cone import ConeCertificate, cone_membership
from .representation import (
    AffineRepresentation,
    canonical_common_factors,
    common_factor_check,
    derive_coefficients,
    fit_additive,
    lemma_sign_checks,
    nonmalevolence_equivalence,
    synthesize_from_matrix,
    theorem1_certify,
)
from .document import CommunityDocument, example_document, load_document

__version__ = "0.1.0"
