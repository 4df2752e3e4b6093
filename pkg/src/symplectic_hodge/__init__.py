"""Exact symplectic Hodge theory on invariant-form models of nilmanifolds and tori."""

from .cohomology import CohomologyReport, euler_report, hard_lefschetz, mathieu_check
from .exterior import Form, wedge
from .lie_model import LieModel, ModelError, load_model, load_model_file, validate
from .operators import OperatorSuite
from .symplectic import CompatibleTriple, darboux_basis, validate_symplectic

__version__ = "0.1.0"

__all__ = [
    "CohomologyReport",
    "CompatibleTriple",
    "Form",
    "LieModel",
    "ModelError",
    "OperatorSuite",
    "darboux_basis",
    "euler_report",
    "hard_lefschetz",
    "load_model",
    "load_model_file",
    "mathieu_check",
    "validate",
    "validate_symplectic",
    "wedge",
]
