"""
Model package

Exports the immutable pydantic domain models.
"""

from models.stack_model import Block, Contact, PointWeight, Stack
from models.distribution_model import Distribution, SignedDistribution
from models.move_model import Action, ExtremeMove, LossyMove, Move, MoveScript, Trace, TraceStep
from models.linear_system_model import Feasible, FeasibilityResult, Infeasible, LinearRow, LinearSystem
from models.balance_model import Balanced, BalanceVerdict, ForceCertificate, ForceEntry, Unbalanced

__all__ = [
    "Block",
    "Contact",
    "PointWeight",
    "Stack",
    "Distribution",
    "SignedDistribution",
    "Action",
    "ExtremeMove",
    "LossyMove",
    "Move",
    "MoveScript",
    "Trace",
    "TraceStep",
    "Feasible",
    "FeasibilityResult",
    "Infeasible",
    "LinearRow",
    "LinearSystem",
    "Balanced",
    "BalanceVerdict",
    "ForceCertificate",
    "ForceEntry",
    "Unbalanced",
]
