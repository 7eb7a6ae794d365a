from .fine import FeasibilityResult, chsh_variants, chsh_verdict, feasible_joint, joint_exists
from .frlogic import fr_logic_contradiction, certainty_premises, premises_from_table
from .parity import ghz_parity_satisfiable
from .timeorder import PrecedenceGraph, admissible_orders, time_order_audit

__all__ = [
    "FeasibilityResult",
    "PrecedenceGraph",
    "admissible_orders",
    "chsh_variants",
    "chsh_verdict",
    "feasible_joint",
    "fr_logic_contradiction",
    "ghz_parity_satisfiable",
    "joint_exists",
    "certainty_premises",
    "premises_from_table",
    "time_order_audit",
]
