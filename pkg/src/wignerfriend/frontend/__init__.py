from .plan import Diagnostic, ExperimentPlan, PlanError, load_plan, parse_plan, serialize_plan
from .runner import Report, report_to_dict, run_plan, table_to_csv

__all__ = [
    "Diagnostic",
    "ExperimentPlan",
    "PlanError",
    "Report",
    "load_plan",
    "parse_plan",
    "report_to_dict",
    "run_plan",
    "serialize_plan",
    "table_to_csv",
]
