"""Exact q-series, cubic differential equations for Eisenstein series, and their elliptic curves."""

from .qseries import QQ, QQi, GaussianRational, TruncSeries
from .forms import EtaQuotient, delta_N, eta_expand, form
from .odes import CubicODE, catalog, get_ode, verify, verify_all, solve_series, search_solutions
from .ellcurve import WeierstrassCurve, from_ode, minimal_model, conductor, curve_report, twist_relation
from .newform import NewformSpec, newform_for, modularity_check

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "QQi",
    "GaussianRational",
    "TruncSeries",
    "EtaQuotient",
    "delta_N",
    "eta_expand",
    "form",
    "CubicODE",
    "catalog",
    "get_ode",
    "verify",
    "verify_all",
    "solve_series",
    "search_solutions",
    "WeierstrassCurve",
    "from_ode",
    "minimal_model",
    "conductor",
    "curve_report",
    "twist_relation",
    "NewformSpec",
    "newform_for",
    "modularity_check",
]
