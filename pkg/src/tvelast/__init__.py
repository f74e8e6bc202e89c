"""Estimation toolkit for the link between money growth and inflation.

Constant-parameter OLS with stability diagnostics, ADF unit-root pretests,
and a time-varying-coefficient state-space model estimated by Kalman-filter
maximum likelihood, plus a pipeline that runs the whole battery on a CSV of
monthly levels.
"""

from .errors import TvelastError
from .series import Dataset, DecadeAverage, MonthDate, MonthlySeries

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DecadeAverage",
    "MonthDate",
    "MonthlySeries",
    "TvelastError",
    "__version__",
]
