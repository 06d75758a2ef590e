"""Exact s_HBL and communication-optimal tilings for loop nests."""

from ._hbltile import (
    BudgetExceeded,
    ProblemError,
    analyze,
    hnf,
    kernel_basis,
    parse_loop_nest,
    snf,
    tile,
    verify,
)

__all__ = [
    "BudgetExceeded",
    "ProblemError",
    "analyze",
    "hnf",
    "kernel_basis",
    "parse_loop_nest",
    "snf",
    "tile",
    "verify",
]
