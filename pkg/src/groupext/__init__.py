"""Exact extremality testing for piecewise linear functions on the torus.

The package decides whether a minimal, diagonally constrained, continuous
piecewise linear function over the 1/q triangulation of [0,1)^2 is an
extreme cut-generating function, and emits machine-verifiable evidence
either way: a pair of distinct minimal functions averaging to the input
when it is not extreme, a full-rank report for its finite linear system
when it is.
"""

from .geometry import Face, FaceKind, GridPoint, Rat, TorusPoint
from .piecewise import PLFunction, SlackTable, min_positive_slack, refine
from .minimality import MinimalityReport, check_minimality
from .driver import Certificate, Mode, Verdict, decide, verify_certificate

__all__ = [
    "Face",
    "FaceKind",
    "GridPoint",
    "Rat",
    "TorusPoint",
    "PLFunction",
    "SlackTable",
    "min_positive_slack",
    "refine",
    "MinimalityReport",
    "check_minimality",
    "Certificate",
    "Mode",
    "Verdict",
    "decide",
    "verify_certificate",
]
