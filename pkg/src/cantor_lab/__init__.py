"""Finite, exactly decidable pieces of reduction arguments on Cantor space.

Words, ruler sequences and index sets, level graphs, cylinder arithmetic with
flip maps, index-set conditions with certificates, reduction-table synthesis
with an independent verifier, relation transforms and shift-graph maps.
"""

from ._kernels import BACKEND, HAVE_COMPILED
from .report import INCONCLUSIVE, PASS, REFUTED, Report
from .words import DescribedPoint, card, psi, psi_inv, s_seq

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HAVE_COMPILED",
    "DescribedPoint",
    "INCONCLUSIVE",
    "PASS",
    "REFUTED",
    "Report",
    "card",
    "psi",
    "psi_inv",
    "s_seq",
    "__version__",
]
