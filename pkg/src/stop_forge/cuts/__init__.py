"""Valid inequalities for the STOP relaxation and the cutting-plane driver."""

from .avic import bidirectional_pairs, separate_avics
from .base import AVIC, CCC, KINDS, LCI, Cut, inner_product
from .ccc import separate_cccs
from .conflicts import ConflictStructure, build_conflicts, conflict_pairs
from .cutting_plane import CuttingPlaneResult, TraceRecord, cutting_plane
from .lci import find_cover, lift_cover, separate_lci
from .selection import CutSelectionPolicy, select_cuts

__all__ = [
    "AVIC", "CCC", "KINDS", "LCI", "ConflictStructure", "Cut", "CutSelectionPolicy",
    "CuttingPlaneResult", "TraceRecord", "bidirectional_pairs", "build_conflicts",
    "conflict_pairs", "cutting_plane", "find_cover", "inner_product", "lift_cover",
    "select_cuts", "separate_avics", "separate_cccs", "separate_lci",
]
