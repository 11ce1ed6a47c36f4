"""Violation filtering and orthogonality-based cut selection."""

from __future__ import annotations

from dataclasses import dataclass, field

from .base import AVIC, CCC, LCI, Cut, inner_product


@dataclass
class CutSelectionPolicy:
    precision: dict = field(default_factory=lambda: {CCC: 0.01, LCI: 1e-5, AVIC: 0.0})
    max_inner_product: dict = field(default_factory=lambda: {CCC: 0.03})
    # compare each candidate with every kept cut instead of the top one only
    pairwise: bool = False

    def __post_init__(self):
        for table in (self.precision, self.max_inner_product):
            for kind, v in table.items():
                if v < 0:
                    raise ValueError(f"threshold for {kind} must be nonnegative")


def select_cuts(candidates: list[Cut], policy: CutSelectionPolicy | None = None,
                max_inner: float | None = None) -> list[Cut]:
    """Keep the cut of largest distance (violation / norm), then every
    candidate whose cosine with the reference cut(s) is at most the bound."""
    if not candidates:
        return []
    policy = policy or CutSelectionPolicy()
    if max_inner is None:
        kind = candidates[0].kind
        max_inner = policy.max_inner_product.get(kind, 0.03)
    ranked = sorted(enumerate(candidates), key=lambda kc: (-kc[1].distance, kc[0]))
    kept = [ranked[0][1]]
    for _, cut in ranked[1:]:
        refs = kept if policy.pairwise else kept[:1]
        if all(inner_product(cut, ref) <= max_inner + 1e-12 for ref in refs):
            kept.append(cut)
    return kept
