"""Person-machine alignment metrics between two candidate evaluations.

An Evaluation is an ordered ranking plus a set of excluded (not
recommended / disqualified) candidates. Alignment is quantified by
Kendall tau over the shared ranked candidates, top-k overlap, Jaccard
agreement of exclusion sets, and a weighted composite of the three.

Kendall tau here is computed by merge-sort inversion counting; the test
suite checks it against an O(n^2) pair-enumeration oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BadWeights, InsufficientOverlap, KTooLarge

DEFAULT_WEIGHTS = (0.5, 0.25, 0.25)
DEFAULT_TOP_K = 3


@dataclass
class Evaluation:
    evaluator: str
    ranked: list[str]
    excluded: set[str] = field(default_factory=set)

    def __post_init__(self):
        if len(set(self.ranked)) != len(self.ranked):
            raise InsufficientOverlap("duplicate ids in ranking")
        if set(self.ranked) & self.excluded:
            raise InsufficientOverlap("ranked and excluded sets overlap")


@dataclass
class FitReport:
    human: str
    machine: str
    tau: float
    topk: float
    exclusion: float
    composite: float
    weights: tuple[float, float, float]
    shared_candidates: int

    def to_dict(self) -> dict:
        return {
            "human": self.human,
            "machine": self.machine,
            "tau": self.tau,
            "topk": self.topk,
            "exclusion": self.exclusion,
            "composite": self.composite,
            "weights": list(self.weights),
            "shared_candidates": self.shared_candidates,
        }


def _count_inversions(seq: list[int]) -> int:
    """Merge-sort inversion count (pairs out of order)."""
    if len(seq) < 2:
        return 0
    mid = len(seq) // 2
    left, right = seq[:mid], seq[mid:]
    inv = _count_inversions(left) + _count_inversions(right)
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            inv += len(left) - i
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    seq[:] = merged
    return inv


def rank_correlation(a: list[str], b: list[str]) -> float:
    """Kendall tau over the candidates ranked by both sides.

    Restricted to the intersection of the two rankings; fewer than two
    shared candidates is an error.
    """
    shared = [x for x in a if x in set(b)]
    if len(shared) < 2:
        raise InsufficientOverlap(f"only {len(shared)} shared candidates")
    pos_b = {x: i for i, x in enumerate(b) if x in set(shared)}
    sequence = [pos_b[x] for x in shared]
    n = len(sequence)
    total = n * (n - 1) // 2
    discordant = _count_inversions(list(sequence))
    concordant = total - discordant
    return (concordant - discordant) / total


def topk_overlap(a: list[str], b: list[str], k: int = DEFAULT_TOP_K) -> float:
    """|top-k(a) intersect top-k(b)| / k."""
    if k < 1 or k > min(len(a), len(b)):
        raise KTooLarge(f"k={k} exceeds ranking lengths {len(a)}, {len(b)}")
    return len(set(a[:k]) & set(b[:k])) / k


def exclusion_agreement(a: Evaluation, b: Evaluation) -> float:
    """Jaccard agreement of the excluded sets; both empty counts as 1."""
    if not a.excluded and not b.excluded:
        return 1.0
    union = a.excluded | b.excluded
    return len(a.excluded & b.excluded) / len(union)


def fit_score(human: Evaluation, machine: Evaluation,
              weights: tuple[float, float, float] = DEFAULT_WEIGHTS,
              k: int = DEFAULT_TOP_K) -> FitReport:
    """Weighted composite of rank, top-k, and exclusion agreement.

    composite = w1 * (tau + 1) / 2 + w2 * topk + w3 * exclusion
    """
    if len(weights) != 3 or any(w < 0 for w in weights):
        raise BadWeights(f"bad weights {weights!r}")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise BadWeights(f"weights sum to {sum(weights)!r}, not 1")
    tau = rank_correlation(human.ranked, machine.ranked)
    topk = topk_overlap(human.ranked, machine.ranked, k)
    exclusion = exclusion_agreement(human, machine)
    composite = weights[0] * (tau + 1.0) / 2.0 + weights[1] * topk + weights[2] * exclusion
    shared = len(set(human.ranked) & set(machine.ranked))
    return FitReport(
        human=human.evaluator,
        machine=machine.evaluator,
        tau=tau,
        topk=topk,
        exclusion=exclusion,
        composite=composite,
        weights=tuple(weights),
        shared_candidates=shared,
    )


def comparison_table(left: Evaluation, right: Evaluation) -> str:
    """Aligned side-by-side plain-text rendering of two rankings."""
    rows = max(len(left.ranked) + len(left.excluded),
               len(right.ranked) + len(right.excluded))
    lines = [f"{'Rank':<6}{left.evaluator:<24}{right.evaluator:<24}"]
    lines.append("-" * 54)

    def cell(ev: Evaluation, i: int) -> str:
        if i < len(ev.ranked):
            return ev.ranked[i]
        j = i - len(ev.ranked)
        tail = sorted(ev.excluded)
        return f"{tail[j]} (excluded)" if j < len(tail) else ""

    for i in range(rows):
        lines.append(f"{i + 1:<6}{cell(left, i):<24}{cell(right, i):<24}")
    return "\n".join(lines)
