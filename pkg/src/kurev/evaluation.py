"""Ranking metrics (top-k accuracy, AP@k/MAP@k) and reasonableness."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .mining import CommitRecord
from .prstore import PullRequest
from .recommenders import Recommendation

SIX_MONTHS = timedelta(days=183)


def is_correct_top_k(rec: Recommendation | None, truth: set[str], k: int) -> bool:
    if rec is None:
        return False
    return any(dev in truth for dev in rec.top(k))


def top_k_accuracy(
    recs: Sequence[Recommendation | None],
    truth: Mapping[int, set[str]],
    k: int,
) -> float:
    """Fraction of PRs whose true reviewer set meets the top-k list."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not recs:
        raise ValueError("no recommendations to score")
    hits = sum(
        1
        for rec in recs
        if rec is not None and is_correct_top_k(rec, truth.get(rec.pr_id, set()), k)
    )
    return hits / len(recs)


def average_precision(ranked: Sequence[str], truth: set[str], k: int) -> float:
    """AP@k: [Σ (s(i)/i)·rel(i)] / Σ rel(i); zero relevant in top-k → 0.

    s(i) is the running count of correct developers up to position i.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    seen = 0
    total = 0.0
    for i, dev in enumerate(ranked[:k], start=1):
        if dev in truth:
            seen += 1
            total += seen / i
    return total / seen if seen else 0.0


def map_at_k(
    recs: Sequence[Recommendation | None],
    truth: Mapping[int, set[str]],
    k: int,
) -> float:
    """Mean of AP@k across test PRs (empty recommendations score 0)."""
    if not recs:
        raise ValueError("no recommendations to score")
    total = 0.0
    for rec in recs:
        if rec is not None:
            total += average_precision(
                rec.developers(), truth.get(rec.pr_id, set()), k
            )
    return total / len(recs)


def reasonableness(
    pr: PullRequest,
    top1: str,
    commits: Iterable[CommitRecord],
    prior_prs: Iterable[PullRequest],
) -> bool | None:
    """Whether a top-1 mismatch is still a reasonable pick.

    Defined only when top1 is not a true reviewer (returns None otherwise).
    F = files the recommended developer touched — via own commits or own
    submitted PRs — in the 183 days before the PR opened; reasonable iff
    at least half of the PR's changed files are in F.
    """
    if top1 in pr.reviewers:
        return None
    window_start = pr.opened_at - SIX_MONTHS
    touched: set[str] = set()
    for commit in commits:
        if commit.author == top1 and window_start <= commit.authored_at < pr.opened_at:
            touched.update(commit.changed_java_files)
    for prior in prior_prs:
        if prior.author == top1 and window_start <= prior.opened_at < pr.opened_at:
            touched.update(prior.changed_files)
    changed = set(pr.changed_files)
    if not changed:
        return False
    return len(changed & touched) >= 0.5 * len(changed)


@dataclass
class EvalReport:
    """Per-recommender metric table plus reasonableness percentages."""

    project: str
    pr_count: int
    accuracy: dict[tuple[str, int], float] = field(default_factory=dict)
    mean_ap: dict[tuple[str, int], float] = field(default_factory=dict)
    reasonable_pct: dict[str, float] = field(default_factory=dict)

    def recommenders(self) -> list[str]:
        return sorted({kind for kind, _ in self.accuracy})

    def to_table(self) -> str:
        lines = ["project\trecommender\tmetric\tk1\tk2\tk3\tk4\tk5"]
        for kind in self.recommenders():
            for metric, data in (("accuracy", self.accuracy), ("map", self.mean_ap)):
                cells = "\t".join(f"{data[(kind, k)]:.6f}" for k in range(1, 6))
                lines.append(f"{self.project}\t{kind}\t{metric}\t{cells}")
        lines.append("")
        lines.append("project\trecommender\treasonable_pct\tpr_count")
        for kind in sorted(self.reasonable_pct):
            lines.append(
                f"{self.project}\t{kind}\t{self.reasonable_pct[kind]:.6f}\t{self.pr_count}"
            )
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(self.to_table(), encoding="utf-8")
