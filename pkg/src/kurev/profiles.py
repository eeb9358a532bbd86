"""Development and review expertise matrices over the 28 KUs.

Raw occurrence sums per developer are column-normalized so each active KU
column holds each developer's share of all observed occurrences of that
KU, as of a strict cutoff. LastTouch records the most recent contact a
developer had with each KU on the same side (commit date / reviewed-PR
opening date).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .catalog import KU_COUNT, KU_NAMES
from .mining import KuStore
from .prstore import PrDataset, PullRequest
from .util import format_rfc3339, parse_rfc3339, read_jsonl, write_jsonl

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExpertiseMatrix:
    kind: str  # development | review
    cutoff: datetime | None  # None = +infinity
    developers: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]  # developers x 28, in [0,1]

    def value(self, developer: str, ku_index: int) -> float:
        """Ratio for a 1-based KU index; unknown developers score 0."""
        try:
            row = self.developers.index(developer)
        except ValueError:
            return 0.0
        return self.values[row][ku_index - 1]

    def row(self, developer: str) -> tuple[float, ...]:
        try:
            return self.values[self.developers.index(developer)]
        except ValueError:
            return tuple(0.0 for _ in range(KU_COUNT))


@dataclass
class LastTouch:
    dates: dict[tuple[str, int], datetime] = field(default_factory=dict)

    def get(self, developer: str, ku_index: int) -> datetime | None:
        return self.dates.get((developer, ku_index))

    def note(self, developer: str, ku_index: int, when: datetime) -> None:
        key = (developer, ku_index)
        prev = self.dates.get(key)
        if prev is None or when > prev:
            self.dates[key] = when


def _normalize(raw: dict[str, list[float]], kind: str, cutoff) -> ExpertiseMatrix:
    developers = tuple(sorted(raw))
    totals = [0.0] * KU_COUNT
    for dev in developers:
        for k in range(KU_COUNT):
            totals[k] += raw[dev][k]
    values = tuple(
        tuple(
            raw[dev][k] / totals[k] if totals[k] > 0 else 0.0
            for k in range(KU_COUNT)
        )
        for dev in developers
    )
    return ExpertiseMatrix(kind=kind, cutoff=cutoff, developers=developers, values=values)


def dev_exp_matrix(
    store: KuStore, cutoff: datetime | None
) -> tuple[ExpertiseMatrix, LastTouch]:
    """Occurrences per author over commits strictly before the cutoff."""
    raw: dict[str, list[float]] = {}
    touch = LastTouch()
    for commit in store.commits:
        if cutoff is not None and commit.authored_at >= cutoff:
            continue
        row = raw.setdefault(commit.author, [0.0] * KU_COUNT)
        for path in commit.changed_java_files:
            vector = store.vector(commit.hash, path)
            if vector is None:
                continue
            for k, count in enumerate(vector):
                if count:
                    row[k] += count
                    touch.note(commit.author, k + 1, commit.authored_at)
    return _normalize(raw, "development", cutoff), touch


def resolve_pr_file_vector(
    store: KuStore, pr: PullRequest, path: str
) -> list[int] | None:
    """KU vector backing one changed file of a PR.

    Prefers the snapshot at the PR's recorded head commit; otherwise the
    file's latest snapshot from a commit before the PR was opened.
    """
    if pr.head_commit is not None:
        vector = store.vector(pr.head_commit, path)
        if vector is not None:
            return vector
    best: list[int] | None = None
    best_at = None
    for commit in store.commits:
        if commit.authored_at >= pr.opened_at:
            continue
        if path not in commit.changed_java_files:
            continue
        vector = store.vector(commit.hash, path)
        if vector is None:
            continue
        if best_at is None or commit.authored_at >= best_at:
            best, best_at = vector, commit.authored_at
    return best


def pr_ku_vector(store: KuStore, pr: PullRequest) -> list[int]:
    """Aggregate KU vector over a PR's changed Java files."""
    total = [0] * KU_COUNT
    for path in pr.changed_java_files():
        vector = resolve_pr_file_vector(store, pr, path)
        if vector is None:
            log.warning("PR %s: no content resolvable for %s; skipped", pr.id, path)
            continue
        for k, count in enumerate(vector):
            total[k] += count
    return total


def rev_exp_matrix(
    prs: PrDataset, store: KuStore, cutoff: datetime | None
) -> tuple[ExpertiseMatrix, LastTouch]:
    """Occurrences per reviewer over PRs opened strictly before the cutoff.

    Every reviewer of a PR is credited the full occurrences of its files.
    """
    raw: dict[str, list[float]] = {}
    touch = LastTouch()
    for pr in prs.prs:
        if cutoff is not None and pr.opened_at >= cutoff:
            continue
        if not pr.reviewers:
            continue
        vector = pr_ku_vector(store, pr)
        for reviewer in pr.reviewers:
            row = raw.setdefault(reviewer, [0.0] * KU_COUNT)
            for k, count in enumerate(vector):
                if count:
                    row[k] += count
                    touch.note(reviewer, k + 1, pr.opened_at)
    return _normalize(raw, "review", cutoff), touch


def global_ku_profiles(store: KuStore) -> ExpertiseMatrix:
    """P_ku: the whole-store development matrix (cutoff = +infinity)."""
    matrix, _ = dev_exp_matrix(store, cutoff=None)
    return matrix


# --- persistence -----------------------------------------------------------


def save_matrix(matrix: ExpertiseMatrix, path: str | Path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as fh:
        fh.write("developer\t" + "\t".join(KU_NAMES) + "\n")
        for dev, row in zip(matrix.developers, matrix.values):
            fh.write(dev + "\t" + "\t".join(f"{v:.12g}" for v in row) + "\n")


def save_last_touch(touch: LastTouch, path: str | Path) -> None:
    write_jsonl(
        Path(path),
        (
            {"developer": dev, "ku": ku, "last": format_rfc3339(when)}
            for (dev, ku), when in sorted(touch.dates.items())
        ),
    )


def load_last_touch(path: str | Path) -> LastTouch:
    touch = LastTouch()
    for rec in read_jsonl(Path(path)):
        touch.note(rec["developer"], rec["ku"], parse_rfc3339(rec["last"]))
    return touch
