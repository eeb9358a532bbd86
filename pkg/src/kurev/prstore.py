"""Pull-request dataset: ingest, validate, filter, chronological split."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .errors import SchemaError, SplitError
from .util import format_rfc3339, parse_rfc3339, read_jsonl, write_jsonl


@dataclass(frozen=True)
class ReviewComment:
    reviewer: str
    path: str | None
    commented_at: datetime

    def to_dict(self) -> dict:
        return {
            "reviewer": self.reviewer,
            "path": self.path,
            "commented_at": format_rfc3339(self.commented_at),
        }


@dataclass(frozen=True)
class PullRequest:
    id: int
    opened_at: datetime
    state: str  # open | closed
    changed_files: tuple[str, ...]
    reviewers: frozenset[str]
    author: str
    review_comments: tuple[ReviewComment, ...] = ()
    head_commit: str | None = None

    def changed_java_files(self) -> tuple[str, ...]:
        return tuple(f for f in self.changed_files if f.endswith(".java"))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "opened_at": format_rfc3339(self.opened_at),
            "state": self.state,
            "changed_files": list(self.changed_files),
            "reviewers": sorted(self.reviewers),
            "author": self.author,
            "review_comments": [c.to_dict() for c in self.review_comments],
            "head_commit": self.head_commit,
        }


@dataclass(frozen=True)
class PrDataset:
    project: str
    prs: tuple[PullRequest, ...]  # sorted by (opened_at, id)


_REQUIRED = ("id", "opened_at", "state", "changed_files", "reviewers", "author")


def _parse_pr(raw: dict, position: int) -> PullRequest:
    if not isinstance(raw, dict):
        raise SchemaError(f"record {position}: not an object", record=position)
    for field_name in _REQUIRED:
        if field_name not in raw:
            raise SchemaError(
                f"record {position}: missing field {field_name!r}",
                record=position,
                field=field_name,
            )

    def bad(field_name: str, why: str) -> SchemaError:
        return SchemaError(
            f"record {position}: field {field_name!r} {why}",
            record=position,
            field=field_name,
        )

    try:
        pr_id = int(raw["id"])
    except (TypeError, ValueError):
        raise bad("id", "is not an integer") from None
    try:
        opened_at = parse_rfc3339(str(raw["opened_at"]))
    except ValueError:
        raise bad("opened_at", "is not an RFC-3339 timestamp") from None
    state = str(raw["state"])
    if state not in ("open", "closed"):
        raise bad("state", "must be 'open' or 'closed'")
    if not isinstance(raw["changed_files"], list):
        raise bad("changed_files", "must be a list")
    if not isinstance(raw["reviewers"], list):
        raise bad("reviewers", "must be a list")

    comments = []
    for i, c in enumerate(raw.get("review_comments", []) or []):
        if not isinstance(c, dict) or "reviewer" not in c or "commented_at" not in c:
            raise bad("review_comments", f"entry {i} malformed")
        try:
            at = parse_rfc3339(str(c["commented_at"]))
        except ValueError:
            raise bad("review_comments", f"entry {i} has a bad timestamp") from None
        if at < opened_at:
            raise bad("review_comments", f"entry {i} precedes opened_at")
        comments.append(ReviewComment(str(c["reviewer"]), c.get("path"), at))

    return PullRequest(
        id=pr_id,
        opened_at=opened_at,
        state=state,
        changed_files=tuple(str(f) for f in raw["changed_files"]),
        reviewers=frozenset(str(r) for r in raw["reviewers"]),
        author=str(raw["author"]),
        review_comments=tuple(comments),
        head_commit=raw.get("head_commit"),
    )


def load_prs(path: str | Path, project: str | None = None) -> PrDataset:
    """Load and validate a JSONL PR export; result is chronologically sorted."""
    p = Path(path)
    if project is None:
        project = p.stem
    try:
        raw_records = read_jsonl(p)
    except ValueError as exc:
        raise SchemaError(f"{p}: not valid JSONL ({exc})") from exc
    prs = [_parse_pr(raw, i) for i, raw in enumerate(raw_records, start=1)]
    seen: set[int] = set()
    for i, pr in enumerate(prs, start=1):
        if pr.id in seen:
            raise SchemaError(f"record {i}: duplicate id {pr.id}", record=i, field="id")
        seen.add(pr.id)
    prs.sort(key=lambda pr: (pr.opened_at, pr.id))
    return PrDataset(project=project, prs=tuple(prs))


def save_prs(ds: PrDataset, path: str | Path) -> None:
    write_jsonl(Path(path), (pr.to_dict() for pr in ds.prs))


def filter_prs(ds: PrDataset, min_prs: int = 100) -> tuple[PrDataset, bool]:
    """Keep closed PRs with ≥1 reviewer and ≥1 changed Java file.

    The boolean is the project-eligibility flag (kept count ≥ min_prs).
    """
    kept = tuple(
        pr
        for pr in ds.prs
        if pr.state == "closed" and pr.reviewers and pr.changed_java_files()
    )
    return PrDataset(ds.project, kept), len(kept) >= min_prs


def chronological_split(
    ds: PrDataset, train_fraction: float = 0.8
) -> tuple[PrDataset, PrDataset]:
    """First ⌊fraction·n⌋ PRs train, remainder test; rejects n < 5."""
    n = len(ds.prs)
    if n < 5:
        raise SplitError(f"dataset has {n} PRs; need at least 5 to split")
    cut = math.floor(train_fraction * n)
    train = PrDataset(ds.project, ds.prs[:cut])
    test = PrDataset(ds.project, ds.prs[cut:])
    return train, test
