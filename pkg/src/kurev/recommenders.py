"""KUREC and the four baseline reviewer recommenders.

Every recommender is a small estimator: construct with parameters, `fit`
with the project history, then `recommend(pr)` test PRs. All of them use
strictly-prior data only (commits authored before, and PRs opened before,
the PR under recommendation) and never rank the PR's own author.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from .catalog import KU_COUNT
from .errors import NoKuError
from .mining import KuStore
from .prstore import PrDataset, PullRequest
from .profiles import dev_exp_matrix, pr_ku_vector, rev_exp_matrix

KIND_ORDER = ("kurec", "rf", "chrev", "er", "cf")


@dataclass(frozen=True)
class Recommendation:
    pr_id: int
    kind: str
    ranked: tuple[tuple[str, float], ...]

    def developers(self) -> list[str]:
        return [dev for dev, _ in self.ranked]

    def top(self, k: int) -> list[str]:
        return [dev for dev, _ in self.ranked[:k]]


@dataclass(frozen=True)
class History:
    """Everything a recommender may consult (filtered by PR date at use)."""

    store: KuStore
    prs: PrDataset

    def prior_prs(self, pr: PullRequest) -> list[PullRequest]:
        return [
            p for p in self.prs.prs if p.opened_at < pr.opened_at and p.id != pr.id
        ]

    def prior_commits(self, pr: PullRequest):
        return [c for c in self.store.commits if c.authored_at < pr.opened_at]


def rank(scores: dict[str, float], pr_id: int, kind: str) -> Recommendation:
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return Recommendation(pr_id=pr_id, kind=kind, ranked=tuple(ordered))


def recency_bonus(last: datetime | None, pr_open: datetime) -> float:
    """1 / max(1, whole days between last touch and the PR opening)."""
    if last is None:
        return 0.0
    if last >= pr_open:
        raise ValueError("last touch must precede the PR opening date")
    days = (pr_open - last).days
    return 1.0 / max(1, days)


class BaseRecommender:
    kind = "base"

    def __init__(self) -> None:
        self.history_: History | None = None

    def fit(self, history: History) -> "BaseRecommender":
        self.history_ = history
        return self

    def _history(self) -> History:
        if self.history_ is None:
            raise RuntimeError(f"{type(self).__name__} is not fitted")
        return self.history_

    def recommend(self, pr: PullRequest) -> Recommendation:
        raise NotImplementedError

    def get_params(self) -> dict:
        return {}


class KurecRecommender(BaseRecommender):
    """ExpertiseScore = DevScore + RevScore over the PR's present KUs."""

    kind = "kurec"

    def recommend(self, pr: PullRequest) -> Recommendation:
        history = self._history()
        vector = pr_ku_vector(history.store, pr)
        present = [k + 1 for k in range(KU_COUNT) if vector[k] > 0]
        if not present:
            raise NoKuError(f"PR {pr.id} contains no detectable KUs")

        dev_matrix, dev_touch = dev_exp_matrix(history.store, pr.opened_at)
        rev_matrix, rev_touch = rev_exp_matrix(history.prs, history.store, pr.opened_at)

        candidates = set(dev_matrix.developers) | set(rev_matrix.developers)
        candidates.discard(pr.author)
        scores: dict[str, float] = {}
        for dev in candidates:
            dev_score = 0.0
            rev_score = 0.0
            for ku in present:
                dev_score += dev_matrix.value(dev, ku)
                dev_score += recency_bonus(dev_touch.get(dev, ku), pr.opened_at)
                rev_score += rev_matrix.value(dev, ku)
                rev_score += recency_bonus(rev_touch.get(dev, ku), pr.opened_at)
            scores[dev] = dev_score + rev_score
        return rank(scores, pr.id, self.kind)

    def decompose(self, pr: PullRequest) -> dict[str, tuple[float, float]]:
        """Per-candidate (DevScore, RevScore) pairs, for auditability."""
        history = self._history()
        vector = pr_ku_vector(history.store, pr)
        present = [k + 1 for k in range(KU_COUNT) if vector[k] > 0]
        if not present:
            raise NoKuError(f"PR {pr.id} contains no detectable KUs")
        dev_matrix, dev_touch = dev_exp_matrix(history.store, pr.opened_at)
        rev_matrix, rev_touch = rev_exp_matrix(history.prs, history.store, pr.opened_at)
        candidates = set(dev_matrix.developers) | set(rev_matrix.developers)
        candidates.discard(pr.author)
        out = {}
        for dev in sorted(candidates):
            dev_score = sum(
                dev_matrix.value(dev, ku)
                + recency_bonus(dev_touch.get(dev, ku), pr.opened_at)
                for ku in present
            )
            rev_score = sum(
                rev_matrix.value(dev, ku)
                + recency_bonus(rev_touch.get(dev, ku), pr.opened_at)
                for ku in present
            )
            out[dev] = (dev_score, rev_score)
        return out


class CfRecommender(BaseRecommender):
    """Commit frequency: prior commit count per developer."""

    kind = "cf"

    def recommend(self, pr: PullRequest) -> Recommendation:
        history = self._history()
        counts: dict[str, float] = {}
        for commit in history.prior_commits(pr):
            counts[commit.author] = counts.get(commit.author, 0.0) + 1.0
        counts.pop(pr.author, None)
        return rank(counts, pr.id, self.kind)


class RfRecommender(BaseRecommender):
    """Review frequency: prior reviewed-PR count per developer.

    ``mode="comments"`` counts review comments instead (the paper's
    wording is ambiguous; reviewed PRs is the default reading).
    """

    kind = "rf"

    def __init__(self, mode: str = "prs"):
        super().__init__()
        if mode not in ("prs", "comments"):
            raise ValueError(f"unknown RF mode {mode!r}")
        self.mode = mode

    def get_params(self) -> dict:
        return {"mode": self.mode}

    def recommend(self, pr: PullRequest) -> Recommendation:
        history = self._history()
        counts: dict[str, float] = {}
        for prior in history.prior_prs(pr):
            if self.mode == "prs":
                for reviewer in prior.reviewers:
                    counts[reviewer] = counts.get(reviewer, 0.0) + 1.0
            else:
                for comment in prior.review_comments:
                    counts[comment.reviewer] = counts.get(comment.reviewer, 0.0) + 1.0
        counts.pop(pr.author, None)
        return rank(counts, pr.id, self.kind)


class ErRecommender(BaseRecommender):
    """Expertise recency: last modifier of the PR's files, newest first."""

    kind = "er"

    def recommend(self, pr: PullRequest) -> Recommendation:
        history = self._history()
        changed = set(pr.changed_files)
        last: dict[str, float] = {}
        for commit in history.prior_commits(pr):
            if not changed.intersection(commit.changed_java_files):
                continue
            stamp = commit.authored_at.replace(tzinfo=timezone.utc).timestamp()
            if stamp > last.get(commit.author, float("-inf")):
                last[commit.author] = stamp
        last.pop(pr.author, None)
        return rank(last, pr.id, self.kind)


class ChrevRecommender(BaseRecommender):
    """CHREV: per-file comment share, workday share, and recency."""

    kind = "chrev"

    def recommend(self, pr: PullRequest) -> Recommendation:
        history = self._history()
        scores: dict[str, float] = {}
        for path in pr.changed_files:
            stats = self._file_stats(history, pr, path)
            for reviewer, x in stats.items():
                scores[reviewer] = scores.get(reviewer, 0.0) + x
        scores.pop(pr.author, None)
        return rank(scores, pr.id, self.kind)

    @staticmethod
    def _file_stats(history: History, pr: PullRequest, path: str) -> dict[str, float]:
        comments: dict[str, int] = {}
        workdays: dict[str, set] = {}
        for prior in history.prior_prs(pr):
            if path not in prior.changed_files:
                continue
            for comment in prior.review_comments:
                if comment.path != path:
                    continue
                r = comment.reviewer
                comments[r] = comments.get(r, 0) + 1
                workdays.setdefault(r, set()).add(comment.commented_at.date())
        if not comments:
            return {}
        total_comments = sum(comments.values())
        total_workdays = sum(len(days) for days in workdays.values())
        latest_overall = max(max(days) for days in workdays.values())
        out: dict[str, float] = {}
        for reviewer, c in comments.items():
            share_c = c / total_comments if total_comments else 0.0
            share_w = len(workdays[reviewer]) / total_workdays if total_workdays else 0.0
            gap = abs((latest_overall - max(workdays[reviewer])).days)
            recency = 1.0 / gap if gap > 0 else 1.0
            out[reviewer] = share_c + share_w + recency
        return out


BASE_RECOMMENDERS = {
    "kurec": KurecRecommender,
    "cf": CfRecommender,
    "rf": RfRecommender,
    "er": ErRecommender,
    "chrev": ChrevRecommender,
}


def make_recommender(kind: str, **params) -> BaseRecommender:
    try:
        cls = BASE_RECOMMENDERS[kind]
    except KeyError:
        raise ValueError(f"unknown recommender kind {kind!r}") from None
    return cls(**params)
