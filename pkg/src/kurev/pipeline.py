"""End-to-end pipeline: mine → prs → profiles → evaluate → cluster.

Stages are pure functions of (inputs, config, seed). Each stage writes a
stamp file with a content hash of its inputs; an unchanged stamp skips
the stage, so reruns are cheap and byte-identical.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import yaml

from .adaptive import VARIANTS, AdaptiveRecommender, safe_recommend
from .catalog import load_catalog, serialize_catalog
from .clustering import DegenerateDataError, diff_values, gini, pca_reduce, select_k
from .errors import KurevError
from .evaluation import EvalReport, average_precision, reasonableness, top_k_accuracy
from .mining import KuStore, _git, build_ku_store
from .prstore import (
    PrDataset,
    chronological_split,
    filter_prs,
    load_prs,
    save_prs,
)
from .profiles import global_ku_profiles, save_matrix
from .recommenders import KIND_ORDER, History, Recommendation, make_recommender
from .util import dump_json_line, sha256_text

log = logging.getLogger(__name__)

ALL_KINDS = KIND_ORDER + tuple(f"ad_{v}" for v in VARIANTS)


@dataclass(frozen=True)
class ProjectConfig:
    repo: Path
    prs: Path
    out_dir: Path
    catalog: Path | None = None
    cache_dir: Path | None = None
    seed: int = 0
    rf_mode: str = "prs"
    all_commits: bool = False
    train_fraction: float = 0.8
    k_max: int = 100

    @classmethod
    def from_file(cls, path: str | Path) -> "ProjectConfig":
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(doc, dict) or "repo" not in doc or "prs" not in doc:
            raise KurevError(f"config {path} must define 'repo' and 'prs'")
        base = Path(path).parent
        def p(key, default=None):
            return (base / doc[key]).resolve() if key in doc else default
        return cls(
            repo=p("repo"),
            prs=p("prs"),
            out_dir=p("out_dir", base / "out"),
            catalog=p("catalog"),
            cache_dir=p("cache_dir"),
            seed=int(doc.get("seed", 0)),
            rf_mode=str(doc.get("rf_mode", "prs")),
            all_commits=bool(doc.get("all_commits", False)),
            train_fraction=float(doc.get("train_fraction", 0.8)),
            k_max=int(doc.get("k_max", 100)),
        )

    def validate(self) -> None:
        if not self.repo.exists():
            raise KurevError(f"repository path missing: {self.repo}")
        if not self.prs.exists():
            raise KurevError(f"PR export missing: {self.prs}")
        if self.catalog is not None and not self.catalog.exists():
            raise KurevError(f"catalog file missing: {self.catalog}")


# --- evaluation driver -------------------------------------------------------


def run_base_recommenders(
    history: History, test_prs: list, rf_mode: str = "prs"
) -> dict[str, dict[int, Recommendation]]:
    out: dict[str, dict[int, Recommendation]] = {}
    for kind in KIND_ORDER:
        params = {"mode": rf_mode} if kind == "rf" else {}
        model = make_recommender(kind, **params).fit(history)
        out[kind] = {pr.id: safe_recommend(model, pr) for pr in test_prs}
    return out


def evaluate_project(
    history: History,
    test: PrDataset,
    seed: int = 0,
    rf_mode: str = "prs",
) -> EvalReport:
    """Score the five base and three adaptive recommenders on the test set."""
    test_prs = list(test.prs)
    truth = {pr.id: set(pr.reviewers) for pr in test_prs}
    base = run_base_recommenders(history, test_prs, rf_mode=rf_mode)

    recs_by_kind: dict[str, list[Recommendation]] = {
        kind: [base[kind][pr.id] for pr in test_prs] for kind in KIND_ORDER
    }
    for variant in VARIANTS:
        steps = AdaptiveRecommender(variant, seed=seed).fit(history).replay(
            test_prs, base_recommendations=base
        )
        recs_by_kind[f"ad_{variant}"] = [s.recommendation for s in steps]

    report = EvalReport(project=test.project, pr_count=len(test_prs))
    for kind, recs in recs_by_kind.items():
        for k in range(1, 6):
            report.accuracy[(kind, k)] = top_k_accuracy(recs, truth, k)
            total = sum(
                average_precision(r.developers(), truth[r.pr_id], k) for r in recs
            )
            report.mean_ap[(kind, k)] = total / len(recs) if recs else 0.0

    prior_all = list(history.prs.prs)
    commits = history.store.commits
    for kind, recs in recs_by_kind.items():
        applicable = 0
        reasonable = 0
        for pr, rec in zip(test_prs, recs):
            top = rec.top(1)
            if not top:
                continue
            verdict = reasonableness(
                pr,
                top[0],
                commits,
                [p for p in prior_all if p.opened_at < pr.opened_at],
            )
            if verdict is None:
                continue
            applicable += 1
            reasonable += 1 if verdict else 0
        report.reasonable_pct[kind] = (
            100.0 * reasonable / applicable if applicable else 0.0
        )
    return report


# --- clustering outputs ------------------------------------------------------


def run_clustering(store: KuStore, out_dir: Path, k_max: int, seed: int) -> None:
    matrix = global_ku_profiles(store)
    if len(matrix.developers) < 2:
        raise DegenerateDataError("need at least 2 developers to cluster")
    import numpy as np

    p_ku = np.asarray(matrix.values, dtype=float)
    reduced = pca_reduce(p_ku, 0.95)
    result = select_k(reduced, k_max=k_max, seed=seed)
    out_dir.mkdir(parents=True, exist_ok=True)

    lines = ["developer\tcluster"]
    for dev, label in zip(matrix.developers, result.labels):
        lines.append(f"{dev}\t{int(label)}")
    (out_dir / "labels.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = ["k\tmedian_silhouette"]
    for k, sil in result.curve:
        lines.append(f"{k}\t{sil:.6f}")
    (out_dir / "silhouette_curve.tsv").write_text(
        "\n".join(lines) + "\n", encoding="utf-8"
    )

    sizes = [int((result.labels == c).sum()) for c in range(result.k)]
    summary = {
        "k": result.k,
        "median_silhouette": round(result.median_silhouette, 6),
        "qualified": result.qualified,
        "gini": round(gini(sizes), 6),
        "sizes": sizes,
    }
    (out_dir / "summary.json").write_text(
        dump_json_line(summary) + "\n", encoding="utf-8"
    )

    lines = ["cluster\tku\tdiff_value\tflagged"]
    for rec in diff_values(p_ku, result.labels):
        lines.append(
            f"{rec.cluster}\tK{rec.ku}\t{rec.diff_value:.6f}\t{str(rec.flagged).lower()}"
        )
    (out_dir / "diff_values.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


# --- stage runner -------------------------------------------------------------


class _Stage:
    def __init__(self, out_dir: Path, name: str, signature: str, outputs: list[Path]):
        self.stamp = out_dir / f"{name}.stamp"
        self.signature = signature
        self.outputs = outputs

    def cached(self) -> bool:
        return (
            self.stamp.exists()
            and self.stamp.read_text(encoding="utf-8").strip() == self.signature
            and all(p.exists() for p in self.outputs)
        )

    def mark(self) -> None:
        self.stamp.parent.mkdir(parents=True, exist_ok=True)
        self.stamp.write_text(self.signature + "\n", encoding="utf-8")


def run_pipeline(config: ProjectConfig, echo=print) -> Path:
    """Run all stages; returns the evaluation report path."""
    config.validate()
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    catalog = load_catalog(config.catalog)
    catalog_hash = sha256_text(serialize_catalog(catalog))

    head = _git(config.repo, "rev-parse", "HEAD").decode().strip()
    store_dir = out / "store"
    mine_sig = sha256_text(f"mine:{head}:{catalog_hash}:{config.all_commits}")
    mine_stage = _Stage(out, "mine", mine_sig, [store_dir / "commits.jsonl"])
    if mine_stage.cached():
        echo("mine: cached")
        store = KuStore.load(store_dir)
    else:
        cache = (
            config.cache_dir / "ku_cache.jsonl" if config.cache_dir else None
        )
        store = build_ku_store(
            config.repo, catalog, cache_path=cache, all_commits=config.all_commits
        )
        store.save(store_dir)
        mine_stage.mark()
        echo(f"mine: {len(store.commits)} commits, {len(store.vectors)} file records")

    prs_dir = out / "prs"
    prs_sig = sha256_text(
        "prs:"
        + sha256_text(config.prs.read_text(encoding="utf-8"))
        + f":{config.train_fraction}"
    )
    prs_stage = _Stage(
        out, "prs", prs_sig,
        [prs_dir / "filtered.jsonl", prs_dir / "train.jsonl", prs_dir / "test.jsonl"],
    )
    dataset = load_prs(config.prs, project=config.prs.stem)
    filtered, eligible = filter_prs(dataset)
    train, test = chronological_split(filtered, config.train_fraction)
    if prs_stage.cached():
        echo("prs: cached")
    else:
        save_prs(filtered, prs_dir / "filtered.jsonl")
        save_prs(train, prs_dir / "train.jsonl")
        save_prs(test, prs_dir / "test.jsonl")
        (prs_dir / "meta.json").write_text(
            dump_json_line(
                {"eligible": eligible, "kept": len(filtered.prs),
                 "train": len(train.prs), "test": len(test.prs)}
            )
            + "\n",
            encoding="utf-8",
        )
        prs_stage.mark()
        echo(f"prs: kept {len(filtered.prs)} (eligible={eligible})")

    profiles_dir = out / "profiles"
    prof_sig = sha256_text(f"profiles:{mine_sig}")
    prof_stage = _Stage(out, "profiles", prof_sig, [profiles_dir / "p_ku.tsv"])
    if prof_stage.cached():
        echo("profiles: cached")
    else:
        save_matrix(global_ku_profiles(store), profiles_dir / "p_ku.tsv")
        prof_stage.mark()
        echo("profiles: P_ku written")

    report_path = out / "report.tsv"
    eval_sig = sha256_text(
        f"evaluate:{mine_sig}:{prs_sig}:{config.seed}:{config.rf_mode}"
    )
    eval_stage = _Stage(out, "evaluate", eval_sig, [report_path])
    if eval_stage.cached():
        echo("evaluate: cached")
    else:
        history = History(store=store, prs=filtered)
        report = evaluate_project(
            history, test, seed=config.seed, rf_mode=config.rf_mode
        )
        report.save(report_path)
        eval_stage.mark()
        echo(f"evaluate: report for {len(test.prs)} test PRs")

    cluster_dir = out / "cluster"
    cluster_sig = sha256_text(f"cluster:{mine_sig}:{config.seed}:{config.k_max}")
    cluster_stage = _Stage(out, "cluster", cluster_sig, [cluster_dir / "labels.tsv"])
    if cluster_stage.cached():
        echo("cluster: cached")
    else:
        run_clustering(store, cluster_dir, k_max=config.k_max, seed=config.seed)
        cluster_stage.mark()
        echo("cluster: outputs written")

    return report_path
