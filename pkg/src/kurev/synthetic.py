"""Deterministic synthetic mini-project: a git repo plus a PR export.

Used by the test-suite oracles and by the end-to-end pipeline smoke run.
Content, authors, and timestamps are all derived from the seed, so the
same seed always produces the same commit graph and the same PR export
bytes (commit hashes included, since dates and committers are pinned).
"""

from __future__ import annotations

import random
import subprocess
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .util import dump_json_line, format_rfc3339, normalize_identity

DEVELOPERS = (
    ("Alice Adams", "alice@example.com"),
    ("Bob Brown", "bob@example.com"),
    ("Carol Clark", "carol@example.com"),
    ("Dan Diaz", "dan@example.com"),
    ("Eve Evans", "eve@example.com"),
)

_FILES = (
    "core/Engine.java",
    "core/Scheduler.java",
    "io/Loader.java",
    "io/Exporter.java",
    "web/Endpoint.java",
    "util/Text.java",
)

_EXTRAS = (
    "    void loop{i}() {{ for (int i = 0; i < {n}; i = i + 1) {{ tick(); }} }}",
    "    void guard{i}() {{ try {{ tick(); }} catch (Exception e) {{ }} }}",
    "    void pick{i}(int a, int b) {{ if (a == b) {{ tick(); }} }}",
    "    void arr{i}() {{ int[] xs = new int[{n}]; xs[0] = 1; }}",
    "    java.util.List<String> gen{i}() {{ return new java.util.ArrayList<String>(); }}",
    "    void text{i}(String s) {{ s.substring(1).split(\",\"); }}",
    "    void io{i}(java.nio.file.Path p) {{ java.nio.file.Files.exists(p); }}",
    "    synchronized void sync{i}() {{ tick(); }}",
)


def _java_source(path: str, extras: list[str]) -> str:
    cls = Path(path).stem
    body = "\n".join(extras)
    return (
        f"class {cls} {{\n"
        "    void tick() { }\n"
        f"{body}\n"
        "}\n"
    )


def _git(repo: Path, *args: str, env: dict | None = None) -> None:
    base_env = {
        "GIT_CONFIG_GLOBAL": "/dev/null",
        "GIT_CONFIG_SYSTEM": "/dev/null",
        "HOME": str(repo),
        "PATH": "/usr/bin:/bin:/usr/local/bin",
    }
    if env:
        base_env.update(env)
    subprocess.run(
        ["git", "-C", str(repo), *args],
        check=True,
        capture_output=True,
        env=base_env,
    )


def identity(index: int) -> str:
    name, email = DEVELOPERS[index]
    return normalize_identity(name, email)


def build_synthetic_repo(
    repo_dir: str | Path,
    n_devs: int = 5,
    n_commits: int = 30,
    seed: int = 7,
) -> list[dict]:
    """Create the repository; returns one manifest dict per commit."""
    repo = Path(repo_dir)
    repo.mkdir(parents=True, exist_ok=True)
    _git(repo, "init", "-q", "-b", "main")
    rng = random.Random(seed)
    start = datetime(2023, 1, 2, 9, 0, tzinfo=timezone.utc)
    contents: dict[str, list[str]] = {}
    manifest = []
    for i in range(n_commits):
        author_ix = rng.randrange(n_devs)
        name, email = DEVELOPERS[author_ix]
        when = start + timedelta(days=i, hours=author_ix)
        paths = rng.sample(_FILES, k=rng.choice((1, 1, 2)))
        for path in paths:
            extras = contents.setdefault(path, [])
            template = rng.choice(_EXTRAS)
            extras.append(template.format(i=i, n=rng.randrange(2, 9)))
            target = repo / path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(_java_source(path, extras), encoding="utf-8")
        if i == 0:
            (repo / "README.md").write_text("synthetic project\n", encoding="utf-8")
        _git(repo, "add", "-A")
        stamp = when.strftime("%Y-%m-%dT%H:%M:%S+00:00")
        _git(
            repo,
            "commit", "-q", "--no-verify", "-m", f"change {i}",
            env={
                "GIT_AUTHOR_NAME": name,
                "GIT_AUTHOR_EMAIL": email,
                "GIT_AUTHOR_DATE": stamp,
                "GIT_COMMITTER_NAME": "CI Bot",
                "GIT_COMMITTER_EMAIL": "ci@example.com",
                "GIT_COMMITTER_DATE": stamp,
            },
        )
        manifest.append(
            {
                "index": i,
                "author": normalize_identity(name, email),
                "authored_at": format_rfc3339(when),
                "paths": list(paths),
            }
        )
    return manifest


def build_synthetic_prs(
    n_devs: int = 5,
    n_prs: int = 12,
    seed: int = 7,
    first_open_day: int = 8,
) -> list[dict]:
    """PR export records (dicts ready for JSONL) over the synthetic files."""
    rng = random.Random(seed * 31 + 1)
    start = datetime(2023, 1, 2, 9, 0, tzinfo=timezone.utc)
    records = []
    for j in range(n_prs):
        opened = start + timedelta(days=first_open_day + 2 * j, hours=12)
        author_ix = rng.randrange(n_devs)
        reviewer_pool = [i for i in range(n_devs) if i != author_ix]
        reviewers = rng.sample(reviewer_pool, k=rng.choice((1, 1, 2)))
        changed = rng.sample(_FILES, k=rng.choice((1, 2, 3)))
        if rng.random() < 0.25:
            changed = changed + ["docs/notes.md"]
        comments = []
        for r in reviewers:
            for c in range(rng.choice((1, 2))):
                comments.append(
                    {
                        "reviewer": identity(r),
                        "path": rng.choice(changed),
                        "commented_at": format_rfc3339(
                            opened + timedelta(hours=3 + 5 * c)
                        ),
                    }
                )
        records.append(
            {
                "id": j + 1,
                "opened_at": format_rfc3339(opened),
                "state": "closed",
                "changed_files": changed,
                "reviewers": sorted(identity(r) for r in reviewers),
                "author": identity(author_ix),
                "review_comments": comments,
                "head_commit": None,
            }
        )
    return records


def build_synthetic_project(
    base_dir: str | Path,
    n_devs: int = 5,
    n_commits: int = 30,
    n_prs: int = 12,
    seed: int = 7,
) -> tuple[Path, Path]:
    """Materialize repo + PR export under base_dir; returns their paths."""
    base = Path(base_dir)
    repo = base / "repo"
    build_synthetic_repo(repo, n_devs=n_devs, n_commits=n_commits, seed=seed)
    prs_path = base / "prs.jsonl"
    records = build_synthetic_prs(n_devs=n_devs, n_prs=n_prs, seed=seed)
    prs_path.write_text(
        "".join(dump_json_line(r) + "\n" for r in records), encoding="utf-8"
    )
    return repo, prs_path
