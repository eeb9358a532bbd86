"""CLI surface: subcommands, output shape, and exit codes."""

from __future__ import annotations

import json

import pytest

from kurev.cli import main

FIXTURES = "tests/fixtures/ku_corpus"


@pytest.fixture(scope="module")
def mined(tmp_path_factory):
    """Synthetic project with a mined store and a pipeline config on disk."""
    from kurev.synthetic import build_synthetic_project

    base = tmp_path_factory.mktemp("cli")
    repo, prs_path = build_synthetic_project(base)
    store = base / "store"
    assert main(["mine", str(repo), "--out", str(store)]) == 0
    config = base / "config.yaml"
    config.write_text(
        f"repo: {repo}\nprs: {prs_path}\nout_dir: {base / 'out'}\nseed: 11\n",
        encoding="utf-8",
    )
    return {"base": base, "repo": repo, "prs": prs_path, "store": store,
            "config": config}


def test_detect_prints_ku_vector(capsys):
    assert main(["detect", f"{FIXTURES}/K11.java", "--capabilities"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert len(record["ku_vector"]) == 28
    assert record["ku_vector"][10] > 0  # K11 Exception Handling
    assert any(key.startswith("[K11,") for key in record["capabilities"])


def test_prs_validate_filter_split(mined, tmp_path, capsys):
    assert main(["prs", "validate", str(mined["prs"])]) == 0
    assert "12 PRs valid" in capsys.readouterr().out
    kept = tmp_path / "kept.jsonl"
    assert main(["prs", "filter", str(mined["prs"]), "--out", str(kept)]) == 0
    train, test = tmp_path / "train.jsonl", tmp_path / "test.jsonl"
    assert main(
        ["prs", "split", str(kept), "--out-train", str(train),
         "--out-test", str(test)]
    ) == 0
    assert len(train.read_text().splitlines()) == 9
    assert len(test.read_text().splitlines()) == 3


def test_profiles_command(mined, tmp_path, capsys):
    out = tmp_path / "profiles"
    assert main(
        ["profiles", "--store", str(mined["store"]), "--prs", str(mined["prs"]),
         "--cutoff", "2023-01-20T00:00:00Z", "--out", str(out)]
    ) == 0
    assert (out / "dev.tsv").exists()
    assert (out / "rev.tsv").exists()
    assert (out / "p_ku.tsv").exists()


def test_recommend_base_and_adaptive(mined, capsys):
    code = main(
        ["recommend", "--store", str(mined["store"]), "--prs", str(mined["prs"]),
         "--pr", "11", "--which", "kurec", "--top", "3"]
    )
    assert code == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l and l[0].isdigit()]
    assert 1 <= len(lines) <= 3
    assert lines[0].startswith("1\t")
    code = main(
        ["recommend", "--store", str(mined["store"]), "--prs", str(mined["prs"]),
         "--pr", "11", "--which", "ad_hybrid", "--seed", "11"]
    )
    assert code == 0


def test_evaluate_and_cluster_commands(mined, tmp_path, capsys):
    report = tmp_path / "report.tsv"
    assert main(
        ["evaluate", "--store", str(mined["store"]), "--prs", str(mined["prs"]),
         "--out", str(report), "--seed", "11"]
    ) == 0
    assert "kurec" in report.read_text(encoding="utf-8")
    out = tmp_path / "cluster"
    assert main(["cluster", "--store", str(mined["store"]), "--out", str(out)]) == 0
    assert (out / "labels.tsv").exists()


def test_pipeline_command(mined, capsys):
    assert main(["pipeline", str(mined["config"])]) == 0
    assert (mined["base"] / "out" / "report.tsv").exists()


def test_exit_codes(mined, capsys):
    assert main(["detect", "/does/not/exist.java"]) == 1  # usage
    assert main(["no-such-command"]) == 1
    assert main(
        ["recommend", "--store", str(mined["store"]), "--prs", str(mined["prs"]),
         "--pr", "424242", "--which", "cf"]
    ) == 2  # data error
    assert main(["--help"]) == 0
