import json
from fractions import Fraction

import pytest

from batchcolor.core.config import get_settings
from batchcolor.main import main


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def path_instance(tmp_path):
    return write_json(tmp_path / "path.json", {
        "kind": "graph",
        "batches": [
            {"vertices": ["a", "c"], "edges": []},
            {"vertices": ["b"], "edges": [["a", "b"], ["b", "c"]]},
        ],
    })


@pytest.fixture
def triangle_instance(tmp_path):
    return write_json(tmp_path / "triangle.json", {
        "kind": "graph",
        "batches": [{"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"], ["a", "c"]]}],
    })


def test_solve_generic_batch(tmp_path, path_instance):
    out = tmp_path / "out.json"
    assert main(["solve", "--algorithm", "generic-batch", "--input", path_instance, "--out", str(out)]) == 0
    result = read_json(out)
    assert result["colors"] == {"a": 1, "c": 1, "b": 2}
    assert result["report"]["max_color"] <= 2
    assert result["report"]["diagnostics"] == []


def test_solve_first_fit_sum_on_a_star(tmp_path):
    star = write_json(tmp_path / "star.json", {
        "kind": "graph",
        "batches": [
            {"vertices": ["l1", "l2", "l3"]},
            {"vertices": ["c"], "edges": [["c", "l1"], ["c", "l2"], ["c", "l3"]]},
        ],
    })
    out = tmp_path / "out.json"
    assert main(["solve", "--algorithm", "first-fit-sum", "--objective", "sum",
                 "--input", star, "--out", str(out)]) == 0
    assert read_json(out)["report"]["color_sum"] == 5


def test_solve_interval_instance_with_rational_endpoints(tmp_path):
    instance = write_json(tmp_path / "iv.json", {
        "kind": "intervals",
        "batches": [
            [{"lo": 0, "hi": "3/2", "id": "a"}, {"lo": [1, 1], "hi": 2, "id": "b"}],
            [{"lo": 2, "hi": 3, "lo_closed": False, "id": "x"}],
        ],
    })
    out = tmp_path / "out.json"
    assert main(["solve", "--algorithm", "two-batches", "--input", instance, "--out", str(out)]) == 0
    report = read_json(out)["report"]
    assert report["opt_cost"] == 2
    assert report["distinct_colors"] <= 3


def test_adversary_tree_against_first_fit(tmp_path):
    out = tmp_path / "duel.json"
    assert main(["adversary", "--name", "tree", "--params", "k=2", "--algorithm", "first-fit",
                 "--out", str(out)]) == 0
    transcript = read_json(out)
    assert transcript["guarantee"]["passed"]
    assert transcript["report"]["distinct_colors"] >= 4


def test_adversary_sum_known(tmp_path):
    out = tmp_path / "duel.json"
    assert main(["adversary", "--name", "sum-known", "--params", "k=2,M=9", "--algorithm", "k-batch-color",
                 "--out", str(out)]) == 0
    ratio = read_json(out)["report"]["ratio"]
    assert Fraction(*ratio) >= Fraction(18, 11)


def test_transcript_replays_to_the_same_colors(tmp_path):
    duel = tmp_path / "kt.json"
    assert main(["adversary", "--name", "interval-kt", "--params", "q=1", "--algorithm", "two-batches",
                 "--diagnostics", "--out", str(duel)]) == 0
    transcript = read_json(duel)
    assert transcript["report"]["ratio"] == [3, 2]
    assert transcript["report"]["diagnostics"]

    out = tmp_path / "solve.json"
    assert main(["solve", "--algorithm", "two-batches", "--input", str(duel), "--out", str(out)]) == 0
    expected = {v: c for batch in transcript["report"]["batch_colorings"] for v, c in batch.items()}
    solved = read_json(out)
    assert solved["colors"] == expected
    assert solved["report"]["distinct_colors"] == 6


def test_trials_summary(tmp_path, monkeypatch):
    monkeypatch.setenv("BATCHCOLOR_MAX_WORKERS", "1")
    get_settings.cache_clear()
    out = tmp_path / "trials.json"
    assert main(["adversary", "--name", "tree", "--params", "k=1", "--algorithm", "random-proper",
                 "--trials", "2", "--out", str(out)]) == 0
    summary = read_json(out)
    assert summary["trials"] == 2
    assert summary["passed"] == 2


def test_oracle_sum_on_a_path(tmp_path, path_instance):
    out = tmp_path / "oracle.json"
    assert main(["oracle", "--objective", "sum", "--input", path_instance, "--out", str(out)]) == 0
    assert read_json(out)["optimum"] == 4


def test_oracle_colors_on_a_triangle(tmp_path, triangle_instance):
    out = tmp_path / "oracle.json"
    assert main(["oracle", "--input", triangle_instance, "--out", str(out)]) == 0
    assert read_json(out)["optimum"] == 3


def test_oracle_over_the_size_limit(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("BATCHCOLOR_ORACLE_LIMIT", "3")
    get_settings.cache_clear()
    cycle = [[f"v{i}", f"v{(i + 1) % 5}"] for i in range(5)]
    instance = write_json(tmp_path / "c5.json", {
        "kind": "graph", "batches": [{"vertices": [f"v{i}" for i in range(5)], "edges": cycle}],
    })
    assert main(["oracle", "--input", instance]) == 3
    assert '"type": "SizeLimitExceeded"' in capsys.readouterr().err


def test_verify_reports_a_monochromatic_edge(tmp_path, triangle_instance):
    coloring = write_json(tmp_path / "coloring.json", {"colors": {"a": 1, "b": 1, "c": 2}})
    out = tmp_path / "verify.json"
    assert main(["verify", "--input", triangle_instance, "--coloring", coloring, "--out", str(out)]) == 2
    result = read_json(out)
    assert not result["ok"]
    assert result["monochromatic_edges"] == [["a", "b"]]


def test_verify_accepts_a_proper_coloring(tmp_path, triangle_instance):
    coloring = write_json(tmp_path / "coloring.json", {"colors": {"a": 1, "b": 2, "c": 3}})
    assert main(["verify", "--input", triangle_instance, "--coloring", coloring,
                 "--out", str(tmp_path / "verify.json")]) == 0


def test_unknown_algorithm_is_a_parameter_error(path_instance, capsys):
    assert main(["solve", "--algorithm", "best-fit", "--input", path_instance]) == 1
    assert '"type": "ParameterError"' in capsys.readouterr().err


def test_malformed_instance_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["oracle", "--input", str(bad)]) == 1
    missing_kind = write_json(tmp_path / "nokind.json", {"batches": []})
    assert main(["oracle", "--input", missing_kind]) == 1


def test_inconsistent_instance(tmp_path):
    instance = write_json(tmp_path / "dangling.json", {
        "kind": "graph", "batches": [{"vertices": ["a"], "edges": [["a", "z"]]}],
    })
    assert main(["solve", "--algorithm", "first-fit", "--input", instance]) == 2


@pytest.mark.parametrize("argv", [[], ["solve"], ["oracle", "--objective", "makespan", "--input", "x.json"]])
def test_usage_errors_exit_one(argv):
    assert main(argv) == 1
