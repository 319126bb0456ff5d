import json

import pytest
from importlib import resources

from capscope.cli import EXIT_INVALID, EXIT_OK, EXIT_SOLVER_LIMIT, main

STREET_WALK = str(resources.files("capscope") / "fixtures" / "street_walk.model")
TWO_CITIZENS = str(resources.files("capscope") / "fixtures" / "two_citizens.model")

FRONTIER_CSV = (
    "beauty,health,street_1_2,street_1_3,street_1_4,street_1_5,"
    "street_2_3,street_2_4,street_3_5,street_4_5\n"
    "6,6,1,1,0,0,1,0,0,0\n"
    "4,7,0,1,0,1,0,0,1,0\n"
)

DAMAGED_CSV = (
    "beauty,health,street_1_2,street_1_3,street_1_4,street_1_5,"
    "street_2_3,street_2_4,street_3_5,street_4_5\n"
    "5,6,1,0,1,0,0,1,0,0\n"
    "4,7,0,1,0,1,0,0,1,0\n"
)


def test_validate_ok(capsys):
    assert main(["validate", STREET_WALK]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.endswith("ok: 1 citizen(s), 8 common(s), 1 scenario(s)\n")


def test_validate_syntax_error(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["validate", str(bad)]) == EXIT_INVALID
    assert "syntax error" in capsys.readouterr().err


def test_validate_reports_diagnostics(tmp_path, capsys):
    doc = json.load(open(STREET_WALK))
    doc["citizens"][0]["home_vertex"] = "nowhere"
    bad = tmp_path / "bad.model"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["validate", str(bad)]) == EXIT_INVALID
    out = capsys.readouterr().out
    assert "error: citizens[0]" in out


def test_missing_file(capsys):
    assert main(["validate", "/does/not/exist.model"]) == EXIT_INVALID
    assert "error:" in capsys.readouterr().err


def test_frontier_csv(capsys):
    assert main(["frontier", STREET_WALK, "--citizen", "walker"]) == EXIT_OK
    assert capsys.readouterr().out == FRONTIER_CSV


def test_frontier_methods_agree(capsys):
    assert main(["frontier", STREET_WALK, "--citizen", "walker"]) == EXIT_OK
    eps = capsys.readouterr().out
    assert (
        main(
            ["frontier", STREET_WALK, "--citizen", "walker", "--method", "exhaustive"]
        )
        == EXIT_OK
    )
    assert capsys.readouterr().out == eps


def test_frontier_scenario(capsys):
    assert (
        main(
            [
                "frontier",
                STREET_WALK,
                "--citizen",
                "walker",
                "--scenario",
                "street_23_damaged",
            ]
        )
        == EXIT_OK
    )
    assert capsys.readouterr().out == DAMAGED_CSV


def test_frontier_out_file(tmp_path, capsys):
    target = tmp_path / "frontier.csv"
    assert (
        main(["frontier", STREET_WALK, "--citizen", "walker", "--out", str(target)])
        == EXIT_OK
    )
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8") == FRONTIER_CSV


def test_frontier_unknown_citizen(capsys):
    assert main(["frontier", STREET_WALK, "--citizen", "ghost"]) == EXIT_INVALID
    assert "unknown citizen: ghost" in capsys.readouterr().err


def test_frontier_unknown_scenario(capsys):
    assert (
        main(["frontier", STREET_WALK, "--citizen", "walker", "--scenario", "zzz"])
        == EXIT_INVALID
    )
    assert "unknown scenario" in capsys.readouterr().err


def test_frontier_node_limit(capsys):
    assert (
        main(["frontier", STREET_WALK, "--citizen", "walker", "--node-limit", "5"])
        == EXIT_SOLVER_LIMIT
    )
    assert "solver limit:" in capsys.readouterr().err


def test_diff_json(capsys):
    assert (
        main(
            [
                "diff",
                STREET_WALK,
                "--citizen",
                "walker",
                "--after",
                "street_23_damaged",
            ]
        )
        == EXIT_OK
    )
    out = capsys.readouterr().out
    tree = json.loads(out)
    assert tree == {
        "dimensions": ["beauty", "health"],
        "before": [[6, 6], [4, 7]],
        "after": [[5, 6], [4, 7]],
        "lost_points": [[6, 6]],
        "ideal_point_drop": [1, 0],
        "dominated_region_shrink_2d": 6,
    }
    assert out.endswith("\n")


def test_compare_json(capsys):
    assert (
        main(["compare", TWO_CITIZENS, "--left", "c1", "--right", "c2"]) == EXIT_OK
    )
    tree = json.loads(capsys.readouterr().out)
    assert tree["left"] == "c1"
    assert tree["right"] == "c2"
    assert tree["relation"] == "strictly_better"
    assert {"dominated": [10, 25], "dominating": [10, 40]} in tree["certificates"]


def test_stdout_bytes_are_stable(capsys):
    runs = []
    for _ in range(2):
        assert (
            main(
                [
                    "diff",
                    STREET_WALK,
                    "--citizen",
                    "walker",
                    "--after",
                    "street_23_damaged",
                ]
            )
            == EXIT_OK
        )
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]
