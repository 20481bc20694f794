from __future__ import annotations

import json

import pytest

from fptcount.cli import EXIT_CAP, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def files(tmp_path):
    paths = {
        "c5": "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n",
        "k4": "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n",
        "empty": "6 0\n",
        "path": "4 3\n0 1\n1 2\n2 3\n",
        "star": "4 3\n0 1\n0 2\n0 3\n",
        "star_col": "0 red\n1 blue\n2 blue\n3 blue\n",
        "tri": "3 3\n0 1\n1 2\n0 2\n",
        "tri_col": "0 red\n1 red\n2 red\n",
        "bad": "3 1\n0 3\n",
        "big": "40 0\n",
        "pats": "3 1\n1-2,2-3\n",
    }
    out = {}
    for name, text in paths.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip() else None
    return code, report, captured.err


@pytest.mark.parametrize("graph, count", [("c5", 5), ("k4", 4), ("empty", 0)])
def test_exact(files, capsys, graph, count):
    code, report, err = run(capsys, "exact", "--graph", files[graph], "--property", "connected", "-k", "3")
    assert code == EXIT_OK and report["result"]["count"] == count
    assert report["result"]["labelled"] == 6 * count
    assert err.strip()


def test_approx_near_truth_and_reproducible(files, capsys, tmp_path):
    argv = ["approx", "--graph", files["c5"], "--property", "connected", "-k", "3", "--eps", "0.1",
            "--delta", "0.05", "--seed", "7"]
    code, report, _ = run(capsys, *argv)
    assert code == EXIT_OK and abs(report["result"]["value"] - 5) <= 0.5
    assert "wall_time_ms" not in report["result"]
    assert report["config"]["seed"] == 7
    out = tmp_path / "report.json"
    main(argv + ["--output", str(out)])
    first = out.read_bytes()
    main(argv + ["--output", str(out)])
    assert out.read_bytes() == first


def test_approx_workers_do_not_change_result(files, capsys):
    base = ["approx", "--graph", files["c5"], "--property", "connected", "-k", "3", "--seed", "3"]
    _, r1, _ = run(capsys, *base)
    _, r2, _ = run(capsys, *base, "--workers", "2")
    assert r1["result"] == r2["result"]


def test_approx_bipartite_graph_non_bipartite_zero(files, capsys):
    code, report, _ = run(capsys, "approx", "--graph", files["path"], "--property", "non-bipartite", "-k", "3")
    assert code == EXIT_OK and report["result"]["value"] == 0


def test_approx_rejects_non_monotone(files, capsys):
    code, _, err = run(capsys, "approx", "--graph", files["c5"], "--property", "edgeless", "-k", "2")
    assert code == EXIT_USAGE and "monotone" in err


def test_pattern_file(files, capsys):
    code, report, _ = run(capsys, "exact", "--graph", files["k4"], "--patterns", files["pats"])
    assert code == EXIT_OK and report["result"]["labelled"] == 24
    code, report, _ = run(capsys, "approx", "--graph", files["k4"], "--patterns", files["pats"])
    assert code == EXIT_OK and report["result"]["labelled"] is True
    code, _, _ = run(capsys, "exact", "--graph", files["k4"], "--patterns", files["pats"], "-k", "4")
    assert code == EXIT_USAGE


@pytest.mark.parametrize("motif, method, count", [
    ("red:1,blue:2", "exact", 3), ("blue:3", "exact", 0), ("red:1,blue:2", "approx", 3), ("green:2", "auto", 0),
])
def test_motif(files, capsys, motif, method, count):
    code, report, _ = run(capsys, "motif", "--graph", files["star"], "--coloring", files["star_col"],
                          "--motif", motif, "--method", method)
    assert code == EXIT_OK
    value = report["result"]["count"] if method != "approx" else report["result"]["value"]
    assert value == pytest.approx(count, rel=0.1)


def test_motif_triangle(files, capsys):
    code, report, _ = run(capsys, "motif", "--graph", files["tri"], "--coloring", files["tri_col"], "--motif", "red:3")
    assert code == EXIT_OK and report["result"]["count"] == 1


def test_motif_too_large(files, capsys):
    code, _, _ = run(capsys, "motif", "--graph", files["tri"], "--coloring", files["tri_col"], "--motif", "red:4")
    assert code == EXIT_USAGE


def test_verify_modes(capsys):
    code, report, _ = run(capsys, "verify", "--instances", "2")
    assert code == EXIT_OK and report["result"]["all_passed"]
    code, report, _ = run(capsys, "verify", "--k-max", "5", "--instances", "1")
    assert code == EXIT_OK
    det5 = [c for c in report["result"]["checks"] if c["name"] == "mobius_closed_form" and c["params"]["k"] == 5]
    assert det5[0]["detail"]["partitions"] == 52
    code, report, _ = run(capsys, "verify", "--inject-fault", "--instances", "1")
    assert code == EXIT_FAILED and report["result"]["failed"] > 0


def test_exit_codes(files, capsys):
    assert run(capsys, "exact", "--graph", files["bad"], "--property", "connected", "-k", "2")[0] == EXIT_USAGE
    assert run(capsys, "exact", "--graph", files["big"], "--property", "connected", "-k", "10")[0] == EXIT_CAP
    assert run(capsys, "exact", "--graph", "/nonexistent", "--property", "connected", "-k", "2")[0] == EXIT_USAGE
    assert run(capsys, "approx", "--graph", files["c5"], "--property", "connected", "-k", "2",
               "--eps", "-1")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["exact", "--graph", files["c5"], "--property", "planar", "-k", "2"])
    assert info.value.code == EXIT_USAGE


def test_random_seed(files, capsys):
    code, report, _ = run(capsys, "approx", "--graph", files["c5"], "--property", "connected", "-k", "3",
                          "--seed", "random")
    assert code == EXIT_OK and isinstance(report["config"]["seed"], int)


def test_gen(tmp_path, capsys):
    g, c = tmp_path / "g.txt", tmp_path / "c.txt"
    code, report, _ = run(capsys, "gen", "--n", "8", "--p", "0.5", "--colors", "3", "--seed", "2",
                          "--graph", str(g), "--coloring", str(c))
    assert code == EXIT_OK and g.exists() and c.exists()
    code, again, _ = run(capsys, "exact", "--graph", str(g), "--property", "connected", "-k", "2")
    assert again["result"]["count"] == report["result"]["m"]
