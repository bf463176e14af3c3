import json
import os

import pytest

from geowl import gen_kchain, gen_random_cloud, apply_isometry, random_isometry
from geowl.cli import EXIT_CAP, EXIT_DIFFERENT, EXIT_INPUT, EXIT_SAME, EXIT_USAGE, main
from geowl.graph import dump_graph


@pytest.fixture
def kchain_files(tmp_path):
    g1, g2, _ = gen_kchain(4)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    dump_graph(g1, str(a))
    dump_graph(g2, str(b))
    return str(a), str(b)


@pytest.fixture
def iso_files(tmp_path):
    g = gen_random_cloud(4, 2, seed=1)
    from geowl import geometric_graph

    full = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    g1 = geometric_graph(2, g.positions, full, g.scalars, mode="exact")
    g2 = apply_isometry(g1, random_isometry(4, 2, seed=2, proper=True))
    a, b = tmp_path / "x.json", tmp_path / "y.json"
    dump_graph(g1, str(a))
    dump_graph(g2, str(b))
    return str(a), str(b)


def test_distinguish_exit_codes(kchain_files, iso_files, capsys):
    a, b = kchain_files
    assert main(["distinguish", a, b, "--test", "gwl"]) == EXIT_DIFFERENT
    assert main(["distinguish", a, b, "--test", "igwl"]) == EXIT_SAME
    x, y = iso_files
    assert main(["distinguish", x, y, "--test", "gwl", "--group", "SO"]) == EXIT_SAME


def test_distinguish_json_output(kchain_files, capsys):
    a, b = kchain_files
    code = main(["distinguish", a, b, "--test", "gwl", "--format", "json"])
    assert code == EXIT_DIFFERENT
    report = json.loads(capsys.readouterr().out)
    assert report["test"] == "gwl"
    assert report["verdict"] == "distinguished"
    assert report["iteration"] == 3
    assert report["trace"]["rows"][0]["iteration"] == 0


def test_distinguish_text_output(kchain_files, capsys):
    a, b = kchain_files
    main(["distinguish", a, b, "--test", "igwl"])
    out = capsys.readouterr().out.lower()
    assert "indistinguishable" in out


def test_igwl_k_requires_k(kchain_files, capsys):
    a, b = kchain_files
    assert main(["distinguish", a, b, "--test", "igwl-k"]) == EXIT_USAGE
    assert main(["distinguish", a, b, "--test", "igwl-k", "--k", "3"]) in (
        EXIT_SAME,
        EXIT_DIFFERENT,
    )


def test_missing_file_is_input_error(tmp_path, capsys):
    a = tmp_path / "nope.json"
    assert main(["distinguish", str(a), str(a)]) == EXIT_INPUT


def test_malformed_file_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["distinguish", str(bad), str(bad)]) == EXIT_INPUT
    err = capsys.readouterr().err
    assert "line" in err


def test_unknown_command_is_usage_error(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE


def test_iso_exit_codes(kchain_files, iso_files, capsys):
    a, b = kchain_files
    assert main(["iso", a, b]) == EXIT_DIFFERENT
    x, y = iso_files
    assert main(["iso", x, y, "--group", "SO"]) == EXIT_SAME


def test_iso_cap_exceeded(tmp_path, capsys):
    g = gen_random_cloud(12, 2, seed=5)
    a = tmp_path / "big.json"
    dump_graph(g, str(a))
    assert main(["iso", str(a), str(a)]) == EXIT_CAP
    assert main(["iso", str(a), str(a), "--cap", "12"]) == EXIT_SAME


def test_gen_writes_pair_and_spec(tmp_path, capsys):
    assert main(["gen", "kchain", "--k", "3", "--out", str(tmp_path)]) == EXIT_SAME
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["kchain_k3_a.json", "kchain_k3_b.json", "kchain_k3_pair.json"]
    spec = json.loads((tmp_path / "kchain_k3_pair.json").read_text())
    assert spec["relation"] == "non_isomorphic_h_hop_distinct(2)"
    assert spec["verified"] is True


def test_gen_invalid_params_is_usage_error(tmp_path, capsys):
    assert main(["gen", "kchain", "--k", "1", "--out", str(tmp_path)]) == EXIT_USAGE


def test_table_kchains(capsys):
    assert main(["table", "kchains", "--range", "2", "4"]) == EXIT_SAME
    out = capsys.readouterr().out
    assert "gwl" in out.lower()
    assert "out of scope" in out.lower()


def test_table_lfold(capsys):
    assert main(["table", "lfold-invariance", "--range", "2", "4"]) == EXIT_SAME
    out = capsys.readouterr().out.lower()
    assert "indistinguishable" in out or "same" in out


def test_props_output(tmp_path, capsys):
    from conftest import exact_graph

    g = exact_graph([(0, 0, 0), (4, 2, 2)], edges=[])
    a = tmp_path / "box.json"
    dump_graph(g, str(a))
    assert main(["props", str(a), "--format", "json"]) == EXIT_SAME
    report = json.loads(capsys.readouterr().out)
    assert report["perimeter"] == 32.0
    assert report["area"] == 40.0
    assert report["volume"] == 16.0


def test_props_dihedral(tmp_path, capsys):
    from conftest import exact_graph

    g = exact_graph(
        [(0, 1, 0), (0, 0, 0), (1, 0, 0), (1, 0, 1)],
        edges=[(0, 1), (1, 2), (2, 3)],
    )
    a = tmp_path / "bent.json"
    dump_graph(g, str(a))
    assert main(["props", str(a), "--dihedral", "0,1,2,3", "--format", "json"]) == EXIT_SAME
    report = json.loads(capsys.readouterr().out)
    assert report["dihedrals"]["0,1,2,3"] == 0.0


def test_so2_subcommands(tmp_path, capsys):
    from geowl import gen_lfold

    g = gen_lfold(4)
    a = tmp_path / "star.json"
    dump_graph(g, str(a))
    assert main(["so2", "stab", str(a)]) == EXIT_SAME
    assert "4" in capsys.readouterr().out
    assert main(["so2", "hash", str(a)]) == EXIT_SAME
    assert main(["so2", "refine", str(a), str(a)]) == EXIT_SAME


def test_tolerance_env_var(tmp_path, capsys, monkeypatch):
    g1 = gen_random_cloud(3, 2, seed=4, mode="float")
    a, b = tmp_path / "p.json", tmp_path / "q.json"
    dump_graph(g1, str(a))
    nudged = [
        tuple(c + 1e-7 * (i + 1) for c in p) for i, p in enumerate(g1.positions)
    ]
    from geowl import geometric_graph

    full = [(i, j) for i in range(3) for j in range(i + 1, 3)]
    dump_graph(geometric_graph(2, nudged, full, g1.scalars, mode="float"), str(b))
    g1d = tmp_path / "p2.json"
    dump_graph(geometric_graph(2, g1.positions, full, g1.scalars, mode="float"), str(g1d))
    # under the default epsilon the nudge is visible; a coarse one hides it
    strict = main(["distinguish", str(g1d), str(b), "--test", "gwl"])
    monkeypatch.setenv("GWLKIT_TOLERANCE", "1e-4")
    loose = main(["distinguish", str(g1d), str(b), "--test", "gwl"])
    assert loose == EXIT_SAME
    assert strict == EXIT_DIFFERENT


def test_console_script_installed():
    import shutil

    assert shutil.which("geowl") is not None
