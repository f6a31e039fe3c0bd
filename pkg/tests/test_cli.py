from __future__ import annotations

import json

import pytest

from starlight.cli import main
from starlight.formats import read_colouring, read_system

from conftest import S3_6

GOLDEN_S3_6 = "ESS 1 e=3 n=6 blocks=5\n" + "".join(
    f"{c}: {' '.join(map(str, leaves))}\n" for c, leaves in S3_6
)


def run(capsys, *argv) -> tuple[int, str]:
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_construct_base(tmp_path, capsys):
    out = tmp_path / "s.ess"
    code, text = run(capsys, "construct", "--theorem", "2.1", "--n", 6, "--out", out)
    assert code == 0
    assert out.read_text() == GOLDEN_S3_6
    assert len(read_system(out)) == 5
    claims = json.loads((tmp_path / "s.ess.claims.json").read_text())
    assert claims == json.loads(text)["claims"]
    assert set(claims) == {"k", "equitable", "strongly_equitable", "unique", "provenance"}
    assert read_colouring(tmp_path / "s.ess.col").class_sizes() == [3, 3]


def test_construct_four_stars(tmp_path, capsys):
    out = tmp_path / "e4.ess"
    code, _ = run(capsys, "construct", "--theorem", "3.1", "--e", 4, "--out", out)
    assert code == 0 and len(read_system(out)) == 7


def test_construct_lift_with_explicit_outputs(tmp_path, capsys):
    out, col, claims = tmp_path / "b.ess", tmp_path / "b.col", tmp_path / "b.json"
    code, _ = run(
        capsys, "construct", "--theorem", "2.3", "--e", 3, "--k", 3, "--seed", 1,
        "--out", out, "--col-out", col, "--claims-out", claims,
    )
    assert code == 0
    assert read_system(out).n == 66
    assert json.loads(claims.read_text())["k"] == 3
    assert read_colouring(col).k == 3

    code, text = run(capsys, "chromatic", out, "--max-k", 4, "--budget", 60)
    assert code == 0 and json.loads(text)["chi"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["--theorem", "2.1", "--n", "8"],
        ["--theorem", "2.1"],
        ["--theorem", "3.1"],
        ["--theorem", "2.3", "--k", "2"],
        ["--theorem", "4.3", "--e", "3", "--k", "4"],
        ["--theorem", "3.2", "--e", "4", "--n", "10"],
        ["--theorem", "9.9", "--n", "6"],
    ],
)
def test_construct_rejects_bad_parameters(tmp_path, capsys, argv):
    assert main(["construct", *argv, "--out", str(tmp_path / "x.ess")]) == 2
    assert not (tmp_path / "x.ess").exists()


@pytest.mark.parametrize(
    "theorem,extra,n",
    [
        ("2.2", ["--k", "2", "--n", "9"], 9),
        ("3.2", ["--e", "4", "--n", "17"], 17),
        ("3.3", ["--e", "3", "--k", "3"], 66),
        ("4.1", ["--e", "3"], 138),
        ("4.2", ["--e", "3", "--n", "139"], 139),
        ("4.3", ["--e", "3"], 414),
    ],
)
def test_construct_dispatch(tmp_path, capsys, theorem, extra, n):
    out = tmp_path / "x.ess"
    code, text = run(capsys, "construct", "--theorem", theorem, *extra, "--out", out)
    assert code == 0 and json.loads(text)["n"] == n
    code, _ = run(capsys, "verify", out, "--colouring", tmp_path / "x.ess.col")
    assert code == 0


def test_verify_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.ess"
    good.write_text(GOLDEN_S3_6)
    assert run(capsys, "verify", good)[0] == 0

    dup = tmp_path / "dup.ess"
    dup.write_text(GOLDEN_S3_6.replace("blocks=5", "blocks=6") + "6: 3 4 5\n")
    code, text = run(capsys, "verify", dup)
    assert code == 1
    assert json.loads(text)["multiply_covered_edges"] == [[[3, 6], 2], [[4, 6], 2], [[5, 6], 2]]

    col = tmp_path / "mono.col"
    col.write_text("COL 1 n=6 k=2\n" + "".join(f"{v} 1\n" for v in range(1, 7)))
    code, text = run(capsys, "verify", good, "--colouring", col)
    assert code == 1 and json.loads(text)["colouring_proper"] is False

    bad = tmp_path / "bad.ess"
    bad.write_text("not a system\n")
    assert run(capsys, "verify", bad)[0] == 2
    assert run(capsys, "verify", tmp_path / "missing.ess")[0] == 2


def test_unique_and_strict_budget(tmp_path, capsys):
    path = tmp_path / "s.ess"
    path.write_text(GOLDEN_S3_6)
    code, text = run(capsys, "unique", path, "--k", 2)
    assert code == 0 and json.loads(text)["verdict"] in ("unique", "multiple")
    code, text = run(capsys, "unique", path, "--k", 1)
    assert code == 0 and json.loads(text)["verdict"] == "not_colourable"

    main(["construct", "--theorem", "2.3", "--k", "3", "--out", str(tmp_path / "b.ess")])
    capsys.readouterr()
    code, text = run(capsys, "chromatic", tmp_path / "b.ess", "--max-nodes", 1, "--strict")
    assert code == 3 and json.loads(text)["chi"] is None
    code, _ = run(capsys, "chromatic", tmp_path / "b.ess", "--max-nodes", 1)
    assert code == 0
    code, text = run(capsys, "unique", tmp_path / "b.ess", "--k", 2, "--max-nodes", 1, "--strict")
    assert code == 3 and json.loads(text)["verdict"] == "budget_exceeded"


def test_baranyai_command(tmp_path, capsys):
    code, text = run(capsys, "baranyai", "--m", 4, "--e", 2, "--sizes", "2,2,2")
    assert code == 0
    assert [ln.split(":")[0] for ln in text.splitlines()] == ["class 1", "class 2", "class 3"]
    out = tmp_path / "p.txt"
    assert run(capsys, "baranyai", "--m", 6, "--e", 3, "--sizes", ",".join(["2"] * 10), "--out", out)[0] == 0
    assert len(out.read_text().splitlines()) == 10
    assert run(capsys, "baranyai", "--m", 6, "--e", 3, "--sizes", "3")[0] == 2
    assert run(capsys, "baranyai", "--m", 6, "--e", 3, "--sizes", "a,b")[0] == 2


def test_export_command(tmp_path, capsys):
    path = tmp_path / "s.ess"
    path.write_text(GOLDEN_S3_6)
    code, text = run(capsys, "export", path, "--format", "json")
    assert code == 0
    doc = json.loads(text)
    assert doc["blocks"][0] == [1, [3, 5, 6]] and "claims" not in doc
    claims = tmp_path / "c.json"
    claims.write_text('{"k": 2}')
    code, text = run(capsys, "export", path, "--claims", claims)
    assert json.loads(text)["claims"] == {"k": 2}


def test_construct_is_deterministic(tmp_path, capsys):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.ess"
        run(capsys, "construct", "--theorem", "3.3", "--e", 3, "--k", 3, "--seed", 5, "--out", out)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_usage_errors_exit_two(capsys):
    assert main([]) == 2
    assert main(["verify"]) == 2
