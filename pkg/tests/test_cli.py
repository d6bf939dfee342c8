import json
from pathlib import Path

import pytest

from liftpoly.cli import main
from liftpoly.poly import Poly

SENTENCES = Path(__file__).resolve().parents[1] / "sentences"


def _path(name: str) -> str:
    return str(SENTENCES / name)


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_axiom_example(capsys):
    code, out, _ = _run(capsys, "axiom", "--sentence", _path("ug_connected1.lp"), "--n", "4")
    assert code == 0
    assert out.strip() == "38"


def test_wfomc_honours_axiom(capsys):
    code, out, _ = _run(capsys, "wfomc", "--sentence", _path("ug_connected1.lp"), "--n", "4")
    assert (code, out.strip()) == (0, "38")
    code, out, _ = _run(capsys, "wfomc", "--sentence", _path("ug.lp"), "--n", "4")
    assert (code, out.strip()) == (0, "64")


def test_wcp_json_example(capsys):
    code, out, _ = _run(capsys, "wcp", "--sentence", _path("ug.lp"), "--relation", "R",
                        "--n", "1", "--format", "json", "--shifted")
    assert code == 0
    report = json.loads(out)
    assert json.dumps(report["result"], separators=(",", ":")) == \
        '{"vars":["u"],"terms":[{"exp":[1],"coeff":"1"}]}'
    assert list(report) == ["command", "input_digest", "result", "stats", "threads",
                            "wall_time_s"]


@pytest.mark.parametrize("argv", [
    ["wcp", "--relation", "R", "--n", "4"],
    ["wcp", "--relation", "R", "--n", "3", "--extended"],
    ["scp", "--relation", "R", "--n", "3", "--mode", "strict"],
    ["scp", "--relation", "R", "--n", "3", "--mode", "nonstrict", "--shifted"],
])
def test_json_round_trip(capsys, argv):
    code, out, _ = _run(capsys, *argv[:1], "--sentence", _path("ug.lp"), *argv[1:],
                        "--format", "json")
    assert code == 0
    p = Poly.from_json_obj(json.loads(out)["result"])
    code, text, _ = _run(capsys, *argv[:1], "--sentence", _path("ug.lp"), *argv[1:])
    assert code == 0
    assert str(p) == text.strip()


def test_determinism(capsys):
    argv = ["scp", "--sentence", _path("dg.lp"), "--relation", "R", "--n", "3",
            "--mode", "strict", "--format", "json"]
    reports = []
    for _ in range(2):
        code, out, _ = _run(capsys, *argv)
        assert code == 0
        r = json.loads(out)
        r.pop("wall_time_s")
        reports.append(json.dumps(r, separators=(",", ":")))
    assert reports[0] == reports[1]


def test_stats_reported(capsys):
    _, out, _ = _run(capsys, "wcp", "--sentence", _path("ug.lp"), "--relation", "R",
                     "--n", "3", "--format", "json")
    stats = json.loads(out)["stats"]
    assert set(stats) == {"cells", "layers", "pairs_visited"}
    assert stats["cells"] >= 1 and stats["layers"] >= 1


def test_eval_wcp(capsys):
    code, out, _ = _run(capsys, "eval-wcp", "--sentence", _path("ug.lp"), "--relation", "R",
                        "--n", "3", "--at", "0")
    assert (code, out.strip()) == (0, "8")
    code, _, _ = _run(capsys, "eval-wcp", "--sentence", _path("ug.lp"), "--relation", "R",
                      "--n", "3", "--at", "1/0")
    assert code == 1


def test_tutte_commands(capsys):
    code, out, _ = _run(capsys, "tutte", "--family", "complete", "--n", "3")
    assert code == 0
    assert Poly.from_json_obj(json.loads(_run(
        capsys, "tutte", "--family", "complete", "--n", "3", "--format", "json")[1])["result"]) \
        == Poly.var("x") ** 2 + Poly.var("x") + Poly.var("y")
    code, out, _ = _run(capsys, "tutte", "--family", "blocks", "--blocks",
                        "sizes=2,2;adj=01,10", "--format", "json")
    assert code == 0
    t = Poly.from_json_obj(json.loads(out)["result"])
    assert t.eval({"x": 1, "y": 1}) == 4


def test_tutte_usage_errors(capsys):
    assert _run(capsys, "tutte", "--family", "blocks")[0] == 1
    assert _run(capsys, "tutte", "--family", "complete")[0] == 1
    assert _run(capsys, "tutte", "--family", "blocks", "--blocks", "sizes=2;adj=1,0")[0] == 1
    assert _run(capsys, "tutte", "--family", "blocks", "--blocks", "sizes=2,2;adj=01,10",
                "--n", "5")[0] == 1


def test_dichromatic(capsys):
    code, out, _ = _run(capsys, "dichromatic", "--sentence", _path("path3.lp"), "--n", "3",
                        "--mode", "strict", "--format", "json")
    assert code == 0
    chi = Poly.from_json_obj(json.loads(out)["result"])
    # strictly increasing colours along a 3-vertex path: C(x, 3)
    assert [chi.eval({"x": k}) for k in range(1, 6)] == [0, 0, 1, 4, 10]


def test_oracle_matches_engine(capsys):
    for what, cmd in [("wcp", ["wcp"]), ("scp-strict", ["scp", "--mode", "strict"])]:
        _, oracle, _ = _run(capsys, "oracle", "--sentence", _path("dg.lp"), "--n", "3",
                            "--what", what)
        _, engine, _ = _run(capsys, cmd[0], "--sentence", _path("dg.lp"), "--relation", "R",
                            "--n", "3", *cmd[1:])
        assert oracle == engine
    _, out, _ = _run(capsys, "oracle", "--sentence", _path("ug_connected1.lp"), "--n", "4",
                     "--what", "wfomc")
    assert out.strip() == "38"


def test_dumps_go_to_stderr(capsys):
    code, out, err = _run(capsys, "wcp", "--sentence", _path("ug.lp"), "--relation", "R",
                          "--n", "2", "--dump-cells", "--dump-normalized")
    assert code == 0
    assert "cell 0" in err
    assert "cell" not in out


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("LIFTPOLY_THREADS", "3")
    _, out, _ = _run(capsys, "wfomc", "--sentence", _path("ug.lp"), "--n", "2",
                     "--format", "json")
    assert json.loads(out)["threads"] == 3
    monkeypatch.setenv("LIFTPOLY_THREADS", "many")
    assert _run(capsys, "wfomc", "--sentence", _path("ug.lp"), "--n", "2")[0] == 1


def test_exit_codes(capsys, tmp_path):
    code, _, err = _run(capsys, "wfomc", "--sentence", str(tmp_path / "missing.lp"), "--n", "2")
    assert code == 1 and "missing.lp" in err
    assert _run(capsys, "frobnicate")[0] == 1
    assert _run(capsys, "wfomc", "--sentence", _path("ug.lp"), "--n", "0")[0] == 1
    bad = tmp_path / "bad.lp"
    bad.write_text("sentence: forall x. (P(x) &")
    assert _run(capsys, "wfomc", "--sentence", str(bad), "--n", "2")[0] == 1
    # evidence on element 3 cannot be grounded in a domain of size 2
    assert _run(capsys, "wfomc", "--sentence", _path("path3.lp"), "--n", "2")[0] == 2
    assert _run(capsys, "axiom", "--sentence", _path("ug.lp"), "--n", "2")[0] == 1
