from __future__ import annotations

import json
import subprocess
import sys

import pytest

from deflogic import parse_theory
from deflogic.cli import main

NOEXT = "d: : a / !a\n"
PAIR = "d1: : a / b\nd2: : !a / b\n"
TRANSLATED_PAIR = "vars a b a' b'\nd1: : a' & b' / b & a' & b'\nd2: : !a' & b' / b & !a' & b'\n"
ASSIGNMENT_QBF = "free z . exists x . forall y . z -> (x | y)"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_extensions_noext_reiter(capsys, files):
    code, rep = run_json(capsys, "extensions", files("noext.dt", NOEXT), "--sem", "reiter")
    assert code == 0 and rep["extensions"] == []
    assert rep["timing_ms"] is None
    assert rep["inputs"][0]["sha256"]


def test_extensions_pair(capsys, files):
    pair = files("pair.dt", PAIR)
    code, rep = run_json(capsys, "extensions", pair, "--sem", "constrained")
    assert code == 0 and len(rep["extensions"]) == 1
    assert rep["extensions"][0] == {"formula": "b", "witness": ["d1"]}
    code, rep = run_json(capsys, "extensions", pair, "--sem", "constrained", "--double")
    assert code == 0 and len(rep["double_extensions"]) == 2
    assert [d["justifications"] for d in rep["double_extensions"]] == [["a"], ["!a"]]


def test_extensions_human_output(capsys, files):
    code, out, _ = run(capsys, "extensions", files("pair.dt", PAIR), "--sem", "reiter")
    assert code == 0
    assert out.splitlines()[0] == "1 reiter extension(s)"


def test_translate_cr_and_jc(capsys, files):
    pair = files("pair.dt", PAIR)
    code, rep = run_json(capsys, "translate", pair, "--route", "cr")
    assert code == 0 and not rep["bottom"]
    t = parse_theory(rep["theory"]).theory
    assert all(d.just == (d.just & d.cons) or d.cons in d.just.args for d in t.defaults)
    code, rep = run_json(capsys, "translate", pair, "--route", "jc")
    assert code == 0
    assert set(rep["fresh"]["alphabets"]) == {"X_1", "X_2"}


def test_translate_writes_out(capsys, files, tmp_path):
    out = tmp_path / "out.dt"
    code, text, _ = run(capsys, "translate", files("pair.dt", PAIR), "--route", "jc", "--out", out)
    assert code == 0 and text.startswith("wrote ")
    assert parse_theory(out.read_text()).theory.defaults


def test_translate_rc_auto_strongest(capsys, files):
    code, rep = run_json(
        capsys, "translate", files("noext.dt", NOEXT), "--route", "rc", "--auto-strongest"
    )
    assert code == 0 and rep["bottom"] is True and rep["theory"] is None
    code, rep = run_json(
        capsys, "translate", files("pair.dt", PAIR), "--route", "rc", "--auto-strongest"
    )
    assert code == 0 and rep["strongest_extension"] is not None


def test_translate_rc_needs_extension(capsys, files):
    code, _, err = run(capsys, "translate", files("pair.dt", PAIR), "--route", "rc")
    assert code == 4 and "strongest" in err


def test_translate_rc_rejects_non_extension(capsys, files):
    code, _, _ = run(
        capsys, "translate", files("pair.dt", PAIR), "--route", "rc", "--strongest-ext", "a & !b"
    )
    assert code == 4


def test_verify(capsys, files, tmp_path):
    pair = files("pair.dt", PAIR)
    jc = tmp_path / "jc.dt"
    assert run(capsys, "translate", pair, "--route", "jc", "--out", jc)[0] == 0
    args = ("verify", pair, jc, "--src-sem", "justified", "--tgt-sem", "constrained")
    assert run(capsys, *args, "--bijective")[0] == 0
    tp = files("tp.dt", TRANSLATED_PAIR)
    args = ("verify", pair, tp, "--src-sem", "constrained", "--tgt-sem", "reiter", "--vars", "a,b")
    code, rep = run_json(capsys, *args, "--bijective")
    assert code == 1 and rep["holds"] is False and rep["report"]["faithful"] is True
    assert run(capsys, *args)[0] == 0
    assert run(capsys, "verify", pair, pair, "--src-sem", "reiter", "--tgt-sem", "reiter")[0] == 0


def test_verify_alphabet_contract(capsys, files):
    pair = files("pair.dt", PAIR)
    code, _, _ = run(
        capsys, "verify", pair, pair, "--src-sem", "reiter", "--tgt-sem", "reiter", "--vars", "zz"
    )
    assert code == 4


def test_gen(capsys):
    code, out, _ = run(
        capsys, "gen", "--construction", "one-or-two", "--qbf", "exists x . forall y . x|y"
    )
    assert code == 0 and out.splitlines()[-1].startswith("# expect")
    assert "2 extensions" in out.splitlines()[-1]
    code, rep = run_json(capsys, "gen", "--construction", "assignment", "--qbf", ASSIGNMENT_QBF)
    assert code == 0 and rep["expected_extensions"] == 4
    assert "2^1 + 2 = 4" in rep["expected"]


def test_gen_from_file(capsys, files, tmp_path):
    qbf = files("f.qbf", ASSIGNMENT_QBF + "\n")
    out = tmp_path / "g.dt"
    code, rep = run_json(capsys, "gen", "--construction", "assignment", "--qbf", qbf, "--out", out)
    assert code == 0 and rep["inputs"][0]["path"] == qbf
    code, rep = run_json(capsys, "count", out, "--sem", "rational")
    assert rep["count"] == 4


def test_gen_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gen", "--construction", "nope", "--qbf", "exists x . x"])
    assert info.value.code == 2
    assert run(capsys, "gen", "--construction", "sigma2", "--qbf", "exists x . forall x . x")[0] == 2


def test_count(capsys, files, tmp_path):
    out = tmp_path / "a.dt"
    assert run(capsys, "gen", "--construction", "assignment", "--qbf", ASSIGNMENT_QBF, "--out", out)[0] == 0
    code, rep = run_json(capsys, "count", out, "--sem", "rational")
    assert code == 0 and rep["count"] == 4 and rep["geq"] is None
    code, rep = run_json(capsys, "count", out, "--sem", "rational", "--geq", "5")
    assert code == 1 and rep["geq"] == {"k": 5, "holds": False}
    assert run(capsys, "count", out, "--sem", "rational", "--geq", "4")[0] == 0
    code, rep = run_json(capsys, "count", files("empty.dt", ""), "--sem", "reiter")
    assert code == 0 and rep["count"] == 1


def test_input_errors(capsys, files, tmp_path):
    code, _, err = run(capsys, "extensions", files("bad.dt", "d: a & : b / c\n"), "--sem", "reiter")
    assert code == 2 and "1" in err
    assert run(capsys, "extensions", files("inc.dt", "w p\nw !p\n"), "--sem", "reiter")[0] == 2
    assert run(capsys, "extensions", tmp_path / "missing.dt", "--sem", "reiter")[0] == 2


def test_enumeration_bound(capsys, files):
    text = "".join(f"d{i}: : x{i} / x{i}\n" for i in range(5))
    path = files("wide.dt", text)
    assert run(capsys, "extensions", path, "--sem", "reiter", "--max-defaults", "4")[0] == 3
    assert run(capsys, "count", path, "--sem", "reiter", "--max-defaults", "4")[0] == 3
    assert run(capsys, "extensions", path, "--sem", "reiter")[0] == 0


def test_timing_flag(capsys, files):
    _, rep = run_json(capsys, "count", files("pair.dt", PAIR), "--sem", "reiter", "--timing")
    assert isinstance(rep["timing_ms"], float)


@pytest.mark.parametrize("sem", ["reiter", "justified", "rational", "constrained"])
def test_count_equals_extensions_length(capsys, files, sem):
    for name, text in (("noext.dt", NOEXT), ("pair.dt", PAIR), ("tp.dt", TRANSLATED_PAIR)):
        path = files(name, text)
        _, ext = run_json(capsys, "extensions", path, "--sem", sem)
        _, cnt = run_json(capsys, "count", path, "--sem", sem)
        assert cnt["count"] == len(ext["extensions"])


def test_json_is_deterministic(files):
    pair = files("pair.dt", PAIR)
    commands = [
        ["extensions", pair, "--sem", "constrained", "--double"],
        ["translate", pair, "--route", "rj", "--auto-strongest"],
        ["verify", pair, pair, "--src-sem", "rational", "--tgt-sem", "rational"],
        ["gen", "--construction", "assignment", "--qbf", ASSIGNMENT_QBF],
        ["count", pair, "--sem", "justified"],
    ]
    for argv in commands:
        outs = {
            subprocess.run(
                [sys.executable, "-m", "deflogic", *argv, "--json"],
                capture_output=True,
                check=True,
            ).stdout
            for _ in range(2)
        }
        assert len(outs) == 1
