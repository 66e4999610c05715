import json
from pathlib import Path

import pytest

from posskit.cli import build_frame, main, parse_structure, run
from posskit.errors import InputError

DATA = Path(__file__).resolve().parent.parent / "data"


def cli(*argv):
    return run([str(a) for a in argv])


def data(name):
    return DATA / name


def test_check_sea_battle():
    code, out = cli("check", data("sea_battle.txt"))
    assert code == 0
    for cond in ("up-R", "R-down", "R-refinability"):
        assert any(cond in line and "FAIL" not in line for line in out.splitlines())


def test_check_non_regular_admissible_set():
    code, out = cli("check", data("bad_frame.txt"))
    assert code == 1 and "{a}" in out and "FAIL" in out


def test_check_empty_relation():
    code, out = cli("check", data("empty_rel.txt"))
    assert code == 0 and "FAIL" not in out


def test_eval_goldens():
    assert cli("eval", data("sea_battle.txt"), "-x", "present", "-f", "<>f s") == (1, "false")
    assert cli("eval", data("sea_battle.txt"), "-x", "present", "-f", "~<>f s") == (1, "false")
    assert cli("eval", data("sea_battle.txt"), "-x", "present", "-f", "<>f s | ~<>f s") == (0, "true")
    assert cli("eval", data("inquisitive.txt"), "-x", "x", "-f", "(p|q) ?? r")[0] == 1
    assert cli("eval", data("inquisitive.txt"), "-x", "y", "-f", "(p|q) ?? r")[0] == 0
    assert cli("eval", data("sea_battle.txt"), "-x", "y", "-f", "s->s") == (0, "true")


def test_eval_verbose_lists_forced_set():
    code, out = cli("eval", data("inquisitive.txt"), "-x", "x", "-f", "(p|q) ?? r", "--verbose")
    assert code == 1 and "forced at {y,lp,lq,z}" in out


def test_eval_first_order():
    assert cli("eval", data("frege.txt"), "-x", "s", "-f", "cm = ce")[0] == 1
    assert cli("eval", data("frege.txt"), "-x", "s0", "-f", "cm = ce")[0] == 0
    assert cli("eval", data("frege.txt"), "-x", "s", "-f", "x = cm", "-g", "x=m")[0] == 0


def test_valid_countermodel_and_valid():
    code, out = cli("valid", data("sea_battle.txt"), "-f", "[]f p -> p")
    assert code == 1 and "countermodel" in out and "val p = {}" in out and "point x'" in out
    assert cli("valid", data("t2.txt"), "-f", "p|~p") == (0, "valid")


def test_valid_cap_exceeded():
    code, out = cli("valid", data("t2.txt"), "-f", "p | q", "--cap", "10")
    assert code == 3 and "cap" in out


def test_input_errors(tmp_path):
    assert cli("eval", data("sea_battle.txt"), "-x", "nowhere", "-f", "s")[0] == 2
    assert cli("eval", data("sea_battle.txt"), "-x", "present", "-f", "s &")[0] == 2
    assert cli("check", tmp_path / "missing.txt")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("kind poset\nelements a b\nle a zz\n")
    assert cli("check", bad)[0] == 2
    bad.write_text("kind nonsense\n")
    assert cli("check", bad)[0] == 2


def test_undeclared_names_rejected_when_building():
    with pytest.raises(InputError):
        build_frame(parse_structure("kind poset\nelements a\nle a b\n"))


def test_complete_and_dualize_reparse(tmp_path):
    cases = [("complete", "macneille", "b4.txt"), ("complete", "canonical", "b2.txt"),
             ("complete", "ro", "t2.txt"), ("complete", "dragalin", "chain3.txt"),
             ("dualize", None, "b4.txt")]
    for cmd, kind, name in cases:
        argv = [cmd] + ([kind] if kind else []) + [data(name)]
        code, out = cli(*argv)
        assert code == 0, (cmd, kind, name, out)
        out_file = tmp_path / f"{cmd}_{kind}_{name}"
        out_file.write_text(out + "\n")
        assert cli("check", out_file)[0] == 0, out
    code, out = cli("complete", "macneille", data("b4.txt"))
    assert sum(1 for line in out.splitlines() if line.startswith("elements")) == 1
    assert len(next(l for l in out.splitlines() if l.startswith("elements")).split()) == 5


def test_complete_mismatch_and_non_locale():
    assert cli("complete", "macneille", data("t2.txt"))[0] == 2
    assert cli("complete", "dragalin", data("m3.txt"))[0] == 2


def test_json_and_determinism():
    argv = ("eval", data("sea_battle.txt"), "-x", "present", "-f", "<>f s", "--json")
    first = cli(*argv)
    assert first == cli(*argv)
    report = json.loads(first[1])
    assert report["command"] == "eval" and report["exit"] == 1
    a = cli("check", data("sea_battle.txt"))
    assert a == cli("check", data("sea_battle.txt"))


def test_main_streams(capsys):
    assert main(["eval", str(data("sea_battle.txt")), "-x", "present", "-f", "s | ~s"]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert main(["eval", str(data("t2.txt")), "-x", "nowhere", "-f", "p"]) == 2
    assert "error" in capsys.readouterr().err
