import json
import subprocess
import sys

import pytest

from agapia.cli import DIAGNOSTICS, DIVERGENCE, IO, OK, main, result_json, run_source
from agapia.examples import EXAMPLES, corpus_dir, example, load_golden
from agapia.lang import parse, typecheck
from agapia.scenario import from_structured, to_structured

PERFECT1 = str(corpus_dir() / "perfect1.agapia")
TREE = str(corpus_dir() / "htm2.tree")


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_typecheck_prints_program_type(capsys):
    code, out, _ = call(capsys, "typecheck", PERFECT1)
    assert code == OK
    assert out.strip() == "⟨nil | sn;nil;nil | nil | sn;sn;sn⟩"


def test_syntax_error_exit_code_and_position(tmp_path, capsys):
    bad = tmp_path / "bad.agapia"
    bad.write_text("module A{listen nil;}{read x:sn;}{x = ;}{speak nil;}{write x;}\nA\n")
    code, _, err = call(capsys, "typecheck", str(bad))
    assert code == DIAGNOSTICS
    assert err.startswith(f"{bad}:1:39:")


def test_missing_file_is_io_error(tmp_path, capsys):
    code, _, err = call(capsys, "run", str(tmp_path / "absent.agapia"))
    assert code == IO and "absent.agapia" in err


def test_round_cap_is_divergence(tmp_path, capsys):
    src = tmp_path / "up.agapia"
    src.write_text("module Up{listen nil;}{read x:sn;}{x = x + 1;}{speak nil;}{write x;}\nwhile_t(x > 0){Up}\n")
    code, _, err = call(capsys, "run", str(src), "--north", "1", "--round-cap", "5")
    assert code == DIVERGENCE and "5 rounds" in err


def test_bad_input_literal_is_diagnostic(capsys):
    code, _, _ = call(capsys, "run", PERFECT1, "--north", "true")
    assert code == DIAGNOSTICS


def test_run_text_output(capsys):
    code, out, _ = call(capsys, "run", PERFECT1, "--north", "28")
    assert code == OK
    assert "south: x=0;y=28;z=0" in out.splitlines()
    assert "note: while_t: 14 round(s)" in out.splitlines()


@pytest.mark.parametrize("n, z", [(28, 0), (5, 4), (12, -4)])
def test_run_structured_output(capsys, n, z):
    code, out, _ = call(capsys, "run", PERFECT1, "--north", str(n), "--format", "structured")
    assert code == OK
    doc = json.loads(out)
    assert doc["south"][-1]["v"] == z
    f = from_structured(doc["scenario"])
    assert to_structured(f) == doc["scenario"]


def test_structured_result_matches_library_run():
    r = run_source((corpus_dir() / "perfect2.agapia").read_text(), "6")
    doc = result_json(r)
    assert from_structured(doc["scenario"]) == r.scenario


def test_htm_gen_writes_typechecking_program(tmp_path, capsys):
    for flag in ([], ["--feedback"]):
        out = tmp_path / "gen.agapia"
        code, _, _ = call(capsys, "htm-gen", TREE, "-o", str(out), *flag)
        assert code == OK
        typecheck(parse(out.read_text()).program)
    shipped = (corpus_dir() / "htm_feedback.agapia").read_text()
    assert out.read_text() == shipped


def test_htm_gen_to_stdout(capsys):
    code, out, _ = call(capsys, "htm-gen", TREE)
    assert code == OK and out == (corpus_dir() / "htm_forward.agapia").read_text()


def test_examples_list(capsys):
    code, out, _ = call(capsys, "examples", "list")
    assert code == OK
    assert [line.split()[0] for line in out.splitlines()] == [e.name for e in EXAMPLES]


def test_examples_run_all(capsys):
    code, out, _ = call(capsys, "examples", "run-all")
    assert code == OK
    assert out.splitlines() == [f"PASS {e.name}" for e in EXAMPLES]


def test_goldens_cover_every_declared_case():
    for e in EXAMPLES:
        g = load_golden(e)
        assert [(c["north"], tuple(c["west"])) for c in g] == [(c.north, c.west) for c in e.cases]
    assert example("perfect1").golden_file == "perfect1.golden.json"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "agapia", "typecheck", PERFECT1],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and "sn;sn;sn" in r.stdout
