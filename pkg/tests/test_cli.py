import json
import shutil
import subprocess
import sys

import pytest

from freelocus.cli import SCHEMA, main, render, run, RunConfig

from cli_fixtures import CORPUS


def invoke(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("command,items,flags,expected", CORPUS,
                         ids=[f"{c}-{i}" for i, (c, *_rest) in enumerate(CORPUS)])
def test_exit_code_contract(capsys, command, items, flags, expected):
    code, out, err = invoke(capsys, flags + [command] + items)
    assert code == expected
    doc = json.loads(out)
    assert doc["schema"] == SCHEMA and doc["exit_code"] == expected
    assert doc["command"] == command and doc["seed"] == 0
    if expected == 3:
        assert doc["result"]["verdict"] == "error" and err.startswith("freelocus:")


def test_spec_examples(capsys):
    code, out, _ = invoke(capsys, ["atom", "x1x2-x2x1"])
    cert = json.loads(out)["result"]["certificate"]
    assert code == 0 and cert["pencil_size"] == 3 and cert["closure_dim"] == cert["ampliated_size"] ** 2
    code, out, _ = invoke(capsys, ["contain", "f=x1", "h=x2"])
    assert code == 1
    assert json.loads(out)["result"]["witness"]["point"]["X"] == [[["0"]], [["1"]]]
    code, _, _ = invoke(capsys, ["slack-member", "h=y' y - (1 - x1' x1)", "f=1 - x1' x1"])
    assert code == 0


def test_byte_identical_reruns(capsys):
    for command, items, flags, _ in CORPUS[::3]:
        a = invoke(capsys, ["--seed", "7"] + flags + [command] + items)
        b = invoke(capsys, ["--seed", "7"] + flags + [command] + items)
        assert a == b


def test_seed_is_embedded(capsys):
    _, out, _ = invoke(capsys, ["--seed", "42", "--trials", "5", "unsignatured", "x1 x1' - x1' x1"])
    doc = json.loads(out)
    assert doc["seed"] == 42 and doc["config"]["seed"] == 42 and doc["config"]["trials"] == 5


def test_flags_after_command(capsys):
    code, out, _ = invoke(capsys, ["contain", "f=x1", "h=x1 x2", "--certified"])
    assert code == 0 and json.loads(out)["config"]["mode"] == "certified"


def test_text_output(capsys):
    code, out, _ = invoke(capsys, ["--text", "slack-member", "h=1", "f=1 - x1' x1"])
    assert code == 1
    assert out.splitlines()[0] == "slack-member: no (exit 1, seed 0)"


def test_bad_flags(capsys):
    assert main(["--max-size", "0", "atom", "x1"]) == 3
    assert main(["--seed", "abc", "atom", "x1"]) == 3
    assert main(["nonsense", "x1"]) == 3
    capsys.readouterr()


def test_deep_nesting_is_input_error():
    code, doc = run("atom", ["(" * 3000 + "x1" + ")" * 3000], RunConfig())
    assert code == 3 and doc["result"]["error"] == "RecursionError"


def test_render_is_sorted():
    _, doc = run("eval", ["f=x1", "X1=[2]"], RunConfig())
    text = render(doc, "json")
    assert list(json.loads(text)) == sorted(json.loads(text))
    assert text == json.dumps(doc, sort_keys=True, indent=2)


def test_console_script():
    exe = shutil.which("freelocus")
    cmd = [exe] if exe else [sys.executable, "-m", "freelocus.cli"]
    p = subprocess.run(cmd + ["contain", "f=x1", "h=x2"], capture_output=True, text=True)
    assert p.returncode == 1
    assert json.loads(p.stdout)["result"]["verdict"] == "Refuted"
