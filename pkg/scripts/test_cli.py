import json
from fractions import Fraction

import pytest

from core.exceptions import ParseError
from main import main
from repository.move_script_repository import MoveScriptRepository
from repository.stack_file_repository import StackFileRepository
from services.generator_service import gen_brickwall, gen_harmonic

HALF_SPLIT_SCRIPT = """\
init
0 1
end
extreme -1/2 1/2
"""


@pytest.fixture
def stack_file(tmp_path):
    def write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def test_generate_brickwall_to_file(tmp_path, capsys):
    out = tmp_path / "bw6.txt"
    assert main(["generate", "brickwall", "6", "--out", str(out)]) == 0
    assert capsys.readouterr().out.splitlines() == ["blocks 111", "overhang 3"]
    assert StackFileRepository().read(out).n == 111


def test_generate_to_stdout(capsys):
    assert main(["generate", "harmonic", "1"]) == 0
    captured = capsys.readouterr()
    assert captured.out == "-1/2 0\n"
    assert "blocks 1" in captured.err


def test_generate_diamond_and_height(tmp_path, capsys):
    out = tmp_path / "d2.txt"
    assert main(["generate", "diamond", "2", "-o", str(out)]) == 0
    assert "blocks 4" in capsys.readouterr().out

    assert main(["generate", "brickwall", "2", "--h", "1/3"]) == 0
    assert capsys.readouterr().out.startswith("h 1/3\n")


def test_generate_rejects_bad_size(capsys):
    assert main(["generate", "harmonic", "0"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_check_exit_codes(stack_file, capsys):
    balanced = stack_file("one.txt", "-1/2 0\n")
    tipping = stack_file("tip.txt", "-1/4 0\n")
    broken = stack_file("broken.txt", "0 0\n1/2 0\n")

    assert main(["check", balanced]) == 0
    assert capsys.readouterr().out.strip() == f"{balanced}: balanced"

    assert main(["check", tipping]) == 1
    out = capsys.readouterr().out
    assert "unbalanced" in out
    assert "no admissible force assignment exists" in out

    assert main(["check", broken]) == 2
    assert "overlap" in capsys.readouterr().err


def test_check_certificate_lines(stack_file, capsys):
    path = stack_file("one.txt", "-1/2 0\n")
    assert main(["check", "--certificate", path]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "(1 0 0 1)"


def test_check_missing_file(tmp_path, capsys):
    assert main(["check", str(tmp_path / "absent.txt")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_check_json(stack_file, capsys):
    path = stack_file("one.txt", "-1/2 0\n")
    assert main(["check", "--json", path]) == 0
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["kind"] == "balanced"


def test_check_batch_keeps_argument_order(stack_file, capsys):
    paths = [
        stack_file("a.txt", "-1/2 0\n"),
        stack_file("b.txt", "-1/4 0\n"),
        stack_file("c.txt", "-1 0\n"),
    ]
    assert main(["check", "--batch", *paths]) == 1
    heads = [line for line in capsys.readouterr().out.splitlines() if line.endswith("balanced")]
    assert heads == [f"{paths[0]}: balanced", f"{paths[1]}: unbalanced", f"{paths[2]}: balanced"]


def test_simulate_prints_final_distribution(stack_file, capsys):
    path = stack_file("half.moves", HALF_SPLIT_SCRIPT)
    assert main(["simulate", path]) == 0
    assert capsys.readouterr().out.strip() == "(-1/2, 1/2) (1/2, 1/2)"


def test_simulate_report(stack_file, capsys):
    path = stack_file("half.moves", HALF_SPLIT_SCRIPT)
    assert main(["simulate", "--report", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "step 0: M0=1 M1=0 M2=0 S=0 spread_lemma=ok"
    assert lines[2] == "step 1: M0=1 M1=0 M2=1/4 S=1/4 spread_lemma=ok"
    assert lines[3].startswith("weight-constrained: yes")


def test_simulate_empty_step_list(stack_file, capsys):
    path = stack_file("idle.moves", "init 0 2, 1 1\nend\n")
    assert main(["simulate", path]) == 0
    assert capsys.readouterr().out.strip() == "(0, 2) (1, 1)"


def test_simulate_negative_mass_reports_line(stack_file, capsys):
    script = "init\n0 1\nend\nmove 1 2 : 1 1/2, 3/2 -1, 2 1/2\n"
    path = stack_file("bad.moves", script)
    assert main(["simulate", path]) == 1
    assert "line 4" in capsys.readouterr().err


def test_simulate_parse_error_position(stack_file, capsys):
    path = stack_file("typo.moves", "init\n0 1\nend\nmove 0 1 : 0 x\n")
    assert main(["simulate", path]) == 2
    assert f"{path}:4:" in capsys.readouterr().err


def test_verify_brickwall(tmp_path, capsys):
    path = tmp_path / "bw4.txt"
    StackFileRepository().write(path, gen_brickwall(4))
    assert main(["verify", str(path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith(f"{path}: PASS")
    assert "overhang³ = 8 ≤ 216·n" in out


def test_verify_unbalanced_is_not_a_failure(tmp_path, capsys):
    assert main(["generate", "triangle", "3", "-o", str(tmp_path / "t3.txt")]) == 0
    capsys.readouterr()
    assert main(["verify", str(tmp_path / "t3.txt")]) == 0
    assert "unbalanced — bound checks skipped" in capsys.readouterr().out


def test_verify_overlap_is_an_input_error(stack_file, capsys):
    path = stack_file("overlap.txt", "-1/2 0\n0 0\n")
    assert main(["verify", path]) == 2


def test_verify_json_and_improved(tmp_path, capsys):
    path = tmp_path / "h5.txt"
    StackFileRepository().write(path, gen_harmonic(5))
    assert main(["verify", "--json", "--improved", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    names = [record["name"] for record in report["records"]]
    assert "improved_bound" in names
    assert all(record["status"] != "fail" for record in report["records"])


def test_verify_batch(tmp_path, capsys):
    paths = []
    for n in (1, 2, 3):
        path = tmp_path / f"h{n}.txt"
        StackFileRepository().write(path, gen_harmonic(n))
        paths.append(str(path))
    assert main(["verify", "--batch", *paths]) == 0
    heads = [line for line in capsys.readouterr().out.splitlines() if line.endswith("PASS")]
    assert heads == [f"{p}: PASS" for p in paths]


def test_render_stack_is_deterministic(tmp_path, capsys):
    path = tmp_path / "bw6.txt"
    StackFileRepository().write(path, gen_brickwall(6))
    assert main(["render", str(path)]) == 0
    first = capsys.readouterr().out
    assert first.count('<rect class="block"') == 111

    out = tmp_path / "bw6.svg"
    assert main(["render", str(path), "--out", str(out)]) == 0
    assert out.read_text(encoding="utf-8") == first


def test_render_trace(stack_file, capsys):
    path = stack_file("half.moves", HALF_SPLIT_SCRIPT)
    assert main(["render", "--mode", "trace", path]) == 0
    svg = capsys.readouterr().out
    assert svg.count('<g class="distribution"') == 2


def test_render_without_forces(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("OVERHANG_RENDER_SHOW_FORCES", "false")
    path = tmp_path / "h3.txt"
    StackFileRepository().write(path, gen_harmonic(3))
    assert main(["render", str(path)]) == 0
    assert 'class="force"' not in capsys.readouterr().out


def test_stack_file_round_trip(tmp_path):
    repository = StackFileRepository()
    text = "h 1/2\n# a comment\n-1/2 0\n-1 1/2   # trailing\nw -1 1 3\n"
    stack = repository.parse(text)
    assert stack.h == Fraction(1, 2)
    assert repository.parse(repository.serialize(stack)) == stack


def test_move_script_round_trip():
    repository = MoveScriptRepository()
    text = (
        "init 0 2\nend\n"
        "move -1/2 1/2 : -1/2 1/2, 0 -1, 1/2 1/2\n"
        "lossy -1 1 wide : -1 1/4, 0 -1/2, 1 1/4\n"
        "extreme 0 1\n"
    )
    script = repository.parse(text)
    assert len(script.actions) == 3
    assert script.lines == (3, 4, 5)
    again = repository.parse(repository.serialize(script))
    assert (again.initial, again.actions) == (script.initial, script.actions)


async def test_async_reader_matches_sync(tmp_path):
    path = tmp_path / "bw3.txt"
    StackFileRepository().write(path, gen_brickwall(3))
    assert await StackFileRepository().aread(path) == StackFileRepository().read(path)


@pytest.mark.parametrize("batch", [[], ["--batch"]])
def test_check_rejects_invalid_utf8(tmp_path, capsys, batch):
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"-1/2 0 \xe9\n")
    assert main(["check", *batch, str(path)]) == 2
    err = capsys.readouterr().err
    assert f"{path}:1:8:" in err
    assert "not valid UTF-8" in err


def test_simulate_rejects_invalid_utf8(tmp_path, capsys):
    path = tmp_path / "binary.moves"
    path.write_bytes(b"init\n0 1\nend\n\xff\n")
    assert main(["simulate", str(path)]) == 2
    err = capsys.readouterr().err
    assert f"{path}:4:1:" in err
    assert "offset 13" in err


def test_render_trace_rejects_invalid_utf8(tmp_path, capsys):
    path = tmp_path / "binary.moves"
    path.write_bytes(b"init\n0 1\xfe\nend\n")
    assert main(["render", "--mode", "trace", str(path)]) == 2
    assert f"{path}:2:4:" in capsys.readouterr().err


async def test_async_reader_rejects_invalid_utf8(tmp_path):
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"# caf\xe9\n-1/2 0\n")
    with pytest.raises(ParseError) as info:
        await StackFileRepository().aread(path)
    assert (info.value.line, info.value.column) == (1, 6)


def test_height_round_trip_with_configured_default(monkeypatch):
    monkeypatch.setenv("OVERHANG_DEFAULT_BLOCK_HEIGHT", "1/2")
    repository = StackFileRepository()
    for h in (Fraction(1), Fraction(1, 2), Fraction(3)):
        stack = gen_brickwall(2, h)
        assert repository.parse(repository.serialize(stack)).h == h
    assert not repository.serialize(gen_brickwall(2, Fraction(1, 2))).startswith("h ")
