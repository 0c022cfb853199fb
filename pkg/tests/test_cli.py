import io
import json
import subprocess
import sys

import pytest

from conftest import GOLDEN, fixture_path
from formalauto.cli import run
from formalauto.parser import parse_operator
from regenerate_golden import cases, render

EXPECTED_EXIT = {
    ("irregular_second_order", "analyze"): 0,
    ("irregular_second_order_gevrey_half", "analyze"): 1,
    ("resonant_constant_kernel", "analyze"): 1,
    ("shifted_cokernel", "analyze"): 1,
    ("shifted_resonant", "analyze"): 1,
    ("fuchsian_first_order", "analyze"): 0,
    ("fuchsian_first_order_convergent", "analyze"): 0,
    ("boundary_reduction", "analyze"): 0,
    ("cauchy_sign_uniform", "analyze"): 0,
    ("identity", "analyze"): 0,
    ("q_moment", "analyze"): 0,
    ("transport", "analyze"): 0,
    ("irregular_second_order", "solve"): 0,
    ("resonant_constant_kernel", "solve"): 2,
    ("shifted_cokernel", "solve"): 1,
    ("fuchsian_first_order", "solve"): 0,
    ("cauchy_sign_uniform", "solve"): 0,
    ("identity", "solve"): 0,
    ("transport", "solve"): 0,
    ("boundary_reduction", "solve"): 0,
}


def cli(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def cli_json(*argv):
    code, text = cli(*argv)
    return code, json.loads(text)


@pytest.mark.parametrize("name,cmd,argv,ext", list(cases()), ids=lambda x: x if isinstance(x, str) else None)
def test_reports_match_golden(name, cmd, argv, ext):
    code, text = render(argv)
    assert text == (GOLDEN / f"{name}.{cmd}.{ext}").read_text()
    if (name, cmd) in EXPECTED_EXIT:
        assert code == EXPECTED_EXIT[(name, cmd)]


def test_every_fixture_has_an_expected_exit_code():
    covered = {(n, c) for n, c, _, _ in cases() if c != "polygon"}
    assert covered == set(EXPECTED_EXIT)


def test_analyze_irregular_second_order_spaces():
    code, doc = cli_json("analyze", fixture_path("irregular_second_order"), "--space", "formal", "--no-timing")
    assert code == 0 and doc["reports"][0]["verdict"]["kind"] == "yes"
    code, doc = cli_json("analyze", fixture_path("irregular_second_order"), "--space", "gevrey", "--s", "1/2", "--no-timing")
    assert code == 1 and doc["reports"][0]["space"] == "gevrey(1/2)"
    code, _ = cli_json("analyze", fixture_path("irregular_second_order"), "--space", "gevrey", "--s", "1")
    assert code == 0
    code, _ = cli_json("analyze", fixture_path("irregular_second_order"), "--space", "convergent")
    assert code == 1


def test_report_structure():
    _, doc = cli_json("analyze", fixture_path("irregular_second_order"), "--no-timing")
    assert list(doc)[:3] == ["schema_version", "command", "problem"]
    assert doc["polygon"]["chain"] == [[1, 0], [2, 1]]
    assert doc["polygon"]["slopes"] == ["1"]
    assert doc["char_poly"] == {"text": "1 + n", "coefficients": ["1", "1"]}
    assert "timing" not in doc
    _, timed = cli_json("analyze", fixture_path("irregular_second_order"))
    assert "elapsed_seconds" in timed["timing"]


def test_echoed_operator_reparses():
    for name in ("irregular_second_order", "shifted_cokernel", "cauchy_sign_uniform", "boundary_reduction", "q_moment"):
        _, doc = cli_json("analyze", fixture_path(name), "--no-timing")
        with open(fixture_path(name)) as fh:
            spec = json.load(fh)
        from formalauto.problem import parse_problem
        original = parse_problem(spec).operator
        kwargs = {"moment_z": original.moment} if name == "q_moment" else {}
        assert parse_operator(doc["problem"]["operator"], dim=spec["dim"], **kwargs) == original


def test_solve_fuchsian_first_order_lists_closed_form():
    code, doc = cli_json("solve", fixture_path("fuchsian_first_order"), "--no-timing")
    assert code == 0
    assert doc["solution"]["u"]["coefficients"] == [f"1/{2 + 3 * n}" for n in range(16)]


def test_solve_shifted_cokernel_obstructed():
    code, doc = cli_json("solve", fixture_path("shifted_cokernel"), "--no-timing")
    assert code == 1
    assert doc["solution"] == {"status": "obstructed", "first_failed_index": 0, "reason": "image_constraint"}


def test_solve_identity_echoes_rhs():
    code, doc = cli_json("solve", fixture_path("identity"), "--no-timing")
    assert doc["solution"]["u"]["coefficients"] == ["1/2", "3/7", "0", "0", "-1", "0", "0"]


def test_polygon_renderings():
    _, svg = cli("polygon", fixture_path("irregular_second_order"), "--format", "svg")
    assert svg.startswith("<svg") and 'class="slope"' in svg and ">1</text>" in svg
    assert svg.count('class="ray"') == 2
    _, txt = cli("polygon", fixture_path("fuchsian_first_order"), "--format", "ascii")
    assert "chain: (1,0)" in txt and "first positive slope: vertical" in txt
    _, doc = cli_json("polygon", fixture_path("identity"), "--format", "json")
    assert doc["polygon"]["chain"] == [[0, 0]]


def test_malformed_operator_reports_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "dim": 1,\n  "operator": "1 + * z"\n}\n')
    code, doc = cli_json("analyze", str(bad))
    assert code == 3
    err = doc["error"]
    assert err["line"] == 3 and err["position"] == 4 and err["field"] == "operator"
    assert err["file"] == str(bad)


@pytest.mark.parametrize("content,field", [
    ('{"operator": "z*Dz", "dim": 3}', "dim"),
    ('{"operator": "a*z*Dz"}', "operator"),
    ('{"operator": "z*Dz", "colour": 1}', "colour"),
    ('{"operator": "z*Dz", "s": "-1"}', "s"),
    ('{"operator": "0"}', "operator"),
])
def test_invalid_problem_files(tmp_path, content, field):
    p = tmp_path / "p.json"
    p.write_text(content)
    code, doc = cli_json("analyze", str(p))
    assert code == 3 and doc["error"]["field"] == field


def test_invalid_json(tmp_path):
    p = tmp_path / "p.json"
    p.write_text('{"operator": "z",\n  oops}')
    code, doc = cli_json("analyze", str(p))
    assert code == 3 and doc["error"]["line"] == 2


def test_missing_file():
    code, doc = cli_json("analyze", "/nonexistent/problem.json")
    assert code == 3 and "cannot read" in doc["error"]["message"]


def test_mismatched_m_is_input_error(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"dim": 2, "m": 2, "operator": "Dt + t*Dt^2"}))
    assert cli("analyze", str(p))[0] == 3


def test_gevrey_without_order_is_input_error():
    assert cli("analyze", fixture_path("irregular_second_order"), "--space", "gevrey")[0] == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "formalauto", "analyze", fixture_path("resonant_constant_kernel"), "--no-timing"],
                         capture_output=True, text=True)
    assert out.returncode == 1
    assert json.loads(out.stdout)["reports"][0]["condition_b"] == {"kind": "fails_at", "witness": 0}
