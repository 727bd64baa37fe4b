import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from logtc import catalog
from logtc.cli import (EXIT_NOT_SECTION, EXIT_SINGULAR, EXIT_UNIT, EXIT_UNSUPPORTED, EXIT_USAGE,
                       example_files, main)
from logtc.gtc import parse_gtc
from logtc.ls import LSSection, identity_section, parse_section, serialize_section
from logtc.polynomial import LaurentPolynomial

GOLDEN = Path(__file__).parent / "golden"
P = LaurentPolynomial.parse


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    code, _ = run("examples", "all", "--numeric", "--out", tmp_path, "--quiet")
    assert code == EXIT_UNIT
    return tmp_path


def _write_section(tmp_path, gtc, section, name):
    space = parse_gtc((gtc).read_text())
    path = tmp_path / name
    path.write_text(serialize_section(space, section))
    return path


def test_check_symbolic_dp4_reports_constraints(files):
    code, text = run("check", files / "dp4.gtc", files / "dp4.section")
    assert code == EXIT_NOT_SECTION
    assert "holds iff b0 = a0, c0 = a0^2" in text


def test_check_generic_dp4_counts_eight_points(files):
    code, text = run("check", files / "dp4.gtc", files / "dp4-generic.section")
    assert code == EXIT_SINGULAR
    assert "singular points: 8" in text


def test_check_dp4_with_wrong_c0(files, tmp_path):
    sec = catalog.dp4_numeric_section().replace("rho_z", P("2 + z + z^4", ("z",)))
    path = _write_section(tmp_path, files / "dp4.gtc", sec, "bad.section")
    code, text = run("check", files / "dp4.gtc", path)
    assert code == EXIT_NOT_SECTION
    assert "joint u: residuals 1/2, 1; cannot hold (1/2 = 1) (fail)" in text


@pytest.mark.parametrize("name", catalog.names())
def test_check_all_ones_is_unit(files, tmp_path, name):
    space = parse_gtc((files / f"{name}.gtc").read_text())
    path = _write_section(tmp_path, files / f"{name}.gtc", identity_section(space), "one.section")
    assert run("check", files / f"{name}.gtc", path)[0] == EXIT_UNIT


def test_check_threefold_reports_components(files):
    code, text = run("check", files / "a1-threefold.gtc", files / "a1-threefold.section")
    assert code == EXIT_SINGULAR
    assert "singular locus: 4 irreducible component(s)" in text


def test_check_json_is_machine_readable(files):
    code, text = run("check", "--json", files / "a1-surface.gtc", files / "a1-surface.section")
    data = json.loads(text)
    assert data["exit_code"] == code == EXIT_SINGULAR
    assert data["singular_points"] == 1
    assert data["section"]["classification"] == "LS"


def test_quiet_prints_nothing(files):
    assert run("check", "--quiet", files / "dp4.gtc", files / "dp4-generic.section")[1] == ""


def test_output_is_deterministic(files):
    a = run("resolve", "--json", files / "a1-threefold.gtc", files / "a1-threefold.section")
    b = run("resolve", "--json", files / "a1-threefold.gtc", files / "a1-threefold.section")
    assert a == b


def test_parse_error_exit(files, tmp_path, capsys):
    broken = tmp_path / "broken.gtc"
    broken.write_text((files / "dp4.gtc").read_text()[:300])
    code, _ = run("check", broken, files / "dp4.section")
    assert code == EXIT_USAGE
    assert "broken.gtc:$" in capsys.readouterr().err


def test_missing_file_exit(tmp_path, capsys):
    assert run("check", tmp_path / "nope.gtc", tmp_path / "nope.section")[0] == EXIT_USAGE
    assert "No such file" in capsys.readouterr().err


def test_section_for_unknown_wall(files, tmp_path, capsys):
    data = json.loads((files / "dp4-generic.section").read_text())
    data["walls"][0]["id"] = "rho_w"
    bad = tmp_path / "w.section"
    bad.write_text(json.dumps(data))
    assert run("check", files / "dp4.gtc", bad)[0] == EXIT_USAGE
    assert "$.walls[0].id" in capsys.readouterr().err


def test_resolve_a1_surface(files):
    code, text = run("resolve", files / "a1-surface.gtc", files / "a1-surface.section")
    assert code == EXIT_UNIT
    assert "plan: 1 event(s)" in text and "blow up u on S inside X2" in text
    assert "after resolution: LS^x (log smooth)" in text


def test_resolve_threefold_writes_plan(files, tmp_path):
    plan = tmp_path / "plan.json"
    code, text = run("resolve", files / "a1-threefold.gtc", files / "a1-threefold.section",
                     "--plan-out", plan)
    assert code == EXIT_UNIT
    assert "2*Xi_uaxis(u=0)" in text
    events = json.loads(plan.read_text())["events"]
    assert [(e["component"], e["wall"]) for e in events] == [("X2", "S3"), ("X3", "S2"), ("X3", "S1")]


def test_resolve_side_override(files):
    code, text = run("resolve", files / "a1-surface.gtc", files / "a1-surface.section",
                     "--side", "S=X1")
    assert code == EXIT_UNIT and "inside X1" in text
    assert run("resolve", files / "a1-surface.gtc", files / "a1-surface.section",
               "--side", "S")[0] == EXIT_USAGE
    assert run("resolve", files / "a1-surface.gtc", files / "a1-surface.section",
               "--side", "S=Y7")[0] == EXIT_USAGE


def test_resolve_smooth_input_is_empty_plan(files):
    code, text = run("resolve", files / "two-components.gtc", files / "two-components.section")
    assert code == EXIT_UNIT and "plan: 0 event(s)" in text


def test_resolve_unfactorable_wall(files, tmp_path):
    space = parse_gtc((files / "a1-threefold.gtc").read_text())
    sec = parse_section((files / "a1-threefold.section").read_text(), space)
    sec = sec.replace("S1", P("u^2 - z^3", ("z", "u")))
    path = _write_section(tmp_path, files / "a1-threefold.gtc", sec, "cusp.section")
    code, text = run("resolve", files / "a1-threefold.gtc", path)
    assert code == EXIT_UNSUPPORTED
    assert "undecided wall S1" in text


def test_resolve_symbolic_is_not_a_section(files):
    assert run("resolve", files / "dp4.gtc", files / "dp4.section")[0] == EXIT_NOT_SECTION


def test_verify_ghost_catalog():
    code, text = run("verify", "ghost", "--catalog")
    assert code == EXIT_UNIT and "NOT exact" not in text


def test_verify_ghost_single_space(files):
    code, text = run("verify", "ghost", "--gtc", files / "dp4.gtc")
    assert code == EXIT_UNIT and text.count("exact") == 3 * 1 + 3 * 3 + 7


def test_verify_joint_lemma():
    code, text = run("verify", "joint-lemma", "--seed", 0, "--trials", 100)
    assert code == EXIT_UNIT and len(text.splitlines()) == 100


@pytest.mark.parametrize("argv", [
    ["verify", "joint-lemma", "--trials", "0"],
    ["verify", "joint-lemma", "--max-rays", "3"],
    ["verify", "nonsense"],
    ["examples", "bogus"],
    ["examples", "two-components", "--r", "0"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv, tmp_path):
    assert main(argv + (["--out", str(tmp_path)] if argv[:1] == ["examples"] else []),
                io.StringIO()) == EXIT_USAGE


def test_examples_match_goldens(tmp_path):
    run("examples", "all", "--numeric", "--out", tmp_path, "--quiet")
    written = sorted(p.name for p in tmp_path.iterdir())
    assert written == sorted(p.name for p in GOLDEN.iterdir())
    for name in written:
        assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), name


def test_examples_dp4_symbolic_wall_functions(tmp_path):
    run("examples", "dp4", "--out", tmp_path, "--quiet")
    assert sorted(p.name for p in tmp_path.iterdir()) == ["dp4.gtc", "dp4.section"]
    space = parse_gtc((tmp_path / "dp4.gtc").read_text())
    sec = parse_section((tmp_path / "dp4.section").read_text(), space)
    assert sec["rho_x"] == P("a0 + a1*x + a2*x^2", ("x",))


def test_examples_two_components_r3(tmp_path):
    run("examples", "two-components", "--r", 3, "--out", tmp_path, "--quiet")
    data = json.loads((tmp_path / "two-components.gtc").read_text())
    assert data["annotations"]["monoid"]["relations"] == ["x*y - t^3"]
    assert data["annotations"]["r"] == 3


def test_examples_seeded_numeric_is_compliant(tmp_path):
    files = example_files("dp4", numeric=True, seed=11)
    space = parse_gtc(files["dp4.gtc"])
    sec = parse_section(files["dp4-generic.section"], space)
    assert isinstance(sec, LSSection)
    code, text = run("check", _dump(tmp_path, files, "dp4.gtc"),
                     _dump(tmp_path, files, "dp4-generic.section"))
    assert code == EXIT_SINGULAR and "singular points: 8" in text


def _dump(tmp_path, files, name):
    (tmp_path / name).write_text(files[name])
    return tmp_path / name


def test_color_env(files, monkeypatch, capsys):
    monkeypatch.setenv("LOGTC_COLOR", "always")
    _, text = run("check", files / "dp4.gtc", files / "dp4-generic.section")
    # the model checks pass (green) while the singular classification is red
    assert "\033[32mjoint u" in text and "\033[31mclassification: LS" in text
    monkeypatch.setenv("LOGTC_COLOR", "purple")
    _, text = run("check", files / "dp4.gtc", files / "dp4-generic.section")
    assert "\033[" not in text
    assert "LOGTC_COLOR" in capsys.readouterr().err


def test_console_script_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "logtc.cli", "check", "--quiet",
                           str(files / "a1-surface.gtc"), str(files / "a1-surface.section")])
    assert proc.returncode == EXIT_SINGULAR
