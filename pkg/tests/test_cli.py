"""End-to-end command-line behavior, including the exit-code contract."""

import io
import json
from fractions import Fraction

import pytest

from dyadnet import (
    GeneratorPair,
    Norm,
    covering_certified,
    mesh_ratio_from_parts,
    prefix,
    read_points,
    separation,
)
from dyadnet.cli import load_generator, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_stdout_matches_library(capsys):
    code, out, err = run_cli(capsys, "generate", "--sobol", "-m", "3")
    assert code == 0
    assert err == ""
    back = read_points(io.StringIO(out))
    assert back == prefix(GeneratorPair.sobol(3), 8)


def test_generate_with_explicit_size(capsys):
    code, out, _ = run_cli(capsys, "generate", "--sobol", "-m", "5", "-N", "10")
    assert code == 0
    assert len(out.splitlines()) == 11


def test_generate_requires_a_generator(capsys):
    code, _, err = run_cli(capsys, "generate", "-m", "3")
    assert code == 2
    assert "select a generator" in err


def test_generate_rejects_conflicting_sources(tmp_path, capsys):
    mat = tmp_path / "g.txt"
    mat.write_text("1\n1\n1\n")
    code, _, err = run_cli(capsys, "generate", "--sobol", "--matrices", str(mat))
    assert code == 2
    assert "not both" in err


def test_sobol_requires_m(capsys):
    code, _, err = run_cli(capsys, "generate", "--sobol")
    assert code == 2
    assert "-m" in err


def test_default_size_guard(capsys):
    code, _, err = run_cli(capsys, "generate", "--sobol", "-m", "21")
    assert code == 2
    assert "-N" in err


def test_analyze_matches_library(tmp_path, capsys):
    out_file = tmp_path / "a.csv"
    code, _, _ = run_cli(
        capsys,
        "analyze", "--sobol", "-m", "4", "--norm", "l1", "-k", "5",
        "-o", str(out_file),
    )
    assert code == 0
    ps = prefix(GeneratorPair.sobol(4), 16)
    sep = separation(ps, Norm.L1)
    cov = covering_certified(ps, Norm.L1, 5)
    mesh = mesh_ratio_from_parts(sep, cov)
    buf = io.StringIO()
    from dyadnet import write_analyze_row

    write_analyze_row(sep, cov, mesh, buf)
    assert out_file.read_text() == buf.getvalue()
    meta = json.loads((tmp_path / "a.csv.meta.json").read_text())
    assert meta["output"] == "a.csv"
    assert meta["tool"] == "dyadnet"


def test_analyze_single_point_is_domain_error(capsys):
    code, _, err = run_cli(capsys, "analyze", "--sobol", "-m", "1", "-N", "1")
    assert code == 2
    assert "two points" in err


def test_profile_and_plot_round_trip(tmp_path, capsys):
    csv_path = tmp_path / "prof.csv"
    code, _, _ = run_cli(
        capsys, "profile", "--sobol", "-m", "6", "-o", str(csv_path)
    )
    assert code == 0
    svg_path = tmp_path / "out.svg"
    code, _, _ = run_cli(capsys, "plot", str(csv_path), "-o", str(svg_path))
    assert code == 0
    data = svg_path.read_bytes()
    assert data.startswith(b"<?xml")
    assert (tmp_path / "out.svg.meta.json").exists()
    # Rendering a second time produces identical bytes.
    svg2 = tmp_path / "again.svg"
    code, _, _ = run_cli(capsys, "plot", str(csv_path), "-o", str(svg2))
    assert code == 0
    assert svg2.read_bytes() == data


def test_plot_rejects_non_table(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("nope\n")
    code, _, err = run_cli(capsys, "plot", str(bad))
    assert code == 2
    assert "columns" in err


def test_plot_missing_file(capsys):
    code, _, err = run_cli(capsys, "plot", "/nonexistent/path.csv")
    assert code == 2


def test_verify_default_passes(capsys):
    code, out, err = run_cli(capsys, "verify", "--m-max", "8")
    assert code == 0
    assert err == ""
    lines = out.splitlines()
    assert lines[0].startswith("m,kind")
    assert len(lines) == 9
    assert all(",yes," in line for line in lines[1:])


def test_verify_ceiling_enforced(capsys):
    code, _, err = run_cli(capsys, "verify", "--m-max", "15")
    assert code == 2
    assert "ceiling" in err


def test_verify_formula_only_reaches_higher(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--m-max", "40", "--formula-only"
    )
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 41
    # no cross-check: match column is blank
    assert lines[-1].split(",")[7] == ""


def test_verify_flag_conflict(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--formula-only", "--exhaustive"
    )
    assert code == 2
    assert "mutually exclusive" in err


def test_verify_exit_one_on_injected_fault(monkeypatch, capsys):
    import dyadnet.theory as theory

    monkeypatch.setattr(theory, "witness_distance", lambda m: Fraction(1, 3))
    code, out, err = run_cli(capsys, "verify", "--m-max", "6")
    assert code == 1
    assert "verify:" in err
    # the table is still emitted for inspection
    assert out.splitlines()[0].startswith("m,kind")


def test_budget_exit_code(capsys):
    code, _, err = run_cli(capsys, "analyze", "--sobol", "-m", "3", "-k", "14")
    assert code == 3
    assert "budget" in err


def test_usage_error_exit_code(capsys):
    assert run_cli(capsys, "analyze", "--sobol", "-m", "3", "--norm", "l7")[0] == 2
    assert run_cli(capsys, "nonsense")[0] == 2


def test_help_exits_zero(capsys):
    assert run_cli(capsys, "--help")[0] == 0
    assert run_cli(capsys, "analyze", "--help")[0] == 0


def test_matrix_file_round_trip(tmp_path, capsys):
    # identity and Pascal rows for m=3, written longhand
    text = "3\n100\n010\n001\n111\n010\n001\n"
    path = tmp_path / "gen.txt"
    path.write_text(text)
    g = load_generator(str(path))
    ref = GeneratorPair.sobol(3)
    assert g.m == 3
    assert g.c1 == ref.c1
    assert g.c2 == ref.c2
    code, out, _ = run_cli(capsys, "generate", "--matrices", str(path))
    assert code == 0
    assert read_points(io.StringIO(out)) == prefix(ref, 8)


def test_matrix_file_validation(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2\n10\n01\n10\n")
    code, _, err = run_cli(capsys, "generate", "--matrices", str(path))
    assert code == 2
    assert "matrix rows" in err

    path.write_text("2\n10\n01\n10\n0x\n")
    code, _, err = run_cli(capsys, "generate", "--matrices", str(path))
    assert code == 2
    assert "0/1" in err

    path.write_text("")
    code, _, err = run_cli(capsys, "generate", "--matrices", str(path))
    assert code == 2

    path.write_text("x\n")
    code, _, err = run_cli(capsys, "generate", "--matrices", str(path))
    assert code == 2
    assert "first line" in err


def test_matrices_excludes_m_flag(tmp_path, capsys):
    path = tmp_path / "gen.txt"
    path.write_text("1\n1\n1\n")
    code, _, err = run_cli(capsys, "generate", "--matrices", str(path), "-m", "1")
    assert code == 2
    assert "matrix file" in err
