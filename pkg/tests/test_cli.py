"""Command-line interface, exercised in process through main()."""

from __future__ import annotations

import pytest

from dlpbound.cli import main, read_solution, write_solution
from dlpbound.lp import build_dual_lp, simplex_solve
from dlpbound.orbits import Params, enumerate_reps
from dlpbound.symdft import build_matrix


def test_reps_text(capsys):
    assert main(["reps", "--d", "1", "--m", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("0") and "normSq=0" in lines[0] and "orbit=1" in lines[0]
    assert lines[2].startswith("2") and "normSq=4" in lines[2]


def test_reps_csv(capsys, tmp_path):
    path = tmp_path / "reps.csv"
    assert main(["reps", "--d", "2", "--m", "6", "--format", "csv", "--out", str(path)]) == 0
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("rep")
    assert len(lines) == 1 + 10  # C(2 + 3, 2) representatives


def test_solve_round_verify_chain(capsys, tmp_path):
    sol_path = tmp_path / "d1.sol"
    cert_path = tmp_path / "d1.cert"
    assert main(["solve", "--d", "1", "--m", "4", "--r2", "4", "--out", str(sol_path)]) == 0
    assert "optimal" in capsys.readouterr().out
    assert main(["round", "--in", str(sol_path), "--out", str(cert_path)]) == 0
    capsys.readouterr()
    assert main(["verify", "--cert", str(cert_path)]) == 0
    out = capsys.readouterr().out
    assert "Verified" in out
    assert "0.50000000" in out


def test_solution_file_roundtrip(tmp_path):
    params = Params(2, 6, 4)
    index = enumerate_reps(2, 6)
    lp = build_dual_lp(params, index, build_matrix(index), eps=1e-10)
    sol = simplex_solve(lp)
    path = tmp_path / "a.sol"
    write_solution(sol, str(path))
    back = read_solution(str(path))
    assert back.status == sol.status
    assert back.objective == sol.objective  # repr round-trip is exact
    assert back.values == sol.values
    assert back.meta["kind"] == "dual"
    assert back.meta["params"] == params


def test_verify_rejects_tampered_certificate(capsys, tmp_path):
    cert_path = tmp_path / "cf.cert"
    assert main(["closed-form", "--d", "9", "--out", str(cert_path)]) == 0
    capsys.readouterr()
    text = cert_path.read_text()
    line = [l for l in text.splitlines() if l.startswith("mu ")][-1]
    value = line.split()[-1]
    num, den = value.split("/")
    bad = text.replace(line, line.replace(value, f"{int(num) + 1}/{den}"))
    cert_path.write_text(bad)
    assert main(["verify", "--cert", str(cert_path)]) == 1
    assert "Infeasible" in capsys.readouterr().out


def test_verify_errors_on_malformed_file(capsys, tmp_path):
    bad = tmp_path / "junk.cert"
    bad.write_text("DLPCERT 9000\nend\n")
    assert main(["verify", "--cert", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_closed_form_command(capsys, tmp_path):
    cert_path = tmp_path / "d11.cert"
    rc = main(["closed-form", "--d", "11", "--table", "general", "--out", str(cert_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "1/24" in out
    assert cert_path.read_text().startswith("DLPCERT 1")


def test_closed_form_identical_across_runs(capsys, tmp_path):
    a = tmp_path / "a.cert"
    b = tmp_path / "b.cert"
    assert main(["closed-form", "--d", "10", "--out", str(a)]) == 0
    assert main(["closed-form", "--d", "10", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_compare_command(capsys):
    assert main(["compare", "--d", "9", "--bound", "1/20"]) == 0
    out = capsys.readouterr().out
    assert "exceeds" in out


def test_preset_list(capsys):
    assert main(["preset", "--list"]) == 0
    out = capsys.readouterr().out
    assert "d9-explicit" in out
    assert "[long]" in out


def test_preset_run_writes_artifacts(capsys, tmp_path):
    rc = main(["preset", "d9-explicit", "--outdir", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "[FAIL]" not in out
    for suffix in (".cert", ".txt", ".csv", ".png"):
        target = tmp_path / f"d9-explicit{suffix}"
        assert target.exists() and target.stat().st_size > 0, suffix
    csv_text = (tmp_path / "d9-explicit.csv").read_text()
    assert csv_text.splitlines()[0] == "rep,norm_sq,orbit_size,mu,lambda_float"


def test_preset_certificates_are_reproducible(capsys, tmp_path):
    assert main(["preset", "d11-odd", "--outdir", str(tmp_path / "one")]) == 0
    assert main(["preset", "d11-odd", "--outdir", str(tmp_path / "two")]) == 0
    capsys.readouterr()
    first = (tmp_path / "one" / "d11-odd.cert").read_bytes()
    second = (tmp_path / "two" / "d11-odd.cert").read_bytes()
    assert first == second


def test_preset_unknown_name(capsys):
    assert main(["preset", "d99-fantasy"]) == 2
    assert "error:" in capsys.readouterr().err


def test_preset_long_requires_opt_in(capsys):
    assert main(["preset", "d6-full"]) == 2
    err = capsys.readouterr().err
    assert "allow-long" in err


def test_preset_without_name_lists(capsys):
    assert main(["preset"]) == 0
    assert "d9-explicit" in capsys.readouterr().out


def test_non_integer_radius_is_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--d", "2", "--m", "6", "--r2", "4.5"])
    assert exc.value.code == 2
    assert "rescale" in capsys.readouterr().err


def test_round_rejects_primal_solutions(capsys, tmp_path):
    sol_path = tmp_path / "p.sol"
    assert main(["primal-solve", "--d", "1", "--m", "4", "--r2", "4", "--out", str(sol_path)]) == 0
    capsys.readouterr()
    assert main(["round", "--in", str(sol_path), "--out", str(tmp_path / "p.cert")]) == 2
    assert "error:" in capsys.readouterr().err


def test_solve_exact_mode(capsys):
    assert main(["solve", "--d", "1", "--m", "4", "--r2", "4", "--mode", "exact", "--eps", "0"]) == 0
    out = capsys.readouterr().out
    assert "1/2" in out


def test_round_scheme_flag(capsys, tmp_path):
    sol_path = tmp_path / "d1.sol"
    cert_path = tmp_path / "d1.cert"
    assert main(["solve", "--d", "1", "--m", "4", "--r2", "4", "--out", str(sol_path)]) == 0
    rc = main(["round", "--in", str(sol_path), "--scheme", "lattice:2", "--out", str(cert_path)])
    assert rc == 0
    capsys.readouterr()
    assert main(["verify", "--cert", str(cert_path)]) == 0
