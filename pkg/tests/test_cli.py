"""Exit-code contract and report stability of the command-line front end."""

import subprocess
import sys
from importlib import resources

from findom.cli import main

FIXTURES = resources.files("findom.data")


def fixture_path(name: str) -> str:
    return str(FIXTURES.joinpath(name))


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_findom_square_exit_zero(capsys):
    code, out, _ = run_cli(["findom", fixture_path("square2.cplx"), "--order", "1,2"], capsys)
    assert code == 0
    assert "verdict=FinitelyDominated" in out
    assert out.count("Acyclic") == 4
    assert "certificate=verified" in out


def test_findom_all_orders(capsys):
    code, out, _ = run_cli(["findom", fixture_path("square2.cplx"), "--all-orders"], capsys)
    assert code == 0
    assert "ordering 1,2: FinitelyDominated" in out


def test_novikov_stuck_exit_two(capsys):
    code, out, _ = run_cli(
        ["novikov", fixture_path("stuck.cplx"), "--var", "1", "--sign", "+"], capsys
    )
    assert code == 2
    assert "Inconclusive" in out


def test_homology_free_complex_informational(capsys):
    code, out, _ = run_cli(["homology", fixture_path("free1.cplx")], capsys)
    assert code == 0
    assert "free rank 1" in out
    assert "infinite" in out


def test_findom_free_complex_negative(capsys):
    code, out, _ = run_cli(["findom", fixture_path("free1.cplx")], capsys)
    assert code == 1
    assert "NotFinitelyDominated" in out


def test_validate_commands(tmp_path, capsys):
    good = fixture_path("square2.cplx")
    code, out, _ = run_cli(["validate", good], capsys)
    assert code == 0 and out.strip() == "ok"
    bad = tmp_path / "bad.cplx"
    bad.write_text(
        "complex bad\nfield Q\nvars x1\ndegrees 0..2\nrank 0 1\nrank 1 1\nrank 2 1\n"
        "d 1 { x1 }\nd 2 { x1 }\n"
    )
    code, out, _ = run_cli(["validate", str(bad)], capsys)
    assert code == 1
    assert "x1^2" in out


def test_unknown_file_exit_three(capsys):
    code, _, err = run_cli(["findom", "/does/not/exist.cplx"], capsys)
    assert code == 3
    assert "error:" in err


def test_malformed_file_exit_three(tmp_path, capsys):
    p = tmp_path / "junk.cplx"
    p.write_text("complex j\nfield Q\nvars x1\ndegrees 0..0\nrank 0 1\nd 1 { x1 }\n")
    code, _, err = run_cli(["findom", str(p)], capsys)
    assert code == 3


def test_example_round_trip(tmp_path, capsys):
    out_file = tmp_path / "sq.cplx"
    code, _, _ = run_cli(["example", "--n", "2", "-o", str(out_file)], capsys)
    assert code == 0
    code, out, _ = run_cli(["findom", str(out_file)], capsys)
    assert code == 0


def test_random_deterministic(tmp_path, capsys):
    a = tmp_path / "a.cplx"
    b = tmp_path / "b.cplx"
    prof = "nvars=1,lo=0,hi=2,max_rank=2,twists=5,zeros=1@0"
    run_cli(["random", "--seed", "9", "--profile", prof, "--field", "Fp:32003", "-o", str(a)], capsys)
    run_cli(["random", "--seed", "9", "--profile", prof, "--field", "Fp:32003", "-o", str(b)], capsys)
    assert a.read_text() == b.read_text()
    code, _, _ = run_cli(["findom", str(a)], capsys)
    assert code == 1  # the zero summand refutes


def test_cone_and_torus_commands(tmp_path, capsys):
    sq = fixture_path("square2.cplx")
    out_file = tmp_path / "t.cplx"
    code, _, _ = run_cli(["torus", sq, "--poly", "1", "-o", str(out_file)], capsys)
    assert code == 0
    text = out_file.read_text()
    assert "vars x1 x2 x3" in text
    code, out, _ = run_cli(["cone", sq, "--poly", "1 - x1"], capsys)
    assert code == 0
    assert "degrees 0..3" in out


def test_gamma_command(capsys):
    sq = fixture_path("square2.cplx")
    code, out, _ = run_cli(["gamma", sq], capsys)
    assert code == 0
    assert "complex gamma" in out


def test_field_check_command(capsys):
    code, out, _ = run_cli(["field-check", fixture_path("square2.cplx")], capsys)
    assert code == 0
    assert "verdict=FinitelyDominated" in out


def test_verify_cert_round_trip(tmp_path, capsys):
    sq = fixture_path("square2.cplx")
    cert = tmp_path / "cert.txt"
    code, _, _ = run_cli(
        ["novikov", sq, "--var", "2", "--sign", "-", "--cert-out", str(cert)], capsys
    )
    assert code == 0
    code, out, _ = run_cli(["verify-cert", sq, "--cert", str(cert)], capsys)
    assert code == 0 and "valid" in out
    # tamper with the certificate: flip a numerator
    text = cert.read_text().replace("1 / [", "x1 / [", 1)
    cert.write_text(text)
    code, out, _ = run_cli(["verify-cert", sq, "--cert", str(cert)], capsys)
    assert code == 1
    assert "INVALID" in out


def test_reports_are_byte_stable(capsys):
    sq = fixture_path("square2.cplx")
    _, out1, _ = run_cli(["findom", sq], capsys)
    _, out2, _ = run_cli(["findom", sq], capsys)
    assert out1 == out2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "findom.cli", "example", "--n", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "complex square1" in proc.stdout
