import io
import subprocess
import sys

import pytest

from trotterkit import cli
from trotterkit.formulas import exp_count

ISING2 = "-1.0 ZZ\n-1.0 XI\n-1.0 IX\n"


def run(argv, capsys=None):
    rc = cli.main(argv)
    return rc, (capsys.readouterr() if capsys else None)


@pytest.fixture
def ising2(tmp_path):
    p = tmp_path / "ising2.txt"
    p.write_text(ISING2)
    return p


def test_schedule_rows(capsys):
    rc, out = run(["schedule", "--order", "4", "--terms", "2"], capsys)
    lines = out.out.strip().splitlines()
    assert rc == 0
    assert lines[0] == "position,term_index,coeff"
    assert len(lines) - 1 == 11 == exp_count(4, 2)


def test_schedule_from_builtin_and_out(tmp_path, capsys):
    rc, _ = run(["schedule", "--builtin", "ising:3", "--out", str(tmp_path)], capsys)
    assert rc == 0
    rows = (tmp_path / "schedule.csv").read_text().strip().splitlines()
    assert len(rows) - 1 == exp_count(2, 5)


def test_compile_with_check(ising2, capsys):
    rc, out = run(["compile", "--hamiltonian", str(ising2), "--order", "2", "--steps", "1", "--time", "1", "--check"], capsys)
    assert rc == 0
    assert out.out.startswith("qubits 2\n")
    dev = float(out.out.split("max_deviation ")[1].split()[0])
    assert dev <= 1e-9
    assert "gates " in out.out


def test_compile_writes_file(ising2, tmp_path, capsys):
    rc, out = run(["compile", "--hamiltonian", str(ising2), "--out", str(tmp_path)], capsys)
    assert rc == 0
    assert (tmp_path / "circuit.txt").read_text().startswith("qubits 2\n")


@pytest.mark.parametrize("order", ["3", "0", "-2"])
def test_bad_order_exit_code(order, capsys):
    rc, out = run(["schedule", "--order", order, "--terms", "2"], capsys)
    assert rc == cli.EXIT_ORDER
    assert "--order" in out.err


def test_parse_failure_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1.0 ZQ\n")
    rc, out = run(["evolve", "--hamiltonian", str(bad)], capsys)
    assert rc == cli.EXIT_USAGE and "--hamiltonian" in out.err
    rc, out = run(["evolve", "--hamiltonian", str(tmp_path / "missing.txt")], capsys)
    assert rc == cli.EXIT_USAGE


def test_dense_cap_exit_code(capsys):
    rc, out = run(["evolve", "--builtin", "ising:13"], capsys)
    assert rc == cli.EXIT_DENSE_CAP
    assert "dense cap" in out.err


def test_validity_window_exit_code(tmp_path, capsys):
    rc, out = run(["experiment", "bound-tightness", "--epsilon", "2", "--out", str(tmp_path)], capsys)
    assert rc == cli.EXIT_WINDOW
    assert "--epsilon" in out.err


def test_exit_codes_are_distinct():
    codes = [cli.EXIT_USAGE, cli.EXIT_ORDER, cli.EXIT_DENSE_CAP, cli.EXIT_CHECK, cli.EXIT_WINDOW]
    assert len(set(codes)) == len(codes) and cli.EXIT_OK not in codes


@pytest.mark.parametrize("argv", [["evolve", "--steps", "0", "--builtin", "abc"], ["evolve"], ["compile", "--builtin", "abc"]])
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == cli.EXIT_USAGE


def test_evolve_abc(capsys):
    rc, out = run(["evolve", "--builtin", "abc", "--order", "4", "--steps", "10"], capsys)
    assert rc == 0
    assert "mode real" in out.out
    assert float(out.out.split("relative_error ")[1].split()[0]) < 1e-3


def test_evolve_pauli_writes_unitary(ising2, tmp_path, capsys):
    rc, out = run(["evolve", "--hamiltonian", str(ising2), "--out", str(tmp_path)], capsys)
    assert rc == 0 and "mode imaginary" in out.out
    lines = (tmp_path / "unitary.csv").read_text().splitlines()
    assert lines[0] == "row,col,re,im" and len(lines) == 17


@pytest.mark.parametrize(
    "name,header",
    [
        ("time-scaling", "order,t,rel_error"),
        ("cost", "order,m,cost,rel_error"),
        ("bound-tightness", "epsilon,m_theory,m_empirical"),
        ("ising-bound", "n,L,tau,bound"),
    ],
)
def test_experiments_write_csv(name, header, tmp_path, capsys):
    rc, _ = run(["experiment", name, "--out", str(tmp_path)], capsys)
    assert rc == 0
    text = (tmp_path / f"{name}.csv").read_text()
    assert text.splitlines()[0] == header
    assert "\r" not in text


def test_time_scaling_regression_block(tmp_path, capsys):
    run(["experiment", "time-scaling", "--out", str(tmp_path)], capsys)
    rows = (tmp_path / "time-scaling-regression.csv").read_text().splitlines()
    assert rows[0] == "order,slope,intercept,r_squared"
    assert [r.split(",")[0] for r in rows[1:]] == ["2", "4", "6"]


def test_experiment_output_is_deterministic(tmp_path, capsys):
    run(["experiment", "bound-tightness", "--out", str(tmp_path / "a")], capsys)
    run(["experiment", "bound-tightness", "--out", str(tmp_path / "b")], capsys)
    assert (tmp_path / "a" / "bound-tightness.csv").read_bytes() == (tmp_path / "b" / "bound-tightness.csv").read_bytes()


def test_plots_write_svg(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    rc, _ = run(["experiment", "ising-bound", "--plots", "--out", str(tmp_path)], capsys)
    assert rc == 0
    assert (tmp_path / "ising-bound.svg").read_text().lstrip().startswith("<?xml")


def test_run_with_config_object():
    buf = io.StringIO()
    rc = cli.run(cli.RunConfig(command="schedule", terms=3, order=2), buf)
    assert rc == 0
    assert len(buf.getvalue().strip().splitlines()) == 1 + exp_count(2, 3)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "trotterkit", "schedule", "--terms", "1"], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert res.stdout.splitlines() == ["position,term_index,coeff", "0,0,1"]
