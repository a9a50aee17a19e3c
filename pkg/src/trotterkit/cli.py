"""Command-line entry point: ``trotterkit {schedule,evolve,compile,experiment}``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import experiments, formulas
from .circuits import circuit_unitary, compile_trotter, format_circuit
from .formulas import EvolutionMode, ValidityWindowError
from .hamiltonian import (
    DenseCapError,
    HamiltonianParseError,
    PauliHamiltonian,
    TermList,
    heisenberg_1d,
    ising_1d,
    load_hamiltonian,
    realize,
)
from .linalg import expm, spectral_norm

EXIT_OK = 0
EXIT_USAGE = 2  # argparse's own code; also bad input files
EXIT_ORDER = 3
EXIT_DENSE_CAP = 4
EXIT_CHECK = 5
EXIT_WINDOW = 6

CHECK_TOL = 1e-9

EXPERIMENTS = ("time-scaling", "cost", "bound-tightness", "ising-bound")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    hamiltonian_path: Path | None = None
    builtin: str | None = None
    terms: int | None = None
    order: int | None = None
    steps: int = 1
    time: float = 1.0
    epsilon: float | None = None
    experiment_name: str | None = None
    output_dir: Path | None = None
    emit_plots: bool = False
    check: bool = False


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _check_order(order: int) -> int:
    if order < 2 or order % 2:
        raise CliError(EXIT_ORDER, f"--order must be an even integer >= 2, got {order}")
    return order


def _load_input(cfg: RunConfig) -> tuple[PauliHamiltonian | None, TermList, np.ndarray | None]:
    """Return ``(pauli_hamiltonian_or_None, terms, real_generator_or_None)``."""
    if cfg.hamiltonian_path is not None and cfg.builtin is not None:
        raise CliError(EXIT_USAGE, "--hamiltonian and --builtin are mutually exclusive")
    if cfg.hamiltonian_path is not None:
        try:
            h = load_hamiltonian(cfg.hamiltonian_path)
        except OSError as exc:
            raise CliError(EXIT_USAGE, f"--hamiltonian: cannot read {cfg.hamiltonian_path}: {exc}")
        except HamiltonianParseError as exc:
            raise CliError(EXIT_USAGE, f"--hamiltonian: {exc}")
        return h, realize(h), None
    spec = cfg.builtin
    if spec is None:
        raise CliError(EXIT_USAGE, "one of --hamiltonian or --builtin is required")
    if spec == "abc":
        terms, a = experiments.reference_terms()
        return None, terms, a
    name, _, arg = spec.partition(":")
    try:
        n = int(arg)
    except ValueError:
        raise CliError(EXIT_USAGE, f"--builtin: expected abc, ising:<n> or heisenberg:<n>, got {spec!r}")
    try:
        if name == "ising":
            h = ising_1d(n, 1.0, 1.0)
        elif name == "heisenberg":
            h = heisenberg_1d(n, 1.0)
        else:
            raise CliError(EXIT_USAGE, f"--builtin: unknown model {name!r}")
    except ValueError as exc:
        raise CliError(EXIT_USAGE, f"--builtin: {exc}")
    return h, realize(h), None


def _pauli_only(cfg: RunConfig) -> PauliHamiltonian:
    h = _load_input(cfg)[0]
    if h is None:
        raise CliError(EXIT_USAGE, "compile needs a Pauli Hamiltonian, not --builtin abc")
    return h


def _emit(text: str, out_dir: Path | None, filename: str, stdout) -> None:
    if out_dir is None:
        stdout.write(text)
    else:
        out_dir.mkdir(parents=True, exist_ok=True)
        with (out_dir / filename).open("w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {out_dir / filename}", file=stdout)


def _cmd_schedule(cfg: RunConfig, stdout) -> int:
    order = _check_order(2 if cfg.order is None else cfg.order)
    if cfg.terms is not None:
        if cfg.terms < 1:
            raise CliError(EXIT_USAGE, f"--terms must be >= 1, got {cfg.terms}")
        L = cfg.terms
    else:
        L = len(_load_input(cfg)[1])
    sched = formulas.suzuki(order, L)
    lines = ["position,term_index,coeff"]
    lines += [f"{i},{j},{_fmt(c)}" for i, (j, c) in enumerate(sched.factors)]
    _emit("\n".join(lines) + "\n", cfg.output_dir, "schedule.csv", stdout)
    return EXIT_OK


def _cmd_evolve(cfg: RunConfig, stdout) -> int:
    order = _check_order(2 if cfg.order is None else cfg.order)
    h, terms, generator = _load_input(cfg)
    if generator is None:
        mode, generator = EvolutionMode.IMAGINARY, terms.total()
    else:
        mode = EvolutionMode.REAL
    sched = formulas.suzuki(order, len(terms))
    approx = formulas.repeat_evaluate(sched, terms, cfg.time, cfg.steps, mode)
    exact = expm((mode.factor * cfg.time) * generator)
    err = spectral_norm(approx - exact)
    print(f"mode {mode.value} order {order} steps {cfg.steps} time {_fmt(cfg.time)}", file=stdout)
    print(f"error {_fmt(err)}", file=stdout)
    print(f"relative_error {_fmt(err / spectral_norm(exact))}", file=stdout)
    if cfg.output_dir is not None:
        lines = ["row,col,re,im"]
        for (r, c), v in np.ndenumerate(approx):
            lines.append(f"{r},{c},{_fmt(v.real)},{_fmt(v.imag)}")
        _emit("\n".join(lines) + "\n", cfg.output_dir, "unitary.csv", stdout)
    return EXIT_OK


def _cmd_compile(cfg: RunConfig, stdout) -> int:
    order = _check_order(2 if cfg.order is None else cfg.order)
    h = _pauli_only(cfg)
    try:
        circ = compile_trotter(h, cfg.time, cfg.steps, order)
    except DenseCapError:
        raise
    except ValueError as exc:
        raise CliError(EXIT_USAGE, f"--hamiltonian: {exc}")
    _emit(format_circuit(circ), cfg.output_dir, "circuit.txt", stdout)
    counts = circ.counts()
    summary = " ".join(f"{k}={v}" for k, v in counts.items())
    print(f"gates {len(circ)} {summary}", file=stdout)
    if cfg.check:
        target = formulas.repeat_evaluate(
            formulas.suzuki(order, len(h)), realize(h), cfg.time, cfg.steps, EvolutionMode.IMAGINARY
        )
        dev = float(np.abs(circuit_unitary(circ) - target).max())
        print(f"max_deviation {_fmt(dev)}", file=stdout)
        if dev > CHECK_TOL:
            print(f"self-check failed: deviation exceeds {CHECK_TOL}", file=sys.stderr)
            return EXIT_CHECK
    return EXIT_OK


def _cmd_experiment(cfg: RunConfig, stdout) -> int:
    name = cfg.experiment_name
    out = cfg.output_dir or Path("results")
    terms, a = experiments.reference_terms()
    if cfg.builtin not in (None, "abc"):
        raise CliError(EXIT_USAGE, "experiments run on the built-in abc matrices only")
    extra: list[tuple[str, experiments.Table]] = []
    if name == "time-scaling":
        res = experiments.error_vs_time(terms, a)
        table = res.table
        reg = experiments.regression_table(res.regressions)
        extra.append(("time-scaling-regression", reg))
        for order, slope, _, r2 in reg.rows:
            print(f"order {order}: slope {slope:.4f}, R^2 {r2:.5f}", file=stdout)
    elif name == "cost":
        table = experiments.error_vs_cost(terms)
        for low, high in ((2, 4), (4, 6), (6, 8)):
            level = experiments.crossover_level(table, low, high)
            shown = "none" if level is None else f"{level:.3g}"
            print(f"order {high} cheaper than order {low} below relative error {shown}", file=stdout)
    elif name == "bound-tightness":
        order = _check_order(experiments.BOUND_ORDER if cfg.order is None else cfg.order)
        grid = None
        if cfg.epsilon is not None:
            grid = experiments.ExperimentGrid((cfg.epsilon,), cfg.epsilon, cfg.epsilon)
        table = experiments.theory_vs_empirical(terms, order, grid)
        for eps, mt, me in table.rows:
            ratio = "n/a" if me is None else f"{mt / me:.2f}"
            print(f"eps {eps:.3e}: m_theory {mt}, m_empirical {me}, ratio {ratio}", file=stdout)
    elif name == "ising-bound":
        eps = cfg.epsilon if cfg.epsilon is not None else experiments.ISING_EPS
        try:
            table = experiments.ising_bound_curve(experiments.ISING_N, eps)
        except ValueError as exc:
            raise CliError(EXIT_USAGE, f"--epsilon: {exc}")
    else:
        raise CliError(EXIT_USAGE, f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    path = experiments.write_csv(table, out / f"{name}.csv")
    print(f"wrote {path}", file=stdout)
    for extra_name, t in extra:
        print(f"wrote {experiments.write_csv(t, out / f'{extra_name}.csv')}", file=stdout)
    if cfg.emit_plots:
        from .plots import plot_table

        print(f"wrote {plot_table(name, table, out / f'{name}.svg')}", file=stdout)
    return EXIT_OK


_COMMANDS = {
    "schedule": _cmd_schedule,
    "evolve": _cmd_evolve,
    "compile": _cmd_compile,
    "experiment": _cmd_experiment,
}


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        if cfg.steps < 1:
            raise CliError(EXIT_USAGE, f"--steps must be >= 1, got {cfg.steps}")
        if cfg.epsilon is not None and not cfg.epsilon > 0:
            raise CliError(EXIT_USAGE, f"--epsilon must be positive, got {cfg.epsilon}")
        return _COMMANDS[cfg.command](cfg, stdout)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DenseCapError as exc:
        print(f"error: dense cap exceeded: {exc}", file=sys.stderr)
        return EXIT_DENSE_CAP
    except ValidityWindowError as exc:
        print(f"error: --epsilon outside the bound's validity window: {exc}", file=sys.stderr)
        return EXIT_WINDOW


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=None, help="even approximation order (default 2; 4 for bound-tightness)")
    common.add_argument("--steps", type=int, default=1, help="Trotter steps m")
    common.add_argument("--time", type=float, default=1.0, help="evolution time t")
    common.add_argument("--epsilon", type=float, default=None, help="error tolerance")
    common.add_argument("--hamiltonian", type=Path, default=None, help="Pauli Hamiltonian text file")
    common.add_argument("--builtin", default=None, help="abc | ising:<n> | heisenberg:<n>")
    common.add_argument("--out", type=Path, default=None, help="output directory")
    common.add_argument("--plots", action="store_true", help="also write SVG plots")

    parser = argparse.ArgumentParser(prog="trotterkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("schedule", parents=[common], help="dump a flattened Suzuki schedule")
    p.add_argument("--terms", type=int, default=None, help="number of terms L")
    sub.add_parser("evolve", parents=[common], help="Trotterized evolution and its error")
    p = sub.add_parser("compile", parents=[common], help="compile a Trotter circuit")
    p.add_argument("--check", action="store_true", help="compare the circuit unitary to the product formula")
    p = sub.add_parser("experiment", parents=[common], help="reproduce a validation experiment")
    p.add_argument("name", choices=EXPERIMENTS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        hamiltonian_path=args.hamiltonian,
        builtin=args.builtin,
        terms=getattr(args, "terms", None),
        order=args.order,
        steps=args.steps,
        time=args.time,
        epsilon=args.epsilon,
        experiment_name=getattr(args, "name", None),
        output_dir=args.out,
        emit_plots=args.plots,
        check=getattr(args, "check", False),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
