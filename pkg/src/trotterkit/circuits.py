"""Compilation of Pauli-string exponentials into {H, Rz, CNOT, S} circuits.

Qubit 0 is the most significant tensor factor, matching
:meth:`PauliString.matrix`.  CNOT takes its control first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .formulas import Schedule, suzuki
from .hamiltonian import DenseCapError, PauliHamiltonian, PauliString

#: Largest width for which :func:`circuit_unitary` builds a dense matrix.
MAX_UNITARY_QUBITS = 10

_HAD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_PHASE = np.array([[1, 0], [0, 1j]], dtype=np.complex128)


@dataclass(frozen=True)
class Had:
    q: int


@dataclass(frozen=True)
class Rz:
    """``diag(exp(-i theta/2), exp(i theta/2))``; ``Rz(2)`` is ``exp(-iZ)``."""

    q: int
    theta: float


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control and target must differ")


@dataclass(frozen=True)
class Phase:
    """``diag(1, i)``."""

    q: int


Gate = Union[Had, Rz, Cnot, Phase]


def _qubits(g: Gate) -> tuple[int, ...]:
    if isinstance(g, Cnot):
        return (g.control, g.target)
    return (g.q,)


@dataclass(frozen=True)
class Circuit:
    """Gates in application order: ``gates[0]`` acts first."""

    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise ValueError(f"circuit width must be >= 1, got {self.n}")
        for g in self.gates:
            if any(not 0 <= q < self.n for q in _qubits(g)):
                raise ValueError(f"{g} does not fit in {self.n} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n != self.n:
            raise ValueError("cannot concatenate circuits of different width")
        return Circuit(self.n, self.gates + other.gates)

    def counts(self) -> dict[str, int]:
        out = {"H": 0, "RZ": 0, "CNOT": 0, "S": 0}
        for g in self.gates:
            out[_MNEMONIC[type(g)]] += 1
        return out


_MNEMONIC = {Had: "H", Rz: "RZ", Cnot: "CNOT", Phase: "S"}


def _one_qubit(g: Gate) -> np.ndarray:
    if isinstance(g, Had):
        return _HAD
    if isinstance(g, Phase):
        return _PHASE
    half = 0.5 * g.theta
    return np.diag([np.exp(-1j * half), np.exp(1j * half)])


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense unitary ``U_L ... U_1`` of the circuit."""
    if c.n > MAX_UNITARY_QUBITS:
        raise DenseCapError(f"{c.n} qubits exceeds the unitary cap of {MAX_UNITARY_QUBITS}")
    dim = 2**c.n
    # rows indexed by the n output qubits, columns by the input basis state
    u = np.eye(dim, dtype=np.complex128).reshape((2,) * c.n + (dim,))
    for g in c.gates:
        if isinstance(g, Cnot):
            sel = [slice(None)] * c.n
            sel[g.control] = 1
            sel = tuple(sel)
            target_axis = g.target - (g.target > g.control)
            u[sel] = np.flip(u[sel], axis=target_axis).copy()
        else:
            u = np.moveaxis(np.tensordot(_one_qubit(g), u, axes=([1], [g.q])), 0, g.q)
    return u.reshape(dim, dim)


# per-qubit gates before and after the Z-parity kernel; Y uses S X S^dagger
# with S^dagger written as S S S
_BASIS_IN = {"X": (Had,), "Y": (Phase, Phase, Phase, Had), "Z": ()}
_BASIS_OUT = {"X": (Had,), "Y": (Had, Phase), "Z": ()}


def basis_change_count(axis: str) -> int:
    """Half the number of basis-change gates a Pauli axis costs."""
    return (len(_BASIS_IN[axis]) + len(_BASIS_OUT[axis])) // 2


def compile_pauli_exponential(p: PauliString, t: float) -> Circuit:
    """Circuit equal to ``exp(-i * weight * t * P)`` exactly, global phase included."""
    support = p.support
    if not support:
        if p.weight * t == 0:
            return Circuit(p.n)
        raise ValueError("all-identity term only contributes a global phase; cannot compile exactly")
    gates: list[Gate] = []
    for q in support:
        gates.extend(cls(q) for cls in _BASIS_IN[p.axes[q]])
    ladder = [Cnot(a, b) for a, b in zip(support, support[1:])]
    gates.extend(ladder)
    gates.append(Rz(support[-1], 2.0 * p.weight * t))
    gates.extend(reversed(ladder))
    for q in support:
        gates.extend(cls(q) for cls in _BASIS_OUT[p.axes[q]])
    return Circuit(p.n, tuple(gates))


def trotter_schedule(h: PauliHamiltonian, order: int) -> Schedule:
    return suzuki(order, len(h))


def compile_trotter(h: PauliHamiltonian, t: float, m: int, order: int) -> Circuit:
    """``m`` repetitions of the order-``order`` schedule, each factor compiled at ``coeff * t / m``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if h.n > MAX_UNITARY_QUBITS:
        raise DenseCapError(f"{h.n} qubits exceeds the circuit cap of {MAX_UNITARY_QUBITS}")
    sched = trotter_schedule(h, order)
    dt = t / m
    step: list[Gate] = []
    for j, coeff in sched.factors:
        step.extend(compile_pauli_exponential(h.terms[j], coeff * dt).gates)
    return Circuit(h.n, tuple(step) * m)


def expected_gate_count(h: PauliHamiltonian, m: int, order: int) -> int:
    """Gate count of :func:`compile_trotter` predicted from term structure alone."""
    total = 0
    for j, _ in trotter_schedule(h, order).factors:
        p = h.terms[j]
        support = p.support
        total += 2 * (len(support) - 1) + 1
        total += 2 * sum(basis_change_count(p.axes[q]) for q in support)
    return m * total


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n}"]
    for g in c.gates:
        if isinstance(g, Cnot):
            lines.append(f"CNOT {g.control} {g.target}")
        elif isinstance(g, Rz):
            lines.append(f"RZ {g.q} {g.theta:.17g}")
        else:
            lines.append(f"{_MNEMONIC[type(g)]} {g.q}")
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "qubits" or len(lines[0]) != 2:
        raise ValueError("circuit text must start with 'qubits <n>'")
    n = int(lines[0][1])
    gates: list[Gate] = []
    for parts in lines[1:]:
        op, args = parts[0], parts[1:]
        if op == "H" and len(args) == 1:
            gates.append(Had(int(args[0])))
        elif op == "S" and len(args) == 1:
            gates.append(Phase(int(args[0])))
        elif op == "RZ" and len(args) == 2:
            gates.append(Rz(int(args[0]), float(args[1])))
        elif op == "CNOT" and len(args) == 2:
            gates.append(Cnot(int(args[0]), int(args[1])))
        else:
            raise ValueError(f"bad gate line: {' '.join(parts)!r}")
    return Circuit(n, tuple(gates))
