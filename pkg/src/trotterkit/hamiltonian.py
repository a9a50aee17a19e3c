"""Pauli-string Hamiltonians and their dense term lists."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import math

import numpy as np

from .linalg import as_matrix, spectral_norm

#: Largest qubit count realized as dense matrices (4096 x 4096).
MAX_DENSE_QUBITS = 12

AXES = "IXYZ"

_PAULI = {
    "I": np.array([[1, 0], [0, 1]], dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class DenseCapError(ValueError):
    """Raised when a dense realization would exceed the qubit cap."""


class HamiltonianParseError(ValueError):
    pass


def pauli_matrix(axis: str) -> np.ndarray:
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


@dataclass(frozen=True)
class PauliString:
    """A weighted tensor product of single-qubit Pauli axes.

    ``axes[0]`` is qubit 0, the leftmost (most significant) Kronecker factor.
    """

    axes: str
    weight: float = 1.0

    def __post_init__(self):
        if not self.axes or any(c not in AXES for c in self.axes):
            raise ValueError(f"axes must be a non-empty string over IXYZ, got {self.axes!r}")
        if not math.isfinite(self.weight):
            raise ValueError("weight must be finite")

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def support(self) -> tuple[int, ...]:
        """Indices of the qubits acted on non-trivially."""
        return tuple(q for q, c in enumerate(self.axes) if c != "I")

    def matrix(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=np.complex128)
        for c in self.axes:
            out = np.kron(out, _PAULI[c])
        return self.weight * out


@dataclass(frozen=True)
class PauliHamiltonian:
    n: int
    terms: tuple[PauliString, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a Hamiltonian needs at least one term")
        for p in self.terms:
            if p.n != self.n:
                raise ValueError(f"term {p.axes!r} has {p.n} qubits, expected {self.n}")

    def __len__(self) -> int:
        return len(self.terms)

    def locality(self) -> int:
        return max(len(p.support) for p in self.terms)


@dataclass(frozen=True)
class TermList:
    """Ordered same-dimension dense matrices ``H_1 .. H_L``."""

    terms: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(as_matrix(m) for m in self.terms)
        if not mats:
            raise ValueError("term list is empty")
        dim = mats[0].shape[0]
        for m in mats:
            if m.shape[0] != dim:
                raise ValueError(f"term dimension {m.shape[0]} differs from {dim}")
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "terms", mats)

    @property
    def dim(self) -> int:
        return self.terms[0].shape[0]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.terms)

    def __getitem__(self, j: int) -> np.ndarray:
        return self.terms[j]

    def total(self) -> np.ndarray:
        return sum(self.terms[1:], self.terms[0].copy())


def term_list(mats: Sequence) -> TermList:
    return TermList(tuple(mats))


def realize(h: PauliHamiltonian) -> TermList:
    if h.n > MAX_DENSE_QUBITS:
        raise DenseCapError(f"{h.n} qubits exceeds the dense cap of {MAX_DENSE_QUBITS}")
    return TermList(tuple(p.matrix() for p in h.terms))


def _chain(n: int, name: str) -> None:
    if n < 2:
        raise ValueError(f"{name} chain needs n >= 2, got {n}")


def _bond(n: int, i: int, a: str, b: str) -> str:
    axes = ["I"] * n
    axes[i], axes[i + 1] = a, b
    return "".join(axes)


def ising_1d(n: int, J: float = 1.0, h: float = 1.0) -> PauliHamiltonian:
    """Open transverse-field Ising chain ``-J sum Z_i Z_{i+1} - h sum X_i``.

    Bonds come first, left to right, then the single-site fields.
    """
    _chain(n, "Ising")
    terms = [PauliString(_bond(n, i, "Z", "Z"), -J) for i in range(n - 1)]
    for i in range(n):
        axes = ["I"] * n
        axes[i] = "X"
        terms.append(PauliString("".join(axes), -h))
    return PauliHamiltonian(n, tuple(terms))


def heisenberg_1d(n: int, J: float = 1.0) -> PauliHamiltonian:
    """Open Heisenberg chain; each bond contributes XX, YY, ZZ in that order."""
    _chain(n, "Heisenberg")
    terms = [PauliString(_bond(n, i, c, c), J) for i in range(n - 1) for c in "XYZ"]
    return PauliHamiltonian(n, tuple(terms))


def tau(terms: TermList, t: float) -> float:
    """``t * max_j ||H_j||``, the dimensionless scale entering the bounds."""
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if len(terms) == 0:
        raise ValueError("term list is empty")
    return t * max(spectral_norm(m) for m in terms)


def parse_hamiltonian(text: str) -> PauliHamiltonian:
    """Parse ``<weight> <axes>`` lines; ``#`` starts a comment line."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise HamiltonianParseError(f"line {lineno}: expected '<weight> <axes>', got {raw!r}")
        try:
            weight = float(parts[0])
            terms.append(PauliString(parts[1].upper(), weight))
        except ValueError as exc:
            raise HamiltonianParseError(f"line {lineno}: {exc}") from None
    if not terms:
        raise HamiltonianParseError("no terms found")
    n = terms[0].n
    for p in terms:
        if p.n != n:
            raise HamiltonianParseError(f"term {p.axes!r} has {p.n} qubits, expected {n}")
    return PauliHamiltonian(n, tuple(terms))


def load_hamiltonian(path) -> PauliHamiltonian:
    return parse_hamiltonian(Path(path).read_text())


def format_hamiltonian(h: PauliHamiltonian) -> str:
    return "".join(f"{p.weight:.17g} {p.axes}\n" for p in h.terms)
