"""High-order Suzuki product formulas for Hamiltonian simulation."""

from .formulas import (
    EvolutionMode,
    Schedule,
    evaluate,
    exp_count,
    first_order,
    m_theory,
    repeat_evaluate,
    strang,
    suzuki,
)
from .hamiltonian import PauliHamiltonian, PauliString, TermList, heisenberg_1d, ising_1d, realize

__version__ = "0.1.0"
