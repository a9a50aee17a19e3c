"""Suzuki product formulas: schedules, evaluation and cost bounds.

Public functions take the approximation *order* (``2k``, even).  The bound
functions follow the literature and take ``k`` itself, where the formula
being bounded is of order ``2k``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import TermList
from .linalg import expm, identity, matrix_power


class ValidityWindowError(ValueError):
    """A step-count bound was requested outside ``eps <= 1 <= 2 L 5^(k-1) tau``."""


class EvolutionMode(enum.Enum):
    REAL = "real"  # exp(c t H)
    IMAGINARY = "imaginary"  # exp(-i c t H)

    @property
    def factor(self) -> complex:
        return 1.0 if self is EvolutionMode.REAL else -1j


@dataclass(frozen=True)
class Schedule:
    """A flattened product formula: ``(term_index, coeff)`` pairs, leftmost first."""

    L: int
    factors: tuple[tuple[int, float], ...]
    order: int

    def __post_init__(self):
        factors = tuple((int(j), float(c)) for j, c in self.factors)
        object.__setattr__(self, "factors", factors)
        for j, _ in factors:
            if not 0 <= j < self.L:
                raise ValueError(f"term index {j} out of range for L={self.L}")
        for (a, _), (b, _) in zip(factors, factors[1:]):
            if a == b:
                raise ValueError(f"adjacent factors share term index {a}; merge them first")

    def __len__(self) -> int:
        return len(self.factors)

    def coefficient_sums(self) -> list[float]:
        sums = [0.0] * self.L
        for j, c in self.factors:
            sums[j] += c
        return sums


def _check_L(L: int) -> None:
    if L < 1:
        raise ValueError(f"need at least one term, got L={L}")


def _merge(factors) -> list[tuple[int, float]]:
    out: list[tuple[int, float]] = []
    for j, c in factors:
        if out and out[-1][0] == j:
            out[-1] = (j, out[-1][1] + c)
        else:
            out.append((j, c))
    return out


def first_order(L: int) -> Schedule:
    _check_L(L)
    return Schedule(L, tuple((j, 1.0) for j in range(L)), 1)


def strang(L: int) -> Schedule:
    """Symmetric second-order splitting: half steps outside, a full step on the last term."""
    _check_L(L)
    half = [(j, 0.5) for j in range(L - 1)]
    return Schedule(L, tuple(half + [(L - 1, 1.0)] + half[::-1]), 2)


def _check_k(k: int) -> None:
    if int(k) != k or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k}")


def suzuki_coefficient(k: int) -> float:
    """``s_k = 1 / (4 - 4**(1/(2k-1)))`` for the five-fold recursion."""
    _check_k(k)
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))


def triplet_coefficient(k: int) -> float:
    """``1 / (2 - 2**(1/(2k-1)))`` for the three-fold recursion.

    Exceeds one for every k, which is why no schedule is built from it.
    """
    _check_k(k)
    return 1.0 / (2.0 - 2.0 ** (1.0 / (2 * k - 1)))


def general_r_coefficient(r: int, k: int) -> float:
    """Real root ``a`` of ``(r-1) a**k + (1 - (r-1) a)**k = 0`` for odd ``k``.

    Even ``k`` has no real solution.
    """
    if r < 3:
        raise ValueError(f"r must be >= 3, got {r}")
    if k < 3 or k % 2 == 0:
        raise ValueError(f"k must be odd and >= 3 (even k has no real root), got {k}")
    q = r - 1
    return 1.0 / (q - q ** (1.0 / k))


def suzuki(order: int, L: int) -> Schedule:
    """Recursive Suzuki schedule of the given even order over ``L`` terms.

    ``S_2k(t) = S_2k-2(s t)^2 S_2k-2((1 - 4s) t) S_2k-2(s t)^2`` expanded eagerly,
    with neighbouring factors on the same term merged.
    """
    if order < 2 or order % 2:
        raise ValueError(f"order must be an even integer >= 2, got {order}")
    _check_L(L)
    factors = list(strang(L).factors)
    for k in range(2, order // 2 + 1):
        s = suzuki_coefficient(k)
        outer = [(j, s * c) for j, c in factors]
        middle = [(j, (1.0 - 4.0 * s) * c) for j, c in factors]
        factors = _merge(outer + outer + middle + outer + outer)
    return Schedule(L, tuple(factors), order)


def exp_count(order: int, L: int) -> int:
    """Number of exponentials in one flattened step: ``2(L-1) 5^(order/2 - 1) + 1``."""
    if order < 2 or order % 2:
        raise ValueError(f"order must be an even integer >= 2, got {order}")
    _check_L(L)
    return 2 * (L - 1) * 5 ** (order // 2 - 1) + 1


def evaluate(s: Schedule, terms: TermList, t: float, mode: EvolutionMode) -> np.ndarray:
    """Dense value of the product formula at time ``t``.

    The leftmost factor is applied last, so the result is the plain matrix
    product of the factors in schedule order.
    """
    if s.L != len(terms):
        raise ValueError(f"schedule has L={s.L} but {len(terms)} terms were given")
    z = mode.factor
    cache: dict[tuple[int, float], np.ndarray] = {}
    out = identity(terms.dim)
    for j, c in s.factors:
        key = (j, c)
        if key not in cache:
            cache[key] = expm((z * c * t) * terms[j])
        out = out @ cache[key]
    return out


def repeat_evaluate(
    s: Schedule, terms: TermList, t: float, m: int, mode: EvolutionMode
) -> np.ndarray:
    """``m`` Trotter steps of length ``t/m``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return matrix_power(evaluate(s, terms, t / m, mode), m)


def _window_scale(k: int, L: int, tau: float, eps: float) -> float:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_L(L)
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    scale = 2 * L * 5 ** (k - 1) * tau
    if eps > 1:
        raise ValidityWindowError(f"eps <= 1 violated: eps = {eps}")
    if scale < 1:
        raise ValidityWindowError(f"2 L 5^(k-1) tau >= 1 violated: value is {scale}")
    return scale


def m_theory(k: int, L: int, tau: float, eps: float) -> int:
    """Step count that guarantees error at most ``eps`` for the order-2k formula."""
    scale = _window_scale(k, L, tau, eps)
    return math.ceil(scale ** (1 + 1 / (2 * k)) / eps ** (1 / (2 * k)))


def nexp_bound(k: int, L: int, tau: float, eps: float) -> float:
    """Upper bound ``L 5^(2k) (L tau)^(1 + 1/2k) / eps^(1/2k)`` on the exponential count."""
    _window_scale(k, L, tau, eps)
    return L * 5.0 ** (2 * k) * (L * tau) ** (1 + 1 / (2 * k)) / eps ** (1 / (2 * k))


def _log5(x: float) -> float:
    return math.log(x) / math.log(5)


def _ratio(L: int, tau: float, eps: float) -> float:
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return L * tau / eps


def optimal_k(L: int, tau: float, eps: float) -> int:
    """Rounded minimiser of the exponential-count bound over k (at least 1)."""
    ratio = _ratio(L, tau, eps)
    if not ratio > 1:
        raise ValueError(f"L tau / eps must exceed 1, got {ratio}")
    k = math.floor(0.5 * math.sqrt(_log5(ratio) + 1) + 0.5)
    return max(1, k)


def nexp_bound_k_free(L: int, tau: float, eps: float) -> float:
    """``25 L^2 tau 5^(2 sqrt(log5(L tau / eps) + 1))``."""
    ratio = _ratio(L, tau, eps)
    if not ratio > 0:
        raise ValueError(f"L tau / eps must be positive, got {ratio}")
    inner = _log5(ratio) + 1
    if inner < 0:
        raise ValueError(f"log5(L tau / eps) + 1 is negative ({inner}); bound undefined")
    return 25.0 * L**2 * tau * 5.0 ** (2 * math.sqrt(inner))
