"""Closed forms for every named constant used by the checkers.

Exponent conventions: ``p`` or ``q`` equal to ``math.inf`` means ``1/p = 0``.
All beta-function values go through :func:`log_beta` so that large arguments
such as ``((2n - 1)p + 1)/2`` with ``p = 10**4`` neither underflow nor lose
digits.
"""
from __future__ import annotations

import math
from typing import Iterable

from .errors import DomainError

E = math.e
#: Turán-type constant for polynomials with zeros in the upper half-disk.
A = 2.0 / (3.0 * math.sqrt(210.0 * E))
K_HALFDISK = 70.0 * E
K_SEGMENT = 2.0

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_STIRLING_MIN = 10.0


def _stirling_correction(z: float) -> float:
    """``lgamma(z) - ((z - 1/2) log z - z + log(2 pi)/2)`` for ``z >= 10``."""
    w = 1.0 / (z * z)
    return (
        1.0 / 12.0
        - w * (1.0 / 360.0 - w * (1.0 / 1260.0 - w * (1.0 / 1680.0 - w * (1.0 / 1188.0 - w * 691.0 / 360360.0))))
    ) / z


def log_beta(x: float, y: float) -> float:
    """Natural log of the Euler beta function ``B(x, y)``.

    Built on log-gamma, but large arguments are handled in the Stirling form
    with the leading terms regrouped as ``log(x/(x+y))`` and ``log1p``, so
    that the huge ``lgamma`` values never cancel against each other.
    """
    if not (x > 0 and y > 0):
        raise DomainError(f"beta needs positive arguments, got ({x}, {y})")
    a, b = (x, y) if x <= y else (y, x)
    s = a + b
    if b < _STIRLING_MIN:
        return math.lgamma(a) + math.lgamma(b) - math.lgamma(s)
    if a < _STIRLING_MIN:
        # lgamma(b) - lgamma(a + b) without cancellation.
        diff = (
            _stirling_correction(b)
            - _stirling_correction(s)
            + a
            - (b - 0.5) * math.log1p(a / b)
            - a * math.log(s)
        )
        return math.lgamma(a) + diff
    return (
        _HALF_LOG_2PI
        + (a - 0.5) * math.log(a / s)
        + (b - 0.5) * math.log1p(-a / s)
        - 0.5 * math.log(s)
        + _stirling_correction(a)
        + _stirling_correction(b)
        - _stirling_correction(s)
    )


def beta(x: float, y: float) -> float:
    return math.exp(log_beta(x, y))


def _inv(r: float) -> float:
    return 0.0 if math.isinf(r) else 1.0 / r


def _check_n(n: int, minimum: int = 1) -> int:
    if int(n) != n or n < minimum:
        raise DomainError(f"n must be an integer >= {minimum}, got {n}")
    return int(n)


def A_inf(n: int) -> float:
    """Sharp weighted sup-norm constant ``sqrt(n/2) (1 - 1/(2n))^(n - 1/2)``."""
    n = _check_n(n)
    return math.sqrt(n / 2.0) * math.exp((n - 0.5) * math.log1p(-0.5 / n))


def A_p(p: float, n: int) -> float:
    """Sharp weighted L_p constant ``n B(((2n-1)p+1)/2, (p+1)/2)^(1/p)``; ``p = inf`` gives :func:`A_inf`."""
    n = _check_n(n)
    if math.isinf(p):
        return A_inf(n)
    if not p >= 1:
        raise DomainError(f"A_p needs p >= 1, got {p}")
    return n * math.exp(log_beta(((2 * n - 1) * p + 1) / 2.0, (p + 1) / 2.0) / p)


def c_q(q: float) -> float:
    if math.isinf(q):
        return 1.0
    if not q > 1:
        raise DomainError(f"c_q needs q > 1, got {q}")
    return (0.5 * (1.0 - 1.0 / q)) ** (1.0 / q)


def C_pq(p: float, q: float, n: int) -> float:
    """Second-derivative constant ``c_q n^(1/q) A_inf(n)^(1-1/q) A_p(n-1)``."""
    n = _check_n(n, 2)
    iq = _inv(q)
    return c_q(q) * n ** iq * A_inf(n) ** (1.0 - iq) * A_p(p, n - 1)


def BP2(n: int) -> float:
    n = _check_n(n, 2)
    return min(float(n), (n - 1) * n / 4.0)


_NAMES = {
    "A": lambda n, p, q: A,
    "K_halfdisk": lambda n, p, q: K_HALFDISK,
    "K_segment": lambda n, p, q: K_SEGMENT,
    "A_inf": lambda n, p, q: A_inf(n),
    "A_p": lambda n, p, q: A_p(p, n),
    "c_q": lambda n, p, q: c_q(q),
    "C_pq": lambda n, p, q: C_pq(p, q, n),
    "BP2": lambda n, p, q: BP2(n),
}

CONSTANT_NAMES = tuple(_NAMES)


def eval_constant(name: str, n: int | None = None, p: float | None = None, q: float | None = None) -> float:
    """Evaluate a constant by name; missing required parameters raise :class:`DomainError`."""
    try:
        fn = _NAMES[name]
    except KeyError:
        raise DomainError(f"unknown constant {name!r}; expected one of {', '.join(CONSTANT_NAMES)}") from None
    try:
        return float(fn(n, p, q))
    except TypeError as exc:
        raise DomainError(f"missing parameter for {name}: {exc}") from None


def limit_check_Ap_to_Ainf(n: int, p_grid: Iterable[float]) -> list[tuple[float, float]]:
    """``|A_p(n) - A_inf(n)|`` along an increasing grid of exponents."""
    grid = [float(p) for p in p_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("p_grid must be strictly increasing")
    target = A_inf(n)
    return [(p, abs(A_p(p, n) - target)) for p in grid]
