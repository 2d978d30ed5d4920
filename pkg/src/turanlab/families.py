"""Structured and random polynomial families.

``Qn`` is ``(1 - x^2)^n`` and therefore has degree ``2n``; every other kind
has degree ``n``. Random kinds draw from ``numpy.random.default_rng(seed)``,
so a spec reproduces its polynomial bit for bit.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constants import beta
from .errors import DomainError
from .polycore import PolyClass, RootPoly, make_root_poly


class Kind(str, enum.Enum):
    QN = "qn"
    ONE_PLUS_X_POW_N = "one-plus-x-pow-n"
    MONOMIAL = "monomial"
    RANDOM_SEGMENT = "random-segment"
    RANDOM_HALFDISK = "random-halfdisk"

    @property
    def is_random(self) -> bool:
        return self in (Kind.RANDOM_SEGMENT, Kind.RANDOM_HALFDISK)


@dataclass(frozen=True)
class FamilySpec:
    kind: Kind
    n: int
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"family index n must be a positive integer, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 unsigned bits")

    @property
    def degree(self) -> int:
        return 2 * self.n if self.kind is Kind.QN else self.n


def random_segment_roots(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, n)


def random_halfdisk_roots(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` points uniform by area on the closed upper half-disk."""
    r = np.sqrt(rng.random(n))
    theta = np.pi * rng.random(n)
    return r * np.exp(1j * theta)


def generate(spec: FamilySpec) -> RootPoly:
    n = spec.n
    if spec.kind is Kind.QN:
        return make_root_poly([-1.0] * n + [1.0] * n, PolyClass.SEGMENT)
    if spec.kind is Kind.ONE_PLUS_X_POW_N:
        return make_root_poly([-1.0] * n, PolyClass.SEGMENT)
    if spec.kind is Kind.MONOMIAL:
        return make_root_poly([0.0] * n, PolyClass.SEGMENT)
    rng = np.random.default_rng(spec.seed)
    if spec.kind is Kind.RANDOM_SEGMENT:
        return make_root_poly(random_segment_roots(rng, n), PolyClass.SEGMENT)
    return make_root_poly(random_halfdisk_roots(rng, n), PolyClass.HALFDISK)


def task_seed(base_seed: int, *key: int) -> int:
    """Derive an independent 64-bit seed for one task of a sweep."""
    ss = np.random.SeedSequence([int(base_seed) % 2**64, *[int(k) for k in key]])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class BoundRecord:
    """An upper bound rather than an exact value (used for ``Q_n''``)."""

    value: float
    first_term: float
    second_term: float


def qn_closed_norms(n: int, p: float, deriv_order: int) -> float | BoundRecord:
    """``int |Q_n^(k)|^p`` in closed form for ``Q_n = (1 - x^2)^n``.

    ``k = 0`` and ``k = 1`` are exact beta-function values. For ``k = 2`` only
    the two-piece upper bound splitting at ``|x| = 1/sqrt(2n - 1)`` is
    available; it is returned as a :class:`BoundRecord`.
    """
    if not (0 < p < math.inf):
        raise DomainError(f"p must be positive and finite, got {p}")
    if deriv_order == 0:
        if n < 1:
            raise DomainError("n >= 1 required")
        return beta(0.5, n * p + 1.0)
    if deriv_order == 1:
        if n < 1:
            raise DomainError("n >= 1 required")
        return (2.0 * n) ** p * beta((p + 1.0) / 2.0, (n - 1) * p + 1.0)
    if deriv_order == 2:
        if n < 2:
            raise DomainError("the second-derivative bound needs n >= 2")
        first = 2.0 ** (1.0 + p) * n ** (p - 0.5)
        second = 2.0 ** (1.0 + 2.0 * p) * n ** (2.0 * p) * 0.5 * beta(p + 0.5, (n - 2) * p + 1.0)
        return BoundRecord(first + second, first, second)
    raise DomainError(f"deriv_order must be 0, 1 or 2, got {deriv_order}")
