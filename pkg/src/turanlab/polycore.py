"""Root-form polynomials and their evaluation on [-1, 1].

Polynomials are stored as monic products ``prod(x - z_k)`` and never expanded
into coefficients. Values and the first two derivatives are accumulated in a
single pass with the product rule, which stays accurate for clustered roots
such as ``(1 - x^2)^n``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable

import numba
import numpy as np

from .errors import EmptyRoots, RootOutOfClass

SNAP_TOL = 1e-12


class PolyClass(str, enum.Enum):
    """Zero region of a polynomial: the segment [-1, 1] or the closed upper half-disk."""

    SEGMENT = "Segment"
    HALFDISK = "HalfDisk"


@dataclass(frozen=True)
class EvalResult:
    value: complex
    d1: complex
    d2: complex
    log_magnitude: float


@dataclass(frozen=True, eq=False)
class RootPoly:
    """Monic polynomial given by its (sorted) root multiset.

    Build instances with :func:`make_root_poly`; the constructor trusts its input.
    """

    roots: np.ndarray
    class_tag: PolyClass

    @property
    def degree(self) -> int:
        return int(self.roots.shape[0])

    n = degree

    @property
    def is_real(self) -> bool:
        return self.roots.dtype.kind == "f"

    @property
    def real_roots(self) -> np.ndarray:
        """Roots lying on the real axis (all of them for Segment polynomials)."""
        if self.is_real:
            return self.roots
        r = self.roots[self.roots.imag == 0.0]
        return r.real.copy()

    def digest(self) -> list[list[float]]:
        """Canonical root list ``[[re, im], ...]`` used in reports."""
        z = self.roots.astype(complex)
        return [[float(c.real), float(c.imag)] for c in z]

    def key(self) -> tuple:
        return (self.class_tag.value, tuple(map(tuple, self.digest())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootPoly):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"RootPoly(n={self.degree}, class_tag={self.class_tag.value}, roots={self.digest()})"

    def __call__(self, x):
        return evaluate_many(self, np.asarray(x, dtype=float))[0]


def make_root_poly(roots: Iterable[complex], class_tag: PolyClass | str = PolyClass.SEGMENT) -> RootPoly:
    """Validate ``roots`` against the class constraint and build a monic RootPoly.

    Roots within ``1e-12`` of the admissible set are snapped onto it; anything
    further out raises :class:`RootOutOfClass`. Roots are sorted by
    (real part, imaginary part) so that equal multisets give equal objects.
    """
    tag = PolyClass(class_tag)
    z = np.asarray(list(roots), dtype=complex).ravel()
    if z.size == 0:
        raise EmptyRoots("a polynomial needs at least one root")
    if not np.all(np.isfinite(z)):
        raise RootOutOfClass("roots must be finite")

    re = z.real.copy()
    im = z.imag.copy()
    if tag is PolyClass.SEGMENT:
        bad = (np.abs(im) > SNAP_TOL) | (np.abs(re) > 1.0 + SNAP_TOL)
        if bad.any():
            raise RootOutOfClass(f"roots {z[bad].tolist()} are not in [-1, 1]")
        re = np.clip(re, -1.0, 1.0)
        order = np.argsort(re, kind="stable")
        out = re[order]
        out.setflags(write=False)
        return RootPoly(out, tag)

    mod = np.hypot(re, im)
    bad = (im < -SNAP_TOL) | (mod > 1.0 + SNAP_TOL)
    if bad.any():
        raise RootOutOfClass(f"roots {z[bad].tolist()} are not in the closed upper half-disk")
    im = np.maximum(im, 0.0)
    im[np.abs(im) <= SNAP_TOL] = 0.0
    mod = np.hypot(re, im)
    over = mod > 1.0
    re[over] /= mod[over]
    im[over] /= mod[over]
    order = np.lexsort((im, re))
    out = (re + 1j * im)[order]
    out.setflags(write=False)
    return RootPoly(out, tag)


@numba.njit(cache=True, nogil=True)
def _accumulate(x, r, v, d1, d2):  # pragma: no cover - compiled
    n = r.shape[0]
    half = n // 2
    for i in range(x.shape[0]):
        xi = x[i]
        a = v[i]
        b = d1[i]
        c = d2[i]
        if n % 2:
            t = xi - r[half]
            c = c * t + 2.0 * b
            b = b * t + a
            a = a * t
        for k in range(half):
            ta = xi - r[k]
            tb = xi - r[n - 1 - k]
            q = ta * tb
            dq = ta + tb
            c = c * q + 2.0 * b * dq + 2.0 * a
            b = b * q + a * dq
            a = a * q
        v[i] = a
        d1[i] = b
        d2[i] = c


def evaluate_many(P: RootPoly, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(P(x), P'(x), P''(x))`` for an array of points.

    Roots are consumed in mirrored pairs (first with last, second with
    second-to-last, ...). For a root multiset symmetric about 0 this makes
    ``P(-x) = (-1)^n P(x)`` hold bit for bit.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape
    flat = np.ascontiguousarray(x.ravel())
    dtype = float if P.is_real else complex
    v = np.ones(flat.shape, dtype=dtype)
    d1 = np.zeros(flat.shape, dtype=dtype)
    d2 = np.zeros(flat.shape, dtype=dtype)
    _accumulate(flat, np.ascontiguousarray(P.roots), v, d1, d2)
    return v.reshape(shape), d1.reshape(shape), d2.reshape(shape)


def log_abs(P: RootPoly, x: np.ndarray) -> np.ndarray:
    """``sum_k log|x - z_k|``; finite for any degree, ``-inf`` at real roots."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(x[..., None] - P.roots)).sum(axis=-1)


def log_derivative(P: RootPoly, x: np.ndarray) -> np.ndarray:
    """``P'(x)/P(x) = sum_k 1/(x - z_k)``; infinite at real roots."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (1.0 / (x[..., None] - P.roots)).sum(axis=-1)


def evaluate(P: RootPoly, x: float) -> EvalResult:
    """Evaluate ``P``, ``P'`` and ``P''`` at a single point of [-1, 1]."""
    v, d1, d2 = evaluate_many(P, np.array([float(x)]))
    lm = float(log_abs(P, np.array([float(x)]))[0])
    return EvalResult(complex(v[0]), complex(d1[0]), complex(d2[0]), lm)


def chebyshev_points(m: int) -> np.ndarray:
    """Chebyshev extrema ``cos(k pi/(m-1))`` in increasing order."""
    if m < 2:
        raise ValueError("need at least two Chebyshev points")
    half = -np.cos(np.pi * np.arange(m // 2) / (m - 1))
    mid = [0.0] if m % 2 else []
    x = np.concatenate([half, mid, -half[::-1]])
    x[0], x[-1] = -1.0, 1.0
    return x


def cheb_sample(
    P: RootPoly,
    m: int,
    which: str = "value",
    weight: Callable[[np.ndarray], np.ndarray] | None = None,
) -> list[tuple[float, float]]:
    """Sample ``|P|`` or ``|P'| * weight`` at ``m`` Chebyshev points.

    ``which`` is ``"value"`` for ``|P|`` and ``"d1"`` for the (weighted)
    derivative modulus.
    """
    if m < P.degree + 1:
        raise ValueError(f"m={m} must be at least n+1={P.degree + 1}")
    x = chebyshev_points(m)
    v, d1, _ = evaluate_many(P, x)
    if which == "value":
        y = np.abs(v)
    elif which == "d1":
        y = np.abs(d1)
    else:
        raise ValueError(f"unknown selector {which!r}")
    if weight is not None:
        y = y * weight(x)
    return list(zip(x.tolist(), y.tolist()))
