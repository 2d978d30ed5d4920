"""Sublevel-set measures, the distribution-function identity, and the Nikol'skii-type lemma.

The logarithmic derivative ``P'/P = sum 1/(x - z_k)`` is evaluated directly,
so the normalised quantities

    segment:   g(x) = (1 - x^2) |P'(x)| / (n |P(x)|)
    half-disk: g(x) = |P'(x)| / (n |P(x)|)

never overflow. Their sublevel sets are measured by bracketing the crossings
of ``g - alpha`` on a grid (real roots of ``P`` are inserted as grid points,
they are poles of ``g``) and bisecting each crossing to ``1e-12``.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import quadrature
from .constants import K_HALFDISK, K_SEGMENT
from .errors import ParamOutOfRange
from .norms import NormCache, NormSpec, Weight
from .polycore import PolyClass, RootPoly, log_abs, log_derivative
from .reports import TOL, InequalityReport, MeasureEstimate

CROSSING_XTOL = 1e-12
MEASURE_SLACK = 1e-6


def grid_size(n: int) -> int:
    return int(10_000 * max(1.0, n / 10.0))


def _grid(P: RootPoly, size: int | None = None) -> np.ndarray:
    size = grid_size(P.degree) if size is None else size
    x = np.linspace(-1.0, 1.0, size)
    return np.unique(np.concatenate([x, P.real_roots]))


def g_function(P: RootPoly, x: np.ndarray, variant: str) -> np.ndarray:
    """The normalised log-derivative for ``variant`` in ``{"segment", "halfdisk"}``.

    ``+inf`` at roots of ``P``. At an endpoint that is itself a root of
    multiplicity ``m`` the segment variant takes its limit ``2m/n``.
    """
    n = P.degree
    ld = np.abs(log_derivative(P, x))
    if variant == "halfdisk":
        return ld / n
    if variant != "segment":
        raise ValueError(f"unknown variant {variant!r}")
    with np.errstate(invalid="ignore"):
        g = (1.0 - x) * (1.0 + x) * ld / n
    ends = np.isnan(g)
    if ends.any():
        for i in np.nonzero(ends)[0]:
            m = int(np.count_nonzero(P.roots == x[i]))
            g[i] = 2.0 * m / n
    return g


def _bisect(fn, lo: np.ndarray, hi: np.ndarray, lo_inside: np.ndarray, xtol: float) -> np.ndarray:
    """Vectorised bisection for the boundary of ``fn(x) <= 0`` in ``[lo, hi]``.

    ``lo_inside`` tells which end satisfies ``fn <= 0``.
    """
    width = float(np.max(hi - lo)) if lo.size else 0.0
    steps = max(0, int(math.ceil(math.log2(width / xtol)))) if width > 0 else 0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        inside = fn(mid) <= 0
        move_lo = inside == lo_inside
        lo = np.where(move_lo, mid, lo)
        hi = np.where(move_lo, hi, mid)
    return 0.5 * (lo + hi)


def sublevel_measures(
    P: RootPoly, alphas: Sequence[float], variant: str, size: int | None = None
) -> list[float]:
    """Lebesgue measure of ``{x in [-1, 1]: g(x) <= alpha}`` for each alpha."""
    x = _grid(P, size)
    g = g_function(P, x, variant)
    out = []
    for alpha in alphas:
        if not alpha > 0:
            raise ParamOutOfRange(f"alpha must be positive, got {alpha}")
        inside = g <= alpha
        left, right = inside[:-1], inside[1:]
        dx = np.diff(x)
        total = float(dx[left & right].sum())
        cross = np.nonzero(left != right)[0]
        if cross.size:
            lo, hi = x[cross], x[cross + 1]
            lo_in = left[cross]
            xc = _bisect(lambda t: g_function(P, t, variant) - alpha, lo.copy(), hi.copy(), lo_in, CROSSING_XTOL)
            total += float(np.where(lo_in, xc - lo, hi - xc).sum())
        out.append(min(max(total, 0.0), 2.0))
    return out


def sublevel_measure_segment(P: RootPoly, alpha: float) -> MeasureEstimate:
    """Measure where ``(1 - x^2)|P'/(nP)| <= alpha``, compared with ``2 alpha``."""
    if P.class_tag is not PolyClass.SEGMENT:
        raise ParamOutOfRange("the segment measure bound needs a polynomial with zeros in [-1, 1]")
    m = sublevel_measures(P, [alpha], "segment")[0]
    bound = K_SEGMENT * alpha
    return MeasureEstimate(float(alpha), m, bound, m <= bound + MEASURE_SLACK, grid_size(P.degree))


def sublevel_measure_halfdisk(P: RootPoly, alpha: float) -> MeasureEstimate:
    """Measure where ``|P'/(nP)| <= alpha``, compared with ``70 e alpha``.

    The bound is strict; numerically it is checked with the same slack as the
    segment case.
    """
    m = sublevel_measures(P, [alpha], "halfdisk")[0]
    bound = K_HALFDISK * alpha
    return MeasureEstimate(float(alpha), m, bound, m <= bound + MEASURE_SLACK, grid_size(P.degree))


# -- distribution function -------------------------------------------------


def _critical_points(P: RootPoly, size: int | None = None) -> np.ndarray:
    """Endpoints, real roots and interior extrema of ``|P|`` on [-1, 1], sorted."""
    x = _grid(P, size)
    with np.errstate(invalid="ignore"):
        s = np.real(log_derivative(P, x))
    finite = np.isfinite(s)
    sign = np.sign(s)
    idx = np.nonzero(finite[:-1] & finite[1:] & (sign[:-1] * sign[1:] < 0))[0]
    pts = [np.array([-1.0, 1.0]), P.real_roots, x[finite & (s == 0)]]
    if idx.size:
        lo, hi = x[idx].copy(), x[idx + 1].copy()
        lo_in = sign[idx] <= 0
        pts.append(_bisect(lambda t: np.real(log_derivative(P, t)), lo, hi, lo_in, 1e-14))
    return np.unique(np.clip(np.concatenate(pts), -1.0, 1.0))


class DistributionFunction:
    """``h(delta) = m{x in [-1, 1]: n|Q(x)| > delta}`` evaluated exactly per monotone piece."""

    def __init__(self, Q: RootPoly, size: int | None = None):
        self.Q = Q
        self.log_n = math.log(Q.degree)
        self.cuts = _critical_points(Q, size)
        with np.errstate(divide="ignore"):
            self.log_u = log_abs(Q, self.cuts) + self.log_n
        self.a, self.b = self.cuts[:-1], self.cuts[1:]
        self.ua, self.ub = self.log_u[:-1], self.log_u[1:]
        self.T = float(np.exp(self.log_u.max()))

    def critical_values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.unique(np.exp(self.log_u))

    def __call__(self, delta: np.ndarray) -> np.ndarray:
        delta = np.atleast_1d(np.asarray(delta, dtype=float))
        with np.errstate(divide="ignore"):
            ld = np.log(delta)[:, None]
        lo_v = np.minimum(self.ua, self.ub)[None, :]
        hi_v = np.maximum(self.ua, self.ub)[None, :]
        length = (self.b - self.a)[None, :]
        full = ld < lo_v
        partial = (ld >= lo_v) & (ld < hi_v)
        h = np.where(full, length, 0.0).sum(axis=1)
        di, pj = np.nonzero(partial)
        if di.size:
            lo = self.a[pj].copy()
            hi = self.b[pj].copy()
            increasing = self.ub[pj] > self.ua[pj]
            target = ld[di, 0]
            # Superlevel part is [x*, b] on increasing pieces, [a, x*] on decreasing ones.
            xs = _bisect(
                lambda t: np.where(increasing, 1.0, -1.0) * (log_abs(self.Q, t) + self.log_n - target),
                lo,
                hi,
                np.ones(lo.shape, dtype=bool),
                1e-15,
            )
            seg = np.where(increasing, self.b[pj] - xs, xs - self.a[pj])
            np.add.at(h, di, seg)
        return h


def layer_cake_check(Q: RootPoly, q: float, rtol: float = 1e-9) -> tuple[float, float]:
    """Both sides of ``int (n|Q|)^q dx = q int_0^T delta^(q-1) h(delta) d delta``.

    The left side comes from the norms module; the right side integrates the
    distribution function, splitting the delta axis at the critical values of
    ``n|Q|`` where ``h`` has square-root corners.
    """
    if not q > 1:
        raise ParamOutOfRange(f"q must exceed 1, got {q}")
    n = Q.degree
    lhs = (n * NormCache(Q)(q)) ** q
    h = DistributionFunction(Q)
    bps = np.concatenate([[0.0], h.critical_values(), [h.T]])
    bps = bps[(bps >= 0) & (bps <= h.T)]
    res = quadrature.integrate(
        lambda d: q * d ** (q - 1.0) * h(d), bps, rtol=rtol, target=1e-7, stretch=True
    )
    return float(lhs), float(res.value[0])


# -- the lemma -------------------------------------------------------------

LEMMA_VARIANTS = ("HalfDiskK70e", "SegmentK2")


def lemma9_check(Q_raw: RootPoly, q: float, variant: str | None = None, cache: NormCache | None = None) -> InequalityReport:
    """``int |Q|^q <= K q/(q-1) ||Q||_inf^(q-1) / n`` after the lemma's normalisation.

    ``SegmentK2`` rescales so that ``||Q'(x)(1 - x^2)||_inf = 1`` and uses
    ``K = 2``; ``HalfDiskK70e`` rescales so that ``||Q'||_inf = 1`` and uses
    ``K = 70e``. The report's ``lhs`` is the bound and ``rhs`` the integral.
    ``extra`` records whether the elementary branch ``n||Q||_inf <= 1``
    applies and, if so, whether its direct estimate holds.
    """
    if variant is None:
        variant = "SegmentK2" if Q_raw.class_tag is PolyClass.SEGMENT else "HalfDiskK70e"
    if variant not in LEMMA_VARIANTS:
        raise ParamOutOfRange(f"unknown lemma variant {variant!r}")
    if variant == "SegmentK2" and Q_raw.class_tag is not PolyClass.SEGMENT:
        from .errors import ClassMismatch

        raise ClassMismatch("the K=2 variant needs zeros in [-1, 1]")
    if q is None or not (1 < q < math.inf):
        raise ParamOutOfRange(f"the lemma needs 1 < q < inf, got {q}")
    nv = cache if cache is not None else NormCache(Q_raw)
    n = Q_raw.degree
    if variant == "SegmentK2":
        K = K_SEGMENT
        s = nv(math.inf, Weight.ONE_MINUS_X2, 1)
    else:
        K = K_HALFDISK
        s = nv(math.inf, Weight.NONE, 1)
    sup_q = nv(math.inf) / s
    log_sup = math.log(sup_q)
    log_int = q * (math.log(nv(q)) - math.log(s))
    log_bound = math.log(K) + math.log(q / (q - 1.0)) + (q - 1.0) * log_sup - math.log(n)
    ratio = math.exp(log_bound - log_int)
    T = n * sup_q
    extra: dict = {"variant": variant, "K": K, "T": T, "trivial_branch": T <= 1.0}
    if T <= 1.0:
        integral = math.exp(log_int)
        extra["trivial_branch_pass"] = bool(
            integral <= 2.0 * sup_q**q * (1 + TOL) and 2.0 * sup_q**q <= (2.0 / n) * sup_q ** (q - 1.0) * (1 + TOL)
        )
    return InequalityReport(
        inequality_id="LEM-9",
        n=n,
        p=None,
        q=float(q),
        lhs=math.exp(log_bound),
        rhs=math.exp(log_int),
        ratio=ratio,
        strict=False,
        passed=ratio >= 1.0 - TOL,
        tol=TOL,
        poly_digest=Q_raw.digest(),
        class_tag=Q_raw.class_tag.value,
        extra=extra,
    )


def lemma9_chain(Q_raw: RootPoly, q: float, cache: NormCache | None = None) -> tuple[float, float, float]:
    """The three members of the segment proof chain at the lemma's normalisation.

    Returns ``(n^q int|Q|^q, 2 + 2q(T^(q-1) - 1)/(q-1), 2q T^(q-1)/(q-1))``
    with ``T = n||Q||_inf``; meaningful when ``T > 1``.
    """
    nv = cache if cache is not None else NormCache(Q_raw)
    n = Q_raw.degree
    s = nv(math.inf, Weight.ONE_MINUS_X2, 1)
    T = n * nv(math.inf) / s
    left = (n * nv(q) / s) ** q
    middle = 2.0 + 2.0 * q * (T ** (q - 1.0) - 1.0) / (q - 1.0)
    right = 2.0 * q * T ** (q - 1.0) / (q - 1.0)
    return left, middle, right


def lemma_norm_specs(q: float, variant: str) -> list[NormSpec]:
    normaliser = NormSpec(math.inf, Weight.ONE_MINUS_X2 if variant == "SegmentK2" else Weight.NONE, 1)
    return [normaliser, NormSpec(math.inf), NormSpec(q)]
