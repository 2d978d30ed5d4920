"""L_p, sup and weighted norms of P, P', P'' on [-1, 1].

Every weight in use is a power of ``1 - x^2``, so a norm is fully described
by ``(p, weight exponent, derivative order)``. Several norms of one
polynomial can be computed in a single pass: :func:`lp_norms` shares one
adaptive quadrature among all finite exponents, :func:`sup_norms` shares the
sampling and golden-section refinement.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import quadrature
from .errors import ParamOutOfRange
from .polycore import RootPoly, chebyshev_points, evaluate_many

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
SUP_XTOL = 1e-13
PANEL_RTOL = 1e-11
GLOBAL_TARGET = 1e-10
DEPTH_CAP = 48


class Weight(str, enum.Enum):
    NONE = "none"
    SQRT = "sqrt"  # sqrt(1 - x^2)
    ONE_MINUS_X2 = "one_minus_x2"
    TYRYGIN = "tyrygin"  # (1 - x^2)^((p - 1)/(2p))


@dataclass(frozen=True)
class NormSpec:
    """Norm of ``|P^(deriv)(x)| * weight(x)`` in ``L_p[-1, 1]`` (``p = inf`` is the sup norm)."""

    p: float
    weight: Weight = Weight.NONE
    deriv: int = 0

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "weight", Weight(self.weight))
        if not self.p > 0:
            raise ParamOutOfRange(f"norm exponent must be positive, got {self.p}")
        if self.deriv not in (0, 1, 2):
            raise ParamOutOfRange(f"derivative order must be 0, 1 or 2, got {self.deriv}")
        if self.weight is Weight.TYRYGIN and (math.isinf(self.p) or self.p < 1):
            raise ParamOutOfRange("the (1-x^2)^((p-1)/(2p)) weight needs 1 <= p < inf")

    @property
    def is_sup(self) -> bool:
        return math.isinf(self.p)

    @property
    def weight_exponent(self) -> float:
        if self.weight is Weight.NONE:
            return 0.0
        if self.weight is Weight.SQRT:
            return 0.5
        if self.weight is Weight.ONE_MINUS_X2:
            return 1.0
        return (self.p - 1.0) / (2.0 * self.p)


@dataclass(frozen=True)
class NormValue:
    value: float
    abs_error_estimate: float
    panels_used: int


def sample_size(n: int) -> int:
    return max(64, 16 * n)


def _moduli(P: RootPoly, x: np.ndarray) -> np.ndarray:
    v, d1, d2 = evaluate_many(P, x)
    return np.abs(np.stack([v, d1, d2]))


def _weighted(mods: np.ndarray, one_minus: np.ndarray, derivs: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """Rows ``|P^(d_j)(x)| (1 - x^2)^(e_j)`` for each requested (d_j, e_j)."""
    w = one_minus[None, :] ** exps[:, None]
    return mods[derivs] * w


def _one_minus_x2(x: np.ndarray) -> np.ndarray:
    return np.clip((1.0 - x) * (1.0 + x), 0.0, None)


def _spec_arrays(specs: Sequence[NormSpec]):
    derivs = np.array([s.deriv for s in specs], dtype=int)
    exps = np.array([s.weight_exponent for s in specs], dtype=float)
    return derivs, exps


def _refine_zeros(P: RootPoly, deriv: int, lo: np.ndarray, hi: np.ndarray, iters: int = 42) -> np.ndarray:
    """Bisect sign changes of the real polynomial ``P^(deriv)`` inside ``[lo, hi]``."""
    flo = evaluate_many(P, lo)[deriv]
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = evaluate_many(P, mid)[deriv]
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def breakpoints(P: RootPoly, derivs: Iterable[int], x: np.ndarray | None = None) -> np.ndarray:
    """Panel boundaries where ``|P^(k)|^p`` may have kinks.

    Always includes ``-1``, ``1`` and the real parts of the roots of ``P``. For
    real-rooted ``P`` the zeros of each requested derivative are also located
    (sign changes on the sample grid, then bisection).
    """
    pts = [np.array([-1.0, 1.0]), np.clip(P.roots.real, -1.0, 1.0)]
    if P.is_real:
        if x is None:
            x = chebyshev_points(sample_size(P.degree))
        vals = evaluate_many(P, x)
        for k in set(derivs):
            if k == 0 or k > P.degree:
                continue
            y = vals[k]
            s = np.sign(y)
            pts.append(x[s == 0])
            idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
            if idx.size:
                pts.append(_refine_zeros(P, k, x[idx].copy(), x[idx + 1].copy()))
    return np.unique(np.concatenate(pts))


def _golden_max(P: RootPoly, a: np.ndarray, b: np.ndarray, derivs: np.ndarray, exps: np.ndarray):
    """Vectorised golden-section maximisation of each candidate's weighted modulus."""

    def f(x):
        mods = _moduli(P, x)
        return mods[derivs, np.arange(x.size)] * _one_minus_x2(x) ** exps

    width = float(np.max(b - a)) if a.size else 0.0
    steps = 0 if width <= SUP_XTOL else int(math.ceil(math.log(SUP_XTOL / width) / math.log(_INV_PHI)))
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(steps):
        left = fc >= fd  # keep [a, d]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = np.where(left, b - _INV_PHI * (b - a), d)
        new_d = np.where(left, c, a + _INV_PHI * (b - a))
        f_new = f(np.where(left, new_c, new_d))
        fc, fd = np.where(left, f_new, fd), np.where(left, fc, f_new)
        c, d = new_c, new_d
    x_best = np.where(fc >= fd, c, d)
    return x_best, np.maximum(fc, fd), np.abs(fc - fd)


def sup_norms(P: RootPoly, specs: Sequence[NormSpec]) -> list[NormValue]:
    """Sup norms of the weighted derivatives selected by ``specs``.

    Dense Chebyshev sampling locates the candidate maxima; each interior
    discrete local maximum is polished by golden-section search on its
    bracketing interval. Endpoints are always candidates.
    """
    if not specs:
        return []
    derivs, exps = _spec_arrays(specs)
    x = chebyshev_points(sample_size(P.degree))
    y = _weighted(_moduli(P, x), _one_minus_x2(x), derivs, exps)
    best = y.max(axis=1)
    err = np.zeros(len(specs))
    counts = np.zeros(len(specs), dtype=int)

    cand_spec, cand_lo, cand_hi = [], [], []
    for j in range(len(specs)):
        yj = y[j]
        if best[j] == 0.0:
            continue
        # On a 16n-point Chebyshev grid a sampled local maximum is within a few
        # percent of the true one, so candidates below half the best cannot win.
        mid = yj[1:-1]
        inner = np.nonzero((mid >= yj[:-2]) & (mid >= yj[2:]) & (mid >= 0.5 * best[j]))[0] + 1
        counts[j] = inner.size + 2
        cand_spec.append(np.full(inner.size, j))
        cand_lo.append(x[inner - 1])
        cand_hi.append(x[inner + 1])
    if cand_spec:
        js = np.concatenate(cand_spec)
        if js.size:
            _, fx, fe = _golden_max(P, np.concatenate(cand_lo), np.concatenate(cand_hi), derivs[js], exps[js])
            for j in np.unique(js):
                sel = js == j
                k = np.argmax(fx[sel])
                if fx[sel][k] > best[j]:
                    best[j] = fx[sel][k]
                    err[j] = fe[sel][k]
    return [NormValue(float(best[j]), float(err[j]), int(counts[j])) for j in range(len(specs))]


def lp_norms(P: RootPoly, specs: Sequence[NormSpec]) -> list[NormValue]:
    """Finite-exponent norms, all integrated in one adaptive Gauss-Kronrod pass.

    Panels start at the kinks found by :func:`breakpoints` and are integrated
    in the endpoint-flattening variable of :func:`quadrature.stretched`.

    Each integrand is divided by its sampled maximum before being raised to
    the power ``p``, which keeps it in ``[0, ~1]`` for any degree and any
    exponent; the scale is restored afterwards.
    """
    if not specs:
        return []
    if any(s.is_sup for s in specs):
        raise ParamOutOfRange("lp_norms needs finite exponents")
    derivs, exps = _spec_arrays(specs)
    ps = np.array([s.p for s in specs])
    x = chebyshev_points(sample_size(P.degree))
    peak = _weighted(_moduli(P, x), _one_minus_x2(x), derivs, exps).max(axis=1)
    live = peak > 0
    scale = np.where(live, peak, 1.0)

    def integrand(t):
        y = _weighted(_moduli(P, t), _one_minus_x2(t), derivs, exps) / scale[:, None]
        return y ** ps[:, None]

    bp = breakpoints(P, derivs.tolist(), x)
    res = quadrature.integrate(
        integrand, bp, rtol=PANEL_RTOL, target=GLOBAL_TARGET, depth_cap=DEPTH_CAP, stretch=True
    )
    out = []
    for j in range(len(specs)):
        if not live[j] or res.value[j] <= 0.0:
            out.append(NormValue(0.0, 0.0, res.panels))
            continue
        integral = res.value[j]
        value = scale[j] * integral ** (1.0 / ps[j])
        err = value * res.abs_error[j] / (ps[j] * integral)
        out.append(NormValue(float(value), float(err), res.panels))
    return out


def lp_norm(P: RootPoly, spec: NormSpec) -> NormValue:
    if spec.is_sup:
        raise ParamOutOfRange("lp_norm needs a finite exponent; use sup_norm")
    return lp_norms(P, [spec])[0]


def sup_norm(P: RootPoly, spec: NormSpec) -> NormValue:
    if not spec.is_sup:
        raise ParamOutOfRange("sup_norm needs p = inf")
    return sup_norms(P, [spec])[0]


def norm(P: RootPoly, spec: NormSpec) -> NormValue:
    return sup_norm(P, spec) if spec.is_sup else lp_norm(P, spec)


def lp_integral(P: RootPoly, spec: NormSpec) -> float:
    """``int |f|^p`` for the function selected by ``spec`` (finite ``p``)."""
    return lp_norm(P, spec).value ** spec.p


class NormCache:
    """Memoised norms of one polynomial; :meth:`prefetch` batches the work."""

    def __init__(self, P: RootPoly):
        self.P = P
        self._values: dict[NormSpec, NormValue] = {}

    def prefetch(self, specs: Iterable[NormSpec]) -> None:
        todo = [s for s in dict.fromkeys(specs) if s not in self._values]
        sups = [s for s in todo if s.is_sup]
        finite = [s for s in todo if not s.is_sup]
        for s, v in zip(sups, sup_norms(self.P, sups)):
            self._values[s] = v
        for s, v in zip(finite, lp_norms(self.P, finite)):
            self._values[s] = v

    def get(self, spec: NormSpec) -> NormValue:
        if spec not in self._values:
            self.prefetch([spec])
        return self._values[spec]

    def __call__(self, p: float, weight: Weight | str = Weight.NONE, deriv: int = 0) -> float:
        return self.get(NormSpec(p, Weight(weight), deriv)).value
