"""Empirical best constants by multi-start simplex search over root configurations.

Roots are reparametrised so the search is unconstrained:

* segment:   ``x_k = cos(theta_k)``
* half-disk: ``z_k = |sin u_k| * exp(i pi sigma(v_k))`` with ``sigma`` the
  logistic map; every fourth start is a boundary restart that searches real
  roots only (the diameter of the half-disk).

Both maps reach multiple roots and the boundary, which is where the
extremal polynomials of these inequalities live.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit

from .errors import ObjectiveFailure, ParamOutOfRange, TuranLabError
from .families import task_seed
from .inequalities import RULES, check
from .polycore import PolyClass, RootPoly, make_root_poly


@dataclass(frozen=True)
class SearchConfig:
    inequality_id: str
    n: int
    p: float | None = None
    q: float | None = None
    class_tag: PolyClass = PolyClass.SEGMENT
    starts: int = 50
    max_iters_per_start: int = 2000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "class_tag", PolyClass(self.class_tag))
        if self.starts < 1:
            raise ParamOutOfRange("starts must be >= 1")
        if self.inequality_id not in RULES:
            raise ParamOutOfRange(f"unknown inequality id {self.inequality_id!r}")
        rule = RULES[self.inequality_id]
        if rule.segment_only and self.class_tag is not PolyClass.SEGMENT:
            raise ParamOutOfRange(f"{self.inequality_id} is stated for zeros in [-1, 1] only")
        if self.n < rule.min_n:
            raise ParamOutOfRange(f"{self.inequality_id} needs n >= {rule.min_n}")
        rule.validate(self.p if rule.uses_p else None, self.q if rule.uses_q else None)


@dataclass
class SearchResult:
    best_roots: list
    best_ratio: float
    evaluations: int
    per_start_bests: list[float]
    converged_starts: int
    failed_starts: int = 0
    trace: list[list[float]] = field(default_factory=list)

    def to_dict(self):
        return {
            "best_roots": self.best_roots,
            "best_ratio": self.best_ratio,
            "evaluations": self.evaluations,
            "per_start_bests": self.per_start_bests,
            "converged_starts": self.converged_starts,
            "failed_starts": self.failed_starts,
            "trace": self.trace,
        }


def segment_roots(theta: np.ndarray) -> np.ndarray:
    return np.cos(theta)


def halfdisk_roots(params: np.ndarray) -> np.ndarray:
    u, v = np.split(params, 2)
    return np.abs(np.sin(u)) * np.exp(1j * np.pi * expit(v))


def _poly(params: np.ndarray, cfg: SearchConfig, boundary: bool) -> RootPoly:
    if cfg.class_tag is PolyClass.SEGMENT or boundary:
        return make_root_poly(segment_roots(params), cfg.class_tag)
    return make_root_poly(halfdisk_roots(params), cfg.class_tag)


def ratio_of(P: RootPoly, cfg: SearchConfig) -> float:
    return check(cfg.inequality_id, P, cfg.p, cfg.q).ratio


def _start_point(rng: np.random.Generator, cfg: SearchConfig, boundary: bool) -> np.ndarray:
    if cfg.class_tag is PolyClass.SEGMENT or boundary:
        return rng.uniform(0.0, np.pi, cfg.n)
    return np.concatenate([rng.uniform(0.0, np.pi / 2, cfg.n), rng.normal(0.0, 2.0, cfg.n)])


def minimize_ratio(cfg: SearchConfig) -> SearchResult:
    """Minimise the inequality's ratio (or statistic) over the admissible class.

    Each start runs Nelder-Mead from a deterministically seeded point; a start
    whose objective raises a numerical error is discarded and counted in
    ``failed_starts``. The global best is the minimum over starts, ties broken
    by canonical root order.
    """
    evaluations = 0
    per_start: list[float] = []
    trace: list[list[float]] = []
    best: tuple[float, tuple] | None = None
    best_poly: RootPoly | None = None
    converged = failed = 0

    for s in range(cfg.starts):
        rng = np.random.default_rng(task_seed(cfg.seed, s))
        boundary = cfg.class_tag is PolyClass.HALFDISK and s % 4 == 3
        x0 = _start_point(rng, cfg, boundary)
        local = {"best": math.inf, "poly": None, "hist": []}

        def objective(params):
            nonlocal evaluations
            evaluations += 1
            P = _poly(params, cfg, boundary)
            try:
                r = ratio_of(P, cfg)
            except TuranLabError as exc:
                raise ObjectiveFailure(str(exc)) from exc
            if not math.isfinite(r):
                raise ObjectiveFailure(f"non-finite ratio {r}")
            if r < local["best"]:
                local["best"] = r
                local["poly"] = P
                local["hist"].append(r)
            return r

        try:
            res = minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={
                    "maxiter": cfg.max_iters_per_start,
                    "xatol": 1e-10,
                    "fatol": 1e-12,
                    "adaptive": x0.size > 4,
                },
            )
        except ObjectiveFailure:
            failed += 1
            continue
        converged += bool(res.success)
        per_start.append(local["best"])
        trace.append(local["hist"])
        key = (local["best"], local["poly"].key())
        if best is None or key < best:
            best = key
            best_poly = local["poly"]

    if best_poly is None:
        raise ObjectiveFailure("every start failed")
    return SearchResult(
        best_roots=best_poly.digest(),
        best_ratio=best[0],
        evaluations=evaluations,
        per_start_bests=per_start,
        converged_starts=converged,
        failed_starts=failed,
        trace=trace,
    )


def rebuild(result: SearchResult, class_tag: PolyClass | str) -> RootPoly:
    return make_root_poly([complex(re, im) for re, im in result.best_roots], class_tag)


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    return float(np.polyfit(lx, ly, 1)[0])


def empirical_constant_table(
    inequality_id: str,
    n_range,
    p: float,
    q: float | None = None,
    starts: int = 50,
    max_iters_per_start: int = 2000,
    seed: int = 0,
) -> list[tuple[int, float]]:
    """Per ``n``, the searched minimum of the INEQ-3 / INEQ-4 statistic."""
    if inequality_id not in ("INEQ-3", "INEQ-4"):
        raise ParamOutOfRange("empirical constants are only estimated for INEQ-3 and INEQ-4")
    table = []
    for n in n_range:
        cfg = SearchConfig(inequality_id, int(n), p, q, PolyClass.SEGMENT, starts, max_iters_per_start, seed)
        table.append((int(n), minimize_ratio(cfg).best_ratio))
    return table
