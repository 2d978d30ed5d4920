"""One checker per Turán-type inequality.

Each checker returns an :class:`InequalityReport` with ``ratio = lhs/rhs``.
Statements whose constant is only known to exist (``INEQ-3``, ``INEQ-4``)
report the scale-free statistic in ``ratio`` and leave ``passed`` as None.

``p`` and ``q`` use ``math.inf`` for the sup norm, with ``1/inf = 0``.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import constants as C
from .errors import ClassMismatch, ParamOutOfRange, TuranLabError
from .families import FamilySpec, generate, task_seed
from .measure import lemma9_check
from .norms import NormCache, NormSpec, Weight
from .polycore import PolyClass, RootPoly
from .reports import TOL, InequalityReport, verdict

INF = math.inf


def _inv(r: float) -> float:
    return 0.0 if math.isinf(r) else 1.0 / r


@dataclass(frozen=True)
class Rule:
    strict: bool | None  # None: statistic only
    uses_p: bool
    uses_q: bool
    segment_only: bool
    min_n: int
    sides: Callable  # (nv, n, p, q) -> (lhs, rhs)
    validate: Callable[[float | None, float | None], None]


def _no_params(p, q):
    pass


def _need_q_gt1(p, q):
    if q is None or not q > 1:
        raise ParamOutOfRange(f"q must satisfy 1 < q <= inf, got {q}")


def _need_q_finite_gt1(p, q):
    if q is None or not (1 < q < INF):
        raise ParamOutOfRange(f"q must satisfy 1 < q < inf, got {q}")


def _need_p_ge1(p):
    if p is None or not p >= 1:
        raise ParamOutOfRange(f"p must satisfy 1 <= p <= inf, got {p}")


def _v3(p, q):
    if p is None or not (0 < p < INF):
        raise ParamOutOfRange(f"p must satisfy 0 < p < inf, got {p}")


def _v4(p, q):
    if p is None or q is None or not (0 < p <= q):
        raise ParamOutOfRange(f"need 0 < p <= q <= inf, got p={p}, q={q}")
    if 1.0 - _inv(p) + _inv(q) < 0:
        raise ParamOutOfRange(f"need 1 - 1/p + 1/q >= 0, got p={p}, q={q}")


def _v6(p, q):
    if p is None or not (1 <= p < INF):
        raise ParamOutOfRange(f"p must satisfy 1 <= p < inf, got {p}")


def _v_pq(p, q):
    _need_p_ge1(p)
    _need_q_gt1(p, q)


def _tyrygin(p: float) -> NormSpec:
    """``(1 - x^2)^((p-1)/(2p))``-weighted norm; at ``p = inf`` this is the sqrt weight."""
    return NormSpec(INF, Weight.SQRT, 0) if math.isinf(p) else NormSpec(p, Weight.TYRYGIN, 0)


def _tyrygin_deriv(p: float, deriv: int) -> NormSpec:
    s = _tyrygin(p)
    return NormSpec(s.p, s.weight, deriv)


def _s1(nv, n, p, q):
    return nv(INF, deriv=1), C.A * math.sqrt(n) * nv(INF)


def _s2(nv, n, p, q):
    return nv(INF, deriv=1), math.sqrt(n) / 6.0 * nv(INF)


def _s3(nv, n, p, q):
    return nv(p, deriv=1), math.sqrt(n) * nv(p)


def _s4(nv, n, p, q):
    return nv(p, deriv=1), math.sqrt(n) ** (1.0 - _inv(p) + _inv(q)) * nv(q)


def _s5(nv, n, p, q):
    return nv(INF, Weight.SQRT, 1), C.A_inf(n) * nv(INF)


def _s6(nv, n, p, q):
    return nv.get(_tyrygin_deriv(p, 1)).value, C.A_p(p, n) * nv(INF)


def _s7(nv, n, p, q):
    if math.isinf(q):
        return _s1(nv, n, p, q)
    iq = 1.0 / q
    const = 6.0**iq * (1.0 - iq) ** iq * (C.A * math.sqrt(n)) ** (1.0 + iq)
    return nv(INF, deriv=1), const * nv(q)


def _s8(nv, n, p, q):
    if math.isinf(q):
        return _s5(nv, n, p, q)
    iq = 1.0 / q
    lhs = nv(INF, Weight.SQRT, 1) ** (1.0 - iq) * nv(INF, Weight.ONE_MINUS_X2, 1) ** iq
    return lhs, C.c_q(q) * n**iq * C.A_inf(n) ** (1.0 - iq) * nv(q)


def _sc1(nv, n, p, q):
    iq = _inv(q)
    const = C.c_q(q) * math.sqrt(2.0 * math.e) ** (-1.0 + iq) * math.sqrt(n) ** (1.0 + iq)
    return nv(INF, Weight.SQRT, 1), const * nv(q)


def _sc2(nv, n, p, q):
    return nv.get(_tyrygin_deriv(p, 2)).value, C.C_pq(p, q, n) * nv(q)


def _sbp2(nv, n, p, q):
    return nv(INF, deriv=2), C.BP2(n) * nv(INF)


def _s10(nv, n, p, q):
    lhs = nv(INF, Weight.ONE_MINUS_X2, 1) * nv(INF) ** (q - 1.0)
    return lhs, 0.5 * n * (1.0 - 1.0 / q) * nv(q) ** q


def _sr1(nv, n, p, q):
    return nv(INF, deriv=1), n / (30.0 * math.e * (9.0 + math.log(n))) * nv(1.0)


def _sqt(nv, n, p, q):
    iq = _inv(q)
    lhs = nv(INF, deriv=1) ** iq * nv(p, deriv=1) ** (1.0 - iq)
    return lhs, C.c_q(q) * n**iq * C.A_p(p, n) ** (1.0 - iq) * nv(q)


RULES: dict[str, Rule] = {
    "INEQ-1": Rule(True, False, False, False, 1, _s1, _no_params),
    "INEQ-2": Rule(True, False, False, True, 1, _s2, _no_params),
    "INEQ-3": Rule(None, True, False, True, 1, _s3, _v3),
    "INEQ-4": Rule(None, True, True, True, 1, _s4, _v4),
    "INEQ-5": Rule(False, False, False, True, 1, _s5, _no_params),
    "INEQ-6": Rule(False, True, False, True, 1, _s6, _v6),
    "INEQ-7": Rule(True, False, True, False, 1, _s7, _need_q_gt1),
    "INEQ-8": Rule(False, False, True, True, 1, _s8, _need_q_gt1),
    "INEQ-C1": Rule(True, False, True, True, 1, _sc1, _need_q_gt1),
    "INEQ-C2": Rule(False, True, True, True, 2, _sc2, _v_pq),
    "INEQ-BP2": Rule(False, False, False, True, 2, _sbp2, _no_params),
    "INEQ-10": Rule(False, False, True, True, 1, _s10, _need_q_finite_gt1),
    "INEQ-R1": Rule(True, False, False, False, 1, _sr1, _no_params),
    "INEQ-QT": Rule(False, True, True, True, 1, _sqt, _v_pq),
    "LEM-9": Rule(False, False, True, False, 1, None, _need_q_finite_gt1),
}

IDS = tuple(RULES)
PROVEN_IDS = tuple(i for i in IDS if RULES[i].strict is not None)


def uses(inequality_id: str) -> tuple[bool, bool]:
    """Which of ``(p, q)`` the inequality depends on."""
    r = _rule(inequality_id)
    return r.uses_p, r.uses_q


def _rule(inequality_id: str) -> Rule:
    try:
        return RULES[inequality_id]
    except KeyError:
        raise ParamOutOfRange(f"unknown inequality id {inequality_id!r}") from None


class _Recorder:
    """Stands in for a NormCache to discover which norms a checker needs."""

    def __init__(self):
        self.specs: list[NormSpec] = []

    def get(self, spec):
        self.specs.append(spec)
        return _One

    def __call__(self, p, weight=Weight.NONE, deriv=0):
        self.get(NormSpec(p, weight, deriv))
        return 1.0


class _One:
    value = 1.0


def _validate(inequality_id: str, P: RootPoly, p, q) -> Rule:
    rule = _rule(inequality_id)
    if rule.segment_only and P.class_tag is not PolyClass.SEGMENT:
        raise ClassMismatch(f"{inequality_id} is stated for polynomials with zeros in [-1, 1]")
    if P.degree < rule.min_n:
        raise ParamOutOfRange(f"{inequality_id} needs n >= {rule.min_n}")
    rule.validate(p if rule.uses_p else None, q if rule.uses_q else None)
    return rule


def _params(rule: Rule, p, q):
    p = float(p) if (rule.uses_p and p is not None) else None
    q = float(q) if (rule.uses_q and q is not None) else None
    return p, q


def required_norms(inequality_id: str, n: int, p=None, q=None) -> list[NormSpec]:
    """Norm specs the checker will request (for batched prefetching)."""
    rule = _rule(inequality_id)
    p, q = _params(rule, p, q)
    if inequality_id == "LEM-9":
        from .measure import lemma_norm_specs

        return lemma_norm_specs(q, "SegmentK2") + lemma_norm_specs(q, "HalfDiskK70e")
    rec = _Recorder()
    rule.sides(rec, n, p, q)
    return rec.specs


def check(
    inequality_id: str,
    P: RootPoly,
    p: float | None = None,
    q: float | None = None,
    cache: NormCache | None = None,
    lemma_variant: str | None = None,
) -> InequalityReport:
    """Evaluate one inequality on ``P``.

    Raises :class:`ClassMismatch` when ``P``'s zero region is not covered by
    the statement and :class:`ParamOutOfRange` when ``(n, p, q)`` is outside
    its stated range. Pass a shared ``cache`` to reuse norms across checks.
    """
    rule = _validate(inequality_id, P, p, q)
    p, q = _params(rule, p, q)
    nv = cache if cache is not None else NormCache(P)
    if inequality_id == "LEM-9":
        return lemma9_check(P, q, lemma_variant, cache=nv)
    n = P.degree
    if cache is None:
        nv.prefetch(required_norms(inequality_id, n, p, q))
    lhs, rhs = rule.sides(nv, n, p, q)
    ratio = lhs / rhs if rhs > 0 else (math.inf if lhs > 0 else math.nan)
    passed = None if rule.strict is None else verdict(ratio, rule.strict)
    return InequalityReport(
        inequality_id=inequality_id,
        n=n,
        p=p,
        q=q,
        lhs=float(lhs),
        rhs=float(rhs),
        ratio=float(ratio),
        strict=bool(rule.strict),
        passed=passed,
        tol=TOL,
        poly_digest=P.digest(),
        class_tag=P.class_tag.value,
    )


# -- sweeps ----------------------------------------------------------------


@dataclass(frozen=True)
class CellError:
    inequality_id: str
    n: int
    p: float | None
    q: float | None
    error: str
    message: str

    def to_dict(self):
        return {
            "inequality_id": self.inequality_id,
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "error": self.error,
            "message": self.message,
        }


@dataclass
class CellSummary:
    inequality_id: str
    n: int
    p: float | None
    q: float | None
    count: int
    failures: int
    min_ratio: float
    median_ratio: float

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class SweepResult:
    reports: list[InequalityReport]
    summaries: list[CellSummary]
    errors: list[CellError]

    @property
    def failures(self) -> list[InequalityReport]:
        return [r for r in self.reports if r.passed is False]


def _cells(ids, n_values, p_grid, q_grid):
    seen = {}
    for iid in ids:
        rule = _rule(iid)
        ps = [float(p) for p in p_grid] if rule.uses_p else [None]
        qs = [float(q) for q in q_grid] if rule.uses_q else [None]
        for n in n_values:
            for p in ps:
                for q in qs:
                    seen[(iid, n, p, q)] = None
    return list(seen)


def _cell_key(cell):
    iid, n, p, q = cell
    return (IDS.index(iid), n, -1.0 if p is None else p, -1.0 if q is None else q)


def sweep(
    ids: Sequence[str],
    family: FamilySpec | str,
    n_range: Iterable[int],
    p_grid: Sequence[float] = (),
    q_grid: Sequence[float] = (),
    trials: int = 1,
    seed: int = 0,
    jobs: int = 1,
    admissible_only: bool = False,
) -> SweepResult:
    """Run every (id, n, p, q) cell over ``trials`` polynomials of ``family``.

    ``family`` gives the kind (its ``n`` and ``seed`` are ignored). Polynomial
    ``t`` of size ``n`` is seeded from ``(seed, n, t)`` so all cells of the
    same ``n`` see the same polynomials and results do not depend on ``jobs``.
    Errors are recorded per cell; the batch never aborts. With
    ``admissible_only`` cells outside an inequality's stated range are
    dropped silently instead of being recorded as errors.
    """
    kind = family.kind if isinstance(family, FamilySpec) else family
    n_values = sorted(set(int(n) for n in n_range))
    cells = sorted(_cells(ids, n_values, p_grid, q_grid), key=_cell_key)
    tasks = [(kind, n, t, seed) for n in n_values for t in range(trials)]
    by_n: dict[int, list] = {}
    for c in cells:
        by_n.setdefault(c[1], []).append(c)

    work = [(task, by_n[task[1]], admissible_only) for task in tasks]
    if jobs > 1 and len(work) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_task, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_run_task(w) for w in work]

    per_cell: dict[tuple, list[InequalityReport]] = {c: [] for c in cells}
    errors: dict[tuple, CellError] = {}
    for out in results:
        for cell, item in out:
            if isinstance(item, CellError):
                errors.setdefault(cell, item)
            else:
                per_cell[cell].append(item)

    reports, summaries = [], []
    for cell in cells:
        reps = per_cell[cell]
        reports.extend(reps)
        if reps:
            ratios = [r.ratio for r in reps]
            summaries.append(
                CellSummary(
                    *cell,
                    count=len(reps),
                    failures=sum(r.passed is False for r in reps),
                    min_ratio=min(ratios),
                    median_ratio=statistics.median(ratios),
                )
            )
    return SweepResult(reports, summaries, [errors[c] for c in cells if c in errors])


def _run_task(work):
    (kind, n, t, seed), cells, admissible_only = work
    P = generate(FamilySpec(kind, n, task_seed(seed, n, t)))
    cache = NormCache(P)
    out = []
    ok_cells = []
    for cell in cells:
        iid, _, p, q = cell
        try:
            _validate(iid, P, p, q)
            ok_cells.append(cell)
        except TuranLabError as exc:
            if not admissible_only:
                out.append((cell, CellError(iid, n, p, q, type(exc).__name__, str(exc))))
    specs = []
    for iid, _, p, q in ok_cells:
        specs.extend(required_norms(iid, P.degree, p, q))
    try:
        cache.prefetch(specs)
    except TuranLabError as exc:
        return out + [(c, CellError(c[0], n, c[2], c[3], type(exc).__name__, str(exc))) for c in ok_cells]
    for cell in ok_cells:
        iid, _, p, q = cell
        try:
            out.append((cell, check(iid, P, p, q, cache=cache)))
        except TuranLabError as exc:
            out.append((cell, CellError(iid, n, p, q, type(exc).__name__, str(exc))))
    return out
